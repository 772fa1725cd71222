// Copyright 2026 The Strategiq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STRATEGIQ_OPTIMIZER_H_
#define STRATEGIQ_OPTIMIZER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "strategiq/distortion.h"
#include "strategiq/gaussian_model.h"
#include "strategiq/quantizer.h"

namespace strategiq {

enum class GradientMode { kAnalytic, kFiniteDifference };

GradientMode parse_gradient_mode(std::string_view name);
std::string_view gradient_mode_name(GradientMode mode);

struct OptimOptions {
  double eta = 0.05;       // base step size
  double eps = 1e-9;       // stop once the decrease of d_e falls below this
  int max_iters = 20000;
  int n_restarts = 8;      // random starts, on top of the Lloyd-Max start
  std::uint64_t seed = 0;
  GradientMode gradient_mode = GradientMode::kAnalytic;
  bool record_trajectory = false;
  // Worker threads for restarts; 0 means hardware concurrency.
  unsigned workers = 0;
};

// Throws std::invalid_argument when eta, eps, max_iters or n_restarts is out
// of range.
void check_options(const OptimOptions& opts);

struct DesignResult {
  Quantizer quantizer;
  BestResponses responses;
  DistortionReport report;
  int iterations = 0;
  bool converged = false;
  // Norm of q - P(q - grad), zero at a stationary point of the projected
  // problem.
  double stationarity = 0.0;
  // 0 is the Lloyd-Max start; 1..n_restarts are random starts.
  int restart_index = 0;
  std::vector<double> trajectory;
};

// d_e gradient with respect to every interior boundary, as rows of M - 1
// entries. Includes the dependence of the decoder reconstructions on the
// boundaries. At coincident boundaries the component that would push the
// pair across each other is zeroed.
using BoundaryGradient = std::vector<std::vector<double>>;

BoundaryGradient gradient(const Quantizer& q, const SourceSpec& source,
                          const ThetaGrid& grid, double lambda);

// Central differences of evaluate(), best responses recomputed per probe;
// one-sided next to a neighboring boundary closer than the step.
BoundaryGradient finite_difference_gradient(const Quantizer& q,
                                            const SourceSpec& source,
                                            const ThetaGrid& grid,
                                            double lambda, double step = 1e-5);

// The part of the total derivative flowing through the eavesdropper
// estimates. Vanishes at the eavesdropper best response; exposed for
// diagnostics.
BoundaryGradient eavesdropper_chain_term(const Quantizer& q,
                                         const SourceSpec& source,
                                         const ThetaGrid& grid, double lambda);

// Euclidean projection of a row onto the nondecreasing cone
// (pool-adjacent-violators). Infinite edges are left in place.
std::vector<double> project_monotone(std::span<const double> row);
void project_monotone_inplace(std::span<double> row);

// Gradient descent on d_e with monotone projection and backtracking.
// Without init, starts from the Lloyd-Max quantizer replicated on every row.
// Throws std::invalid_argument for M < 1 or an init that fails validation.
DesignResult design(const SourceSpec& source, const ThetaGrid& grid,
                    int levels, double lambda, const OptimOptions& opts,
                    const std::optional<Quantizer>& init = std::nullopt);

// Random monotone start for restart `index`: per row, sorted standard normal
// draws scaled by sigma_x. Deterministic in (seed, index).
Quantizer random_start(const SourceSpec& source, const ThetaGrid& grid,
                       int levels, std::uint64_t seed, int index);

// Runs design from the Lloyd-Max start and n_restarts random starts and keeps
// the smallest d_e (ties to the lowest restart index).
DesignResult multistart(const SourceSpec& source, const ThetaGrid& grid,
                        int levels, double lambda, const OptimOptions& opts);

}  // namespace strategiq

#endif  // STRATEGIQ_OPTIMIZER_H_
