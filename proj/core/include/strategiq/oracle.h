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

#ifndef STRATEGIQ_ORACLE_H_
#define STRATEGIQ_ORACLE_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "strategiq/distortion.h"
#include "strategiq/gaussian_model.h"
#include "strategiq/linear_equilibrium.h"
#include "strategiq/optimizer.h"
#include "strategiq/quantizer.h"

namespace strategiq {

// Candidate boundary positions for exhaustive search.
struct OracleGrid {
  std::vector<double> candidates;

  // 41 equispaced points on [-3 sigma_x, 3 sigma_x].
  static OracleGrid standard(const SourceSpec& source, int points = 41,
                             double half_width = 3.0);
};

// Largest enumeration brute_force_design accepts.
inline constexpr double kMaxEnumeration = 1e8;

// Number of quantizers brute_force_design would enumerate.
double enumeration_size(std::size_t candidates, int levels,
                        std::size_t rows);

// Exhaustive search over quantizers whose interior boundaries are distinct
// candidates, with exact best responses. Ties resolve to the
// lexicographically smallest boundary tuple. Throws std::length_error when
// the enumeration exceeds kMaxEnumeration and std::invalid_argument for a bad
// candidate grid.
DesignResult brute_force_design(const SourceSpec& source,
                                const ThetaGrid& grid, int levels,
                                double lambda, const OracleGrid& ogrid,
                                unsigned workers = 0);

struct MonteCarloReport {
  DistortionReport mean;
  DistortionReport standard_error;
  std::size_t samples = 0;
};

// Sampling estimate of distortions(q, br, ...): theta drawn from the grid
// weights, X from its conditional law. Bit-reproducible for a fixed seed.
MonteCarloReport monte_carlo_distortions(const Quantizer& q,
                                         const BestResponses& br,
                                         const SourceSpec& source,
                                         const ThetaGrid& grid, double lambda,
                                         std::size_t n_samples,
                                         std::uint64_t seed);

// Sampling estimate for the linear profile, theta drawn from its continuous
// marginal.
MonteCarloReport monte_carlo_linear(const SourceSpec& source,
                                    const LinearEquilibrium& eq,
                                    std::size_t n_samples, std::uint64_t seed);

}  // namespace strategiq

#endif  // STRATEGIQ_ORACLE_H_
