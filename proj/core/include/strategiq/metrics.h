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

#ifndef STRATEGIQ_METRICS_H_
#define STRATEGIQ_METRICS_H_

#include <cstddef>
#include <string>
#include <vector>

#include "strategiq/distortion.h"
#include "strategiq/gaussian_model.h"
#include "strategiq/quantizer.h"

namespace strategiq {

// KL divergence between the cell-mass vectors of rows a and b, masses taken
// under the marginal law of X. Returns +inf when row a puts mass on a cell
// that row b leaves empty. Throws std::out_of_range on a bad index.
double kl_similarity(const Quantizer& q, const SourceSpec& source,
                     std::size_t row_a, std::size_t row_b);

struct SimilarityReport {
  std::vector<std::vector<double>> pairwise;  // nats
  double d_max = 0.0;
};

SimilarityReport max_kl(const Quantizer& q, const SourceSpec& source,
                        const ThetaGrid& grid);

struct LloydMaxResult {
  std::vector<double> boundaries;       // M - 1 interior boundaries
  std::vector<double> reconstructions;  // M levels
  double distortion = 0.0;
  int iterations = 0;

  // The fully revealing quantizer: this row on every theta node.
  Quantizer replicated(std::size_t n_rows) const;
};

// Minimum-MSE scalar quantizer of the marginal N(0, sigma_x^2), iterated to a
// fixed point.
LloydMaxResult lloyd_max(const SourceSpec& source, int levels);

struct IdentityCheck {
  std::string name;
  double residual = 0.0;
};

// Residual |fidelity - (d_d + sigma_theta^2)|, which vanishes as lambda grows
// when rho = 0. Throws std::domain_error for rho != 0.
std::vector<IdentityCheck> limit_identities(const DistortionReport& report,
                                            const SourceSpec& source,
                                            double lambda);

}  // namespace strategiq

#endif  // STRATEGIQ_METRICS_H_
