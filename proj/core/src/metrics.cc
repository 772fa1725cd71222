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

#include "strategiq/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace strategiq {

namespace {

constexpr double kLloydTolerance = 1e-12;
constexpr int kLloydMaxIterations = 1000000;

std::vector<double> marginal_masses(const Quantizer& q,
                                    const SourceSpec& source, std::size_t j) {
  const auto row = q.row(j);
  std::vector<double> p(q.levels());
  for (std::size_t m = 0; m < q.levels(); ++m) {
    p[m] = normal_interval_mass(row[m] / source.sigma_x(),
                                row[m + 1] / source.sigma_x());
  }
  return p;
}

}  // namespace

double kl_similarity(const Quantizer& q, const SourceSpec& source,
                     std::size_t row_a, std::size_t row_b) {
  if (row_a >= q.rows() || row_b >= q.rows()) {
    throw std::out_of_range("kl_similarity: row index out of range");
  }
  const std::vector<double> pa = marginal_masses(q, source, row_a);
  const std::vector<double> pb = marginal_masses(q, source, row_b);
  double kl = 0.0;
  for (std::size_t m = 0; m < pa.size(); ++m) {
    if (pa[m] <= 0.0) continue;
    if (pb[m] <= 0.0) return std::numeric_limits<double>::infinity();
    kl += pa[m] * std::log(pa[m] / pb[m]);
  }
  // Nonnegative in exact arithmetic.
  return std::max(kl, 0.0);
}

SimilarityReport max_kl(const Quantizer& q, const SourceSpec& source,
                        const ThetaGrid& grid) {
  if (q.rows() != grid.size()) {
    throw std::invalid_argument("quantizer rows do not match theta grid");
  }
  const std::size_t n = q.rows();
  SimilarityReport report;
  report.pairwise.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      report.pairwise[a][b] = kl_similarity(q, source, a, b);
      report.d_max = std::max(report.d_max, report.pairwise[a][b]);
    }
  }
  return report;
}

Quantizer LloydMaxResult::replicated(std::size_t n_rows) const {
  return Quantizer::replicated(n_rows, boundaries);
}

LloydMaxResult lloyd_max(const SourceSpec& source, int levels) {
  if (levels < 1) throw std::invalid_argument("M must be >= 1");
  const SourceSpec marginal = make_source(source.sigma_x(), 1.0, 0.0);
  const double sigma = source.sigma_x();
  const auto n = static_cast<std::size_t>(levels);
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> edges(n + 1);
  edges.front() = -kInf;
  edges.back() = kInf;
  for (std::size_t k = 1; k < n; ++k) {
    edges[k] = sigma * (-2.0 + 4.0 * static_cast<double>(k) / levels);
  }

  LloydMaxResult out;
  out.reconstructions.assign(n, 0.0);
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= kLloydMaxIterations; ++it) {
    double distortion = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      const PartialMoments pm =
          partial_moments(marginal, 0.0, edges[m], edges[m + 1]);
      const double y = pm.first / pm.mass;
      out.reconstructions[m] = y;
      distortion += pm.second - 2.0 * y * pm.first + y * y * pm.mass;
    }
    for (std::size_t k = 1; k < n; ++k) {
      edges[k] = 0.5 * (out.reconstructions[k - 1] + out.reconstructions[k]);
    }
    out.distortion = distortion;
    out.iterations = it;
    if (std::abs(previous - distortion) < kLloydTolerance) break;
    previous = distortion;
  }
  // Centroids for the final boundaries.
  out.distortion = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    const PartialMoments pm =
        partial_moments(marginal, 0.0, edges[m], edges[m + 1]);
    const double y = pm.first / pm.mass;
    out.reconstructions[m] = y;
    out.distortion += pm.second - 2.0 * y * pm.first + y * y * pm.mass;
  }
  out.boundaries.assign(edges.begin() + 1, edges.end() - 1);
  return out;
}

std::vector<IdentityCheck> limit_identities(const DistortionReport& report,
                                            const SourceSpec& source,
                                            double lambda) {
  if (source.rho() != 0.0) {
    throw std::domain_error("limit identities assume rho = 0");
  }
  if (!(lambda >= 0.0)) throw std::domain_error("lambda must be >= 0");
  const double vt = source.sigma_theta() * source.sigma_theta();
  return {
      {"encoder_limit", std::abs(report.fidelity - (report.d_d + vt))},
      {"eavesdropper_prior", std::abs(report.d_theta - vt)},
  };
}

}  // namespace strategiq
