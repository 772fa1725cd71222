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

#include "strategiq/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "parallel.h"

namespace strategiq {

namespace {

// All strictly increasing index tuples of length k drawn from [0, n), in
// lexicographic order.
std::vector<std::vector<std::size_t>> combinations(std::size_t n,
                                                   std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t t = i; t < k; ++t) idx[t] = idx[t - 1] + 1;
  }
  return out;
}

class SampleStats {
 public:
  void add(double v) {
    sum_ += v;
    sum_sq_ += v * v;
  }
  double mean(std::size_t n) const { return sum_ / static_cast<double>(n); }
  double standard_error(std::size_t n) const {
    if (n < 2) return 0.0;
    const double dn = static_cast<double>(n);
    const double var = std::max(0.0, (sum_sq_ - sum_ * sum_ / dn) / (dn - 1.0));
    return std::sqrt(var / dn);
  }

 private:
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
};

struct LossStats {
  SampleStats d_e, fidelity, d_d, d_theta;

  void add(double x, double theta, double y, double theta_hat, double lambda) {
    const double fit = x + theta - y;
    const double err = x - y;
    const double miss = theta - theta_hat;
    fidelity.add(fit * fit);
    d_d.add(err * err);
    d_theta.add(miss * miss);
    d_e.add(fit * fit - lambda * miss * miss);
  }

  MonteCarloReport report(std::size_t n) const {
    MonteCarloReport out;
    out.samples = n;
    out.mean = {d_e.mean(n), fidelity.mean(n), d_d.mean(n), d_theta.mean(n)};
    out.standard_error = {d_e.standard_error(n), fidelity.standard_error(n),
                          d_d.standard_error(n), d_theta.standard_error(n)};
    return out;
  }
};

std::mt19937_64 seeded_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

OracleGrid OracleGrid::standard(const SourceSpec& source, int points,
                                double half_width) {
  if (points < 2) throw std::invalid_argument("oracle grid needs >= 2 points");
  OracleGrid g;
  const double lo = -half_width * source.sigma_x();
  const double span = 2.0 * half_width * source.sigma_x();
  for (int i = 0; i < points; ++i) {
    g.candidates.push_back(lo + span * i / (points - 1));
  }
  return g;
}

double enumeration_size(std::size_t candidates, int levels, std::size_t rows) {
  // log-space binomial to avoid overflow.
  const double n = static_cast<double>(candidates);
  const double k = static_cast<double>(levels - 1);
  if (k > n) return 0.0;
  const double log_choose =
      std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(static_cast<double>(rows) * log_choose);
}

DesignResult brute_force_design(const SourceSpec& source,
                                const ThetaGrid& grid, int levels,
                                double lambda, const OracleGrid& ogrid,
                                unsigned workers) {
  if (levels < 1) throw std::invalid_argument("M must be >= 1");
  const auto& cand = ogrid.candidates;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    if (!std::isfinite(cand[i]) || (i > 0 && !(cand[i] > cand[i - 1]))) {
      throw std::invalid_argument("oracle candidates must be finite and "
                                  "strictly increasing");
    }
  }
  const double count = enumeration_size(cand.size(), levels, grid.size());
  if (count > kMaxEnumeration) {
    throw std::length_error("brute-force enumeration of " +
                            std::to_string(count) + " quantizers exceeds 1e8");
  }
  const auto interior = static_cast<std::size_t>(levels - 1);
  const auto choices = combinations(cand.size(), interior);
  if (choices.empty()) {
    throw std::invalid_argument("fewer candidates than interior boundaries");
  }
  const std::size_t rows = grid.size();

  auto build = [&](const std::vector<std::size_t>& pick) {
    std::vector<std::vector<double>> interior_rows(rows);
    for (std::size_t j = 0; j < rows; ++j) {
      for (std::size_t idx : choices[pick[j]]) {
        interior_rows[j].push_back(cand[idx]);
      }
    }
    return Quantizer::from_interior(static_cast<std::size_t>(levels),
                                    interior_rows);
  };

  // Partition by the first row's choice; within a partition the odometer runs
  // in lexicographic order so the first strict improvement wins ties.
  struct Best {
    double d_e = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> pick;
  };
  std::vector<Best> best(choices.size());
  internal::parallel_for(choices.size(), workers, [&](std::size_t first) {
    std::vector<std::size_t> pick(rows, 0);
    pick[0] = first;
    while (true) {
      const double d_e = evaluate(build(pick), source, grid, lambda).d_e;
      if (d_e < best[first].d_e) best[first] = {d_e, pick};
      // Odometer over rows 1..n-1, last row least significant.
      bool done = true;
      for (std::size_t j = rows; j > 1;) {
        --j;
        if (++pick[j] < choices.size()) {
          done = false;
          break;
        }
        pick[j] = 0;
      }
      if (done) break;
    }
  });

  std::size_t winner = 0;
  for (std::size_t i = 1; i < best.size(); ++i) {
    if (best[i].d_e < best[winner].d_e) winner = i;
  }
  DesignResult result;
  result.quantizer = build(best[winner].pick);
  const CellMoments moments(result.quantizer, source, grid);
  result.responses = best_responses(result.quantizer, grid, moments);
  result.report = distortions(result.responses, grid, moments, lambda);
  result.iterations = static_cast<int>(count);
  result.converged = true;
  return result;
}

MonteCarloReport monte_carlo_distortions(const Quantizer& q,
                                         const BestResponses& br,
                                         const SourceSpec& source,
                                         const ThetaGrid& grid, double lambda,
                                         std::size_t n_samples,
                                         std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  if (q.rows() != grid.size()) {
    throw std::invalid_argument("quantizer rows do not match theta grid");
  }
  std::mt19937_64 rng = seeded_rng(seed);
  std::discrete_distribution<std::size_t> pick_node(grid.weights.begin(),
                                                    grid.weights.end());
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sigma = source.conditional_stddev();
  LossStats stats;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const std::size_t j = pick_node(rng);
    const double theta = grid.nodes[j];
    const double x = source.conditional_mean(theta) + sigma * normal(rng);
    const auto row = q.row(j);
    // Cell m is (row[m], row[m + 1]].
    const auto it = std::lower_bound(row.begin() + 1, row.end() - 1, x);
    const auto m = static_cast<std::size_t>(it - row.begin()) - 1;
    stats.add(x, theta, br.y[m], br.theta_hat[m], lambda);
  }
  return stats.report(n_samples);
}

MonteCarloReport monte_carlo_linear(const SourceSpec& source,
                                    const LinearEquilibrium& eq,
                                    std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  std::mt19937_64 rng = seeded_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double rho = source.rho();
  const double tail = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  LossStats stats;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double u = normal(rng);
    const double v = normal(rng);
    const double x = source.sigma_x() * u;
    const double theta = source.sigma_theta() * (rho * u + tail * v);
    const double z = x + eq.alpha * theta;
    stats.add(x, theta, eq.kappa * z, eq.nu * z, eq.lambda);
  }
  return stats.report(n_samples);
}

}  // namespace strategiq
