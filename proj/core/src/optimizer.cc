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

#include "strategiq/optimizer.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "parallel.h"
#include "strategiq/metrics.h"

namespace strategiq {

namespace {

// Backtracking gives up below eta * 2^-20.
constexpr int kMaxHalvings = 20;

// Loss of a sample (x, theta) sent on a cell with actions (y, theta_hat).
double encoder_loss(double x, double theta, double y, double theta_hat,
                    double lambda) {
  const double fit = x + theta - y;
  const double miss = theta - theta_hat;
  return fit * fit - lambda * miss * miss;
}

// Zeroes the component that would push coincident boundaries across each
// other under q <- q - eta * g.
double clamp_collapsed(std::span<const double> row, std::size_t k, double g) {
  if (row[k] == row[k + 1]) g = std::max(g, 0.0);
  if (row[k] == row[k - 1]) g = std::min(g, 0.0);
  return g;
}

BoundaryGradient zero_gradient(const Quantizer& q) {
  return BoundaryGradient(q.rows(), std::vector<double>(q.levels() - 1, 0.0));
}

Quantizer step_and_project(const Quantizer& q, const BoundaryGradient& g,
                           double step) {
  Quantizer out = q;
  for (std::size_t j = 0; j < q.rows(); ++j) {
    auto row = out.row(j);
    for (std::size_t k = 1; k < q.levels(); ++k) row[k] -= step * g[j][k - 1];
    project_monotone_inplace(row);
  }
  return out;
}

double projected_gradient_norm(const Quantizer& q, const BoundaryGradient& g) {
  const Quantizer moved = step_and_project(q, g, 1.0);
  double sum = 0.0;
  for (std::size_t j = 0; j < q.rows(); ++j) {
    for (std::size_t k = 1; k < q.levels(); ++k) {
      const double d = q.row(j)[k] - moved.row(j)[k];
      sum += d * d;
    }
  }
  return std::sqrt(sum);
}

}  // namespace

GradientMode parse_gradient_mode(std::string_view name) {
  if (name == "analytic") return GradientMode::kAnalytic;
  if (name == "finite-difference") return GradientMode::kFiniteDifference;
  throw std::invalid_argument("unknown gradient mode: " + std::string(name));
}

std::string_view gradient_mode_name(GradientMode mode) {
  return mode == GradientMode::kAnalytic ? "analytic" : "finite-difference";
}

void check_options(const OptimOptions& opts) {
  if (!(opts.eta > 0.0)) throw std::invalid_argument("eta must be > 0");
  if (!(opts.eps > 0.0)) throw std::invalid_argument("eps must be > 0");
  if (opts.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (opts.n_restarts < 1) {
    throw std::invalid_argument("n_restarts must be >= 1");
  }
}

BoundaryGradient gradient(const Quantizer& q, const SourceSpec& source,
                          const ThetaGrid& grid, double lambda) {
  const CellMoments moments(q, source, grid);
  const BestResponses br = best_responses(q, grid, moments);
  const std::size_t levels = q.levels();

  // d(d_e)/d(y_c) = -2 * sum over the cell of (x + theta - y_c).
  std::vector<double> pull(levels, 0.0);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double w = grid.weights[j];
    for (std::size_t c = 0; c < levels; ++c) {
      const PartialMoments& pm = moments.at(j, c);
      pull[c] += -2.0 * w *
                 (pm.first + (grid.nodes[j] - br.y[c]) * pm.mass);
    }
  }

  BoundaryGradient g = zero_gradient(q);
  for (std::size_t j = 0; j < q.rows(); ++j) {
    const auto row = q.row(j);
    const double theta = grid.nodes[j];
    for (std::size_t k = 1; k < levels; ++k) {
      const double b = row[k];
      if (!std::isfinite(b)) continue;
      const std::size_t lo = k - 1;
      const std::size_t hi = k;
      const double flux =
          grid.weights[j] * conditional_density(source, theta, b);
      double value =
          flux * (encoder_loss(b, theta, br.y[lo], br.theta_hat[lo], lambda) -
                  encoder_loss(b, theta, br.y[hi], br.theta_hat[hi], lambda));
      if (br.cell_mass[lo] >= kMassFloor) {
        value += pull[lo] * flux * (b - br.y[lo]) / br.cell_mass[lo];
      }
      if (br.cell_mass[hi] >= kMassFloor) {
        value -= pull[hi] * flux * (b - br.y[hi]) / br.cell_mass[hi];
      }
      g[j][k - 1] = clamp_collapsed(row, k, value);
    }
  }
  return g;
}

BoundaryGradient eavesdropper_chain_term(const Quantizer& q,
                                         const SourceSpec& source,
                                         const ThetaGrid& grid,
                                         double lambda) {
  const CellMoments moments(q, source, grid);
  const BestResponses br = best_responses(q, grid, moments);
  const std::size_t levels = q.levels();

  // d(d_e)/d(theta_hat_c) = 2 lambda * sum over the cell of (theta - theta_hat_c).
  std::vector<double> pull(levels, 0.0);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (std::size_t c = 0; c < levels; ++c) {
      pull[c] += 2.0 * lambda * grid.weights[j] *
                 (grid.nodes[j] - br.theta_hat[c]) * moments.at(j, c).mass;
    }
  }

  BoundaryGradient g = zero_gradient(q);
  for (std::size_t j = 0; j < q.rows(); ++j) {
    const double theta = grid.nodes[j];
    for (std::size_t k = 1; k < levels; ++k) {
      const double b = q.row(j)[k];
      if (!std::isfinite(b)) continue;
      const double flux =
          grid.weights[j] * conditional_density(source, theta, b);
      double value = 0.0;
      if (br.cell_mass[k - 1] >= kMassFloor) {
        value += pull[k - 1] * flux * (theta - br.theta_hat[k - 1]) /
                 br.cell_mass[k - 1];
      }
      if (br.cell_mass[k] >= kMassFloor) {
        value -= pull[k] * flux * (theta - br.theta_hat[k]) / br.cell_mass[k];
      }
      g[j][k - 1] = value;
    }
  }
  return g;
}

BoundaryGradient finite_difference_gradient(const Quantizer& q,
                                            const SourceSpec& source,
                                            const ThetaGrid& grid,
                                            double lambda, double step) {
  BoundaryGradient g = zero_gradient(q);
  Quantizer probe = q;
  auto d_e_at = [&](std::size_t j, std::size_t k, double value) {
    probe.row(j)[k] = value;
    const double d = evaluate(probe, source, grid, lambda).d_e;
    probe.row(j)[k] = q.row(j)[k];
    return d;
  };
  for (std::size_t j = 0; j < q.rows(); ++j) {
    const auto row = q.row(j);
    for (std::size_t k = 1; k < q.levels(); ++k) {
      const double b = row[k];
      if (!std::isfinite(b)) continue;
      const bool down = b - step >= row[k - 1];
      const bool up = b + step <= row[k + 1];
      if (down && up) {
        g[j][k - 1] = (d_e_at(j, k, b + step) - d_e_at(j, k, b - step)) /
                      (2.0 * step);
      } else if (up) {
        g[j][k - 1] = (d_e_at(j, k, b + step) - d_e_at(j, k, b)) / step;
      } else if (down) {
        g[j][k - 1] = (d_e_at(j, k, b) - d_e_at(j, k, b - step)) / step;
      }
    }
  }
  return g;
}

std::vector<double> project_monotone(std::span<const double> row) {
  std::vector<double> out(row.begin(), row.end());
  project_monotone_inplace(out);
  return out;
}

void project_monotone_inplace(std::span<double> row) {
  if (row.size() < 3) return;
  // Interior entries only; the infinite edges stay put.
  const std::span<double> inner = row.subspan(1, row.size() - 2);
  struct Block {
    double sum;
    std::size_t count;
    double mean() const { return sum / static_cast<double>(count); }
  };
  std::vector<Block> blocks;
  blocks.reserve(inner.size());
  for (double v : inner) {
    blocks.push_back({v, 1});
    while (blocks.size() > 1 &&
           blocks[blocks.size() - 2].mean() > blocks.back().mean()) {
      const Block top = blocks.back();
      blocks.pop_back();
      blocks.back().sum += top.sum;
      blocks.back().count += top.count;
    }
  }
  std::size_t i = 0;
  for (const Block& b : blocks) {
    const double mean = b.mean();
    for (std::size_t c = 0; c < b.count; ++c) inner[i++] = mean;
  }
}

DesignResult design(const SourceSpec& source, const ThetaGrid& grid,
                    int levels, double lambda, const OptimOptions& opts,
                    const std::optional<Quantizer>& init) {
  check_options(opts);
  if (levels < 1) throw std::invalid_argument("M must be >= 1");
  if (!(lambda >= 0.0)) throw std::domain_error("lambda must be >= 0");

  Quantizer q = init ? *init : lloyd_max(source, levels).replicated(grid.size());
  if (q.levels() != static_cast<std::size_t>(levels)) {
    throw std::invalid_argument("initial quantizer has the wrong M");
  }
  if (const ValidationResult v = validate(q, grid); !v.ok()) {
    throw std::invalid_argument("invalid initial quantizer: " +
                                v.violations.front());
  }

  auto objective = [&](const Quantizer& x) {
    return evaluate(x, source, grid, lambda).d_e;
  };
  auto descent_direction = [&](const Quantizer& x) {
    return opts.gradient_mode == GradientMode::kAnalytic
               ? gradient(x, source, grid, lambda)
               : finite_difference_gradient(x, source, grid, lambda);
  };

  DesignResult result;
  double current = objective(q);
  if (opts.record_trajectory) result.trajectory.push_back(current);
  const double min_step = std::ldexp(opts.eta, -kMaxHalvings);
  double step = opts.eta;

  for (int it = 0; it < opts.max_iters; ++it) {
    result.iterations = it + 1;
    const BoundaryGradient g = descent_direction(q);
    bool accepted = false;
    double trial = step;
    Quantizer candidate;
    double value = current;
    while (trial >= min_step) {
      candidate = step_and_project(q, g, trial);
      value = objective(candidate);
      if (value <= current) {
        accepted = true;
        break;
      }
      trial *= 0.5;
    }
    if (!accepted) {
      // No descent along the gradient even at the smallest step.
      result.converged = true;
      break;
    }
    const double decrease = current - value;
    q = std::move(candidate);
    current = value;
    if (opts.record_trajectory) result.trajectory.push_back(current);
    step = std::min(opts.eta, 2.0 * trial);
    if (decrease < opts.eps) {
      result.converged = true;
      break;
    }
  }

  const CellMoments moments(q, source, grid);
  result.responses = best_responses(q, grid, moments);
  result.report = distortions(result.responses, grid, moments, lambda);
  result.stationarity = projected_gradient_norm(q, descent_direction(q));
  result.quantizer = std::move(q);
  return result;
}

Quantizer random_start(const SourceSpec& source, const ThetaGrid& grid,
                       int levels, std::uint64_t seed, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, source.sigma_x());
  std::vector<std::vector<double>> rows(grid.size());
  for (auto& row : rows) {
    row.resize(static_cast<std::size_t>(levels) - 1);
    for (double& b : row) b = normal(rng);
    std::sort(row.begin(), row.end());
  }
  return Quantizer::from_interior(static_cast<std::size_t>(levels), rows);
}

DesignResult multistart(const SourceSpec& source, const ThetaGrid& grid,
                        int levels, double lambda, const OptimOptions& opts) {
  check_options(opts);
  if (levels < 1) throw std::invalid_argument("M must be >= 1");
  const std::size_t jobs = static_cast<std::size_t>(opts.n_restarts) + 1;
  std::vector<DesignResult> results(jobs);
  internal::parallel_for(jobs, opts.workers, [&](std::size_t i) {
    std::optional<Quantizer> init;
    if (i > 0) {
      init = random_start(source, grid, levels, opts.seed,
                          static_cast<int>(i));
    }
    results[i] = design(source, grid, levels, lambda, opts, init);
    results[i].restart_index = static_cast<int>(i);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < jobs; ++i) {
    if (results[i].report.d_e < results[best].report.d_e) best = i;
  }
  return std::move(results[best]);
}

}  // namespace strategiq
