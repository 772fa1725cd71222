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

#include "strategiq/quantizer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace strategiq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string cell_name(std::size_t j, std::size_t m) {
  return "row " + std::to_string(j) + " cell " + std::to_string(m);
}

// Deterministic reconstruction for a cell that carries no mass: midpoint of
// the finite boundary span over all rows, or 0 if no edge is finite.
double empty_cell_reconstruction(const Quantizer& q, std::size_t m) {
  double lo = kInf;
  double hi = -kInf;
  for (std::size_t j = 0; j < q.rows(); ++j) {
    for (double e : {q.lower(j, m), q.upper(j, m)}) {
      if (std::isfinite(e)) {
        lo = std::min(lo, e);
        hi = std::max(hi, e);
      }
    }
  }
  return lo <= hi ? 0.5 * (lo + hi) : 0.0;
}

}  // namespace

Quantizer Quantizer::replicated(std::size_t n_rows,
                                std::span<const double> interior) {
  std::vector<std::vector<double>> rows(
      n_rows, std::vector<double>(interior.begin(), interior.end()));
  return from_interior(interior.size() + 1, rows);
}

Quantizer Quantizer::from_interior(
    std::size_t levels, const std::vector<std::vector<double>>& rows) {
  if (levels < 1) throw std::invalid_argument("quantizer needs M >= 1");
  Quantizer q;
  q.levels_ = levels;
  q.rows_ = rows.size();
  q.data_.reserve(q.rows_ * q.stride());
  for (const auto& r : rows) {
    if (r.size() != levels - 1) {
      throw std::invalid_argument("interior row must have M - 1 entries");
    }
    q.data_.push_back(-kInf);
    q.data_.insert(q.data_.end(), r.begin(), r.end());
    q.data_.push_back(kInf);
  }
  return q;
}

Quantizer Quantizer::from_rows(std::size_t levels,
                               const std::vector<std::vector<double>>& rows) {
  Quantizer q;
  q.levels_ = levels;
  q.rows_ = rows.size();
  for (const auto& r : rows) {
    if (r.size() != levels + 1) {
      throw std::invalid_argument("quantizer row must have M + 1 entries");
    }
    q.data_.insert(q.data_.end(), r.begin(), r.end());
  }
  return q;
}

std::vector<std::vector<double>> Quantizer::to_rows() const {
  std::vector<std::vector<double>> out;
  out.reserve(rows_);
  for (std::size_t j = 0; j < rows_; ++j) {
    const auto r = row(j);
    out.emplace_back(r.begin(), r.end());
  }
  return out;
}

ValidationResult validate(const Quantizer& q) {
  ValidationResult result;
  if (q.levels() < 1) result.violations.push_back("M must be >= 1");
  if (q.rows() < 1) result.violations.push_back("quantizer has no rows");
  if (!result.ok()) return result;
  for (std::size_t j = 0; j < q.rows(); ++j) {
    const auto r = q.row(j);
    const std::string name = "row " + std::to_string(j);
    if (r.front() != -kInf) result.violations.push_back(name + ": first edge not -inf");
    if (r.back() != kInf) result.violations.push_back(name + ": last edge not +inf");
    bool monotone = true;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (std::isnan(r[i])) {
        result.violations.push_back(name + ": NaN boundary at " +
                                    std::to_string(i));
      } else if (i > 0 && r[i] < r[i - 1]) {
        monotone = false;
      }
    }
    if (!monotone) result.violations.push_back(name + ": row not nondecreasing");
    for (std::size_t m = 0; m < q.levels(); ++m) {
      if (r[m] == r[m + 1]) result.notes.push_back(cell_name(j, m) + " is empty");
    }
  }
  return result;
}

ValidationResult validate(const Quantizer& q, const ThetaGrid& grid) {
  ValidationResult result = validate(q);
  if (q.rows() != grid.size()) {
    result.violations.push_back("quantizer has " + std::to_string(q.rows()) +
                                " rows but grid has " +
                                std::to_string(grid.size()) + " nodes");
  }
  return result;
}

CellMoments::CellMoments(const Quantizer& q, const SourceSpec& source,
                         const ThetaGrid& grid)
    : levels_(q.levels()) {
  if (q.rows() != grid.size()) {
    throw std::invalid_argument("quantizer rows do not match theta grid");
  }
  cells_.resize(q.rows() * levels_);
  for (std::size_t j = 0; j < q.rows(); ++j) {
    const auto r = q.row(j);
    for (std::size_t m = 0; m < levels_; ++m) {
      cells_[j * levels_ + m] =
          partial_moments(source, grid.nodes[j], r[m], r[m + 1]);
    }
  }
}

BestResponses best_responses(const Quantizer& q, const ThetaGrid& grid,
                             const CellMoments& moments) {
  const std::size_t levels = q.levels();
  BestResponses br;
  br.y.assign(levels, 0.0);
  br.theta_hat.assign(levels, 0.0);
  br.cell_mass.assign(levels, 0.0);
  std::vector<double> x_moment(levels, 0.0);
  std::vector<double> t_moment(levels, 0.0);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double w = grid.weights[j];
    for (std::size_t m = 0; m < levels; ++m) {
      const PartialMoments& pm = moments.at(j, m);
      br.cell_mass[m] += w * pm.mass;
      x_moment[m] += w * pm.first;
      t_moment[m] += w * grid.nodes[j] * pm.mass;
    }
  }
  for (std::size_t m = 0; m < levels; ++m) {
    if (br.cell_mass[m] < kMassFloor) {
      br.y[m] = empty_cell_reconstruction(q, m);
      br.theta_hat[m] = 0.0;
    } else {
      br.y[m] = x_moment[m] / br.cell_mass[m];
      br.theta_hat[m] = t_moment[m] / br.cell_mass[m];
    }
  }
  return br;
}

BestResponses best_responses(const Quantizer& q, const SourceSpec& source,
                             const ThetaGrid& grid) {
  return best_responses(q, grid, CellMoments(q, source, grid));
}

std::vector<double> decoder_best_response(const Quantizer& q,
                                          const SourceSpec& source,
                                          const ThetaGrid& grid) {
  return best_responses(q, source, grid).y;
}

std::vector<double> eavesdropper_best_response(const Quantizer& q,
                                               const SourceSpec& source,
                                               const ThetaGrid& grid) {
  return best_responses(q, source, grid).theta_hat;
}

DistortionReport distortions(const BestResponses& br, const ThetaGrid& grid,
                             const CellMoments& moments, double lambda) {
  if (!(lambda >= 0.0)) throw std::domain_error("lambda must be >= 0");
  DistortionReport out;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double w = grid.weights[j];
    const double t = grid.nodes[j];
    double fid = 0.0, dd = 0.0, dt = 0.0;
    for (std::size_t m = 0; m < moments.levels(); ++m) {
      const PartialMoments& pm = moments.at(j, m);
      if (pm.mass == 0.0) continue;
      const double y = br.y[m];
      const double shift = t - y;
      const double miss = t - br.theta_hat[m];
      fid += pm.second + 2.0 * shift * pm.first + shift * shift * pm.mass;
      dd += pm.second - 2.0 * y * pm.first + y * y * pm.mass;
      dt += miss * miss * pm.mass;
    }
    out.fidelity += w * fid;
    out.d_d += w * dd;
    out.d_theta += w * dt;
  }
  // Exact-arithmetic values are nonnegative; clamp round-off.
  out.fidelity = std::max(out.fidelity, 0.0);
  out.d_d = std::max(out.d_d, 0.0);
  out.d_e = out.fidelity - lambda * out.d_theta;
  return out;
}

DistortionReport distortions(const Quantizer& q, const BestResponses& br,
                             const SourceSpec& source, const ThetaGrid& grid,
                             double lambda) {
  return distortions(br, grid, CellMoments(q, source, grid), lambda);
}

DistortionReport evaluate(const Quantizer& q, const SourceSpec& source,
                          const ThetaGrid& grid, double lambda) {
  const CellMoments moments(q, source, grid);
  return distortions(best_responses(q, grid, moments), grid, moments, lambda);
}

}  // namespace strategiq
