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

#include "strategiq/gaussian_model.h"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace strategiq {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kWeightSumTolerance = 1e-12;

// Upper tail P(Z > z), computed without cancellation for large z.
double normal_sf(double z) { return 0.5 * std::erfc(z * kInvSqrt2); }

// Gauss-Hermite rule for weight exp(-t^2) via the Golub-Welsch eigenproblem,
// with weights normalized to sum to one.
void gauss_hermite(int n, std::vector<double>& nodes,
                   std::vector<double>& weights) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double off = std::sqrt(0.5 * k);
    jacobi(k, k - 1) = off;
    jacobi(k - 1, k) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  const Eigen::VectorXd& values = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    nodes[i] = values(i);
    weights[i] = vectors(0, i) * vectors(0, i);
  }
  // The rule is symmetric; remove eigen-solver round-off asymmetry.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double t = 0.5 * (nodes[j] - nodes[i]);
    const double w = 0.5 * (weights[i] + weights[j]);
    nodes[i] = -t;
    nodes[j] = t;
    weights[i] = weights[j] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

void check_grid(const std::vector<double>& nodes,
                const std::vector<double>& weights) {
  if (nodes.empty() || nodes.size() != weights.size()) {
    throw std::invalid_argument("theta grid: nodes and weights must be "
                                "nonempty and of equal length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!std::isfinite(nodes[i]) || !std::isfinite(weights[i])) {
      throw std::invalid_argument("theta grid: non-finite entry");
    }
    if (weights[i] < 0.0) {
      throw std::invalid_argument("theta grid: negative weight");
    }
    if (i > 0 && !(nodes[i] > nodes[i - 1])) {
      throw std::invalid_argument("theta grid: nodes not strictly increasing");
    }
    total += weights[i];
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    throw std::invalid_argument("theta grid: weights sum to " +
                                std::to_string(total));
  }
}

}  // namespace

double normal_pdf(double z) {
  if (std::isinf(z)) return 0.0;
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

double normal_interval_mass(double za, double zb) {
  if (!(za < zb)) return 0.0;
  // Difference taken on the side of zero where both tails are small.
  if (za >= 0.0) return normal_sf(za) - normal_sf(zb);
  if (zb <= 0.0) return normal_cdf(zb) - normal_cdf(za);
  return 1.0 - normal_cdf(za) - normal_sf(zb);
}

bool SourceSpec::degenerate() const { return std::abs(rho_) == 1.0; }

double SourceSpec::conditional_mean(double theta) const {
  return rho_ * theta / r_;
}

double SourceSpec::conditional_stddev() const {
  return sigma_x_ * std::sqrt(std::max(0.0, 1.0 - rho_ * rho_));
}

double SourceSpec::covariance_determinant() const {
  const double vx = sigma_x_ * sigma_x_;
  return vx * vx * r_ * r_ * (1.0 - rho_ * rho_);
}

SourceSpec make_source(double sigma_x, double r, double rho) {
  if (!(sigma_x > 0.0) || !std::isfinite(sigma_x)) {
    throw std::domain_error("sigma_x must be positive and finite");
  }
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::domain_error("r must be positive and finite");
  }
  if (!(std::abs(rho) <= 1.0)) {
    throw std::domain_error("rho must lie in [-1, 1]");
  }
  SourceSpec source(sigma_x, r, rho);
  if (source.covariance_determinant() < 0.0) {
    throw std::logic_error("covariance not positive semidefinite");
  }
  return source;
}

double ThetaGrid::second_moment() const {
  double m2 = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    m2 += weights[i] * nodes[i] * nodes[i];
  }
  return m2;
}

GridScheme parse_grid_scheme(std::string_view name) {
  if (name == "gauss-hermite") return GridScheme::kGaussHermite;
  if (name == "uniform-truncated") return GridScheme::kUniformTruncated;
  throw std::invalid_argument("unsupported theta grid scheme: " +
                              std::string(name));
}

std::string_view grid_scheme_name(GridScheme scheme) {
  return scheme == GridScheme::kGaussHermite ? "gauss-hermite"
                                             : "uniform-truncated";
}

ThetaGrid make_theta_grid(const SourceSpec& source, int n_nodes,
                          GridScheme scheme) {
  if (n_nodes < 1) throw std::invalid_argument("n_nodes must be >= 1");
  const double sigma = source.sigma_theta();
  ThetaGrid grid;
  if (scheme == GridScheme::kGaussHermite) {
    gauss_hermite(n_nodes, grid.nodes, grid.weights);
    for (double& t : grid.nodes) t *= std::numbers::sqrt2 * sigma;
  } else {
    // Equal cells on [-5 sigma, 5 sigma]; tails folded into the edge cells.
    const double lo = -kUniformTruncation;
    const double width = 2.0 * kUniformTruncation / n_nodes;
    grid.nodes.resize(n_nodes);
    grid.weights.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
      const double a = lo + i * width;
      const double b = a + width;
      grid.nodes[i] = sigma * (0.5 * (a + b));
      const double za = i == 0 ? -INFINITY : a;
      const double zb = i == n_nodes - 1 ? INFINITY : b;
      grid.weights[i] = normal_interval_mass(za, zb);
    }
    if (n_nodes % 2 == 1) grid.nodes[n_nodes / 2] = 0.0;
    for (int i = 0; i < n_nodes / 2; ++i) {
      const int j = n_nodes - 1 - i;
      grid.nodes[i] = -grid.nodes[j];
      grid.weights[i] = grid.weights[j];
    }
  }
  double total = 0.0;
  for (double w : grid.weights) total += w;
  for (double& w : grid.weights) w /= total;
  check_grid(grid.nodes, grid.weights);
  return grid;
}

ThetaGrid make_theta_grid(const SourceSpec& source, int n_nodes,
                          std::string_view scheme) {
  return make_theta_grid(source, n_nodes, parse_grid_scheme(scheme));
}

ThetaGrid make_theta_grid(std::vector<double> nodes,
                          std::vector<double> weights) {
  check_grid(nodes, weights);
  return ThetaGrid{std::move(nodes), std::move(weights)};
}

PartialMoments partial_moments(const SourceSpec& source, double theta,
                               double a, double b) {
  if (std::isnan(theta) || std::isnan(a) || std::isnan(b)) {
    throw std::invalid_argument("partial_moments: NaN input");
  }
  if (a > b) throw std::invalid_argument("partial_moments: a > b");
  PartialMoments pm;
  if (a == b) return pm;

  const double mu = source.conditional_mean(theta);
  const double sigma = source.conditional_stddev();
  if (sigma == 0.0) {
    // Point mass at mu; cells are half-open (a, b].
    if (a < mu && mu <= b) {
      pm.mass = 1.0;
      pm.first = mu;
      pm.second = mu * mu;
    }
    return pm;
  }

  const double za = (a - mu) / sigma;
  const double zb = (b - mu) / sigma;
  const double pdf_a = normal_pdf(za);
  const double pdf_b = normal_pdf(zb);
  // z * pdf(z) vanishes at the infinite ends.
  const double zpdf_a = std::isinf(za) ? 0.0 : za * pdf_a;
  const double zpdf_b = std::isinf(zb) ? 0.0 : zb * pdf_b;

  pm.mass = normal_interval_mass(za, zb);
  const double t1 = pdf_a - pdf_b;                  // E{Z 1[za,zb]}
  const double t2 = pm.mass + zpdf_a - zpdf_b;      // E{Z^2 1[za,zb]}
  pm.first = mu * pm.mass + sigma * t1;
  pm.second = mu * mu * pm.mass + 2.0 * mu * sigma * t1 + sigma * sigma * t2;
  return pm;
}

double conditional_density(const SourceSpec& source, double theta, double x) {
  if (source.degenerate()) {
    throw std::domain_error("conditional density undefined for |rho| = 1");
  }
  const double sigma = source.conditional_stddev();
  return normal_pdf((x - source.conditional_mean(theta)) / sigma) / sigma;
}

}  // namespace strategiq
