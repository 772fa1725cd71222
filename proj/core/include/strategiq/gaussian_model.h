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

#ifndef STRATEGIQ_GAUSSIAN_MODEL_H_
#define STRATEGIQ_GAUSSIAN_MODEL_H_

#include <cstddef>
#include <string_view>
#include <vector>

namespace strategiq {

// Zero-mean jointly Gaussian source (X, theta) with
//   Var X = sigma_x^2, Var theta = (r * sigma_x)^2, Corr(X, theta) = rho.
class SourceSpec {
 public:
  double sigma_x() const { return sigma_x_; }
  double r() const { return r_; }
  double rho() const { return rho_; }
  double sigma_theta() const { return r_ * sigma_x_; }

  // |rho| == 1: theta is a deterministic function of X.
  bool degenerate() const;

  // Parameters of the conditional law X | theta = t.
  double conditional_mean(double theta) const;
  double conditional_stddev() const;

  // Determinant of the covariance matrix, >= 0 for every valid source.
  double covariance_determinant() const;

 private:
  friend SourceSpec make_source(double sigma_x, double r, double rho);
  SourceSpec(double sigma_x, double r, double rho)
      : sigma_x_(sigma_x), r_(r), rho_(rho) {}

  double sigma_x_;
  double r_;
  double rho_;
};

// Throws std::domain_error for sigma_x <= 0, r <= 0, |rho| > 1 or NaN.
SourceSpec make_source(double sigma_x, double r, double rho);

// Finite discretization of theta: strictly increasing nodes, probability
// weights summing to one.
struct ThetaGrid {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  double second_moment() const;
};

enum class GridScheme { kGaussHermite, kUniformTruncated };

// Accepts "gauss-hermite" and "uniform-truncated"; throws
// std::invalid_argument otherwise.
GridScheme parse_grid_scheme(std::string_view name);
std::string_view grid_scheme_name(GridScheme scheme);

// Half-width of the uniform-truncated grid, in units of sigma_theta.
inline constexpr double kUniformTruncation = 5.0;

ThetaGrid make_theta_grid(const SourceSpec& source, int n_nodes,
                          GridScheme scheme);
ThetaGrid make_theta_grid(const SourceSpec& source, int n_nodes,
                          std::string_view scheme);

// Builds a grid from explicit nodes and weights after checking the ThetaGrid
// invariants. Throws std::invalid_argument on violation.
ThetaGrid make_theta_grid(std::vector<double> nodes,
                          std::vector<double> weights);

// Partial moments of X | theta over an interval [a, b]:
//   mass   = P(a <= X <= b | theta)
//   first  = E{X 1[a,b] | theta}
//   second = E{X^2 1[a,b] | theta}
struct PartialMoments {
  double mass = 0.0;
  double first = 0.0;
  double second = 0.0;
};

// a and b may be -inf / +inf. Throws std::invalid_argument for NaN input or
// a > b.
PartialMoments partial_moments(const SourceSpec& source, double theta,
                               double a, double b);

// Density of X | theta at x. Throws std::domain_error for |rho| == 1.
double conditional_density(const SourceSpec& source, double theta, double x);

// Standard normal helpers.
double normal_pdf(double z);
double normal_cdf(double z);
// P(a <= Z <= b) for standard normal Z, accurate in both tails.
double normal_interval_mass(double za, double zb);

}  // namespace strategiq

#endif  // STRATEGIQ_GAUSSIAN_MODEL_H_
