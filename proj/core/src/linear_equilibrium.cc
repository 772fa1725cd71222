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

#include "strategiq/linear_equilibrium.h"

#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

namespace strategiq {

namespace {

// Number of probe offsets on each side of the selected root.
constexpr int kProbeCount = 10;

void check_lambda(double lambda) {
  if (!(lambda >= 0.0)) throw std::domain_error("lambda must be >= 0");
}

double checked_v(const MomentBundle& m) {
  if (!(m.v > 0.0)) {
    throw std::domain_error("E{Z^2} = " + std::to_string(m.v) +
                            " is not positive");
  }
  return m.v;
}

}  // namespace

MomentBundle moment_bundle(const SourceSpec& source, double alpha) {
  const double sx = source.sigma_x();
  const double st = source.sigma_theta();
  const double cov = source.rho() * sx * st;
  MomentBundle m;
  m.v = sx * sx + 2.0 * alpha * cov + alpha * alpha * st * st;
  m.c_x = sx * sx + alpha * cov;
  m.c_s = cov + alpha * st * st;
  m.c_xs = m.c_x + m.c_s;
  return m;
}

AlphaQuadratic alpha_quadratic(const SourceSpec& source, double lambda) {
  const double r = source.r();
  const double rho = source.rho();
  return {r * (rho + r), 1.0 + lambda * r * r, lambda * rho * r - 1.0};
}

std::pair<double, double> best_response_coeffs(const SourceSpec& source,
                                               double alpha) {
  const MomentBundle m = moment_bundle(source, alpha);
  const double v = checked_v(m);
  return {m.c_x / v, m.c_s / v};
}

DistortionReport linear_distortions(const SourceSpec& source, double alpha,
                                    double kappa, double nu, double lambda) {
  check_lambda(lambda);
  const MomentBundle m = moment_bundle(source, alpha);
  const double vx = source.sigma_x() * source.sigma_x();
  const double vt = source.sigma_theta() * source.sigma_theta();
  const double cov = source.rho() * source.sigma_x() * source.sigma_theta();
  DistortionReport out;
  out.fidelity = vx + 2.0 * cov + vt - 2.0 * kappa * m.c_xs +
                 kappa * kappa * m.v;
  out.d_d = vx - 2.0 * kappa * m.c_x + kappa * kappa * m.v;
  out.d_theta = vt - 2.0 * nu * m.c_s + nu * nu * m.v;
  out.d_e = out.fidelity - lambda * out.d_theta;
  return out;
}

DistortionReport linear_distortions(const SourceSpec& source, double alpha,
                                    double lambda) {
  check_lambda(lambda);
  const MomentBundle m = moment_bundle(source, alpha);
  const double v = checked_v(m);
  const double vt = source.sigma_theta() * source.sigma_theta();
  // Cancellation-free forms at kappa = c_x / v, nu = c_s / v; all share the
  // factor det(Cov) / sigma_x^2 = sigma_x^2 sigma_theta^2 (1 - rho^2).
  const double det = source.sigma_x() * source.sigma_x() * vt *
                     (1.0 - source.rho() * source.rho());
  DistortionReport out;
  out.d_d = alpha * alpha * det / v;
  out.d_theta = det / v;
  out.fidelity = out.d_d + vt - 2.0 * alpha * det / v;
  out.d_e = out.fidelity - lambda * out.d_theta;
  return out;
}

double objective_J(const SourceSpec& source, double alpha, double lambda) {
  const auto [kappa, nu] = best_response_coeffs(source, alpha);
  return linear_distortions(source, alpha, kappa, nu, lambda).d_e;
}

double objective_J_reduced(const SourceSpec& source, double alpha,
                           double lambda) {
  check_lambda(lambda);
  const MomentBundle m = moment_bundle(source, alpha);
  const double v = checked_v(m);
  const double vx = source.sigma_x() * source.sigma_x();
  const double vt = source.sigma_theta() * source.sigma_theta();
  const double cov = source.rho() * source.sigma_x() * source.sigma_theta();
  const double constant = vx + (1.0 - lambda) * vt + 2.0 * cov;
  const double p = m.c_x * m.c_x - 2.0 * m.c_x * m.c_xs + lambda * m.c_s * m.c_s;
  return constant + p / v;
}

double optimal_alpha(const SourceSpec& source, double lambda) {
  check_lambda(lambda);
  const AlphaQuadratic q = alpha_quadratic(source, lambda);
  const double disc = q.quad_b * q.quad_b - 4.0 * q.quad_a * q.quad_c;
  if (disc < 0.0) {
    throw std::logic_error("alpha quadratic has complex roots");
  }
  const double root = std::sqrt(disc);
  // (-b + sqrt(disc)) / (2a) rewritten as -2c / (b + sqrt(disc)); b >= 1 so
  // this is stable and also covers the linear case a == 0.
  const double alpha = -2.0 * q.quad_c / (q.quad_b + root);

  const double j_star = objective_J(source, alpha, lambda);
  const double slack = 1e-12 * (1.0 + std::abs(j_star));
  auto check_not_better = [&](double probe) {
    const MomentBundle m = moment_bundle(source, probe);
    if (!(m.v > 0.0)) return;
    if (objective_J(source, probe, lambda) < j_star - slack) {
      throw std::logic_error("selected alpha root is not the minimizer (probe " +
                             std::to_string(probe) + ")");
    }
  };
  if (q.quad_a != 0.0) check_not_better((-q.quad_b - root) / (2.0 * q.quad_a));
  const double scale = 1.0 + std::abs(alpha);
  for (int k = 0; k < kProbeCount; ++k) {
    const double delta = scale * std::pow(10.0, -0.5 * k);
    check_not_better(alpha - delta);
    check_not_better(alpha + delta);
  }
  return alpha;
}

LinearEquilibrium solve_linear(const SourceSpec& source, double lambda) {
  LinearEquilibrium eq;
  eq.lambda = lambda;
  eq.alpha = optimal_alpha(source, lambda);
  std::tie(eq.kappa, eq.nu) = best_response_coeffs(source, eq.alpha);
  return eq;
}

}  // namespace strategiq
