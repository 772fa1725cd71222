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

#ifndef STRATEGIQ_LINEAR_EQUILIBRIUM_H_
#define STRATEGIQ_LINEAR_EQUILIBRIUM_H_

#include <utility>

#include "strategiq/distortion.h"
#include "strategiq/gaussian_model.h"

namespace strategiq {

// Second moments of the linear message Z = X + alpha * theta.
struct MomentBundle {
  double v = 0.0;     // E{Z^2}
  double c_x = 0.0;   // E{X Z}
  double c_s = 0.0;   // E{theta Z}
  double c_xs = 0.0;  // E{(X + theta) Z}
};

MomentBundle moment_bundle(const SourceSpec& source, double alpha);

// Rate-unconstrained equilibrium: encoder Z = X + alpha * theta, decoder
// Y = kappa * Z, eavesdropper theta_hat = nu * Z.
struct LinearEquilibrium {
  double alpha = 0.0;
  double kappa = 0.0;
  double nu = 0.0;
  double lambda = 0.0;
};

// Coefficients of the stationarity condition
//   quad_a * alpha^2 + quad_b * alpha + quad_c = 0.
struct AlphaQuadratic {
  double quad_a;
  double quad_b;
  double quad_c;

  double residual(double alpha) const {
    return (quad_a * alpha + quad_b) * alpha + quad_c;
  }
};

AlphaQuadratic alpha_quadratic(const SourceSpec& source, double lambda);

// Minimizing root of the stationarity quadratic. The choice is checked by
// evaluating the objective at the other root and at probe points on both
// sides; a failed check throws std::logic_error. Negative lambda throws
// std::domain_error.
double optimal_alpha(const SourceSpec& source, double lambda);

// MMSE coefficients (kappa, nu) = (c_x / v, c_s / v). Throws
// std::domain_error when v <= 0.
std::pair<double, double> best_response_coeffs(const SourceSpec& source,
                                               double alpha);

// Encoder objective at the decoder/eavesdropper best response.
double objective_J(const SourceSpec& source, double alpha, double lambda);

// Same objective through the constant + P(alpha) / v(alpha) reduction.
double objective_J_reduced(const SourceSpec& source, double alpha,
                           double lambda);

LinearEquilibrium solve_linear(const SourceSpec& source, double lambda);

// Distortions at the best-response coefficients for the given alpha.
DistortionReport linear_distortions(const SourceSpec& source, double alpha,
                                    double lambda);

// Distortions for arbitrary (kappa, nu), e.g. off-equilibrium probes.
DistortionReport linear_distortions(const SourceSpec& source, double alpha,
                                    double kappa, double nu, double lambda);

}  // namespace strategiq

#endif  // STRATEGIQ_LINEAR_EQUILIBRIUM_H_
