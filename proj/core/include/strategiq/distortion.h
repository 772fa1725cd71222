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

#ifndef STRATEGIQ_DISTORTION_H_
#define STRATEGIQ_DISTORTION_H_

namespace strategiq {

// Distortions of one encoder/decoder/eavesdropper profile, in variance units.
//   fidelity = E{(X + theta - Y)^2}
//   d_d      = E{(X - Y)^2}
//   d_theta  = E{(theta - theta_hat)^2}
//   d_e      = fidelity - lambda * d_theta
struct DistortionReport {
  double d_e = 0.0;
  double fidelity = 0.0;
  double d_d = 0.0;
  double d_theta = 0.0;
};

}  // namespace strategiq

#endif  // STRATEGIQ_DISTORTION_H_
