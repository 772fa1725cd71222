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

#ifndef STRATEGIQ_SERIALIZATION_H_
#define STRATEGIQ_SERIALIZATION_H_

#include <string>
#include <vector>

#include "strategiq/gaussian_model.h"
#include "strategiq/optimizer.h"
#include "strategiq/quantizer.h"

namespace strategiq {

// {"M": int, "theta_nodes": [...], "boundaries": [[...], ...]} with infinite
// edges written as the strings "-inf" / "inf".
std::string quantizer_to_json(const Quantizer& q,
                              const std::vector<double>& theta_nodes,
                              int indent = 2);

struct QuantizerDocument {
  Quantizer quantizer;
  std::vector<double> theta_nodes;
};

// Throws std::invalid_argument on malformed input.
QuantizerDocument quantizer_from_json(const std::string& text);

// Quantizer document plus "y", "theta_hat", "d_e", "fidelity", "d_d",
// "d_theta", "iterations", "converged", "restart_index".
std::string design_result_to_json(const DesignResult& result,
                                  const std::vector<double>& theta_nodes,
                                  int indent = 2);

}  // namespace strategiq

#endif  // STRATEGIQ_SERIALIZATION_H_
