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

#include "strategiq/serialization.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace strategiq {

namespace {

using nlohmann::json;

json number_or_sentinel(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double parse_number(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw std::invalid_argument("expected a number or \"inf\"/\"-inf\", got " +
                              v.dump());
}

json quantizer_json(const Quantizer& q, const std::vector<double>& nodes) {
  json boundaries = json::array();
  for (std::size_t j = 0; j < q.rows(); ++j) {
    json row = json::array();
    for (double b : q.row(j)) row.push_back(number_or_sentinel(b));
    boundaries.push_back(std::move(row));
  }
  return {{"M", q.levels()}, {"theta_nodes", nodes}, {"boundaries", boundaries}};
}

}  // namespace

std::string quantizer_to_json(const Quantizer& q,
                              const std::vector<double>& theta_nodes,
                              int indent) {
  return quantizer_json(q, theta_nodes).dump(indent);
}

QuantizerDocument quantizer_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("quantizer JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("M") || !doc.contains("boundaries")) {
    throw std::invalid_argument("quantizer JSON needs \"M\" and \"boundaries\"");
  }
  const auto levels = doc.at("M").get<long long>();
  if (levels < 1) throw std::invalid_argument("quantizer JSON: M must be >= 1");
  std::vector<std::vector<double>> rows;
  for (const json& row : doc.at("boundaries")) {
    std::vector<double> parsed;
    for (const json& v : row) parsed.push_back(parse_number(v));
    rows.push_back(std::move(parsed));
  }
  QuantizerDocument out;
  out.quantizer = Quantizer::from_rows(static_cast<std::size_t>(levels), rows);
  if (doc.contains("theta_nodes")) {
    out.theta_nodes = doc.at("theta_nodes").get<std::vector<double>>();
    if (out.theta_nodes.size() != rows.size()) {
      throw std::invalid_argument(
          "quantizer JSON: theta_nodes and boundaries differ in length");
    }
  }
  return out;
}

std::string design_result_to_json(const DesignResult& result,
                                  const std::vector<double>& theta_nodes,
                                  int indent) {
  json doc = quantizer_json(result.quantizer, theta_nodes);
  doc["y"] = result.responses.y;
  doc["theta_hat"] = result.responses.theta_hat;
  doc["d_e"] = result.report.d_e;
  doc["fidelity"] = result.report.fidelity;
  doc["d_d"] = result.report.d_d;
  doc["d_theta"] = result.report.d_theta;
  doc["iterations"] = result.iterations;
  doc["converged"] = result.converged;
  doc["restart_index"] = result.restart_index;
  return doc.dump(indent);
}

}  // namespace strategiq
