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

#include "strategiq/sweep.h"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "parallel.h"
#include "strategiq/linear_equilibrium.h"
#include "strategiq/metrics.h"

namespace strategiq {

namespace {

using nlohmann::json;

const std::set<std::string>& known_fields() {
  static const std::set<std::string> fields = {
      "mode",       "lambdas",     "m_values", "sigma_x",   "r",
      "rho",        "grid_nodes",  "grid_scheme", "eta",    "eps",
      "max_iters",  "n_restarts",  "gradient_mode", "seed", "out",
      "format",     "verify",      "mc_samples", "workers"};
  return fields;
}

template <typename T>
T field(const json& doc, const std::string& name) {
  try {
    return doc.at(name).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("field '" + name + "': " + e.what());
  }
}

std::vector<double> parse_lambdas(const json& v) {
  if (v.is_array()) {
    std::vector<double> out;
    for (const json& x : v) {
      if (!x.is_number()) {
        throw ConfigError("field 'lambdas': entries must be numbers");
      }
      out.push_back(x.get<double>());
    }
    return out;
  }
  if (v.is_object()) {
    for (const char* key : {"start", "stop", "points"}) {
      if (!v.contains(key)) {
        throw ConfigError(std::string("field 'lambdas': log range needs '") +
                          key + "'");
      }
    }
    try {
      return log_lambdas(v.at("start").get<double>(), v.at("stop").get<double>(),
                         v.at("points").get<int>(),
                         v.value("include_zero", false));
    } catch (const json::exception& e) {
      throw ConfigError(std::string("field 'lambdas': ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("field 'lambdas': ") + e.what());
    }
  }
  throw ConfigError("field 'lambdas': expected an array or a log-range object");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json json_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double read_double(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ConfigError("expected a number, got " + v.dump());
}

bool same_double(double a, double b) {
  return a == b || (std::isnan(a) && std::isnan(b));
}

bool same_report(const DistortionReport& a, const DistortionReport& b) {
  return same_double(a.d_e, b.d_e) && same_double(a.fidelity, b.fidelity) &&
         same_double(a.d_d, b.d_d) && same_double(a.d_theta, b.d_theta);
}

constexpr const char* kMonteCarloColumns[] = {
    "mc_d_e",   "mc_d_e_se",   "mc_fidelity", "mc_fidelity_se",
    "mc_d_d",   "mc_d_d_se",   "mc_d_theta",  "mc_d_theta_se"};

std::vector<double> monte_carlo_values(const MonteCarloReport& mc) {
  return {mc.mean.d_e,   mc.standard_error.d_e,   mc.mean.fidelity,
          mc.standard_error.fidelity, mc.mean.d_d, mc.standard_error.d_d,
          mc.mean.d_theta, mc.standard_error.d_theta};
}

SweepRow failed_row(double lambda, int m, std::uint64_t seed,
                    const std::string& message) {
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  SweepRow row;
  row.lambda = lambda;
  row.M = m;
  row.d_e = row.fidelity = row.d_d = row.d_theta = kNaN;
  row.converged = false;
  row.seed = seed;
  row.error = message;
  return row;
}

}  // namespace

bool SweepRow::operator==(const SweepRow& o) const {
  const bool mc_equal =
      monte_carlo.has_value() == o.monte_carlo.has_value() &&
      (!monte_carlo ||
       (same_report(monte_carlo->mean, o.monte_carlo->mean) &&
        same_report(monte_carlo->standard_error,
                    o.monte_carlo->standard_error)));
  auto same_opt = [](const std::optional<double>& a,
                     const std::optional<double>& b) {
    return a.has_value() == b.has_value() && (!a || same_double(*a, *b));
  };
  return same_double(lambda, o.lambda) && M == o.M &&
         same_report({d_e, fidelity, d_d, d_theta},
                     {o.d_e, o.fidelity, o.d_d, o.d_theta}) &&
         same_opt(d_kl_max, o.d_kl_max) && same_opt(alpha, o.alpha) &&
         iterations == o.iterations && converged == o.converged &&
         restart_winner == o.restart_winner && seed == o.seed && mc_equal &&
         error == o.error;
}

std::vector<double> log_lambdas(double start, double stop, int points,
                                bool include_zero) {
  if (!(start > 0.0) || !(stop >= start) || points < 1) {
    throw std::invalid_argument(
        "log range needs 0 < start <= stop and points >= 1");
  }
  std::vector<double> out;
  if (include_zero) out.push_back(0.0);
  const double lo = std::log10(start);
  const double hi = std::log10(stop);
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    out.push_back(i == points - 1 ? stop : std::pow(10.0, lo + t * (hi - lo)));
  }
  return out;
}

SweepMode parse_sweep_mode(std::string_view name) {
  if (name == "linear") return SweepMode::kLinear;
  if (name == "quantizer") return SweepMode::kQuantizer;
  if (name == "sweep") return SweepMode::kSweep;
  throw ConfigError("field 'mode': unknown mode '" + std::string(name) + "'");
}

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw ConfigError("field 'format': unknown format '" + std::string(name) +
                    "'");
}

SweepConfig parse_sweep_config(const std::string& json_text, SweepConfig base) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    const std::size_t offset = std::min<std::size_t>(e.byte, json_text.size());
    const std::string_view head(json_text.data(), offset);
    const auto line = 1 + std::count(head.begin(), head.end(), '\n');
    const auto last_nl = head.rfind('\n');
    const auto column =
        last_nl == std::string_view::npos ? offset : offset - last_nl - 1;
    throw ConfigError("config line " + std::to_string(line) + ", column " +
                      std::to_string(column) + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!known_fields().contains(key)) {
      throw ConfigError("unknown config field '" + key + "'");
    }
  }

  SweepConfig c = std::move(base);
  if (doc.contains("mode")) c.mode = parse_sweep_mode(field<std::string>(doc, "mode"));
  if (doc.contains("lambdas")) c.lambdas = parse_lambdas(doc.at("lambdas"));
  if (doc.contains("m_values")) c.m_values = field<std::vector<int>>(doc, "m_values");
  if (doc.contains("sigma_x")) c.sigma_x = field<double>(doc, "sigma_x");
  if (doc.contains("r")) c.r = field<double>(doc, "r");
  if (doc.contains("rho")) c.rho = field<double>(doc, "rho");
  if (doc.contains("grid_nodes")) c.grid_nodes = field<int>(doc, "grid_nodes");
  if (doc.contains("grid_scheme")) {
    try {
      c.grid_scheme = parse_grid_scheme(field<std::string>(doc, "grid_scheme"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("field 'grid_scheme': ") + e.what());
    }
  }
  if (doc.contains("eta")) c.optim.eta = field<double>(doc, "eta");
  if (doc.contains("eps")) c.optim.eps = field<double>(doc, "eps");
  if (doc.contains("max_iters")) c.optim.max_iters = field<int>(doc, "max_iters");
  if (doc.contains("n_restarts")) c.optim.n_restarts = field<int>(doc, "n_restarts");
  if (doc.contains("gradient_mode")) {
    try {
      c.optim.gradient_mode =
          parse_gradient_mode(field<std::string>(doc, "gradient_mode"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("field 'gradient_mode': ") + e.what());
    }
  }
  if (doc.contains("seed")) c.seed = field<std::uint64_t>(doc, "seed");
  if (doc.contains("out")) c.out = field<std::string>(doc, "out");
  if (doc.contains("format")) c.format = parse_output_format(field<std::string>(doc, "format"));
  if (doc.contains("verify")) c.verify = field<bool>(doc, "verify");
  if (doc.contains("mc_samples")) c.mc_samples = field<std::size_t>(doc, "mc_samples");
  if (doc.contains("workers")) c.workers = field<unsigned>(doc, "workers");
  return c;
}

SweepConfig load_sweep_config(const std::string& path, SweepConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_sweep_config(buffer.str(), std::move(base));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void check_sweep_config(const SweepConfig& c) {
  if (c.lambdas.empty()) throw ConfigError("field 'lambdas': must be nonempty");
  for (double l : c.lambdas) {
    if (!(l >= 0.0) || !std::isfinite(l)) {
      throw ConfigError("field 'lambdas': values must be finite and >= 0");
    }
  }
  if (c.mode != SweepMode::kLinear) {
    if (c.m_values.empty()) throw ConfigError("field 'm_values': must be nonempty");
    for (int m : c.m_values) {
      if (m < 0) throw ConfigError("field 'm_values': values must be >= 0");
    }
  }
  if (c.grid_nodes < 1) throw ConfigError("field 'grid_nodes': must be >= 1");
  if (c.mc_samples < 1) throw ConfigError("field 'mc_samples': must be >= 1");
  try {
    make_source(c.sigma_x, c.r, c.rho);
    check_options(c.optim);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  check_sweep_config(config);
  const SourceSpec source = make_source(config.sigma_x, config.r, config.rho);
  const ThetaGrid grid =
      make_theta_grid(source, config.grid_nodes, config.grid_scheme);

  std::set<double> lambdas(config.lambdas.begin(), config.lambdas.end());
  std::set<int> ms;
  if (config.mode == SweepMode::kLinear) {
    ms.insert(kLinearM);
  } else {
    for (int m : config.m_values) {
      if (config.mode == SweepMode::kQuantizer && m == kLinearM) continue;
      ms.insert(m);
    }
  }
  std::vector<std::pair<double, int>> jobs;
  for (double l : lambdas) {
    for (int m : ms) jobs.emplace_back(l, m);
  }

  const unsigned row_workers = internal::resolve_workers(config.workers);
  OptimOptions optim = config.optim;
  optim.seed = config.seed;
  // Rows already run concurrently; keep each multistart sequential then.
  optim.workers = row_workers > 1 ? 1 : config.optim.workers;

  std::vector<SweepRow> rows(jobs.size());
  internal::parallel_for(jobs.size(), row_workers, [&](std::size_t i) {
    const auto [lambda, m] = jobs[i];
    try {
      SweepRow row;
      row.lambda = lambda;
      row.M = m;
      row.seed = config.seed;
      if (m == kLinearM) {
        const LinearEquilibrium eq = solve_linear(source, lambda);
        const DistortionReport rep = linear_distortions(source, eq.alpha, lambda);
        row.d_e = rep.d_e;
        row.fidelity = rep.fidelity;
        row.d_d = rep.d_d;
        row.d_theta = rep.d_theta;
        row.alpha = eq.alpha;
        if (config.verify) {
          row.monte_carlo =
              monte_carlo_linear(source, eq, config.mc_samples, config.seed);
        }
      } else {
        const DesignResult res = multistart(source, grid, m, lambda, optim);
        row.d_e = res.report.d_e;
        row.fidelity = res.report.fidelity;
        row.d_d = res.report.d_d;
        row.d_theta = res.report.d_theta;
        row.d_kl_max = max_kl(res.quantizer, source, grid).d_max;
        row.iterations = res.iterations;
        row.converged = res.converged;
        row.restart_winner = res.restart_index;
        if (config.verify) {
          row.monte_carlo = monte_carlo_distortions(
              res.quantizer, res.responses, source, grid, lambda,
              config.mc_samples, config.seed);
        }
      }
      rows[i] = std::move(row);
    } catch (const std::exception& e) {
      rows[i] = failed_row(lambda, m, config.seed, e.what());
    }
  });
  return rows;
}

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  const bool with_mc = std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) {
    return r.monte_carlo.has_value();
  });
  out << kCsvHeader;
  if (with_mc) {
    for (const char* col : kMonteCarloColumns) out << ',' << col;
  }
  out << '\n';
  auto opt_double = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  auto opt_int = [](const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string();
  };
  for (const SweepRow& r : rows) {
    out << format_double(r.lambda) << ',' << r.M << ',' << format_double(r.d_e)
        << ',' << format_double(r.fidelity) << ',' << format_double(r.d_d)
        << ',' << format_double(r.d_theta) << ',' << opt_double(r.d_kl_max)
        << ',' << opt_double(r.alpha) << ',' << opt_int(r.iterations) << ','
        << (r.converged ? (*r.converged ? "true" : "false") : "") << ','
        << opt_int(r.restart_winner) << ',' << r.seed;
    if (with_mc) {
      if (r.monte_carlo) {
        for (double v : monte_carlo_values(*r.monte_carlo)) {
          out << ',' << format_double(v);
        }
      } else {
        out << std::string(std::size(kMonteCarloColumns), ',');
      }
    }
    out << '\n';
  }
}

std::string rows_to_json(const std::vector<SweepRow>& rows) {
  json doc = json::array();
  for (const SweepRow& r : rows) {
    json o;
    o["lambda"] = json_double(r.lambda);
    o["M"] = r.M;
    o["d_e"] = json_double(r.d_e);
    o["fidelity"] = json_double(r.fidelity);
    o["d_d"] = json_double(r.d_d);
    o["d_theta"] = json_double(r.d_theta);
    o["d_kl_max"] = r.d_kl_max ? json_double(*r.d_kl_max) : json(nullptr);
    o["alpha"] = r.alpha ? json_double(*r.alpha) : json(nullptr);
    o["iterations"] = r.iterations ? json(*r.iterations) : json(nullptr);
    o["converged"] = r.converged ? json(*r.converged) : json(nullptr);
    o["restart_winner"] =
        r.restart_winner ? json(*r.restart_winner) : json(nullptr);
    o["seed"] = r.seed;
    if (r.monte_carlo) {
      const auto values = monte_carlo_values(*r.monte_carlo);
      for (std::size_t i = 0; i < values.size(); ++i) {
        o[kMonteCarloColumns[i]] = json_double(values[i]);
      }
      o["mc_samples"] = r.monte_carlo->samples;
    }
    if (!r.error.empty()) o["error"] = r.error;
    doc.push_back(std::move(o));
  }
  return doc.dump(2);
}

std::vector<SweepRow> rows_from_json(const std::string& text) {
  std::vector<SweepRow> rows;
  try {
    const json doc = json::parse(text);
    for (const json& o : doc) {
      SweepRow r;
      r.lambda = read_double(o.at("lambda"));
      r.M = o.at("M").get<int>();
      r.d_e = read_double(o.at("d_e"));
      r.fidelity = read_double(o.at("fidelity"));
      r.d_d = read_double(o.at("d_d"));
      r.d_theta = read_double(o.at("d_theta"));
      if (!o.at("d_kl_max").is_null()) r.d_kl_max = read_double(o["d_kl_max"]);
      if (!o.at("alpha").is_null()) r.alpha = read_double(o["alpha"]);
      if (!o.at("iterations").is_null()) r.iterations = o["iterations"].get<int>();
      if (!o.at("converged").is_null()) r.converged = o["converged"].get<bool>();
      if (!o.at("restart_winner").is_null()) {
        r.restart_winner = o["restart_winner"].get<int>();
      }
      r.seed = o.at("seed").get<std::uint64_t>();
      if (o.contains("mc_d_e")) {
        MonteCarloReport mc;
        double* slots[] = {&mc.mean.d_e,    &mc.standard_error.d_e,
                           &mc.mean.fidelity, &mc.standard_error.fidelity,
                           &mc.mean.d_d,    &mc.standard_error.d_d,
                           &mc.mean.d_theta, &mc.standard_error.d_theta};
        for (std::size_t i = 0; i < std::size(slots); ++i) {
          *slots[i] = read_double(o.at(kMonteCarloColumns[i]));
        }
        mc.samples = o.at("mc_samples").get<std::size_t>();
        r.monte_carlo = mc;
      }
      if (o.contains("error")) r.error = o["error"].get<std::string>();
      rows.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("sweep rows JSON: ") + e.what());
  }
  return rows;
}

void emit(const std::vector<SweepRow>& rows, OutputFormat format,
          const std::string& path) {
  auto write = [&](std::ostream& out) {
    if (format == OutputFormat::kCsv) {
      write_csv(rows, out);
    } else {
      out << rows_to_json(rows) << '\n';
    }
  };
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write(out);
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace strategiq
