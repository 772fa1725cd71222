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

// Command-line front end: sweep, linear and design subcommands.
//
// Exit codes: 0 success, 1 configuration or usage error, 2 I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "strategiq/gaussian_model.h"
#include "strategiq/linear_equilibrium.h"
#include "strategiq/optimizer.h"
#include "strategiq/serialization.h"
#include "strategiq/sweep.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

struct SourceFlags {
  double sigma_x = 1.0;
  double r = 1.0;
  double rho = 0.0;
};

void add_source_flags(CLI::App* cmd, SourceFlags& f) {
  cmd->add_option("--sigma-x", f.sigma_x, "Standard deviation of X")->capture_default_str();
  cmd->add_option("--r", f.r, "Ratio sigma_theta / sigma_x")->capture_default_str();
  cmd->add_option("--rho", f.rho, "Correlation of X and theta")->capture_default_str();
}

struct SweepFlags {
  std::string config;
  std::vector<double> lambdas;
  std::vector<int> m_values;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
  bool verify = false;
  std::optional<unsigned> workers;
};

int run_sweep_command(const SweepFlags& f) {
  strategiq::SweepConfig config = strategiq::load_sweep_config(f.config);
  if (!f.lambdas.empty()) config.lambdas = f.lambdas;
  if (!f.m_values.empty()) config.m_values = f.m_values;
  if (f.seed) config.seed = *f.seed;
  if (f.out) config.out = *f.out;
  if (f.format) config.format = strategiq::parse_output_format(*f.format);
  if (f.verify) config.verify = true;
  if (f.workers) config.workers = *f.workers;

  const std::vector<strategiq::SweepRow> rows = strategiq::run_sweep(config);
  strategiq::emit(rows, config.format, config.out);
  for (const auto& row : rows) {
    if (!row.error.empty()) {
      std::fprintf(stderr, "warning: row lambda=%g M=%d failed: %s\n", row.lambda,
                   row.M, row.error.c_str());
    }
  }
  return kExitOk;
}

struct LinearFlags {
  SourceFlags source;
  double lambda = 0.0;
  std::string format = "csv";
};

int run_linear_command(const LinearFlags& f) {
  strategiq::SweepConfig config;
  config.mode = strategiq::SweepMode::kLinear;
  config.lambdas = {f.lambda};
  config.sigma_x = f.source.sigma_x;
  config.r = f.source.r;
  config.rho = f.source.rho;
  config.format = strategiq::parse_output_format(f.format);
  const auto rows = strategiq::run_sweep(config);
  strategiq::emit(rows, config.format, "");
  return kExitOk;
}

struct DesignFlags {
  SourceFlags source;
  int levels = 2;
  double lambda = 0.0;
  std::string out;
  int grid_nodes = 17;
  std::string grid_scheme = "gauss-hermite";
  strategiq::OptimOptions optim;
  std::string gradient_mode = "analytic";
};

int run_design_command(DesignFlags f) {
  using namespace strategiq;
  SourceSpec source = [&] {
    try {
      return make_source(f.source.sigma_x, f.source.r, f.source.rho);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }();
  ThetaGrid grid;
  try {
    grid = make_theta_grid(source, f.grid_nodes, f.grid_scheme);
    f.optim.gradient_mode = parse_gradient_mode(f.gradient_mode);
    check_options(f.optim);
    if (f.levels < 1) throw std::invalid_argument("--m must be >= 1");
    if (!(f.lambda >= 0.0)) throw std::invalid_argument("--lambda must be >= 0");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const DesignResult result = multistart(source, grid, f.levels, f.lambda, f.optim);
  std::ofstream out(f.out);
  if (!out) throw IoError("cannot open '" + f.out + "' for writing");
  out << design_result_to_json(result, grid.nodes) << '\n';
  if (!out) throw IoError("failed writing '" + f.out + "'");

  std::printf("M=%d lambda=%g d_e=%.12g d_d=%.12g d_theta=%.12g "
              "iterations=%d converged=%s restart=%d\n",
              f.levels, f.lambda, result.report.d_e, result.report.d_d,
              result.report.d_theta, result.iterations,
              result.converged ? "true" : "false", result.restart_index);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibria of a privacy-constrained strategic quantization game"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "strategiq 0.1.0");

  SweepFlags sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a lambda x M sweep");
  sweep_cmd->add_option("--config", sweep.config, "JSON sweep configuration")->required();
  sweep_cmd->add_option("--lambdas", sweep.lambdas, "Override lambdas")->delimiter(',');
  sweep_cmd->add_option("--m", sweep.m_values, "Override M values (0 = linear)")
      ->delimiter(',');
  sweep_cmd->add_option("--seed", sweep.seed, "Override the seed");
  sweep_cmd->add_option("--out", sweep.out, "Output path (default stdout)");
  sweep_cmd->add_option("--format", sweep.format, "csv or json");
  sweep_cmd->add_flag("--verify", sweep.verify, "Add Monte Carlo columns");
  sweep_cmd->add_option("--workers", sweep.workers, "Concurrent rows (0 = all cores)");

  LinearFlags linear;
  CLI::App* linear_cmd =
      app.add_subcommand("linear", "Closed-form equilibrium without rate limit");
  linear_cmd->add_option("--lambda", linear.lambda, "Privacy weight")->required();
  add_source_flags(linear_cmd, linear.source);
  linear_cmd->add_option("--format", linear.format, "csv or json")->capture_default_str();

  DesignFlags design;
  CLI::App* design_cmd = app.add_subcommand("design", "Design an M-level quantizer");
  design_cmd->add_option("--m", design.levels, "Number of messages")->required();
  design_cmd->add_option("--lambda", design.lambda, "Privacy weight")->required();
  design_cmd->add_option("--out", design.out, "Quantizer JSON output")->required();
  add_source_flags(design_cmd, design.source);
  design_cmd->add_option("--grid-nodes", design.grid_nodes)->capture_default_str();
  design_cmd->add_option("--grid-scheme", design.grid_scheme,
                         "gauss-hermite or uniform-truncated")
      ->capture_default_str();
  design_cmd->add_option("--eta", design.optim.eta)->capture_default_str();
  design_cmd->add_option("--eps", design.optim.eps)->capture_default_str();
  design_cmd->add_option("--max-iters", design.optim.max_iters)->capture_default_str();
  design_cmd->add_option("--restarts", design.optim.n_restarts)->capture_default_str();
  design_cmd->add_option("--seed", design.optim.seed)->capture_default_str();
  design_cmd->add_option("--gradient", design.gradient_mode,
                         "analytic or finite-difference")
      ->capture_default_str();
  design_cmd->add_option("--workers", design.optim.workers)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sweep_cmd) return run_sweep_command(sweep);
    if (*linear_cmd) return run_linear_command(linear);
    return run_design_command(design);
  } catch (const strategiq::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const strategiq::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
}
