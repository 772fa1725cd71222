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

#ifndef STRATEGIQ_SWEEP_H_
#define STRATEGIQ_SWEEP_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "strategiq/gaussian_model.h"
#include "strategiq/oracle.h"
#include "strategiq/optimizer.h"

namespace strategiq {

// Malformed configuration; the message names the offending field or the
// line/column of a JSON syntax error.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Output could not be written; the message carries the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SweepMode { kLinear, kQuantizer, kSweep };
enum class OutputFormat { kCsv, kJson };

// Rate-unconstrained rows use this M.
inline constexpr int kLinearM = 0;

struct SweepConfig {
  SweepMode mode = SweepMode::kSweep;
  std::vector<double> lambdas;
  std::vector<int> m_values = {0, 8, 2};
  double sigma_x = 1.0;
  double r = 1.0;
  double rho = 0.0;
  int grid_nodes = 17;
  GridScheme grid_scheme = GridScheme::kGaussHermite;
  OptimOptions optim;
  std::uint64_t seed = 0;
  std::string out;  // empty: standard output
  OutputFormat format = OutputFormat::kCsv;
  bool verify = false;
  std::size_t mc_samples = 1000000;
  // Concurrent rows; 0 means hardware concurrency.
  unsigned workers = 0;
};

// `points` values log-spaced on [start, stop], optionally preceded by 0.
std::vector<double> log_lambdas(double start, double stop, int points,
                                bool include_zero);

// Applies the fields present in `json_text` on top of `base`. Throws
// ConfigError.
SweepConfig parse_sweep_config(const std::string& json_text,
                               SweepConfig base = {});
SweepConfig load_sweep_config(const std::string& path, SweepConfig base = {});

// Throws ConfigError for an unusable configuration.
void check_sweep_config(const SweepConfig& config);

SweepMode parse_sweep_mode(std::string_view name);
OutputFormat parse_output_format(std::string_view name);

struct SweepRow {
  double lambda = 0.0;
  int M = 0;
  double d_e = 0.0;
  double fidelity = 0.0;
  double d_d = 0.0;
  double d_theta = 0.0;
  std::optional<double> d_kl_max;
  std::optional<double> alpha;
  std::optional<int> iterations;
  std::optional<bool> converged;
  std::optional<int> restart_winner;
  std::uint64_t seed = 0;
  std::optional<MonteCarloReport> monte_carlo;
  std::string error;  // set when the row failed

  bool operator==(const SweepRow& other) const;
};

// One row per (lambda, M), ordered by lambda then M. A row whose computation
// throws is recorded with converged = false and the message in `error`.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

inline constexpr std::string_view kCsvHeader =
    "lambda,M,d_e,fidelity,d_d,d_theta,d_kl_max,alpha,iterations,converged,"
    "restart_winner,seed";

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out);
std::string rows_to_json(const std::vector<SweepRow>& rows);
// Throws ConfigError on malformed input.
std::vector<SweepRow> rows_from_json(const std::string& text);

// Writes to `path`, or standard output when empty. Throws IoError.
void emit(const std::vector<SweepRow>& rows, OutputFormat format,
          const std::string& path);

}  // namespace strategiq

#endif  // STRATEGIQ_SWEEP_H_
