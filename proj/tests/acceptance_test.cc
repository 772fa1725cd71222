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

// Release gate: runs every acceptance criterion and prints one PASS/FAIL line
// per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "strategiq/gaussian_model.h"
#include "strategiq/linear_equilibrium.h"
#include "strategiq/metrics.h"
#include "strategiq/optimizer.h"
#include "strategiq/oracle.h"
#include "strategiq/quantizer.h"
#include "strategiq/sweep.h"
#include "test_oracles.h"
#include "test_util.h"

namespace strategiq {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const SourceSpec& unit_source() {
  static const SourceSpec s = make_source(1, 1, 0);
  return s;
}

// High-lambda designs shared by criteria 2 and 8.
struct LimitDesigns {
  DesignResult m2;
  DesignResult m8;
};

const LimitDesigns& limit_designs() {
  static const LimitDesigns d = [] {
    const ThetaGrid g = make_theta_grid(unit_source(), 17, GridScheme::kGaussHermite);
    OptimOptions opts;
    return LimitDesigns{multistart(unit_source(), g, 2, 1e7, opts),
                        multistart(unit_source(), g, 8, 1e7, opts)};
  }();
  return d;
}

Outcome lloyd_max_anchors() {
  Outcome o;
  const double d2 = lloyd_max(unit_source(), 2).distortion;
  const double d8 = lloyd_max(unit_source(), 8).distortion;
  o.require(std::abs(d2 - 0.3634) < 1e-3, fmt("M=2 %.6f vs 0.3634", d2));
  o.require(std::abs(d8 - 0.0345) < 1e-3, fmt("M=8 %.6f vs 0.0345", d8));
  return o;
}

Outcome quantizer_limit() {
  Outcome o;
  const ThetaGrid g = make_theta_grid(unit_source(), 17, GridScheme::kGaussHermite);
  const LimitDesigns& d = limit_designs();
  const double lm2 = testing::reference_lloyd_max(2).distortion;
  const double lm8 = testing::reference_lloyd_max(8).distortion;
  o.require(std::abs(d.m2.report.d_d - lm2) < 1e-2,
            fmt("M=2 d_d %.6f vs %.6f", d.m2.report.d_d, lm2));
  o.require(d.m8.report.d_d < lm8 + 5e-3,
            fmt("M=8 d_d %.6f vs %.6f + 5e-3", d.m8.report.d_d, lm8));
  const double kl2 = max_kl(d.m2.quantizer, unit_source(), g).d_max;
  const double kl8 = max_kl(d.m8.quantizer, unit_source(), g).d_max;
  o.require(kl2 < 0.05, fmt("M=2 d_kl_max %.3g", kl2));
  o.require(kl8 < 0.05, fmt("M=8 d_kl_max %.3g", kl8));
  return o;
}

Outcome linear_analytics() {
  Outcome o;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ur(0.1, 3.0), urho(-0.99, 0.99),
      ulog(-3.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const SourceSpec s = make_source(1, ur(rng), urho(rng));
    const double lambda = std::pow(10.0, ulog(rng));
    worst = std::max(worst, std::abs(alpha_quadratic(s, lambda).residual(
                                optimal_alpha(s, lambda))));
  }
  o.require(worst < 1e-9, fmt("max residual %.2e", worst));

  // alpha^2 + alpha - 1 = 0 at rho = 0, r = 1, lambda = 0.
  const double root = testing::bisect([](double a) { return a * a + a - 1.0; }, 0.0, 1.0);
  const double alpha = optimal_alpha(unit_source(), 0.0);
  o.require(std::abs(alpha - root) < 1e-6 && std::abs(alpha - 0.618034) < 1e-6,
            fmt("alpha* %.9f, root %.9f", alpha, root));

  double limit = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double r = ur(rng), rho = urho(rng);
    limit = std::max(limit, std::abs(optimal_alpha(make_source(1, r, rho), 1e9) + rho / r));
  }
  o.require(limit < 1e-3, fmt("max |alpha* + rho/r| at 1e9: %.2e", limit));
  return o;
}

Outcome linear_monotonicity() {
  Outcome o;
  SweepConfig c;
  c.mode = SweepMode::kLinear;
  c.lambdas = log_lambdas(1e-3, 1e7, 50, false);
  const std::vector<SweepRow> rows = run_sweep(c);
  int violations = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].d_d < rows[i - 1].d_d)) ++violations;
  }
  o.require(rows.size() == 50 && violations == 0,
            fmt("%g rows, %g violations", rows.size(), violations) +
                fmt(", d_d %.4f -> %.3g", rows.front().d_d, rows.back().d_d));
  return o;
}

// Central differences of d_e, computed here rather than by the library.
BoundaryGradient central_difference(const Quantizer& q, const SourceSpec& s,
                                    const ThetaGrid& g, double lambda) {
  constexpr double h = 1e-5;
  const std::size_t levels = q.levels();
  std::vector<std::vector<double>> interior(q.rows());
  for (std::size_t j = 0; j < q.rows(); ++j) {
    const auto row = q.row(j);
    interior[j].assign(row.begin() + 1, row.end() - 1);
  }
  BoundaryGradient grad(q.rows(), std::vector<double>(levels - 1));
  for (std::size_t j = 0; j < q.rows(); ++j) {
    for (std::size_t k = 0; k + 1 < levels; ++k) {
      auto plus = interior, minus = interior;
      plus[j][k] += h;
      minus[j][k] -= h;
      grad[j][k] = (evaluate(Quantizer::from_interior(levels, plus), s, g, lambda).d_e -
                    evaluate(Quantizer::from_interior(levels, minus), s, g, lambda).d_e) /
                   (2 * h);
    }
  }
  return grad;
}

Outcome gradient_correctness() {
  Outcome o;
  std::mt19937_64 rng(5);
  const double lambdas[] = {0.0, 0.5, 1.0, 5.0};
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int levels = 2 + i % 3;
    const int nodes = 3 + (i / 3) % 3;
    const double lambda = lambdas[i % 4];
    const SourceSpec s = make_source(1, 1, 0);
    const ThetaGrid g = make_theta_grid(s, nodes, GridScheme::kGaussHermite);
    const Quantizer q = testing::random_quantizer(rng, nodes, levels, 2.0, 0.05);
    const BoundaryGradient a = gradient(q, s, g, lambda);
    const BoundaryGradient n = central_difference(q, s, g, lambda);
    double err = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      for (std::size_t k = 0; k < a[j].size(); ++k) {
        err = std::max(err, std::abs(a[j][k] - n[j][k]));
        scale = std::max(scale, std::abs(n[j][k]));
      }
    }
    worst = std::max(worst, err / scale);
  }
  o.require(worst < 1e-5, fmt("max relative error %.2e over 50 instances", worst));
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const ThetaGrid g = make_theta_grid(unit_source(), 3, GridScheme::kGaussHermite);
  const OracleGrid og = OracleGrid::standard(unit_source());
  for (double lambda : {0.0, 0.5, 1.0, 5.0}) {
    const double ms = multistart(unit_source(), g, 2, lambda, OptimOptions{}).report.d_e;
    const double bf = brute_force_design(unit_source(), g, 2, lambda, og).report.d_e;
    o.require(ms <= bf + 1e-3, fmt("lambda=%g multistart %.6f vs oracle %.6f", lambda, ms, bf));
  }
  return o;
}

Outcome sampling_agreement() {
  Outcome o;
  constexpr std::size_t kSamples = 1000000;
  int failures = 0;
  double worst = 0.0;
  auto check = [&](const Quantizer& q, const SourceSpec& s, const ThetaGrid& g,
                   double lambda, std::uint64_t seed) {
    const BestResponses br = best_responses(q, s, g);
    const DistortionReport exact = distortions(q, br, s, g, lambda);
    const MonteCarloReport mc = monte_carlo_distortions(q, br, s, g, lambda, kSamples, seed);
    const double pairs[][3] = {
        {exact.fidelity, mc.mean.fidelity, mc.standard_error.fidelity},
        {exact.d_d, mc.mean.d_d, mc.standard_error.d_d},
        {exact.d_theta, mc.mean.d_theta, mc.standard_error.d_theta},
        {exact.d_e, mc.mean.d_e, mc.standard_error.d_e}};
    for (const auto& p : pairs) {
      const double z = p[2] > 0 ? std::abs(p[0] - p[1]) / p[2] : (p[0] == p[1] ? 0 : HUGE_VAL);
      worst = std::max(worst, z);
      if (!(z <= 3.0)) ++failures;
    }
  };
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const SourceSpec s = make_source(1, 0.5 + 0.1 * i, i % 2 ? 0.3 : 0.0);
    const ThetaGrid g = make_theta_grid(s, 3 + i % 5, GridScheme::kGaussHermite);
    check(testing::random_quantizer(rng, g.size(), 2 + i % 4), s, g, 0.5 * i, 100 + i);
  }
  const ThetaGrid g = make_theta_grid(unit_source(), 9, GridScheme::kGaussHermite);
  OptimOptions opts;
  opts.n_restarts = 2;
  for (double lambda : {0.0, 1e7}) {
    check(multistart(unit_source(), g, 4, lambda, opts).quantizer, unit_source(), g,
          lambda, 999);
  }
  o.require(failures == 0, fmt("%g of 88 components beyond 3 s.e., worst z %.2f",
                               failures, worst));
  return o;
}

Outcome limit_identity() {
  Outcome o;
  const double var_theta = unit_source().sigma_theta() * unit_source().sigma_theta();
  const LimitDesigns& d = limit_designs();
  for (const auto* r : {&d.m2.report, &d.m8.report}) {
    const double res = std::abs(r->fidelity - (r->d_d + var_theta));
    o.require(res < 1e-2, fmt("M=%g residual %.2e", r == &d.m2.report ? 2 : 8, res));
  }
  const LinearEquilibrium eq = solve_linear(unit_source(), 1e7);
  const DistortionReport lin = linear_distortions(unit_source(), eq.alpha, 1e7);
  const double res = std::abs(lin.fidelity - (lin.d_d + var_theta));
  o.require(res < 1e-2, fmt("linear residual %.2e", res));
  return o;
}

Outcome decoder_benefit() {
  Outcome o;
  SweepConfig c;
  c.mode = SweepMode::kQuantizer;
  c.lambdas = {0.0, 2.0};
  c.m_values = {8};
  const std::vector<SweepRow> rows = run_sweep(c);
  o.require(rows.size() == 2 && rows[0].error.empty() && rows[1].error.empty() &&
                rows[1].d_d < rows[0].d_d,
            fmt("M=8 d_d(0)=%.6f d_d(2)=%.6f", rows[0].d_d, rows[1].d_d));
  return o;
}

Outcome determinism() {
  Outcome o;
  const SweepConfig c = load_sweep_config(STRATEGIQ_M2_SWEEP_CONFIG);
  std::string csv[2];
  for (auto& text : csv) {
    std::ostringstream out;
    write_csv(run_sweep(c), out);
    text = out.str();
  }
  o.require(csv[0] == csv[1] && !csv[0].empty(),
            fmt("%g rows, %g bytes", std::count(csv[0].begin(), csv[0].end(), '\n') - 1,
                csv[0].size()));
  return o;
}

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace strategiq

int main() {
  using namespace strategiq;
  const Criterion criteria[] = {
      {"lloyd-max anchors", 1, lloyd_max_anchors},
      {"high-lambda quantizer limit", 300, quantizer_limit},
      {"linear stage analytics", 1, linear_analytics},
      {"linear decoder distortion monotone", 1, linear_monotonicity},
      {"analytic gradient", 60, gradient_correctness},
      {"brute-force oracle equivalence", 600, oracle_equivalence},
      {"closed form vs sampling", 120, sampling_agreement},
      {"encoder limit identity", 300, limit_identity},
      {"decoder benefits from privacy", 600, decoder_benefit},
      {"sweep determinism", 300, determinism},
  };
  int failed = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(seconds < c.budget_seconds,
              fmt("%.2f s of %g s budget", seconds, c.budget_seconds));
    if (!o.pass) ++failed;
    std::printf("[%s] %2d %-36s %s\n", o.pass ? "PASS" : "FAIL", index, c.name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
