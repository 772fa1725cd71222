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

#include "strategiq/optimizer.h"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "gtest/gtest.h"
#include "strategiq/metrics.h"
#include "strategiq/oracle.h"
#include "test_oracles.h"
#include "test_util.h"

namespace strategiq {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_relative_error(const BoundaryGradient& a, const BoundaryGradient& b) {
  double scale = 0.0, err = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    for (std::size_t k = 0; k < a[j].size(); ++k) {
      scale = std::max(scale, std::abs(b[j][k]));
      err = std::max(err, std::abs(a[j][k] - b[j][k]));
    }
  }
  return scale > 0 ? err / scale : err;
}

TEST(GradientTest, SymmetricSplitIsAntisymmetric) {
  const SourceSpec s = make_source(1, 1, 0);
  const ThetaGrid g = make_theta_grid(s, 7, GridScheme::kGaussHermite);
  const BoundaryGradient grad =
      gradient(Quantizer::replicated(7, std::vector<double>{0.0}), s, g, 0.0);
  for (std::size_t j = 0; j < 7; ++j) {
    EXPECT_NEAR(grad[j][0], -grad[6 - j][0], 1e-15);
  }
  EXPECT_NEAR(grad[3][0], 0.0, 1e-15);
  EXPECT_NE(grad[0][0], 0.0);
}

TEST(GradientTest, MatchesFiniteDifferences) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 12; ++trial) {
    const SourceSpec s = make_source(1, 1, trial % 3 == 0 ? 0.4 : 0.0);
    const ThetaGrid g = make_theta_grid(s, 3 + trial % 3, GridScheme::kGaussHermite);
    const Quantizer q = testing::random_quantizer(rng, g.size(), 2 + trial % 3, 1.5, 0.1);
    const double lambda = (trial % 4) * 0.5;
    const BoundaryGradient analytic = gradient(q, s, g, lambda);
    const BoundaryGradient numeric = finite_difference_gradient(q, s, g, lambda);
    EXPECT_LT(max_relative_error(analytic, numeric), 1e-5) << "trial " << trial;
  }
}

TEST(GradientTest, LloydMaxIsStationaryForSingleNode) {
  const SourceSpec s = make_source(1, 1, 0);
  const ThetaGrid g = make_theta_grid(s, 1, GridScheme::kUniformTruncated);
  for (int m : {2, 4, 8}) {
    const testing::ReferenceLloyd ref = testing::reference_lloyd_max(m);
    const BoundaryGradient grad =
        gradient(Quantizer::replicated(1, ref.boundaries), s, g, 0.0);
    for (double v : grad[0]) EXPECT_NEAR(v, 0.0, 1e-9) << "M=" << m;
  }
}

TEST(GradientTest, EavesdropperChainTermVanishes) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const SourceSpec s = make_source(1, 1.3, 0.2);
    const ThetaGrid g = make_theta_grid(s, 5, GridScheme::kGaussHermite);
    const Quantizer q = testing::random_quantizer(rng, 5, 4);
    for (const auto& row : eavesdropper_chain_term(q, s, g, 5.0)) {
      for (double v : row) EXPECT_LT(std::abs(v), 1e-10);
    }
  }
}

TEST(GradientTest, CollapsedDirectionIsZeroed) {
  const SourceSpec s = make_source(1, 1, 0);
  const ThetaGrid g = make_theta_grid({-1.0, 1.0}, {0.5, 0.5});
  const Quantizer q = Quantizer::from_interior(3, {{0.3, 0.3}, {-0.2, 0.9}});
  const BoundaryGradient grad = gradient(q, s, g, 1.0);
  EXPECT_GE(grad[0][0], 0.0);  // may move down, not up past its twin
  EXPECT_LE(grad[0][1], 0.0);  // may move up, not down past its twin
}

TEST(ProjectMonotoneTest, Examples) {
  EXPECT_EQ(project_monotone(std::vector<double>{-kInf, 1, 2, kInf}),
            (std::vector<double>{-kInf, 1, 2, kInf}));
  EXPECT_EQ(project_monotone(std::vector<double>{-kInf, 2, 1, kInf}),
            (std::vector<double>{-kInf, 1.5, 1.5, kInf}));
  EXPECT_EQ(project_monotone(std::vector<double>{-kInf, 3, 1, 2, kInf}),
            (std::vector<double>{-kInf, 2, 2, 2, kInf}));
}

TEST(ProjectMonotoneTest, IdempotentMonotoneAndNearest) {
  std::mt19937_64 rng(47);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> row = {-kInf};
    const int len = 1 + trial % 7;
    for (int i = 0; i < len; ++i) row.push_back(n01(rng));
    row.push_back(kInf);
    const std::vector<double> p = project_monotone(row);
    EXPECT_EQ(project_monotone(p), p);
    EXPECT_TRUE(std::is_sorted(p.begin(), p.end()));
    EXPECT_EQ(p.front(), -kInf);
    EXPECT_EQ(p.back(), kInf);
    // No sorted perturbation of the projection is closer to the input.
    auto dist = [&](const std::vector<double>& v) {
      double d = 0;
      for (std::size_t i = 1; i + 1 < v.size(); ++i) d += (v[i] - row[i]) * (v[i] - row[i]);
      return d;
    };
    for (int k = 0; k < 20; ++k) {
      std::vector<double> other = p;
      for (std::size_t i = 1; i + 1 < other.size(); ++i) other[i] += 0.05 * n01(rng);
      std::sort(other.begin() + 1, other.end() - 1);
      EXPECT_GE(dist(other), dist(p) - 1e-12);
    }
  }
}

TEST(DesignTest, TrajectoryIsMonotone) {
  const SourceSpec s = make_source(1, 1, 0);
  const ThetaGrid g = make_theta_grid(s, 5, GridScheme::kGaussHermite);
  OptimOptions opts;
  opts.record_trajectory = true;
  opts.max_iters = 3000;
  for (int i = 1; i <= 3; ++i) {
    const DesignResult r =
        design(s, g, 3, 0.7, opts, random_start(s, g, 3, 5, i));
    ASSERT_GE(r.trajectory.size(), 2u);
    for (std::size_t t = 1; t < r.trajectory.size(); ++t) {
      EXPECT_LE(r.trajectory[t], r.trajectory[t - 1] + 1e-12);
    }
    EXPECT_DOUBLE_EQ(r.trajectory.back(), r.report.d_e);
  }
}

TEST(DesignTest, StrategicEncoderBeatsFullyRevealing) {
  const SourceSpec s = make_source(1, 1, 0);
  const ThetaGrid g = make_theta_grid(s, 3, GridScheme::kGaussHermite);
  const DesignResult r = design(s, g, 2, 0.0, OptimOptions{});
  const double revealing = evaluate(lloyd_max(s, 2).replicated(3), s, g, 0.0).d_e;
  EXPECT_LT(r.report.d_e, revealing);
  const OracleGrid og = OracleGrid::standard(s);
  const DesignResult oracle = brute_force_design(s, g, 2, 0.0, og);
  EXPECT_LE(r.report.d_e, oracle.report.d_e + 1e-3);
}

TEST(DesignTest, SingleNodeReducesToLloydMax) {
  const SourceSpec s = make_source(1, 1, 0);
  const ThetaGrid g = make_theta_grid(s, 1, GridScheme::kUniformTruncated);
  OptimOptions opts;
  opts.eps = 1e-15;
  opts.max_iters = 200000;
  for (int m : {2, 4, 8}) {
    const LloydMaxResult lm = lloyd_max(s, m);
    std::vector<double> shifted = lm.boundaries;
    for (double& b : shifted) b = 0.9 * b + 0.1;
    const DesignResult r =
        design(s, g, m, 0.0, opts, Quantizer::replicated(1, shifted));
    EXPECT_NEAR(r.report.d_d, lm.distortion, 1e-8) << "M=" << m;
    EXPECT_NEAR(r.report.fidelity, r.report.d_d, 1e-12);
  }
}

TEST(DesignTest, SingleLevelIsTrivial) {
  const SourceSpec s = make_source(1, 1, 0);
  const ThetaGrid g = make_theta_grid(s, 5, GridScheme::kGaussHermite);
  const DesignResult r = design(s, g, 1, 2.0, OptimOptions{});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.report.d_e, 2.0 - 2.0 * 1.0, 1e-12);
}

TEST(DesignTest, RejectsBadArguments) {
  const SourceSpec s = make_source(1, 1, 0);
  const ThetaGrid g = make_theta_grid(s, 3, GridScheme::kGaussHermite);
  EXPECT_THROW(design(s, g, 0, 0.0, OptimOptions{}), std::invalid_argument);
  OptimOptions bad;
  bad.eta = 0;
  EXPECT_THROW(design(s, g, 2, 0.0, bad), std::invalid_argument);
  EXPECT_THROW(design(s, g, 2, 0.0, OptimOptions{},
                      Quantizer::from_interior(2, {{0.0}, {0.0}})),
               std::invalid_argument);
  EXPECT_THROW(design(s, g, 3, 0.0, OptimOptions{},
                      Quantizer::from_interior(3, {{1.0, 0.0}, {0.0, 1.0}, {0.0, 1.0}})),
               std::invalid_argument);
}

TEST(DesignTest, FiniteDifferenceModeAgrees) {
  const SourceSpec s = make_source(1, 1, 0);
  const ThetaGrid g = make_theta_grid(s, 3, GridScheme::kGaussHermite);
  OptimOptions opts;
  opts.max_iters = 300;
  const Quantizer init = random_start(s, g, 2, 3, 1);
  const DesignResult a = design(s, g, 2, 0.5, opts, init);
  opts.gradient_mode = GradientMode::kFiniteDifference;
  const DesignResult b = design(s, g, 2, 0.5, opts, init);
  EXPECT_NEAR(a.report.d_e, b.report.d_e, 1e-6);
}

TEST(MultistartTest, Deterministic) {
  const SourceSpec s = make_source(1, 1, 0);
  const ThetaGrid g = make_theta_grid(s, 5, GridScheme::kGaussHermite);
  OptimOptions opts;
  opts.n_restarts = 1;
  opts.seed = 1234;
  opts.max_iters = 2000;
  const DesignResult a = multistart(s, g, 3, 1.0, opts);
  const DesignResult b = multistart(s, g, 3, 1.0, opts);
  EXPECT_EQ(a.quantizer, b.quantizer);
  EXPECT_EQ(a.report.d_e, b.report.d_e);
  EXPECT_EQ(a.restart_index, b.restart_index);
  opts.workers = 3;
  opts.n_restarts = 4;
  const DesignResult c = multistart(s, g, 3, 1.0, opts);
  opts.workers = 1;
  const DesignResult d = multistart(s, g, 3, 1.0, opts);
  EXPECT_EQ(c.quantizer, d.quantizer);
}

TEST(MultistartTest, MoreRestartsNeverHurt) {
  const SourceSpec s = make_source(1, 1, 0);
  const ThetaGrid g = make_theta_grid(s, 5, GridScheme::kGaussHermite);
  OptimOptions opts;
  opts.max_iters = 3000;
  opts.n_restarts = 1;
  const double single = multistart(s, g, 2, 1.0, opts).report.d_e;
  opts.n_restarts = 8;
  EXPECT_LE(multistart(s, g, 2, 1.0, opts).report.d_e, single);
}

TEST(RandomStartTest, SortedAndReproducible) {
  const SourceSpec s = make_source(2, 1, 0);
  const ThetaGrid g = make_theta_grid(s, 4, GridScheme::kGaussHermite);
  const Quantizer a = random_start(s, g, 5, 9, 2);
  EXPECT_TRUE(validate(a, g).ok());
  EXPECT_EQ(a, random_start(s, g, 5, 9, 2));
  EXPECT_NE(a, random_start(s, g, 5, 9, 3));
  EXPECT_NE(a, random_start(s, g, 5, 10, 2));
}

}  // namespace
}  // namespace strategiq
