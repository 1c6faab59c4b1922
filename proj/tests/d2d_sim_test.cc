// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "femtocache/d2d_sim.h"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "femtocache/error.h"
#include "femtocache/popularity.h"
#include "femtocache/rng.h"

namespace femtocache {
namespace {

D2DScenario Deterministic(int n, int m, double gamma, int cache, double r) {
  D2DScenario s;
  s.n = n;
  s.m = m;
  s.gamma = gamma;
  s.cache_files = cache;
  s.r = r;
  s.strategy = CachingStrategy::kDeterministic;
  return s;
}

TEST(ClusterActive, Examples) {
  EXPECT_FALSE(ClusterActive({{1}}, {2}));
  EXPECT_FALSE(ClusterActive({{1}}, {1}));
  EXPECT_TRUE(ClusterActive({{1}, {2}}, {2, 1}));
  EXPECT_FALSE(ClusterActive({{1}, {2}}, {1, 2}));
  // Held by self and by another user: served locally.
  EXPECT_FALSE(ClusterActive({{1}, {1}}, {1, 3}));
  EXPECT_FALSE(ClusterActive({}, {}));
  EXPECT_THROW(ClusterActive({{1}}, {1, 2}), InvalidParameter);
}

TEST(CvcDeterministic, Blocks) {
  EXPECT_TRUE(CvcDeterministic(0, 1, 10).empty());
  EXPECT_EQ(CvcDeterministic(2, 1, 5), (std::vector<std::vector<int>>{{1}, {2}}));
  EXPECT_EQ(CvcDeterministic(3, 2, 4), (std::vector<std::vector<int>>{{1, 2}, {3, 4}, {}}));
  EXPECT_EQ(CvcDeterministic(2, 3, 4), (std::vector<std::vector<int>>{{1, 2, 3}, {4}}));
}

TEST(CacheRandom, Edges) {
  Rng rng(1);
  const auto full = CacheRandom(10, 3.0, 10, rng);
  EXPECT_EQ(std::set<int>(full.begin(), full.end()).size(), 10u);
  EXPECT_TRUE(CacheRandom(0, 0.5, 10, rng).empty());
  EXPECT_THROW(CacheRandom(11, 0.5, 10, rng), InvalidParameter);
  // Heavy skew with a nearly full cache exercises the fallback draw.
  for (int i = 0; i < 50; ++i) {
    const auto c = CacheRandom(9, 6.0, 10, rng);
    ASSERT_EQ(std::set<int>(c.begin(), c.end()).size(), 9u);
    for (int f : c) ASSERT_TRUE(f >= 1 && f <= 10);
  }
}

TEST(CacheRandom, UniformWhenGammaOneIsZero) {
  Rng rng(2);
  int first = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) first += CacheRandom(1, 0.0, 10, rng)[0] == 1;
  EXPECT_NEAR(first / double(draws), 0.1, 0.005);
}

TEST(CacheRandom, DeterministicPerSeed) {
  Rng a(3);
  Rng b(3);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(CacheRandom(4, 0.7, 50, a), CacheRandom(4, 0.7, 50, b));
}

TEST(ExpectedActiveAnalytic, SmallCases) {
  EXPECT_EQ(ExpectedActiveAnalytic(Deterministic(1, 10, 0.6, 1, 0.5), BuildZipf(0.6, 10))
                .expected_active,
            0.0);
  const auto two = ExpectedActiveAnalytic(Deterministic(2, 2, 0.0, 1, 1.0), BuildZipf(0.0, 2));
  EXPECT_NEAR(two.expected_active, 0.75, 1e-12);
  EXPECT_EQ(two.clusters, 1);
}

TEST(ExpectedActiveAnalytic, MatchesPinnedMonteCarlo) {
  // Monte Carlo oracle, 1e5 snapshots with seed 2024: 28.31773 +- 0.0131170.
  const auto s = Deterministic(500, 1000, 0.6, 1, 0.1);
  const auto a = ExpectedActiveAnalytic(s, BuildZipf(0.6, 1000));
  EXPECT_NEAR(a.expected_active, 28.31773, 3.0 * 0.0131170460486);
  EXPECT_EQ(a.clusters, 100);
  EXPECT_EQ(a.std_error, 0.0);
}

TEST(ExpectedActiveAnalytic, RejectsNonTilingAndRandom) {
  const auto pop = BuildZipf(0.6, 100);
  EXPECT_THROW(ExpectedActiveAnalytic(Deterministic(100, 100, 0.6, 1, 0.3), pop),
               InvalidParameter);
  auto s = Deterministic(100, 100, 0.6, 1, 0.5);
  s.strategy = CachingStrategy::kRandomZipf;
  EXPECT_THROW(ExpectedActiveAnalytic(s, pop), InvalidParameter);
}

TEST(ExpectedActiveAnalytic, BoundedAndMonotoneInCache) {
  for (double gamma : {0.2, 0.6, 1.5}) {
    const auto pop = BuildZipf(gamma, 200);
    for (double r : {1.0, 0.5, 0.2, 0.1}) {
      double prev = -1.0;
      for (int cache = 0; cache <= 4; ++cache) {
        const auto a = ExpectedActiveAnalytic(Deterministic(300, 200, gamma, cache, r), pop);
        ASSERT_GE(a.expected_active, 0.0);
        ASSERT_LE(a.expected_active, double(a.clusters) + 1e-9);
        ASSERT_GE(a.expected_active, prev - 1e-12);
        prev = a.expected_active;
      }
    }
  }
}

TEST(SimulateActiveClusters, EmptyCachesNeverActive) {
  const auto s = Deterministic(200, 50, 0.6, 0, 0.2);
  const auto mc = SimulateActiveClusters(s, BuildZipf(0.6, 50), 1, 200);
  EXPECT_EQ(mc.expected_active, 0.0);
  EXPECT_EQ(mc.std_error, 0.0);
}

TEST(SimulateActiveClusters, SingleFileCatalog) {
  // Random caching of the only file: every request is a self-reference.
  auto s = Deterministic(300, 1, 0.6, 1, 0.2);
  s.strategy = CachingStrategy::kRandomZipf;
  EXPECT_EQ(SimulateActiveClusters(s, BuildZipf(0.6, 1), 2, 200).expected_active, 0.0);
  // Deterministic blocks give the file to the first user only, so any
  // cluster with two or more users is active.
  s.strategy = CachingStrategy::kDeterministic;
  const auto pop = BuildZipf(0.6, 1);
  const auto a = ExpectedActiveAnalytic(s, pop);
  const auto mc = SimulateActiveClusters(s, pop, 2, 2000);
  EXPECT_NEAR(a.expected_active, mc.expected_active, 3.0 * mc.std_error + 1e-12);
}

TEST(SimulateActiveClusters, AgreesWithAnalyticOnGrid) {
  for (double gamma : {0.2, 0.6, 1.5}) {
    for (double r : {0.5, 0.2, 0.1}) {
      for (int n : {100, 500}) {
        const auto s = Deterministic(n, 1000, gamma, 1, r);
        const auto pop = BuildZipf(gamma, 1000);
        const auto a = ExpectedActiveAnalytic(s, pop);
        const auto mc = SimulateActiveClusters(s, pop, 77, 2000);
        // 1/reps: resolution of the Monte Carlo mean.
        EXPECT_NEAR(a.expected_active, mc.expected_active, 3.0 * mc.std_error + 1.0 / 2000)
            << "gamma=" << gamma << " r=" << r << " n=" << n;
      }
    }
  }
}

TEST(SimulateActiveClusters, NonTilingRadiusFloorsWithWarning) {
  const auto s = Deterministic(100, 100, 0.6, 1, 0.3);
  const auto mc = SimulateActiveClusters(s, BuildZipf(0.6, 100), 1, 20);
  EXPECT_EQ(mc.clusters, 9);
  EXPECT_FALSE(mc.warning.empty());
}

TEST(SimulateClusterActivity, ClustersAreNearlyUncorrelated) {
  const auto s = Deterministic(500, 1000, 0.6, 1, 0.2);
  const auto pop = BuildZipf(0.6, 1000);
  Rng rng(5);
  const int reps = 20000;
  double sa = 0.0, sb = 0.0, sab = 0.0;
  for (int i = 0; i < reps; ++i) {
    const auto act = SimulateClusterActivity(s, pop, nullptr, rng);
    ASSERT_EQ(act.size(), 25u);
    sa += act[0];
    sb += act[12];
    sab += act[0] * act[12];
  }
  const double ma = sa / reps, mb = sb / reps;
  const double cov = sab / reps - ma * mb;
  const double corr = cov / std::sqrt(ma * (1 - ma) * mb * (1 - mb));
  EXPECT_LT(std::abs(corr), 0.05);
}

TEST(SweepR, InteriorMaximumAndEdges) {
  const auto s = Deterministic(500, 1000, 0.6, 1, 0.1);
  const std::vector<double> rs = {1.0, 0.5, 0.25, 0.2, 0.1, 0.05, 0.04, 0.02};
  const auto rows = SweepR(s, rs, EvalMode::kAnalytic, 1, 1);
  ASSERT_EQ(rows.size(), rs.size());
  EXPECT_LE(rows[0].mean_active, 1.0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].mean_active > rows[best].mean_active) best = i;
  }
  EXPECT_GT(best, 0u);
  EXPECT_LT(best, rows.size() - 1);
  const double r_opt = OptimalCollaborationDistance(s, BuildZipf(0.6, 1000), 60);
  EXPECT_GT(r_opt, 0.02);
  EXPECT_LT(r_opt, 1.0);
}

TEST(SweepR, SingleFileRandomCachingIsFlatZero) {
  auto s = Deterministic(200, 1, 0.6, 1, 0.1);
  s.strategy = CachingStrategy::kRandomZipf;
  for (const auto& row : SweepR(s, {1.0, 0.5, 0.2}, EvalMode::kMonteCarlo, 3, 50)) {
    EXPECT_EQ(row.mean_active, 0.0);
  }
}

TEST(SweepR, AutoModePicksAnalyticOnlyWhenItExists) {
  auto s = Deterministic(100, 50, 0.6, 1, 0.5);
  auto rows = SweepR(s, {0.5, 0.3}, EvalMode::kAuto, 1, 10);
  EXPECT_EQ(rows[0].mode, "analytic");
  EXPECT_EQ(rows[1].mode, "mc");
  EXPECT_EQ(SweepR(s, {0.5}, EvalMode::kBoth, 1, 10).size(), 2u);
}

TEST(SweepGamma1, InteriorMaximumAwayFromGamma) {
  auto s = Deterministic(500, 1000, 0.6, 1, 0.1);
  s.strategy = CachingStrategy::kRandomZipf;
  const std::vector<double> g1 = {0.0, 0.6, 1.25, 2.0, 3.0};
  const auto rows = SweepGamma1(s, g1, {0.1}, 9, 300);
  ASSERT_EQ(rows.size(), g1.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].mean_active > rows[best].mean_active) best = i;
  }
  EXPECT_GT(best, 0u);
  EXPECT_LT(best, rows.size() - 1);
  // The best caching exponent is not the request exponent.
  EXPECT_GT(rows[2].mean_active, rows[1].mean_active + 3.0 * rows[1].std_error);
}

TEST(SweepGamma1, FullCachesAreFlatAndSeedsRepeat) {
  auto s = Deterministic(100, 3, 0.6, 3, 0.5);
  s.strategy = CachingStrategy::kRandomZipf;
  for (const auto& row : SweepGamma1(s, {0.0, 1.0, 2.0}, {0.5}, 4, 50)) {
    EXPECT_EQ(row.mean_active, 0.0);
  }
  s.cache_files = 1;
  s.m = 50;
  std::ostringstream a, b;
  WriteD2DCsv(SweepGamma1(s, {0.0, 1.0}, {0.5, 0.25}, 4, 50), a);
  WriteD2DCsv(SweepGamma1(s, {0.0, 1.0}, {0.5, 0.25}, 4, 50), b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(WriteD2DCsv, Format) {
  D2DRow det{.r = 0.5, .gamma = 0.6, .mean_active = 1.5, .clusters = 4, .mode = "analytic"};
  D2DRow rnd{.r = 0.1,
             .gamma = 0.6,
             .gamma1 = 1.25,
             .random_caching = true,
             .mean_active = 2.0,
             .std_error = 0.125,
             .clusters = 100,
             .mode = "mc"};
  std::ostringstream out;
  WriteD2DCsv({det, rnd}, out);
  EXPECT_EQ(out.str(),
            "r,gamma,gamma1,mean_active,stderr,K,mode\n"
            "0.5,0.6,,1.5,0,4,analytic\n"
            "0.1,0.6,1.25,2,0.125,100,mc\n");
}

TEST(ClustersPerSide, ExactAndRelaxed) {
  EXPECT_EQ(ClustersPerSide(0.1, true), 10);
  EXPECT_EQ(ClustersPerSide(1.0 / 3.0, true), 3);
  EXPECT_THROW(ClustersPerSide(0.3, true), InvalidParameter);
  EXPECT_EQ(ClustersPerSide(0.3, false), 3);
  EXPECT_THROW(ClustersPerSide(0.0, false), InvalidParameter);
  EXPECT_THROW(ClustersPerSide(1.5, false), InvalidParameter);
}

TEST(ScalingCheck, SingleRowAndDeterminism) {
  ScalingConfig c;
  c.n_values = {300};
  c.reps = 50;
  const auto rows = ScalingCheck(c, 3);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(RatioSpread(rows), 0.0);
  EXPECT_TRUE(StrictlyDecreasing(rows, 2.0));
  EXPECT_EQ(rows[0].m, CatalogSize(300, c.catalog_scale));
  std::ostringstream a, b;
  WriteScalingCsv(rows, c.gamma, a);
  WriteScalingCsv(ScalingCheck(c, 3), c.gamma, b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Rgg, InclusiveRadiusAndCompleteGraph) {
  const auto g = RggFromPoints({{0.25, 0.25}, {0.25, 0.75}}, 0.5);
  ASSERT_EQ(g.adjacency[0], (std::vector<int>{1}));
  const auto far = RggFromPoints({{0.25, 0.25}, {0.25, 0.75}}, 0.4999);
  EXPECT_TRUE(far.adjacency[0].empty());
  Rng rng(1);
  const auto full = RggBuild(40, std::sqrt(2.0), rng);
  for (const auto& adj : full.adjacency) EXPECT_EQ(adj.size(), 39u);
  EXPECT_EQ(RggBuild(0, 0.1, rng).num_nodes(), 0);
}

TEST(Rgg, MatchesBruteForceAdjacency) {
  Rng rng(2);
  for (double r : {0.03, 0.1, 0.37}) {
    const auto g = RggBuild(300, r, rng);
    for (int i = 0; i < g.num_nodes(); ++i) {
      std::vector<int> expect;
      for (int j = 0; j < g.num_nodes(); ++j) {
        const double dx = g.nodes[i].x - g.nodes[j].x;
        const double dy = g.nodes[i].y - g.nodes[j].y;
        if (j != i && dx * dx + dy * dy <= r * r) expect.push_back(j);
      }
      ASSERT_EQ(g.adjacency[i], expect);
    }
  }
}

TEST(Rgg, DegreeStatistics) {
  Rng rng(3);
  const double r = 0.1;
  const int n = 500;
  double mean = 0.0;
  int bounded = 0;
  const int trials = 50;
  for (int t = 0; t < trials; ++t) {
    const auto g = RggBuild(n, r, rng);
    mean += g.MeanDegree() / trials;
    bounded += g.MaxDegree() <= 5.0 * g.MeanDegree();
  }
  EXPECT_NEAR(mean, n * std::numbers::pi * r * r, 0.1 * n * std::numbers::pi * r * r);
  // Boundary-corrected expectation: (n - 1)(pi r^2 - 8 r^3 / 3 + r^4 / 2).
  EXPECT_NEAR(mean, (n - 1) * (std::numbers::pi * r * r - 8.0 * r * r * r / 3.0 + r * r * r * r / 2.0),
              0.2);
  EXPECT_EQ(bounded, trials);
}

TEST(Rgg, ServedAndScheduledOnFixture) {
  // Edges 0-1 and 2-3; node 4 isolated.
  const auto g = RggFromPoints({{0.1, 0.1}, {0.2, 0.1}, {0.9, 0.9}, {0.85, 0.9}, {0.5, 0.5}}, 0.15);
  const std::vector<std::vector<int>> caches = {{1}, {2}, {3}, {3}, {1}};
  const std::vector<int> requests = {2, 1, 3, 4, 1};
  // 0 and 1 are served by each other; 2 is a self-hit; 3 and 4 find nothing.
  EXPECT_EQ(RggServedUsers(g, caches, requests), 2);
  // Transmitter 0 sits within r of transmitter 1, so only one link fits.
  EXPECT_EQ(RggScheduledLinks(g, caches, requests), 1);
  const auto empty = RggFromPoints({}, 0.1);
  EXPECT_EQ(RggServedUsers(empty, {}, {}), 0);
}

TEST(Rgg, FullCachesMeanNoD2D) {
  Rng rng(4);
  const auto g = RggBuild(30, 2.0, rng);
  std::vector<std::vector<int>> caches(30, {1, 2, 3});
  std::vector<int> requests(30);
  for (int& q : requests) q = 1 + static_cast<int>(rng.UniformInt(3));
  EXPECT_EQ(RggServedUsers(g, caches, requests), 0);
  EXPECT_EQ(RggScheduledLinks(g, caches, requests), 0);
}

}  // namespace
}  // namespace femtocache
