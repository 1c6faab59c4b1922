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

#include "femtocache/macro_sim.h"

#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "femtocache/error.h"
#include "test_util.h"

namespace femtocache {
namespace {

UncodedPlacement Empty(int helpers) {
  UncodedPlacement p;
  p.cache.resize(helpers);
  return p;
}

TEST(SimulateRequests, SingleUserNoHelpers) {
  const ConnectivityGraph g(0, {{}}, {4e6});
  const WorkloadSpec w;
  const auto out = SimulateRequests(g, Empty(0), {1}, w);
  EXPECT_DOUBLE_EQ(out.download_time[0], w.file_bits / 4e6);
  EXPECT_EQ(out.source[0], ServingSource::kBs);
  EXPECT_EQ(out.bs_users, 1);
}

TEST(SimulateRequests, EqualShareOfTheBs) {
  const int n = 7;
  const ConnectivityGraph g(0, std::vector<std::vector<Link>>(n), std::vector<double>(n, 5e6));
  const WorkloadSpec w;
  const auto out = SimulateRequests(g, Empty(0), std::vector<int>(n, 3), w);
  for (double t : out.download_time) EXPECT_DOUBLE_EQ(t, n * w.file_bits / 5e6);
  EXPECT_EQ(out.helper_served_fraction, 0.0);
  EXPECT_EQ(out.bs_served_fraction, 1.0);
}

TEST(SimulateRequests, FullCatalogAtHelpers) {
  // Helper rates 2 Mb/s and 1 Mb/s: 120 s and 240 s for 30 MB files.
  const ConnectivityGraph g(1, {{{0, 2e6}}, {{0, 1e6}}}, {0.5e6, 0.5e6});
  UncodedPlacement p;
  p.cache = {{1, 2, 3}};
  const WorkloadSpec w;
  const auto out = SimulateRequests(g, p, {3, 1}, w);
  EXPECT_DOUBLE_EQ(out.download_time[0], w.file_bits / 2e6);
  EXPECT_DOUBLE_EQ(out.download_time[1], w.file_bits / 1e6);
  EXPECT_EQ(out.satisfied_count, 1);
  EXPECT_EQ(out.helper_served_fraction, 1.0);
  EXPECT_EQ(out.bs_served_fraction, 0.0);
}

TEST(SimulateRequests, HelperServedUsersLeaveTheBsToOthers) {
  // Users 0 and 1 reach the helper; user 1 asks for an uncached file, user 2
  // has no helper. Two users share the BS.
  const ConnectivityGraph g(1, {{{0, 20e6}}, {{0, 20e6}}, {}}, {4e6, 4e6, 8e6});
  UncodedPlacement p;
  p.cache = {{1}};
  const WorkloadSpec w{.n_users = 3, .file_bits = 8e6, .qos_threshold_s = 3.0};
  const auto out = SimulateRequests(g, p, {1, 2, 1}, w);
  EXPECT_DOUBLE_EQ(out.download_time[0], 0.4);
  EXPECT_DOUBLE_EQ(out.download_time[1], 4.0);
  EXPECT_DOUBLE_EQ(out.download_time[2], 2.0);
  EXPECT_EQ(out.bs_users, 2);
  // Hand count: 0.4 s and 2 s are within 3 s, 4 s is not.
  EXPECT_EQ(out.satisfied_count, 2);
  EXPECT_EQ(CountSatisfied(out, std::numeric_limits<double>::infinity()), 3);
  EXPECT_EQ(CountSatisfied(out, 0.0), 0);
  EXPECT_EQ(CountSatisfied(out, 0.4), 1);
  EXPECT_DOUBLE_EQ(out.helper_served_fraction + out.bs_served_fraction, 1.0);
}

TEST(SimulateRequests, CodedFractionsThenBs) {
  const ConnectivityGraph g(2, {{{0, 10e6}, {1, 5e6}}, {{1, 5e6}}}, {1e6, 1e6});
  CodedPlacement p;
  p.rho = {{0.5, 0.5}, {0.0, 0.25}};
  const WorkloadSpec w{.n_users = 2, .file_bits = 1e6, .qos_threshold_s = 10.0};
  const auto out = SimulateRequests(g, Placement{p}, {1, 2}, w);
  // User 0 completes file 1 from both helpers; user 1 gets a quarter of file
  // 2 and is the only BS user.
  EXPECT_EQ(out.source[0], ServingSource::kHelper);
  EXPECT_DOUBLE_EQ(out.download_time[0], 0.05 + 0.1);
  EXPECT_EQ(out.source[1], ServingSource::kMixed);
  EXPECT_DOUBLE_EQ(out.download_time[1], 0.25 / 5.0 + 0.75);
  EXPECT_EQ(out.bs_users, 1);
  EXPECT_DOUBLE_EQ(out.helper_served_fraction, 0.5);
}

TEST(SimulateRequests, MismatchedRequestsRejected) {
  const ConnectivityGraph g(0, {{}, {}}, {1e6, 1e6});
  EXPECT_THROW(SimulateRequests(g, Empty(0), {1}, WorkloadSpec{}), InvalidParameter);
}

TEST(SimulateSnapshot, FractionsSumToOne) {
  Rng rng(3);
  MacroScenario s;
  s.catalog_size = 200;
  s.capacity_files = 20;
  const auto pop = BuildZipf(s.gamma, s.catalog_size);
  for (int rep = 0; rep < 20; ++rep) {
    const auto layout = ScenarioLayout(s, 9, rep);
    const auto g = BuildConnectivity(layout, s.helper_link, s.macro_link);
    const auto placement = PlaceFiles(PlacementPolicy::kGreedy, g, pop, s);
    const auto out = SimulateSnapshot(g, placement, pop, s.workload, rng);
    EXPECT_EQ(out.helper_served_fraction + out.bs_served_fraction, 1.0);
    int helper = 0;
    for (auto src : out.source) helper += src == ServingSource::kHelper;
    EXPECT_DOUBLE_EQ(out.helper_served_fraction, double(helper) / out.source.size());
  }
}

TEST(Policy, NamesRoundTrip) {
  for (auto p : {PlacementPolicy::kGreedy, PlacementPolicy::kMostPopular, PlacementPolicy::kCoded}) {
    EXPECT_EQ(ParsePolicy(PolicyName(p)), p);
  }
  EXPECT_THROW(ParsePolicy("lru"), InvalidParameter);
}

TEST(ValidateScenario, RejectsBadValues) {
  MacroScenario s;
  EXPECT_NO_THROW(ValidateScenario(s));
  s.workload.qos_threshold_s = 0.0;
  EXPECT_THROW(ValidateScenario(s), InvalidParameter);
  s = MacroScenario{};
  s.n_helpers = -1;
  EXPECT_THROW(ValidateScenario(s), InvalidParameter);
  s = MacroScenario{};
  s.coded_groups = s.catalog_size + 1;
  EXPECT_THROW(ValidateScenario(s), InvalidParameter);
}

MacroScenario SmallScenario() {
  MacroScenario s;
  s.catalog_size = 300;
  s.capacity_files = 30;
  return s;
}

TEST(SweepHelperCount, ZeroHelpersIsPolicyIndependent) {
  const auto s = SmallScenario();
  const auto g = SweepHelperCount({0}, s, PlacementPolicy::kGreedy, 30, 5);
  const auto m = SweepHelperCount({0}, s, PlacementPolicy::kMostPopular, 30, 5);
  const auto c = SweepHelperCount({0}, s, PlacementPolicy::kCoded, 30, 5);
  EXPECT_EQ(g[0].mean_satisfied, m[0].mean_satisfied);
  EXPECT_EQ(g[0].mean_satisfied, c[0].mean_satisfied);
  EXPECT_EQ(g[0].stderr_satisfied, m[0].stderr_satisfied);
}

TEST(SweepHelperCount, SingleHelperGreedyEqualsMostPopular) {
  const auto s = SmallScenario();
  const auto g = SweepHelperCount({1}, s, PlacementPolicy::kGreedy, 40, 6);
  const auto m = SweepHelperCount({1}, s, PlacementPolicy::kMostPopular, 40, 6);
  EXPECT_EQ(g[0].mean_satisfied, m[0].mean_satisfied);
}

TEST(SweepHelperCount, GreedyAtLeastMostPopularAndMoreHelpersHelp) {
  const auto s = SmallScenario();
  const std::vector<int> counts = {0, 4, 8, 16};
  const auto g = SweepHelperCount(counts, s, PlacementPolicy::kGreedy, 60, 7);
  const auto m = SweepHelperCount(counts, s, PlacementPolicy::kMostPopular, 60, 7);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    EXPECT_EQ(g[i].x, counts[i]);
    EXPECT_GE(g[i].mean_satisfied, m[i].mean_satisfied - g[i].stderr_satisfied);
    if (i > 0) {
      EXPECT_GE(g[i].mean_satisfied, g[i - 1].mean_satisfied - g[i].stderr_satisfied);
    }
  }
}

TEST(SweepHelperCount, Deterministic) {
  const auto s = SmallScenario();
  std::ostringstream a;
  std::ostringstream b;
  WriteSweepCsv(SweepHelperCount({0, 3, 6}, s, PlacementPolicy::kGreedy, 10, 11), a);
  WriteSweepCsv(SweepHelperCount({0, 3, 6}, s, PlacementPolicy::kGreedy, 10, 11), b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "x,mean_satisfied,stderr,policy,seed");
}

TEST(SweepCapacity, ZeroIsBaselineAndCurveNonDecreasing) {
  auto s = SmallScenario();
  s.n_helpers = 8;
  const std::vector<int> caps = {0, 5, 15, 30, 60};
  const auto curve = SweepCapacity(caps, s, PlacementPolicy::kGreedy, 40, 12);
  auto base = s;
  base.n_helpers = 0;
  const auto baseline = SweepHelperCount({0}, base, PlacementPolicy::kGreedy, 40, 12);
  EXPECT_EQ(curve[0].mean_satisfied, baseline[0].mean_satisfied);
  for (std::size_t i = 1; i < caps.size(); ++i) {
    EXPECT_GE(curve[i].mean_satisfied, curve[i - 1].mean_satisfied - curve[i].stderr_satisfied);
  }
}

TEST(SweepCapacity, CodedTracksUncoded) {
  auto s = SmallScenario();
  s.n_helpers = 8;
  s.catalog_size = 60;
  s.capacity_files = 6;
  const auto coded = SweepCapacity({6}, s, PlacementPolicy::kCoded, 20, 13);
  const auto greedy = SweepCapacity({6}, s, PlacementPolicy::kGreedy, 20, 13);
  EXPECT_NEAR(coded[0].mean_satisfied, greedy[0].mean_satisfied,
              0.1 * greedy[0].mean_satisfied + 1e-9);
}

}  // namespace
}  // namespace femtocache
