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

#include "femtocache/placement_coded.h"

#include <sstream>

#include <gtest/gtest.h>

#include "femtocache/error.h"
#include "femtocache/placement_uncoded.h"
#include "femtocache/popularity.h"
#include "femtocache/rng.h"
#include "test_util.h"

namespace femtocache {
namespace {

using testing::FourUserGraph;
using testing::RandomGraph;

constexpr double kBits = 1e6;

ConnectivityGraph OneUserOneHelper() {
  return ConnectivityGraph(1, {{{0, 8e6}}}, {2e6});
}

TEST(BuildLp, NoHelpersHasNoVariables) {
  const ConnectivityGraph g(0, {{}, {}}, {1e6, 2e6});
  const auto pop = BuildZipf(0.8, 5);
  const auto lp = BuildLp(g, pop, HelperSpecs::Uniform(0, 0), kBits);
  EXPECT_EQ(lp.problem.num_vars, 0);
  const auto sol = SolveLpTraced(lp);
  EXPECT_EQ(sol.objective, 0.0);
  EXPECT_NEAR(lp.DelayFromObjective(sol.objective), BsOnlyDelay(g, pop, kBits), 1e-12);
  EXPECT_EQ(sol.placement.num_files(), 5);
  EXPECT_EQ(sol.placement.num_helpers(), 0);
}

TEST(BuildLp, OneUserOneHelperDimensions) {
  const auto lp = BuildLp(OneUserOneHelper(), BuildZipf(1.0, 6), HelperSpecs::Uniform(1, 2), kBits);
  EXPECT_EQ(lp.num_rho_vars(), 6);
  EXPECT_EQ(lp.aux.size(), 6u);
  EXPECT_EQ(lp.problem.num_vars, 12);
}

TEST(BuildLp, FourUserDimensions) {
  const int m = 7;
  const auto lp = BuildLp(FourUserGraph(), BuildZipf(1.0, m), HelperSpecs::Uniform(2, 2), kBits);
  EXPECT_EQ(lp.num_rho_vars(), 2 * m);
  EXPECT_EQ(static_cast<int>(lp.aux.size()), 5 * m);
  EXPECT_EQ(lp.dropped_edges, 0);
}

TEST(BuildLp, DropsEdgesSlowerThanBs) {
  const ConnectivityGraph g(2, {{{0, 1e6}, {1, 9e6}}}, {3e6});
  const auto lp = BuildLp(g, BuildZipf(1.0, 3), HelperSpecs::Uniform(2, 1), kBits);
  EXPECT_EQ(lp.dropped_edges, 1);
  EXPECT_EQ(lp.aux.size(), 3u);
  EXPECT_FALSE(lp.warnings.empty());
}

TEST(BuildLp, NoUsersIsDegenerate) {
  const ConnectivityGraph g(1, {}, {});
  EXPECT_THROW(BuildLp(g, BuildZipf(1.0, 3), HelperSpecs::Uniform(1, 1), kBits),
               DegenerateInstance);
}

TEST(SolveLp, SingleUserStoresTopFilesWhole) {
  for (double gamma : {0.0, 0.5, 1.0, 2.0}) {
    for (int cap = 0; cap <= 4; ++cap) {
      const auto lp = BuildLp(OneUserOneHelper(), BuildZipf(gamma, 4),
                              HelperSpecs::Uniform(1, cap), kBits);
      const auto rho = SolveLp(lp).rho;
      double stored = 0.0;
      for (int f = 0; f < 4; ++f) {
        // Integral vertex; with gamma > 0 exactly the top `cap` ranks.
        ASSERT_TRUE(rho[f][0] < 1e-9 || rho[f][0] > 1.0 - 1e-9);
        if (gamma > 0.0) EXPECT_NEAR(rho[f][0], f < cap ? 1.0 : 0.0, 1e-9);
        stored += rho[f][0];
      }
      EXPECT_NEAR(stored, cap, 1e-9);
    }
  }
}

TEST(SolveLp, SingleUserTwoHelpersIntegral) {
  const ConnectivityGraph g(2, {{{0, 8e6}, {1, 4e6}}}, {2e6});
  const auto lp = BuildLp(g, BuildZipf(0.9, 6), HelperSpecs::Uniform(2, 2), kBits);
  const auto rho = SolveLp(lp).rho;
  // Fastest helper takes ranks 1-2, the other ranks 3-4.
  for (int f = 0; f < 6; ++f) {
    for (int h = 0; h < 2; ++h) {
      const bool expect = (h == 0 && f < 2) || (h == 1 && f >= 2 && f < 4);
      EXPECT_NEAR(rho[f][h], expect ? 1.0 : 0.0, 1e-9) << f << "," << h;
    }
  }
}

TEST(SolveLp, DominatesUncodedAndMatchesFastestFirstDelay) {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const int helpers = 1 + static_cast<int>(rng.UniformInt(3));
    const auto g = RandomGraph(rng, 1 + static_cast<int>(rng.UniformInt(6)), helpers, 0.6);
    const auto pop = BuildZipf(rng.Uniform(0.0, 2.0), 2 + static_cast<int>(rng.UniformInt(5)));
    const auto specs = HelperSpecs::Uniform(helpers, static_cast<int>(rng.UniformInt(3)));
    const auto lp = BuildLp(g, pop, specs, kBits);
    const auto sol = SolveLpTraced(lp);
    ValidateCodedPlacement(sol.placement, specs, {});
    const double base = BsOnlyDelay(g, pop, kBits);
    const double greedy = base - EvaluateDelay(GreedyPlace(g, pop, specs, kBits), g, pop, kBits);
    const double brute = base - EvaluateDelay(BruteForcePlace(g, pop, specs, kBits), g, pop, kBits);
    EXPECT_GE(sol.objective, brute - 1e-9) << "trial " << trial;
    EXPECT_GE(brute, greedy - 1e-12);
    EXPECT_NEAR(EvaluateCodedDelay(sol.placement, g, pop, kBits),
                lp.DelayFromObjective(sol.objective), 1e-6)
        << "trial " << trial;
  }
}

TEST(EvaluateCodedDelay, Basics) {
  const auto g = FourUserGraph();
  const auto pop = BuildZipf(1.0, 4);
  CodedPlacement zero;
  zero.rho.assign(4, std::vector<double>(2, 0.0));
  EXPECT_NEAR(EvaluateCodedDelay(zero, g, pop, kBits), BsOnlyDelay(g, pop, kBits), 1e-12);

  const auto one = OneUserOneHelper();
  CodedPlacement full;
  full.rho.assign(4, std::vector<double>(1, 1.0));
  EXPECT_NEAR(EvaluateCodedDelay(full, one, pop, kBits), kBits / 8e6, 1e-12);

  // U3 collects half of file 1 from H1 (10 Mb/s), then a quarter from H2
  // (5 Mb/s) and the rest from the BS.
  CodedPlacement part = zero;
  part.rho[0] = {0.5, 0.25};
  const ConnectivityGraph u3(2, {{{0, 10e6}, {1, 5e6}}}, {1e6});
  const double expect = 0.48 * (0.5 / 10.0 + 0.25 / 5.0 + 0.25 / 1.0) + 0.52 * 1.0;
  EXPECT_NEAR(EvaluateCodedDelay(part, u3, pop, kBits), expect, 1e-12);
}

TEST(EvaluateCodedDelay, AgreesWithUncodedOnWholeFiles) {
  Rng rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = RandomGraph(rng, 10, 3, 0.5);
    const auto pop = BuildZipf(0.8, 12);
    const auto specs = HelperSpecs::Uniform(3, 4);
    const auto p = GreedyPlace(g, pop, specs, kBits);
    EXPECT_NEAR(EvaluateCodedDelay(ToCoded(p, pop.m()), g, pop, kBits),
                EvaluateDelay(p, g, pop, kBits), 1e-9);
  }
}

TEST(ValidateCodedPlacement, RejectsOutOfRange) {
  const auto specs = HelperSpecs::Uniform(1, 1);
  CodedPlacement p;
  p.rho = {{1.5}, {0.0}};
  EXPECT_THROW(ValidateCodedPlacement(p, specs, {}), InvalidParameter);
  p.rho = {{0.7}, {0.7}};
  EXPECT_THROW(ValidateCodedPlacement(p, specs, {}), InvalidParameter);
  p.rho = {{0.5}, {0.5}};
  EXPECT_NO_THROW(ValidateCodedPlacement(p, specs, {}));
  const auto pop = BuildZipf(1.0, 2);
  p.rho = {{-0.1}, {0.0}};
  EXPECT_THROW(EvaluateCodedDelay(p, OneUserOneHelper(), pop, kBits), std::invalid_argument);
}

TEST(GroupFiles, Shapes) {
  const auto pop = BuildZipf(0.8, 10);
  const auto same = GroupFiles(pop, 10);
  for (int i = 1; i <= 10; ++i) EXPECT_DOUBLE_EQ(same.grouped.Pmf(i), pop.Pmf(i));
  const auto one = GroupFiles(pop, 1);
  ASSERT_EQ(one.grouped.m(), 1);
  EXPECT_DOUBLE_EQ(one.grouped.Pmf(1), 1.0);
  const auto three = GroupFiles(pop, 3);
  EXPECT_EQ(three.group_size, (std::vector<int>{4, 3, 3}));
  EXPECT_EQ(three.first_rank, (std::vector<int>{1, 5, 8}));
  EXPECT_EQ(three.group_of_rank[4], 1);
  EXPECT_NEAR(three.grouped.Pmf(1), HeadMass(pop, 4), 1e-15);
  EXPECT_THROW(GroupFiles(pop, 0), InvalidParameter);
  EXPECT_THROW(GroupFiles(pop, 11), InvalidParameter);
}

TEST(GroupFiles, GroupedLpCloseToUngrouped) {
  // One helper reaching three users, 1000 files in 50 buckets.
  const ConnectivityGraph g(1, {{{0, 20e6}}, {{0, 15e6}}, {{0, 30e6}}}, {2e6, 3e6, 1e6});
  const auto pop = BuildZipf(0.6, 1000);
  const auto specs = HelperSpecs::Uniform(1, 100);
  const auto full = BuildLp(g, pop, specs, kBits);
  const auto grouping = GroupFiles(pop, 50);
  const auto grouped_lp = BuildLp(g, grouping.grouped, specs, kBits, grouping.group_size);
  EXPECT_EQ(full.num_rho_vars(), 20 * grouped_lp.num_rho_vars());

  const double base = BsOnlyDelay(g, pop, kBits);
  const double exact = base - EvaluateCodedDelay(SolveLp(full), g, pop, kBits);
  const auto expanded = SolveGroupedPlacement(g, pop, specs, kBits, 50);
  ValidateCodedPlacement(expanded, specs, {});
  const double approx = base - EvaluateCodedDelay(expanded, g, pop, kBits);
  EXPECT_LE(approx, exact + 1e-9);
  EXPECT_GE(approx, 0.9 * exact);
}

TEST(ExpandGroupedPlacement, BucketFractionCopied) {
  const auto grouping = GroupFiles(BuildZipf(1.0, 5), 2);
  CodedPlacement grouped;
  grouped.rho = {{0.5}, {0.25}};
  const auto p = ExpandGroupedPlacement(grouped, grouping);
  ASSERT_EQ(p.num_files(), 5);
  EXPECT_EQ(p.rho[0][0], 0.5);
  EXPECT_EQ(p.rho[2][0], 0.5);
  EXPECT_EQ(p.rho[3][0], 0.25);
}

TEST(WriteCodedPlacementCsv, NonzeroRows) {
  CodedPlacement p;
  p.rho = {{1.0, 0.0}, {0.0, 0.5}};
  std::ostringstream out;
  WriteCodedPlacementCsv(p, out);
  EXPECT_EQ(out.str(), "file_rank,helper_id,rho\n1,0,1\n2,1,0.5\n");
}

TEST(SolveLp, IterationLimitSurfaces) {
  const auto lp = BuildLp(FourUserGraph(), BuildZipf(1.0, 4), HelperSpecs::Uniform(2, 2), kBits);
  EXPECT_THROW(SolveLp(lp, {.iteration_factor = 0}), IterationLimit);
}

}  // namespace
}  // namespace femtocache
