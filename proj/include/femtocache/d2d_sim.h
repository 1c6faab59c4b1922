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

#ifndef FEMTOCACHE_D2D_SIM_H_
#define FEMTOCACHE_D2D_SIM_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "femtocache/popularity.h"
#include "femtocache/rng.h"
#include "femtocache/topology.h"

namespace femtocache {

// Cluster model: n users uniform in the unit square, tiled by square
// clusters of side r (collaboration distance). At most one D2D link per
// cluster, no interference across clusters.

enum class CachingStrategy {
  // Base-station controlled: the k users of a cluster jointly hold the kM
  // most popular files without repetition, user j holding ranks
  // (j-1)M+1 .. jM (clamped to m).
  kDeterministic,
  // Each user independently caches M distinct files drawn from Zipf(gamma1).
  kRandomZipf,
};

struct D2DScenario {
  int n = 500;
  int m = 1000;
  int cache_files = 1;  // M
  double r = 0.1;
  double gamma = 0.6;
  CachingStrategy strategy = CachingStrategy::kDeterministic;
  double gamma1 = 0.6;
};

void ValidateScenario(const D2DScenario& scenario);

// Clusters per side. Exact mode requires 1/r to be an integer (within 1e-9)
// and throws InvalidParameter otherwise; relaxed mode floors.
int ClustersPerSide(double r, bool exact);

struct ClusterStats {
  double expected_active = 0.0;
  double std_error = 0.0;  // 0 for analytic values
  std::int64_t clusters = 0;  // K
  std::string warning;
};

// Caches of the k users of one cluster under deterministic caching.
std::vector<std::vector<int>> CvcDeterministic(int k, int cache_files, int m);

// M distinct ranks drawn from `caching_pdf` by repeated sampling with
// duplicate rejection. Once rejections pile up the draw switches to sampling
// the renormalized remainder directly, which is the same distribution.
std::vector<int> CacheRandom(int cache_files, const PopularityModel& caching_pdf,
                             Rng& rng);
std::vector<int> CacheRandom(int cache_files, double gamma1, int m, Rng& rng);

// True iff some user's request is held by another user of the cluster. A
// request found in the requester's own cache (self-reference) is served
// locally and never activates the cluster.
bool ClusterActive(const std::vector<std::vector<int>>& caches,
                   const std::vector<int>& requests);

// K * sum_k Binomial(n, r^2)(k) * P(active | k) with, for contiguous blocks,
//   P(active | k) = 1 - prod_j (1 - q_j),
//   q_j = P(request among the top min(kM, m)) - P(request in user j's block).
// Deterministic strategy only.
ClusterStats ExpectedActiveAnalytic(const D2DScenario& scenario,
                                    const PopularityModel& requests);

// Activity indicator per cluster (row-major) for one snapshot.
std::vector<std::uint8_t> SimulateClusterActivity(
    const D2DScenario& scenario, const PopularityModel& requests,
    const PopularityModel* caching_pdf, Rng& rng);

// Mean and standard error of the active-cluster count over `reps`
// snapshots; snapshot k draws from DeriveSeed(seed, {k}).
ClusterStats SimulateActiveClusters(const D2DScenario& scenario,
                                    const PopularityModel& requests,
                                    std::uint64_t seed, int reps);

enum class EvalMode { kAuto, kAnalytic, kMonteCarlo, kBoth };

struct D2DRow {
  double r = 0.0;
  double gamma = 0.0;
  double gamma1 = 0.0;  // only meaningful for random caching
  bool random_caching = false;
  double mean_active = 0.0;
  double std_error = 0.0;
  std::int64_t clusters = 0;
  std::string mode;  // "analytic" | "mc"
};

// One point; kAuto picks the analytic value when it exists (deterministic
// caching with tiling r), Monte Carlo otherwise. kBoth emits both.
std::vector<D2DRow> EvaluateScenario(const D2DScenario& scenario, EvalMode mode,
                                     std::uint64_t seed, int reps);

std::vector<D2DRow> SweepR(const D2DScenario& base,
                           const std::vector<double>& r_values, EvalMode mode,
                           std::uint64_t seed, int reps);

// Random-caching sweep over gamma1, one curve per r (rows grouped by r).
std::vector<D2DRow> SweepGamma1(const D2DScenario& base,
                                const std::vector<double>& gamma1_values,
                                const std::vector<double>& r_values,
                                std::uint64_t seed, int reps);

// `r,gamma,gamma1,mean_active,stderr,K,mode`
void WriteD2DCsv(const std::vector<D2DRow>& rows, std::ostream& out);

// r = 1/j maximizing the analytic expected active clusters, j in
// [1, max_per_side].
double OptimalCollaborationDistance(const D2DScenario& scenario,
                                    const PopularityModel& requests,
                                    int max_per_side);

enum class RSelection {
  kOptimize,      // re-optimize r for every n
  kProportional,  // keep n * r^2 fixed relative to the first n
};

struct ScalingRow {
  int n = 0;
  int m = 0;
  double r = 0.0;
  std::int64_t clusters = 0;
  double analytic_active = 0.0;
  double mean_active = 0.0;  // Monte Carlo
  double std_error = 0.0;
  double ratio = 0.0;  // mean_active / n
  double ratio_std_error = 0.0;
};

struct ScalingConfig {
  double gamma = 1.5;
  std::vector<int> n_values = {250, 500, 1000, 2000};
  double catalog_scale = 100.0;  // m = CatalogSize(n, catalog_scale)
  int cache_files = 1;
  RSelection selection = RSelection::kOptimize;
  int reps = 2000;
};

std::vector<ScalingRow> ScalingCheck(const ScalingConfig& config,
                                     std::uint64_t seed);

// (max - min) / mean of the per-n ratios.
double RatioSpread(const std::vector<ScalingRow>& rows);
// Every consecutive ratio drops by more than `sigmas` combined standard
// errors.
bool StrictlyDecreasing(const std::vector<ScalingRow>& rows, double sigmas);

void WriteScalingCsv(const std::vector<ScalingRow>& rows, double gamma,
                     std::ostream& out);

// Random geometric graph in the unit square: edge iff distance <= r.
struct GeometricGraph {
  double r = 0.0;
  std::vector<Point> nodes;
  std::vector<std::vector<int>> adjacency;  // ascending neighbor ids

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  double MeanDegree() const;
  int MaxDegree() const;
};

GeometricGraph RggFromPoints(std::vector<Point> nodes, double r);
GeometricGraph RggBuild(int n, double r, Rng& rng);

// Nodes whose request sits in a neighbor's cache and not in their own.
int RggServedUsers(const GeometricGraph& graph,
                   const std::vector<std::vector<int>>& caches,
                   const std::vector<int>& requests);

// Greedy interference-aware schedule: requesters in index order take the
// lowest-index neighbor holding their file whose distance to every already
// scheduled transmitter exceeds r. Returns the number of scheduled links.
int RggScheduledLinks(const GeometricGraph& graph,
                      const std::vector<std::vector<int>>& caches,
                      const std::vector<int>& requests);

}  // namespace femtocache

#endif  // FEMTOCACHE_D2D_SIM_H_
