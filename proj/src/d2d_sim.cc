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

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <ostream>

#include <fmt/format.h>

#include "femtocache/error.h"
#include "femtocache/stats.h"

namespace femtocache {

void ValidateScenario(const D2DScenario& s) {
  if (s.n < 0) throw InvalidParameter("n must be >= 0");
  if (s.m < 1 || s.m > kMaxCatalogSize) throw InvalidParameter("m out of range");
  if (s.cache_files < 0 || s.cache_files > s.m) {
    throw InvalidParameter(
        fmt::format("per-device cache M must be in [0, m={}], got {}", s.m,
                    s.cache_files));
  }
  if (!(s.r > 0.0 && s.r <= 1.0)) {
    throw InvalidParameter(fmt::format("r must be in (0, 1], got {}", s.r));
  }
  if (!std::isfinite(s.gamma) || s.gamma < 0.0) {
    throw InvalidParameter("gamma must be finite and >= 0");
  }
  if (s.strategy == CachingStrategy::kRandomZipf &&
      (!std::isfinite(s.gamma1) || s.gamma1 < 0.0)) {
    throw InvalidParameter("gamma1 must be finite and >= 0");
  }
}

int ClustersPerSide(double r, bool exact) {
  if (!(r > 0.0 && r <= 1.0)) {
    throw InvalidParameter(fmt::format("r must be in (0, 1], got {}", r));
  }
  const double inv = 1.0 / r;
  const double nearest = std::round(inv);
  if (std::abs(inv - nearest) <= 1e-9 * inv) return static_cast<int>(nearest);
  if (exact) {
    throw InvalidParameter(fmt::format(
        "1/r must be an integer for exact tiling; r={} (nearest valid r=1/{})",
        r, static_cast<int>(nearest)));
  }
  return std::max(1, static_cast<int>(std::floor(inv)));
}

std::vector<std::vector<int>> CvcDeterministic(int k, int cache_files, int m) {
  std::vector<std::vector<int>> caches(std::max(k, 0));
  for (int j = 0; j < k; ++j) {
    const long lo = static_cast<long>(j) * cache_files + 1;
    const long hi = std::min<long>(static_cast<long>(j + 1) * cache_files, m);
    for (long rank = lo; rank <= hi; ++rank) {
      caches[j].push_back(static_cast<int>(rank));
    }
  }
  return caches;
}

std::vector<int> CacheRandom(int cache_files, const PopularityModel& caching_pdf,
                             Rng& rng) {
  const int m = caching_pdf.m();
  if (cache_files < 0 || cache_files > m) {
    throw InvalidParameter("cache size must be in [0, m]");
  }
  std::vector<int> cache;
  if (cache_files == m) {
    for (int r = 1; r <= m; ++r) cache.push_back(r);
    return cache;
  }
  cache.reserve(cache_files);
  const int rejection_budget = 16 + 4 * cache_files;
  int rejections = 0;
  while (static_cast<int>(cache.size()) < cache_files) {
    if (rejections < rejection_budget) {
      const int r = SampleRequest(caching_pdf, rng);
      auto it = std::lower_bound(cache.begin(), cache.end(), r);
      if (it != cache.end() && *it == r) {
        ++rejections;
      } else {
        cache.insert(it, r);
      }
      continue;
    }
    // Direct draw from the pmf restricted to files not yet chosen.
    long double held = 0.0L;
    for (int r : cache) held += caching_pdf.Pmf(r);
    const long double target = rng.Uniform01() * (1.0L - held);
    long double acc = 0.0L;
    int pick = 0;
    std::size_t next_held = 0;
    for (int r = 1; r <= m; ++r) {
      if (next_held < cache.size() && cache[next_held] == r) {
        ++next_held;
        continue;
      }
      pick = r;
      acc += caching_pdf.Pmf(r);
      if (acc > target) break;
    }
    cache.insert(std::lower_bound(cache.begin(), cache.end(), pick), pick);
  }
  return cache;
}

std::vector<int> CacheRandom(int cache_files, double gamma1, int m, Rng& rng) {
  return CacheRandom(cache_files, BuildZipf(gamma1, m), rng);
}

bool ClusterActive(const std::vector<std::vector<int>>& caches,
                   const std::vector<int>& requests) {
  if (caches.size() != requests.size()) {
    throw InvalidParameter("caches and requests differ in length");
  }
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const auto& own = caches[i];
    if (std::find(own.begin(), own.end(), requests[i]) != own.end()) continue;
    for (std::size_t j = 0; j < caches.size(); ++j) {
      if (j == i) continue;
      if (std::find(caches[j].begin(), caches[j].end(), requests[i]) !=
          caches[j].end()) {
        return true;
      }
    }
  }
  return false;
}

namespace {

// P(active | k users) for k = 0..n under contiguous-block caching.
std::vector<double> ActiveGivenOccupancy(int n, int cache_files,
                                         const PopularityModel& pop) {
  const int m = pop.m();
  std::vector<double> out(n + 1, 0.0);
  if (cache_files == 0) return out;
  const int blocks = (m + cache_files - 1) / cache_files;
  std::vector<double> block_mass(blocks);
  for (int j = 0; j < blocks; ++j) {
    const long lo = static_cast<long>(j) * cache_files;
    const long hi = std::min<long>(lo + cache_files, m);
    block_mass[j] = HeadMass(pop, hi) - HeadMass(pop, lo);
  }
  for (int k = 2; k <= n; ++k) {
    const long top = std::min<long>(static_cast<long>(k) * cache_files, m);
    const double head = HeadMass(pop, top);
    const int filled = std::min(k, blocks);
    double log_inactive = 0.0;
    for (int j = 0; j < filled; ++j) {
      log_inactive += std::log1p(-std::clamp(head - block_mass[j], 0.0, 1.0));
    }
    // Users beyond the last block hold nothing; any request in the CVC is
    // served by someone else.
    if (k > filled) {
      log_inactive += (k - filled) * std::log1p(-std::min(head, 1.0));
    }
    out[k] = -std::expm1(log_inactive);
  }
  return out;
}

double BinomialPmf(int n, int k, double p) {
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  const double log_pmf = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                         std::lgamma(n - k + 1.0) + k * std::log(p) +
                         (n - k) * std::log1p(-p);
  return std::exp(log_pmf);
}

double ExpectedActiveFromTable(const std::vector<double>& active_given_k,
                               int n, std::int64_t clusters) {
  const double p = 1.0 / static_cast<double>(clusters);
  double acc = 0.0;
  for (int k = 2; k <= n; ++k) acc += BinomialPmf(n, k, p) * active_given_k[k];
  return static_cast<double>(clusters) * acc;
}

}  // namespace

ClusterStats ExpectedActiveAnalytic(const D2DScenario& scenario,
                                    const PopularityModel& requests) {
  ValidateScenario(scenario);
  if (scenario.strategy != CachingStrategy::kDeterministic) {
    throw InvalidParameter("analytic active-cluster count needs deterministic caching");
  }
  if (requests.m() != scenario.m) {
    throw InvalidParameter("request model catalog differs from scenario m");
  }
  const int side = ClustersPerSide(scenario.r, /*exact=*/true);
  ClusterStats stats;
  stats.clusters = static_cast<std::int64_t>(side) * side;
  const auto table =
      ActiveGivenOccupancy(scenario.n, scenario.cache_files, requests);
  stats.expected_active = ExpectedActiveFromTable(table, scenario.n, stats.clusters);
  return stats;
}

std::vector<std::uint8_t> SimulateClusterActivity(
    const D2DScenario& scenario, const PopularityModel& requests,
    const PopularityModel* caching_pdf, Rng& rng) {
  const int side = ClustersPerSide(scenario.r, /*exact=*/false);
  const int clusters = side * side;
  const int n = scenario.n;
  const int M = scenario.cache_files;
  const int m = scenario.m;

  std::vector<int> cell(n);
  for (int i = 0; i < n; ++i) {
    const double x = rng.Uniform01();
    const double y = rng.Uniform01();
    const int cx = std::min(side - 1, static_cast<int>(x * side));
    const int cy = std::min(side - 1, static_cast<int>(y * side));
    cell[i] = cy * side + cx;
  }
  std::vector<int> req(n);
  for (int& r : req) r = SampleRequest(requests, rng);

  std::vector<std::uint8_t> active(clusters, 0);
  if (M == 0) return active;

  if (scenario.strategy == CachingStrategy::kDeterministic) {
    std::vector<int> occupancy(clusters, 0);
    for (int c : cell) ++occupancy[c];
    std::vector<int> position(clusters, 0);  // next j within the cluster
    for (int i = 0; i < n; ++i) {
      const int c = cell[i];
      const long j = position[c]++;
      const long top = std::min<long>(static_cast<long>(occupancy[c]) * M, m);
      const long own_lo = j * M;  // exclusive
      const long own_hi = std::min<long>(own_lo + M, m);
      const bool self = req[i] > own_lo && req[i] <= own_hi;
      if (req[i] <= top && !self) active[c] = 1;
    }
    return active;
  }

  if (caching_pdf == nullptr || caching_pdf->m() != m) {
    throw InvalidParameter("random caching needs a caching pdf over m files");
  }
  std::vector<std::vector<int>> caches(n);
  for (auto& c : caches) c = CacheRandom(M, *caching_pdf, rng);
  std::vector<std::vector<int>> members(clusters);
  for (int i = 0; i < n; ++i) members[cell[i]].push_back(i);
  std::vector<int> holders(m + 1, 0);
  for (int c = 0; c < clusters; ++c) {
    for (int i : members[c]) {
      for (int f : caches[i]) ++holders[f];
    }
    for (int i : members[c]) {
      const bool self =
          std::binary_search(caches[i].begin(), caches[i].end(), req[i]);
      if (!self && holders[req[i]] > 0) {
        active[c] = 1;
        break;
      }
    }
    for (int i : members[c]) {
      for (int f : caches[i]) --holders[f];
    }
  }
  return active;
}

ClusterStats SimulateActiveClusters(const D2DScenario& scenario,
                                    const PopularityModel& requests,
                                    std::uint64_t seed, int reps) {
  ValidateScenario(scenario);
  if (reps < 1) throw InvalidParameter("reps must be >= 1");
  ClusterStats stats;
  const int side = ClustersPerSide(scenario.r, /*exact=*/false);
  stats.clusters = static_cast<std::int64_t>(side) * side;
  if (std::abs(1.0 / scenario.r - side) > 1e-9 / scenario.r) {
    stats.warning = fmt::format(
        "1/r={} is not an integer; using a {}x{} cluster grid", 1.0 / scenario.r,
        side, side);
  }
  std::optional<PopularityModel> caching;
  if (scenario.strategy == CachingStrategy::kRandomZipf) {
    caching = BuildZipf(scenario.gamma1, scenario.m);
  }
  std::vector<double> counts(reps);
  for (int k = 0; k < reps; ++k) {
    Rng rng(DeriveSeed(seed, {static_cast<std::uint64_t>(k)}));
    const auto active = SimulateClusterActivity(
        scenario, requests, caching ? &*caching : nullptr, rng);
    counts[k] = static_cast<double>(
        std::count(active.begin(), active.end(), std::uint8_t{1}));
  }
  const MeanStderr s = Summarize(counts);
  stats.expected_active = s.mean;
  stats.std_error = s.std_error;
  return stats;
}

namespace {

bool Tiles(double r) {
  const double inv = 1.0 / r;
  return std::abs(inv - std::round(inv)) <= 1e-9 * inv;
}

std::uint64_t PointSeed(std::uint64_t seed, const D2DScenario& s) {
  return DeriveSeed(seed, {std::bit_cast<std::uint64_t>(s.r),
                           std::bit_cast<std::uint64_t>(s.gamma),
                           std::bit_cast<std::uint64_t>(s.gamma1),
                           static_cast<std::uint64_t>(s.n),
                           static_cast<std::uint64_t>(s.m),
                           static_cast<std::uint64_t>(s.cache_files),
                           static_cast<std::uint64_t>(s.strategy)});
}

D2DRow MakeRow(const D2DScenario& s, const ClusterStats& stats,
               const char* mode) {
  D2DRow row;
  row.r = s.r;
  row.gamma = s.gamma;
  row.random_caching = s.strategy == CachingStrategy::kRandomZipf;
  row.gamma1 = row.random_caching ? s.gamma1 : 0.0;
  row.mean_active = stats.expected_active;
  row.std_error = stats.std_error;
  row.clusters = stats.clusters;
  row.mode = mode;
  return row;
}

}  // namespace

std::vector<D2DRow> EvaluateScenario(const D2DScenario& scenario, EvalMode mode,
                                     std::uint64_t seed, int reps) {
  ValidateScenario(scenario);
  const bool analytic_ok =
      scenario.strategy == CachingStrategy::kDeterministic && Tiles(scenario.r);
  const bool want_analytic =
      mode == EvalMode::kAnalytic || mode == EvalMode::kBoth ||
      (mode == EvalMode::kAuto && analytic_ok);
  const bool want_mc = mode == EvalMode::kMonteCarlo || mode == EvalMode::kBoth ||
                       (mode == EvalMode::kAuto && !analytic_ok);
  const PopularityModel pop = BuildZipf(scenario.gamma, scenario.m);
  std::vector<D2DRow> rows;
  if (want_analytic) {
    rows.push_back(MakeRow(scenario, ExpectedActiveAnalytic(scenario, pop),
                           "analytic"));
  }
  if (want_mc) {
    rows.push_back(MakeRow(
        scenario,
        SimulateActiveClusters(scenario, pop, PointSeed(seed, scenario), reps),
        "mc"));
  }
  return rows;
}

std::vector<D2DRow> SweepR(const D2DScenario& base,
                           const std::vector<double>& r_values, EvalMode mode,
                           std::uint64_t seed, int reps) {
  std::vector<D2DRow> rows;
  for (double r : r_values) {
    D2DScenario s = base;
    s.r = r;
    for (D2DRow& row : EvaluateScenario(s, mode, seed, reps)) {
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<D2DRow> SweepGamma1(const D2DScenario& base,
                                const std::vector<double>& gamma1_values,
                                const std::vector<double>& r_values,
                                std::uint64_t seed, int reps) {
  std::vector<D2DRow> rows;
  for (double r : r_values) {
    for (double g1 : gamma1_values) {
      D2DScenario s = base;
      s.strategy = CachingStrategy::kRandomZipf;
      s.r = r;
      s.gamma1 = g1;
      for (D2DRow& row : EvaluateScenario(s, EvalMode::kMonteCarlo, seed, reps)) {
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

void WriteD2DCsv(const std::vector<D2DRow>& rows, std::ostream& out) {
  out << "r,gamma,gamma1,mean_active,stderr,K,mode\n";
  for (const D2DRow& row : rows) {
    out << fmt::format("{:.12g},{:.12g},{},{:.12g},{:.12g},{},{}\n", row.r,
                       row.gamma,
                       row.random_caching ? fmt::format("{:.12g}", row.gamma1)
                                          : std::string(),
                       row.mean_active, row.std_error, row.clusters, row.mode);
  }
}

double OptimalCollaborationDistance(const D2DScenario& scenario,
                                    const PopularityModel& requests,
                                    int max_per_side) {
  if (max_per_side < 1) throw InvalidParameter("max_per_side must be >= 1");
  const auto table =
      ActiveGivenOccupancy(scenario.n, scenario.cache_files, requests);
  int best_side = 1;
  double best = -1.0;
  for (int side = 1; side <= max_per_side; ++side) {
    const double e = ExpectedActiveFromTable(
        table, scenario.n, static_cast<std::int64_t>(side) * side);
    if (e > best) {
      best = e;
      best_side = side;
    }
  }
  return 1.0 / best_side;
}

std::vector<ScalingRow> ScalingCheck(const ScalingConfig& config,
                                     std::uint64_t seed) {
  if (config.n_values.empty()) throw InvalidParameter("no n values given");
  if (config.reps < 1) throw InvalidParameter("reps must be >= 1");
  std::vector<ScalingRow> rows;
  int first_side = 0;
  for (int n : config.n_values) {
    if (n < 1) throw InvalidParameter("n values must be >= 1");
    D2DScenario s;
    s.n = n;
    s.m = static_cast<int>(CatalogSize(n, config.catalog_scale));
    s.cache_files = std::min(config.cache_files, s.m);
    s.gamma = config.gamma;
    s.strategy = CachingStrategy::kDeterministic;
    const PopularityModel pop = BuildZipf(s.gamma, s.m);
    int side = 0;
    if (config.selection == RSelection::kOptimize || rows.empty()) {
      const int max_side = static_cast<int>(std::ceil(2.0 * std::sqrt(n)));
      s.r = OptimalCollaborationDistance(s, pop, max_side);
      side = static_cast<int>(std::lround(1.0 / s.r));
      if (rows.empty()) first_side = side;
    } else {
      const double scale = std::sqrt(static_cast<double>(n) / config.n_values[0]);
      side = std::max(1, static_cast<int>(std::lround(first_side * scale)));
      s.r = 1.0 / side;
    }
    ScalingRow row;
    row.n = n;
    row.m = s.m;
    row.r = s.r;
    const ClusterStats analytic = ExpectedActiveAnalytic(s, pop);
    const ClusterStats mc = SimulateActiveClusters(
        s, pop, DeriveSeed(seed, {static_cast<std::uint64_t>(n)}), config.reps);
    row.clusters = analytic.clusters;
    row.analytic_active = analytic.expected_active;
    row.mean_active = mc.expected_active;
    row.std_error = mc.std_error;
    row.ratio = mc.expected_active / n;
    row.ratio_std_error = mc.std_error / n;
    rows.push_back(row);
  }
  return rows;
}

double RatioSpread(const std::vector<ScalingRow>& rows) {
  if (rows.empty()) return 0.0;
  double lo = rows[0].ratio;
  double hi = rows[0].ratio;
  double sum = 0.0;
  for (const ScalingRow& r : rows) {
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
    sum += r.ratio;
  }
  const double mean = sum / static_cast<double>(rows.size());
  return mean > 0.0 ? (hi - lo) / mean : 0.0;
}

bool StrictlyDecreasing(const std::vector<ScalingRow>& rows, double sigmas) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double se = std::hypot(rows[i].ratio_std_error,
                                 rows[i - 1].ratio_std_error);
    if (!(rows[i - 1].ratio - rows[i].ratio > sigmas * se)) return false;
  }
  return true;
}

void WriteScalingCsv(const std::vector<ScalingRow>& rows, double gamma,
                     std::ostream& out) {
  out << "gamma,n,m,r,K,analytic_active,mean_active,stderr,ratio,ratio_stderr\n";
  for (const ScalingRow& r : rows) {
    out << fmt::format("{:.12g},{},{},{:.12g},{},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}\n",
                       gamma, r.n, r.m, r.r, r.clusters, r.analytic_active,
                       r.mean_active, r.std_error, r.ratio, r.ratio_std_error);
  }
}

double GeometricGraph::MeanDegree() const {
  if (nodes.empty()) return 0.0;
  std::size_t total = 0;
  for (const auto& a : adjacency) total += a.size();
  return static_cast<double>(total) / static_cast<double>(nodes.size());
}

int GeometricGraph::MaxDegree() const {
  std::size_t best = 0;
  for (const auto& a : adjacency) best = std::max(best, a.size());
  return static_cast<int>(best);
}

GeometricGraph RggFromPoints(std::vector<Point> nodes, double r) {
  if (!(r > 0.0)) throw InvalidParameter("RGG radius must be > 0");
  GeometricGraph g;
  g.r = r;
  g.nodes = std::move(nodes);
  const int n = g.num_nodes();
  g.adjacency.assign(n, {});
  // Buckets at least r wide, so neighbors lie in the 3x3 block around a node.
  const int cap = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n))) + 1);
  const int side = std::clamp(static_cast<int>(std::floor(1.0 / r)), 1, cap);
  auto bucket_of = [&](double v) {
    return std::clamp(static_cast<int>(v * side), 0, side - 1);
  };
  std::vector<std::vector<int>> buckets(static_cast<std::size_t>(side) * side);
  for (int i = 0; i < n; ++i) {
    buckets[bucket_of(g.nodes[i].y) * side + bucket_of(g.nodes[i].x)].push_back(i);
  }
  const double r2 = r * r;
  for (int i = 0; i < n; ++i) {
    const int bx = bucket_of(g.nodes[i].x);
    const int by = bucket_of(g.nodes[i].y);
    for (int yy = std::max(0, by - 1); yy <= std::min(side - 1, by + 1); ++yy) {
      for (int xx = std::max(0, bx - 1); xx <= std::min(side - 1, bx + 1); ++xx) {
        for (int j : buckets[yy * side + xx]) {
          if (j == i) continue;
          const double dx = g.nodes[i].x - g.nodes[j].x;
          const double dy = g.nodes[i].y - g.nodes[j].y;
          if (dx * dx + dy * dy <= r2) g.adjacency[i].push_back(j);
        }
      }
    }
    std::sort(g.adjacency[i].begin(), g.adjacency[i].end());
  }
  return g;
}

GeometricGraph RggBuild(int n, double r, Rng& rng) {
  if (n < 0) throw InvalidParameter("RGG node count must be >= 0");
  std::vector<Point> nodes(n);
  for (Point& p : nodes) {
    p.x = rng.Uniform01();
    p.y = rng.Uniform01();
  }
  return RggFromPoints(std::move(nodes), r);
}

namespace {

bool Holds(const std::vector<int>& cache, int file) {
  return std::find(cache.begin(), cache.end(), file) != cache.end();
}

void CheckNodeData(const GeometricGraph& graph,
                   const std::vector<std::vector<int>>& caches,
                   const std::vector<int>& requests) {
  if (static_cast<int>(caches.size()) != graph.num_nodes() ||
      static_cast<int>(requests.size()) != graph.num_nodes()) {
    throw InvalidParameter("one cache and one request per node are required");
  }
}

}  // namespace

int RggServedUsers(const GeometricGraph& graph,
                   const std::vector<std::vector<int>>& caches,
                   const std::vector<int>& requests) {
  CheckNodeData(graph, caches, requests);
  int served = 0;
  for (int i = 0; i < graph.num_nodes(); ++i) {
    if (Holds(caches[i], requests[i])) continue;
    for (int j : graph.adjacency[i]) {
      if (Holds(caches[j], requests[i])) {
        ++served;
        break;
      }
    }
  }
  return served;
}

int RggScheduledLinks(const GeometricGraph& graph,
                      const std::vector<std::vector<int>>& caches,
                      const std::vector<int>& requests) {
  CheckNodeData(graph, caches, requests);
  std::vector<int> transmitters;
  const double r2 = graph.r * graph.r;
  auto clear_of_others = [&](int v) {
    for (int t : transmitters) {
      if (t == v) return false;
      const double dx = graph.nodes[t].x - graph.nodes[v].x;
      const double dy = graph.nodes[t].y - graph.nodes[v].y;
      if (dx * dx + dy * dy <= r2) return false;
    }
    return true;
  };
  for (int i = 0; i < graph.num_nodes(); ++i) {
    if (Holds(caches[i], requests[i])) continue;
    for (int j : graph.adjacency[i]) {
      if (Holds(caches[j], requests[i]) && clear_of_others(j)) {
        transmitters.push_back(j);
        break;
      }
    }
  }
  return static_cast<int>(transmitters.size());
}

}  // namespace femtocache
