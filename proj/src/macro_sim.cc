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

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "femtocache/error.h"
#include "femtocache/stats.h"

namespace femtocache {
namespace {

// Coded remainders below this are treated as fully collected.
constexpr double kCompleteSlack = 1e-9;

struct HelperPart {
  double seconds = 0.0;
  double remaining = 1.0;
};

HelperPart FetchFromHelpers(const ConnectivityGraph& graph,
                            const UncodedPlacement& placement, int user,
                            int rank, double file_bits) {
  double best = 0.0;
  for (const Link& l : graph.links(user)) {
    if (placement.Contains(l.helper, rank)) best = std::max(best, l.rate_bps);
  }
  if (best > 0.0) return {file_bits / best, 0.0};
  return {};
}

HelperPart FetchFromHelpers(const ConnectivityGraph& graph,
                            const CodedPlacement& placement, int user,
                            int rank, double file_bits) {
  std::vector<Link> order(graph.links(user));
  std::stable_sort(order.begin(), order.end(), [](const Link& a, const Link& b) {
    return a.rate_bps > b.rate_bps;
  });
  HelperPart part;
  for (const Link& l : order) {
    if (part.remaining <= kCompleteSlack) break;
    const double take = std::min(placement.rho[rank - 1][l.helper], part.remaining);
    part.seconds += take * file_bits / l.rate_bps;
    part.remaining -= take;
  }
  if (part.remaining <= kCompleteSlack) part.remaining = 0.0;
  return part;
}

}  // namespace

SimOutcome SimulateRequests(const ConnectivityGraph& graph,
                            const Placement& placement,
                            const std::vector<int>& requests,
                            const WorkloadSpec& workload) {
  const int n = graph.num_users();
  if (static_cast<int>(requests.size()) != n) {
    throw InvalidParameter("one request per user is required");
  }
  std::vector<HelperPart> parts(n);
  for (int u = 0; u < n; ++u) {
    parts[u] = std::visit(
        [&](const auto& p) {
          return FetchFromHelpers(graph, p, u, requests[u], workload.file_bits);
        },
        placement);
  }
  SimOutcome out;
  out.download_time.resize(n);
  out.source.resize(n);
  for (const HelperPart& p : parts) out.bs_users += p.remaining > 0.0 ? 1 : 0;
  for (int u = 0; u < n; ++u) {
    const HelperPart& p = parts[u];
    double t = p.seconds;
    if (p.remaining > 0.0) {
      t += p.remaining * workload.file_bits * out.bs_users / graph.bs_rate(u);
      out.source[u] = p.remaining < 1.0 ? ServingSource::kMixed : ServingSource::kBs;
    } else {
      out.source[u] = ServingSource::kHelper;
    }
    out.download_time[u] = t;
  }
  out.satisfied_count = CountSatisfied(out, workload.qos_threshold_s);
  if (n > 0) out.helper_served_fraction = static_cast<double>(n - out.bs_users) / n;
  out.bs_served_fraction = 1.0 - out.helper_served_fraction;
  return out;
}

SimOutcome SimulateSnapshot(const ConnectivityGraph& graph,
                            const Placement& placement,
                            const PopularityModel& pop,
                            const WorkloadSpec& workload, Rng& rng) {
  std::vector<int> requests(graph.num_users());
  for (int& r : requests) r = SampleRequest(pop, rng);
  return SimulateRequests(graph, placement, requests, workload);
}

int CountSatisfied(const SimOutcome& outcome, double threshold_s) {
  return static_cast<int>(std::count_if(
      outcome.download_time.begin(), outcome.download_time.end(),
      [&](double t) { return t <= threshold_s; }));
}

std::string PolicyName(PlacementPolicy policy) {
  switch (policy) {
    case PlacementPolicy::kGreedy:
      return "greedy";
    case PlacementPolicy::kMostPopular:
      return "most-popular";
    case PlacementPolicy::kCoded:
      return "coded";
  }
  return "unknown";
}

PlacementPolicy ParsePolicy(const std::string& name) {
  if (name == "greedy") return PlacementPolicy::kGreedy;
  if (name == "most-popular" || name == "most_popular") {
    return PlacementPolicy::kMostPopular;
  }
  if (name == "coded") return PlacementPolicy::kCoded;
  throw InvalidParameter("unknown placement policy `" + name +
                         "` (greedy | most-popular | coded)");
}

void ValidateScenario(const MacroScenario& s) {
  if (s.workload.n_users < 0) throw InvalidParameter("n_users must be >= 0");
  if (!(s.workload.file_bits > 0.0)) throw InvalidParameter("file_bits must be > 0");
  if (!(s.workload.qos_threshold_s > 0.0)) {
    throw InvalidParameter("qos threshold must be > 0");
  }
  if (!(s.cell_radius_m > 0.0)) throw InvalidParameter("cell radius must be > 0");
  if (s.n_helpers < 0) throw InvalidParameter("helper count must be >= 0");
  if (s.capacity_files < 0) throw InvalidParameter("capacity must be >= 0");
  if (s.catalog_size < 1 || s.catalog_size > kMaxCatalogSize) {
    throw InvalidParameter("catalog size out of range");
  }
  if (!std::isfinite(s.gamma) || s.gamma < 0.0) {
    throw InvalidParameter("gamma must be finite and >= 0");
  }
  if (s.coded_groups < 0 || s.coded_groups > s.catalog_size) {
    throw InvalidParameter("coded_groups must be in [0, catalog size]");
  }
  for (const LinkRateModel* l : {&s.helper_link, &s.macro_link}) {
    if (!(l->bandwidth_hz > 0.0 && l->reference_snr > 0.0 && l->d0_m > 0.0 &&
          l->pathloss_exponent > 0.0 && l->max_rate_bps > 0.0 &&
          l->helper_radius_m > 0.0)) {
      throw InvalidParameter("link-rate parameters must be positive");
    }
  }
}

Placement PlaceFiles(PlacementPolicy policy, const ConnectivityGraph& graph,
                     const PopularityModel& pop, const MacroScenario& scenario) {
  const HelperSpecs specs =
      HelperSpecs::Uniform(graph.num_helpers(), scenario.capacity_files);
  switch (policy) {
    case PlacementPolicy::kGreedy:
      return GreedyPlace(graph, pop, specs, scenario.workload.file_bits);
    case PlacementPolicy::kMostPopular:
      return MostPopularPlace(specs, pop);
    case PlacementPolicy::kCoded:
      if (graph.num_users() == 0) {
        return CodedPlacement{std::vector<std::vector<double>>(
            pop.m(), std::vector<double>(graph.num_helpers(), 0.0))};
      }
      if (scenario.coded_groups > 0 && scenario.coded_groups < pop.m()) {
        return SolveGroupedPlacement(graph, pop, specs,
                                     scenario.workload.file_bits,
                                     scenario.coded_groups);
      }
      return SolveLp(BuildLp(graph, pop, specs, scenario.workload.file_bits));
  }
  throw InvalidParameter("unknown placement policy");
}

CellLayout ScenarioLayout(const MacroScenario& scenario, std::uint64_t seed,
                          int rep) {
  CellLayout layout;
  layout.cell_radius = scenario.cell_radius_m;
  Rng users(DeriveSeed(seed, {static_cast<std::uint64_t>(StreamTag::kUsers),
                              static_cast<std::uint64_t>(rep)}));
  Rng helpers(DeriveSeed(seed, {static_cast<std::uint64_t>(StreamTag::kHelpers),
                                static_cast<std::uint64_t>(scenario.n_helpers),
                                static_cast<std::uint64_t>(rep)}));
  layout.user_positions = PlaceUniform(scenario.workload.n_users, layout, users);
  layout.helper_positions =
      PlaceHelpers(scenario.n_helpers, scenario.helper_mode, layout, helpers);
  return layout;
}

int RunReplication(const MacroScenario& scenario, PlacementPolicy policy,
                   const PopularityModel& pop, std::uint64_t seed, int rep) {
  const CellLayout layout = ScenarioLayout(scenario, seed, rep);
  const ConnectivityGraph graph =
      BuildConnectivity(layout, scenario.helper_link, scenario.macro_link);
  const Placement placement = PlaceFiles(policy, graph, pop, scenario);
  Rng requests(DeriveSeed(seed, {static_cast<std::uint64_t>(StreamTag::kRequests),
                                 static_cast<std::uint64_t>(rep)}));
  return SimulateSnapshot(graph, placement, pop, scenario.workload, requests)
      .satisfied_count;
}

namespace {

SweepPoint RunPoint(double x, const MacroScenario& scenario,
                    PlacementPolicy policy, const PopularityModel& pop,
                    int reps, std::uint64_t seed) {
  std::vector<double> samples(reps);
  for (int r = 0; r < reps; ++r) {
    samples[r] = RunReplication(scenario, policy, pop, seed, r);
  }
  const MeanStderr s = Summarize(samples);
  return {x, s.mean, s.std_error, policy, seed};
}

}  // namespace

std::vector<SweepPoint> SweepHelperCount(const std::vector<int>& counts,
                                         const MacroScenario& scenario,
                                         PlacementPolicy policy, int reps,
                                         std::uint64_t seed) {
  ValidateScenario(scenario);
  if (reps < 1) throw InvalidParameter("reps must be >= 1");
  const PopularityModel pop = BuildZipf(scenario.gamma, scenario.catalog_size);
  std::vector<SweepPoint> out;
  for (int c : counts) {
    if (c < 0) throw InvalidParameter("helper counts must be >= 0");
    MacroScenario s = scenario;
    s.n_helpers = c;
    out.push_back(RunPoint(c, s, policy, pop, reps, seed));
  }
  return out;
}

std::vector<SweepPoint> SweepCapacity(const std::vector<int>& capacities,
                                      const MacroScenario& scenario,
                                      PlacementPolicy policy, int reps,
                                      std::uint64_t seed) {
  ValidateScenario(scenario);
  if (reps < 1) throw InvalidParameter("reps must be >= 1");
  const PopularityModel pop = BuildZipf(scenario.gamma, scenario.catalog_size);
  std::vector<SweepPoint> out;
  for (int c : capacities) {
    if (c < 0) throw InvalidParameter("capacities must be >= 0");
    MacroScenario s = scenario;
    s.capacity_files = c;
    out.push_back(RunPoint(c, s, policy, pop, reps, seed));
  }
  return out;
}

void WriteSweepCsv(const std::vector<SweepPoint>& points, std::ostream& out,
                   bool header) {
  if (header) out << "x,mean_satisfied,stderr,policy,seed\n";
  for (const SweepPoint& p : points) {
    out << fmt::format("{:.12g},{:.12g},{:.12g},{},{}\n", p.x, p.mean_satisfied,
                       p.stderr_satisfied, PolicyName(p.policy), p.seed);
  }
}

}  // namespace femtocache
