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

#include "femtocache/placement_uncoded.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <queue>
#include <string>
#include <tuple>

#include <fmt/format.h>

#include "femtocache/error.h"
#include "json.hpp"

namespace femtocache {

HelperSpecs HelperSpecs::Uniform(int n_helpers, int files_per_helper) {
  if (n_helpers < 0 || files_per_helper < 0) {
    throw InvalidParameter("helper count and capacity must be >= 0");
  }
  return HelperSpecs{std::vector<int>(n_helpers, files_per_helper)};
}

HelperSpecs HelperSpecs::FromBytes(int n_helpers, double capacity_bytes,
                                   double file_bytes) {
  if (!(file_bytes > 0.0) || !(capacity_bytes >= 0.0)) {
    throw InvalidParameter("file size must be > 0 and capacity >= 0");
  }
  return Uniform(n_helpers,
                 static_cast<int>(std::floor(capacity_bytes / file_bytes)));
}

bool UncodedPlacement::Contains(int helper, int rank) const {
  const auto& c = cache[helper];
  return std::binary_search(c.begin(), c.end(), rank);
}

void ValidatePlacement(const UncodedPlacement& placement, int n_helpers,
                       int m) {
  if (placement.num_helpers() != n_helpers) {
    throw InvalidParameter(fmt::format("placement lists {} helpers, expected {}",
                                       placement.num_helpers(), n_helpers));
  }
  for (int h = 0; h < n_helpers; ++h) {
    const auto& c = placement.cache[h];
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] < 1 || c[i] > m || (i > 0 && c[i] <= c[i - 1])) {
        throw InvalidParameter(fmt::format(
            "helper {} cache must hold sorted distinct ranks in [1, {}]", h, m));
      }
    }
  }
}

void ValidatePlacement(const UncodedPlacement& placement,
                       const HelperSpecs& specs, int m) {
  ValidatePlacement(placement, specs.num_helpers(), m);
  for (int h = 0; h < specs.num_helpers(); ++h) {
    if (static_cast<int>(placement.cache[h].size()) > specs.capacity[h]) {
      throw InvalidParameter(fmt::format("helper {} stores {} files, capacity {}",
                                         h, placement.cache[h].size(),
                                         specs.capacity[h]));
    }
  }
}

namespace {

// Delay of one user given the best rate per file.
double UserDelay(const std::vector<double>& best, const PopularityModel& pop,
                 double file_bits) {
  double total = 0.0;
  for (int f = 0; f < pop.m(); ++f) total += pop.pmf()[f] * file_bits / best[f];
  return total;
}

}  // namespace

double EvaluateDelay(const UncodedPlacement& placement,
                     const ConnectivityGraph& graph,
                     const PopularityModel& pop, double file_bits) {
  ValidatePlacement(placement, graph.num_helpers(), pop.m());
  std::vector<double> best(pop.m());
  double total = 0.0;
  for (int u = 0; u < graph.num_users(); ++u) {
    std::fill(best.begin(), best.end(), graph.bs_rate(u));
    for (const Link& l : graph.links(u)) {
      for (int rank : placement.cache[l.helper]) {
        best[rank - 1] = std::max(best[rank - 1], l.rate_bps);
      }
    }
    total += UserDelay(best, pop, file_bits);
  }
  return total;
}

double BsOnlyDelay(const ConnectivityGraph& graph, const PopularityModel& pop,
                   double file_bits) {
  return EvaluateDelay(UncodedPlacement{std::vector<std::vector<int>>(
                           graph.num_helpers())},
                       graph, pop, file_bits);
}

namespace {

// Greedy state: current best rate per (user, file).
class GreedyState {
 public:
  GreedyState(const ConnectivityGraph& graph, const PopularityModel& pop,
              double file_bits)
      : graph_(graph), pop_(pop), file_bits_(file_bits),
        m_(pop.m()), best_(static_cast<std::size_t>(graph.num_users()) * m_) {
    for (int u = 0; u < graph.num_users(); ++u) {
      std::fill_n(best_.begin() + static_cast<std::size_t>(u) * m_, m_,
                  graph.bs_rate(u));
    }
  }

  // Delay reduction from adding file index f to helper h. Each term only
  // shrinks as best rates grow, and floating-point rounding is monotone, so
  // recomputed gains never exceed earlier ones.
  double Gain(int f, int h) const {
    double acc = 0.0;
    for (const UserLink& l : graph_.helper_users(h)) {
      const double b = best_[Index(l.user, f)];
      acc += std::max(0.0, 1.0 / b - 1.0 / l.rate_bps);
    }
    return file_bits_ * pop_.pmf()[f] * acc;
  }

  void Add(int f, int h) {
    for (const UserLink& l : graph_.helper_users(h)) {
      double& b = best_[Index(l.user, f)];
      b = std::max(b, l.rate_bps);
    }
  }

 private:
  std::size_t Index(int user, int f) const {
    return static_cast<std::size_t>(user) * m_ + f;
  }

  const ConnectivityGraph& graph_;
  const PopularityModel& pop_;
  double file_bits_;
  int m_;
  std::vector<double> best_;
};

struct Candidate {
  double gain;
  int file;
  int helper;
};

// Candidate a ranks before b.
bool Better(const Candidate& a, const Candidate& b) {
  if (a.gain != b.gain) return a.gain > b.gain;
  if (a.file != b.file) return a.file < b.file;
  return a.helper < b.helper;
}

struct HeapOrder {
  bool operator()(const Candidate& a, const Candidate& b) const {
    return Better(b, a);
  }
};

}  // namespace

GreedyTrace GreedyPlaceTraced(const ConnectivityGraph& graph,
                              const PopularityModel& pop,
                              const HelperSpecs& specs, double file_bits) {
  if (specs.num_helpers() != graph.num_helpers()) {
    throw InvalidParameter("helper specs and connectivity graph disagree");
  }
  const int n_helpers = graph.num_helpers();
  GreedyState state(graph, pop, file_bits);
  GreedyTrace trace;
  trace.placement.cache.resize(n_helpers);
  std::vector<int> residual(n_helpers);
  for (int h = 0; h < n_helpers; ++h) {
    residual[h] = std::min(specs.capacity[h], pop.m());
  }

  std::priority_queue<Candidate, std::vector<Candidate>, HeapOrder> heap;
  for (int h = 0; h < n_helpers; ++h) {
    if (residual[h] <= 0) continue;
    for (int f = 0; f < pop.m(); ++f) {
      const double g = state.Gain(f, h);
      if (g > 0.0) heap.push({g, f, h});
    }
  }

  while (!heap.empty()) {
    Candidate top = heap.top();
    heap.pop();
    if (residual[top.helper] == 0) continue;
    top.gain = state.Gain(top.file, top.helper);
    if (!(top.gain > 0.0)) continue;
    // Stale keys upper-bound fresh ones, so beating the best stale key means
    // beating every fresh key.
    if (!heap.empty() && Better(heap.top(), top)) {
      heap.push(top);
      continue;
    }
    state.Add(top.file, top.helper);
    trace.placement.cache[top.helper].push_back(top.file + 1);
    trace.gains.push_back(top.gain);
    --residual[top.helper];
  }
  for (auto& c : trace.placement.cache) std::sort(c.begin(), c.end());
  return trace;
}

UncodedPlacement GreedyPlace(const ConnectivityGraph& graph,
                             const PopularityModel& pop,
                             const HelperSpecs& specs, double file_bits) {
  return GreedyPlaceTraced(graph, pop, specs, file_bits).placement;
}

UncodedPlacement MostPopularPlace(const HelperSpecs& specs,
                                  const PopularityModel& pop) {
  UncodedPlacement placement;
  placement.cache.resize(specs.num_helpers());
  for (int h = 0; h < specs.num_helpers(); ++h) {
    const int k = std::clamp(specs.capacity[h], 0, pop.m());
    for (int r = 1; r <= k; ++r) placement.cache[h].push_back(r);
  }
  return placement;
}

namespace {

// All subsets of {1..m} with at most k elements, in lexicographic order.
std::vector<std::vector<int>> SubsetsUpTo(int m, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int next) -> void {
    out.push_back(cur);
    if (static_cast<int>(cur.size()) == k) return;
    for (int r = next; r <= m; ++r) {
      cur.push_back(r);
      self(self, r + 1);
      cur.pop_back();
    }
  };
  rec(rec, 1);
  return out;
}

double SubsetCount(int m, int k) {
  double total = 0.0;
  double binom = 1.0;
  for (int i = 0; i <= k; ++i) {
    total += binom;
    binom = binom * (m - i) / (i + 1);
  }
  return total;
}

}  // namespace

UncodedPlacement BruteForcePlace(const ConnectivityGraph& graph,
                                 const PopularityModel& pop,
                                 const HelperSpecs& specs, double file_bits) {
  if (specs.num_helpers() != graph.num_helpers()) {
    throw InvalidParameter("helper specs and connectivity graph disagree");
  }
  const int n_helpers = specs.num_helpers();
  double space = 1.0;
  for (int h = 0; h < n_helpers; ++h) {
    space *= SubsetCount(pop.m(), std::clamp(specs.capacity[h], 0, pop.m()));
    if (space > kBruteForceLimit) {
      throw InstanceTooLarge(fmt::format(
          "brute-force placement search space exceeds {:g} candidates",
          kBruteForceLimit));
    }
  }

  std::vector<std::vector<std::vector<int>>> choices(n_helpers);
  for (int h = 0; h < n_helpers; ++h) {
    choices[h] = SubsetsUpTo(pop.m(), std::clamp(specs.capacity[h], 0, pop.m()));
  }
  std::vector<std::size_t> digit(n_helpers, 0);
  UncodedPlacement cand;
  cand.cache.resize(n_helpers);
  UncodedPlacement best = cand;
  double best_delay = std::numeric_limits<double>::infinity();
  while (true) {
    for (int h = 0; h < n_helpers; ++h) cand.cache[h] = choices[h][digit[h]];
    const double d = EvaluateDelay(cand, graph, pop, file_bits);
    if (d < best_delay) {
      best_delay = d;
      best = cand;
    }
    // Odometer with helper 0 most significant.
    int h = n_helpers - 1;
    while (h >= 0 && ++digit[h] == choices[h].size()) digit[h--] = 0;
    if (h < 0) break;
  }
  return best;
}

void WritePlacementJson(const UncodedPlacement& placement, std::ostream& out) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (int h = 0; h < placement.num_helpers(); ++h) {
    j[std::to_string(h)] = placement.cache[h];
  }
  out << j.dump() << '\n';
}

}  // namespace femtocache
