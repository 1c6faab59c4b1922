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

#ifndef FEMTOCACHE_TOPOLOGY_H_
#define FEMTOCACHE_TOPOLOGY_H_

#include <iosfwd>
#include <limits>
#include <vector>

#include "femtocache/rng.h"

namespace femtocache {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

double Distance(const Point& a, const Point& b);

// Circular macro cell with the base station at the origin. Distances in
// meters.
struct CellLayout {
  double cell_radius = 400.0;
  Point bs_position{};
  std::vector<Point> helper_positions;
  std::vector<Point> user_positions;
};

// Shannon rate with distance pathloss and no fading:
//   min(max_rate, bandwidth * log2(1 + reference_snr * (max(d, d0)/d0)^-alpha))
struct LinkRateModel {
  double bandwidth_hz = 20e6;
  double reference_snr = 1e9;  // linear SNR at d0
  double d0_m = 1.0;
  double pathloss_exponent = 3.5;
  double max_rate_bps = 30e6;
  // Coverage cutoff for helper links; unused for the macro link.
  double helper_radius_m = 100.0;

  // WiFi-like helper links.
  static LinkRateModel HelperDefaults();
  // LTE-like macro downlink.
  static LinkRateModel MacroDefaults();
};

double LinkRate(double distance_m, const LinkRateModel& model);

// I.i.d. uniform points in the disc of radius `radius` centered at `center`
// (rejection sampling from the bounding square).
std::vector<Point> PlaceUniform(int count, const Point& center, double radius,
                                Rng& rng);
std::vector<Point> PlaceUniform(int count, const CellLayout& layout, Rng& rng);

enum class HelperPlacement { kGrid, kUniform };

// Grid mode: centers of the smallest near-square lattice (cols = ceil(sqrt
// count), rows = ceil(count/cols)) laid over the bounding square, keeping the
// `count` cells closest to the cell center; points outside the disc are
// pulled radially onto it. Uniform mode: i.i.d. uniform in the disc.
std::vector<Point> PlaceHelpers(int count, HelperPlacement mode,
                                const CellLayout& layout, Rng& rng);

struct Link {
  int helper = 0;
  double rate_bps = 0.0;
};

struct UserLink {
  int user = 0;
  double rate_bps = 0.0;
};

// User-to-helper bipartite graph with per-link rates and per-user macro rate.
// Immutable after construction.
class ConnectivityGraph {
 public:
  ConnectivityGraph() = default;
  ConnectivityGraph(int n_helpers, std::vector<std::vector<Link>> user_links,
                    std::vector<double> bs_rate);

  int num_users() const { return static_cast<int>(bs_rate_.size()); }
  int num_helpers() const { return n_helpers_; }
  // Links of user u, ordered by ascending helper index.
  const std::vector<Link>& links(int user) const { return user_links_[user]; }
  // Users reachable by helper h with their rates, ascending user index.
  const std::vector<UserLink>& helper_users(int helper) const {
    return helper_users_[helper];
  }
  double bs_rate(int user) const { return bs_rate_[user]; }
  // 0 when there is no edge.
  double rate(int user, int helper) const;
  bool connected(int user, int helper) const { return rate(user, helper) > 0.0; }

 private:
  int n_helpers_ = 0;
  std::vector<std::vector<Link>> user_links_;
  std::vector<std::vector<UserLink>> helper_users_;
  std::vector<double> bs_rate_;
};

ConnectivityGraph BuildConnectivity(
    const CellLayout& layout,
    const LinkRateModel& helper_model = LinkRateModel::HelperDefaults(),
    const LinkRateModel& macro_model = LinkRateModel::MacroDefaults());

// {"cell_radius": R, "helpers": [[x,y],...], "users": [[x,y],...]}, BS at
// the origin.
void WriteLayoutJson(const CellLayout& layout, std::ostream& out);
CellLayout ReadLayoutJson(std::istream& in);

}  // namespace femtocache

#endif  // FEMTOCACHE_TOPOLOGY_H_
