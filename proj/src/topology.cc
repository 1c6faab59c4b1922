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

#include "femtocache/topology.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include "json.hpp"

#include "femtocache/error.h"

namespace femtocache {

double Distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

LinkRateModel LinkRateModel::HelperDefaults() {
  LinkRateModel m;
  m.bandwidth_hz = 20e6;
  m.reference_snr = 1e9;
  m.d0_m = 1.0;
  m.pathloss_exponent = 3.5;
  m.max_rate_bps = 30e6;
  m.helper_radius_m = 100.0;
  return m;
}

LinkRateModel LinkRateModel::MacroDefaults() {
  LinkRateModel m;
  m.bandwidth_hz = 10e6;
  // Cell-edge SNR about -11 dB at 400 m.
  m.reference_snr = 1e8;
  m.d0_m = 1.0;
  m.pathloss_exponent = 3.5;
  m.max_rate_bps = 25e6;
  m.helper_radius_m = std::numeric_limits<double>::infinity();
  return m;
}

double LinkRate(double distance_m, const LinkRateModel& model) {
  const double d = std::max(distance_m, model.d0_m) / model.d0_m;
  const double snr = model.reference_snr * std::pow(d, -model.pathloss_exponent);
  return std::min(model.max_rate_bps, model.bandwidth_hz * std::log2(1.0 + snr));
}

std::vector<Point> PlaceUniform(int count, const Point& center, double radius,
                                Rng& rng) {
  std::vector<Point> points;
  points.reserve(std::max(count, 0));
  while (static_cast<int>(points.size()) < count) {
    const double x = rng.Uniform(-radius, radius);
    const double y = rng.Uniform(-radius, radius);
    if (x * x + y * y <= radius * radius) {
      points.push_back({center.x + x, center.y + y});
    }
  }
  return points;
}

std::vector<Point> PlaceUniform(int count, const CellLayout& layout, Rng& rng) {
  return PlaceUniform(count, layout.bs_position, layout.cell_radius, rng);
}

std::vector<Point> PlaceHelpers(int count, HelperPlacement mode,
                                const CellLayout& layout, Rng& rng) {
  if (count <= 0) return {};
  if (mode == HelperPlacement::kUniform) return PlaceUniform(count, layout, rng);

  const int cols = static_cast<int>(std::ceil(std::sqrt(count)));
  const int rows = (count + cols - 1) / cols;
  const double radius = layout.cell_radius;
  const double spacing = 2.0 * radius / std::max(cols, rows);
  std::vector<Point> lattice;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      lattice.push_back({(c - 0.5 * (cols - 1)) * spacing,
                         (r - 0.5 * (rows - 1)) * spacing});
    }
  }
  std::stable_sort(lattice.begin(), lattice.end(),
                   [](const Point& a, const Point& b) {
                     return a.x * a.x + a.y * a.y < b.x * b.x + b.y * b.y;
                   });
  lattice.resize(count);
  for (Point& p : lattice) {
    const double d = std::hypot(p.x, p.y);
    if (d > radius) {
      p.x *= radius / d;
      p.y *= radius / d;
    }
    p.x += layout.bs_position.x;
    p.y += layout.bs_position.y;
  }
  return lattice;
}

ConnectivityGraph::ConnectivityGraph(int n_helpers,
                                     std::vector<std::vector<Link>> user_links,
                                     std::vector<double> bs_rate)
    : n_helpers_(n_helpers),
      user_links_(std::move(user_links)),
      helper_users_(n_helpers),
      bs_rate_(std::move(bs_rate)) {
  if (user_links_.size() != bs_rate_.size()) {
    throw InvalidParameter("user link lists and BS rates differ in length");
  }
  for (std::size_t u = 0; u < user_links_.size(); ++u) {
    if (!(bs_rate_[u] > 0.0)) throw InvalidParameter("BS rates must be > 0");
    auto& links = user_links_[u];
    std::sort(links.begin(), links.end(),
              [](const Link& a, const Link& b) { return a.helper < b.helper; });
    for (const Link& l : links) {
      if (l.helper < 0 || l.helper >= n_helpers_) {
        throw InvalidParameter("link references an unknown helper");
      }
      if (!(l.rate_bps > 0.0)) throw InvalidParameter("link rates must be > 0");
      helper_users_[l.helper].push_back({static_cast<int>(u), l.rate_bps});
    }
  }
}

double ConnectivityGraph::rate(int user, int helper) const {
  for (const Link& l : user_links_[user]) {
    if (l.helper == helper) return l.rate_bps;
  }
  return 0.0;
}

ConnectivityGraph BuildConnectivity(const CellLayout& layout,
                                    const LinkRateModel& helper_model,
                                    const LinkRateModel& macro_model) {
  const int n_users = static_cast<int>(layout.user_positions.size());
  const int n_helpers = static_cast<int>(layout.helper_positions.size());
  std::vector<std::vector<Link>> links(n_users);
  std::vector<double> bs_rate(n_users);
  for (int u = 0; u < n_users; ++u) {
    const Point& p = layout.user_positions[u];
    bs_rate[u] = LinkRate(Distance(p, layout.bs_position), macro_model);
    for (int h = 0; h < n_helpers; ++h) {
      const double d = Distance(p, layout.helper_positions[h]);
      if (d <= helper_model.helper_radius_m) {
        links[u].push_back({h, LinkRate(d, helper_model)});
      }
    }
  }
  return ConnectivityGraph(n_helpers, std::move(links), std::move(bs_rate));
}

namespace {

nlohmann::json PointsToJson(const std::vector<Point>& points) {
  auto arr = nlohmann::json::array();
  for (const Point& p : points) arr.push_back({p.x, p.y});
  return arr;
}

std::vector<Point> PointsFromJson(const nlohmann::json& arr) {
  std::vector<Point> points;
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() != 2) {
      throw InvalidParameter("layout points must be [x, y] pairs");
    }
    points.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return points;
}

}  // namespace

void WriteLayoutJson(const CellLayout& layout, std::ostream& out) {
  nlohmann::json j;
  j["cell_radius"] = layout.cell_radius;
  j["helpers"] = PointsToJson(layout.helper_positions);
  j["users"] = PointsToJson(layout.user_positions);
  out << j.dump(2) << '\n';
}

CellLayout ReadLayoutJson(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("layout JSON: ") + e.what());
  }
  CellLayout layout;
  layout.cell_radius = j.value("cell_radius", 400.0);
  if (!(layout.cell_radius > 0.0)) {
    throw InvalidParameter("layout cell_radius must be > 0");
  }
  layout.helper_positions = PointsFromJson(j.value("helpers", nlohmann::json::array()));
  layout.user_positions = PointsFromJson(j.value("users", nlohmann::json::array()));
  const double slack = 1e-9 * layout.cell_radius;
  for (const auto* pts : {&layout.helper_positions, &layout.user_positions}) {
    for (const Point& p : *pts) {
      if (Distance(p, layout.bs_position) > layout.cell_radius + slack) {
        throw InvalidParameter("layout point lies outside the cell disc");
      }
    }
  }
  return layout;
}

}  // namespace femtocache
