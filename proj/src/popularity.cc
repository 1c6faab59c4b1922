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

#include "femtocache/popularity.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "femtocache/error.h"

namespace femtocache {

PopularityModel::PopularityModel(std::optional<double> gamma,
                                 std::vector<double> pmf)
    : gamma_(gamma), pmf_(std::move(pmf)), cdf_(pmf_.size()) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < pmf_.size(); ++i) {
    acc += pmf_[i];
    cdf_[i] = static_cast<double>(acc);
  }
  cdf_.back() = 1.0;
}

PopularityModel PopularityModel::Zipf(double gamma, std::int64_t m) {
  if (m < 1 || m > kMaxCatalogSize) {
    throw InvalidParameter(
        fmt::format("catalog size m must be in [1, {}], got {}",
                    kMaxCatalogSize, m));
  }
  if (!std::isfinite(gamma) || gamma < 0.0) {
    throw InvalidParameter(
        fmt::format("Zipf exponent gamma must be finite and >= 0, got {}",
                    gamma));
  }
  std::vector<double> pmf(static_cast<std::size_t>(m));
  long double norm = 0.0L;
  for (std::int64_t i = 1; i <= m; ++i) {
    pmf[i - 1] = std::pow(static_cast<double>(i), -gamma);
    norm += pmf[i - 1];
  }
  for (double& p : pmf) p = static_cast<double>(p / norm);
  return PopularityModel(gamma, std::move(pmf));
}

PopularityModel PopularityModel::FromWeights(std::vector<double> weights) {
  if (weights.empty() ||
      static_cast<std::int64_t>(weights.size()) > kMaxCatalogSize) {
    throw InvalidParameter("weight vector must be non-empty and bounded");
  }
  long double norm = 0.0L;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw InvalidParameter("weights must be finite and non-negative");
    }
    norm += w;
  }
  if (norm <= 0.0L) throw InvalidParameter("weights sum to zero");
  for (double& w : weights) w = static_cast<double>(w / norm);
  return PopularityModel(std::nullopt, std::move(weights));
}

PopularityModel BuildZipf(double gamma, std::int64_t m) {
  return PopularityModel::Zipf(gamma, m);
}

int SampleRequest(const PopularityModel& model, Rng& rng) {
  const auto cdf = model.cdf();
  const double u = rng.Uniform01();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;  // u < 1 == cdf.back(), kept for safety
  return static_cast<int>(it - cdf.begin()) + 1;
}

double HeadMass(const PopularityModel& model, std::int64_t k) {
  if (k < 0 || k > model.m()) {
    throw InvalidParameter(
        fmt::format("head size K must be in [0, {}], got {}", model.m(), k));
  }
  return k == 0 ? 0.0 : model.cdf()[k - 1];
}

std::int64_t CatalogSize(std::int64_t n_users, double scale) {
  if (n_users < 1) throw InvalidParameter("user count N must be >= 1");
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidParameter("catalog scale must be finite and > 0");
  }
  const double m = std::round(scale * std::log(static_cast<double>(n_users)));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(m));
}

RequestTrace ReadTraceCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InsufficientData("empty trace");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "file_id,count") {
    throw InvalidParameter("trace header must be `file_id,count`, got `" +
                           line + "`");
  }
  // Repeated ids are merged.
  std::map<std::int64_t, std::int64_t> merged;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::int64_t id = 0;
    std::int64_t count = 0;
    char comma = 0;
    if (!(ss >> id >> comma >> count) || comma != ',' || count < 0) {
      throw InvalidParameter(
          fmt::format("malformed trace row {}: `{}`", line_no, line));
    }
    if (count > 0) merged[id] += count;
  }
  RequestTrace trace;
  for (const auto& [id, count] : merged) {
    trace.counts.emplace_back(id, count);
    trace.total_requests += count;
  }
  return trace;
}

void WriteTraceCsv(const RequestTrace& trace, std::ostream& out) {
  out << "file_id,count\n";
  for (const auto& [id, count] : trace.counts) out << id << ',' << count << '\n';
}

RequestTrace SampleTrace(const PopularityModel& model, std::int64_t draws,
                         Rng& rng) {
  std::vector<std::int64_t> hist(model.m(), 0);
  for (std::int64_t i = 0; i < draws; ++i) ++hist[SampleRequest(model, rng) - 1];
  RequestTrace trace;
  for (int r = 0; r < model.m(); ++r) {
    if (hist[r] == 0) continue;
    trace.counts.emplace_back(r + 1, hist[r]);
    trace.total_requests += hist[r];
  }
  return trace;
}

ZipfFit FitZipf(const RequestTrace& trace) {
  if (trace.counts.size() < 2) {
    throw InsufficientData("fitting a Zipf law needs at least 2 distinct files");
  }
  auto sorted = trace.counts;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  const double n = static_cast<double>(sorted.size());
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    sx += std::log(static_cast<double>(i + 1));
    sy += std::log(static_cast<double>(sorted[i].second));
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double dx = std::log(static_cast<double>(i + 1)) - mx;
    const double dy = std::log(static_cast<double>(sorted[i].second)) - my;
    sxy += dx * dy;
    sxx += dx * dx;
  }
  ZipfFit fit;
  fit.gamma_hat = -sxy / sxx;
  fit.m_hat = static_cast<std::int64_t>(sorted.size());
  return fit;
}

std::string FormatFit(const ZipfFit& fit) {
  return fmt::format("gamma_hat={:.10g}\nm_hat={}\n", fit.gamma_hat, fit.m_hat);
}

}  // namespace femtocache
