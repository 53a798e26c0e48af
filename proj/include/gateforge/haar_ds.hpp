// Copyright 2026 The gateforge Authors
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

#pragma once

// The product of embedded Haar SU(2) factors, prod_{i<j} beta_j(G_j^i), and
// second-moment comparisons against the Haar oracle. For d >= 3 the product
// is measurably not Haar-distributed: consecutive factors with equal j merge,
// and E|U_13|^2 = 1/4 at d = 3 instead of 1/3. The report records this.

#include <cmath>
#include <ostream>
#include <sstream>
#include <vector>

#include "gateforge/gatesets.hpp"

namespace gateforge {

/// prod_{i=1}^{d-1} prod_{j=i+1}^{d} beta_j(G_j^i), multiplied left to right
/// in that index order, each G an independent Haar SU(2) sample.
inline Unitary ds_product_sample(int d, Rng& rng) {
  if (d < 2) throw std::invalid_argument("ds_product_sample: d must be >= 2");
  Matrix acc = Matrix::Identity(d, d);
  for (int i = 1; i <= d - 1; ++i)
    for (int j = i + 1; j <= d; ++j) {
      const Unitary g = haar_sample(2, rng);
      acc = acc * beta_embed(g, j, d).matrix();
    }
  return Unitary::from_matrix(std::move(acc));
}

enum class Sampler { ds, oracle };

inline const char* to_string(Sampler s) { return s == Sampler::ds ? "ds" : "oracle"; }

struct MomentEntry {
  int p = 0;  // 1-based; 0 marks the |tr U|^2 row
  int q = 0;
  double mean = 0.0;
  double standard_error = 0.0;
  double haar_prediction = 0.0;

  double deviation_sigmas() const {
    return standard_error > 0.0 ? (mean - haar_prediction) / standard_error
                         : (mean == haar_prediction ? 0.0 : INFINITY);
  }
  bool is_trace() const { return p == 0; }
};

struct MomentReport {
  Sampler sampler = Sampler::oracle;
  int d = 0;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::vector<MomentEntry> entries;  // E|U_pq|^2 row-major, then E|tr U|^2

  const MomentEntry& entry(int p, int q) const {
    return entries.at(static_cast<std::size_t>((p - 1) * d + (q - 1)));
  }
  const MomentEntry& trace() const { return entries.back(); }

  double max_abs_deviation() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, std::abs(e.mean - e.haar_prediction));
    return m;
  }
  double max_abs_sigmas() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, std::abs(e.deviation_sigmas()));
    return m;
  }
  /// Entries more than `sigmas` standard errors away from the Haar value.
  std::vector<MomentEntry> flagged(double sigmas = 3.0) const {
    std::vector<MomentEntry> out;
    for (const auto& e : entries)
      if (std::abs(e.deviation_sigmas()) > sigmas) out.push_back(e);
    return out;
  }
};

/// Second moments E|U_pq|^2 (Haar: 1/d) and E|tr U|^2 (Haar: 1) from `count`
/// samples drawn from one stream seeded with `seed`.
inline MomentReport moment_report(Sampler sampler, int d, std::size_t count,
                                  std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("moment_report: d must be >= 2");
  if (count < 1000) throw std::invalid_argument("moment_report: need at least 1000 samples");
  Rng rng = make_rng(seed);
  std::vector<SampleStats> stats(static_cast<std::size_t>(d * d) + 1);
  for (std::size_t s = 0; s < count; ++s) {
    const Unitary u = sampler == Sampler::ds ? ds_product_sample(d, rng) : haar_sample(d, rng);
    for (int p = 0; p < d; ++p)
      for (int q = 0; q < d; ++q) stats[static_cast<std::size_t>(p * d + q)].add(std::norm(u(p, q)));
    stats.back().add(std::norm(u.matrix().trace()));
  }
  MomentReport report{sampler, d, count, seed, {}};
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q) {
      const auto& st = stats[static_cast<std::size_t>(p * d + q)];
      report.entries.push_back({p + 1, q + 1, st.mean(), st.standard_error(), 1.0 / d});
    }
  report.entries.push_back({0, 0, stats.back().mean(), stats.back().standard_error(), 1.0});
  return report;
}

/// Two-sample z statistic between matching rows of two reports.
inline double two_sample_sigmas(const MomentEntry& a, const MomentEntry& b) {
  const double se = std::sqrt(a.standard_error * a.standard_error + b.standard_error * b.standard_error);
  return se > 0.0 ? (a.mean - b.mean) / se : 0.0;
}

/// CSV: sampler,p,q,mean,stderr,haar_prediction,deviation_sigmas. The trace
/// row uses p = q = "tr".
inline void write_moment_csv(std::ostream& out, const MomentReport& report,
                             bool header = true) {
  std::ostringstream body;
  body.precision(17);
  if (header) body << "sampler,p,q,mean,stderr,haar_prediction,deviation_sigmas\n";
  for (const auto& e : report.entries) {
    body << to_string(report.sampler) << ',';
    if (e.is_trace())
      body << "tr,tr";
    else
      body << e.p << ',' << e.q;
    body << ',' << e.mean << ',' << e.standard_error << ',' << e.haar_prediction << ','
         << e.deviation_sigmas() << '\n';
  }
  out << body.str();
}

}  // namespace gateforge
