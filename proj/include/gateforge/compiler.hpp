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

// Compiling targets to words, empirical covering radii as a function of word
// length, and the closed-form word-length bounds. All logarithms are natural.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <thread>
#include <vector>

#include "gateforge/net_cache.hpp"

namespace gateforge {

enum class Strategy { exhaustive, mitm };

inline const char* to_string(Strategy s) {
  return s == Strategy::exhaustive ? "exhaustive" : "mitm";
}

struct CompilationResult {
  Word word;
  double distance_op = 0.0;
  double distance_frob = 0.0;
  Strategy strategy = Strategy::mitm;
  /// Size of the candidate space: net entries (exhaustive) or left x right
  /// pairs (mitm).
  std::uint64_t searched = 0;
};

/// Budget failure during compile(); carries the best word found over the
/// part of the search space that fit in the budget.
class CompileBudgetExceeded : public BudgetExceeded {
 public:
  CompileBudgetExceeded(const BudgetExceeded& cause, CompilationResult partial)
      : BudgetExceeded("compile: " + cause.detail(), cause.reached()),
        partial_(std::move(partial)) {}

  const CompilationResult& partial_best() const noexcept { return partial_; }

 private:
  CompilationResult partial_;
};

namespace detail {

inline CompilationResult finish(const Word& w, const Unitary& target, const GateSet& gs,
                                Strategy strategy, std::uint64_t searched) {
  CompilationResult r;
  r.word = reduce(w);
  const Unitary u = evaluate(r.word, gs);
  r.distance_op = dist(u, target, MetricKind::op);
  r.distance_frob = dist(u, target, MetricKind::frobenius);
  r.strategy = strategy;
  r.searched = searched;
  return r;
}

inline CompilationResult search_exhaustive(const Net& net, const Unitary& target) {
  const auto hit = nearest_exhaustive(net, target, MetricKind::frobenius);
  return finish(hit.word, target, net.gateset(), Strategy::exhaustive, net.size());
}

/// min over (l, r) of |L_l R_r - U|_F = |R_r - L_l^dag U|_F, one index query
/// per left entry, each bounded by the best distance so far.
inline CompilationResult search_mitm(const Net& left, const Net& right,
                                     const Unitary& target) {
  const int d = target.dim();
  Matrix q(d, d);
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_l = 0;
  std::size_t best_r = 0;
  for (std::size_t l = 0; l < left.size(); ++l) {
    q.noalias() = left.matrix(l).adjoint() * target.matrix();
    const auto hit = right.index().nearest(
        [&](std::size_t i) { return right.frobenius_to(i, q); }, best);
    if (hit && hit->distance < best) {
      best = hit->distance;
      best_l = l;
      best_r = hit->index;
    }
  }
  return finish(left.word(best_l) + right.word(best_r), target, left.gateset(),
                Strategy::mitm,
                static_cast<std::uint64_t>(left.size()) * right.size());
}

}  // namespace detail

/// Shortest-found word for `target` among words of length <= n. Optimal in
/// the Frobenius metric over the searched space; the op distance is reported
/// alongside. mitm splits n into ceil(n/2) + floor(n/2) and pairs half-nets.
inline CompilationResult compile(const Unitary& target, const GateSet& gs, int n,
                                 Strategy strategy, NetCache& cache) {
  if (target.dim() != gs.dim()) throw DimensionMismatch("compile", gs.dim(), target.dim());
  if (n < 0) throw std::invalid_argument("compile: length budget must be >= 0");

  if (strategy == Strategy::exhaustive) {
    try {
      return detail::search_exhaustive(*cache.get(gs, n), target);
    } catch (const BudgetExceeded& e) {
      const Net partial =
          enumerate_net_partial(gs, n, cache.dedup_tol(), cache.max_entries());
      throw CompileBudgetExceeded(e, detail::search_exhaustive(partial, target));
    }
  }

  const int left_len = (n + 1) / 2;
  const int right_len = n / 2;
  std::shared_ptr<const Net> left;
  try {
    left = cache.get(gs, left_len);
    return detail::search_mitm(*left, *cache.get(gs, right_len), target);
  } catch (const BudgetExceeded& e) {
    if (!left) {
      const Net partial =
          enumerate_net_partial(gs, left_len, cache.dedup_tol(), cache.max_entries());
      CompilationResult best = detail::search_exhaustive(partial, target);
      best.strategy = Strategy::mitm;
      throw CompileBudgetExceeded(e, std::move(best));
    }
    const Net partial =
        enumerate_net_partial(gs, right_len, cache.dedup_tol(), cache.max_entries());
    throw CompileBudgetExceeded(e, detail::search_mitm(*left, partial, target));
  }
}

inline CompilationResult compile(const Unitary& target, const GateSet& gs, int n,
                                 Strategy strategy) {
  NetCache cache;
  return compile(target, gs, n, strategy, cache);
}

inline void write_compilation_json(std::ostream& out, const CompilationResult& r) {
  nlohmann::ordered_json doc;
  doc["word"] = to_string(r.word);
  doc["distance_op"] = r.distance_op;
  doc["distance_frob"] = r.distance_frob;
  doc["searched"] = r.searched;
  out << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Covering radius versus word length

struct CoverRow {
  int n = 0;
  double mean_eps = 0.0;
  double max_eps = 0.0;
  std::size_t targets = 0;
  std::vector<double> per_target;  // op distance, target order
};

struct CoverReport {
  std::string gateset_id;
  std::uint64_t seed = 0;
  std::vector<CoverRow> rows;
};

struct CoverOptions {
  unsigned threads = 1;
  NetCache* cache = nullptr;
};

/// Haar targets drawn once, target t from substream (seed, t), and compiled
/// with mitm at every length. Output does not depend on the thread count.
inline CoverReport covering_stats(const GateSet& gs, const std::vector<int>& lengths,
                                  std::size_t num_targets, std::uint64_t seed,
                                  CoverOptions options = {}) {
  if (num_targets < 1) throw std::invalid_argument("covering_stats: need at least one target");
  NetCache local;
  NetCache& cache = options.cache ? *options.cache : local;

  std::vector<Unitary> targets;
  targets.reserve(num_targets);
  for (std::size_t t = 0; t < num_targets; ++t) {
    Rng rng = substream(seed, t);
    targets.push_back(haar_sample(gs.dim(), rng));
  }
  for (int n : lengths) {
    if (n < 0) throw std::invalid_argument("covering_stats: negative length");
    cache.get(gs, (n + 1) / 2);
    cache.get(gs, n / 2);
  }

  CoverReport report{content_hash_hex(gs), seed, {}};
  const unsigned threads = std::max(1u, options.threads);
  for (int n : lengths) {
    CoverRow row{n, 0.0, 0.0, num_targets, std::vector<double>(num_targets)};
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t t = next++; t < num_targets; t = next++)
        row.per_target[t] = compile(targets[t], gs, n, Strategy::mitm, cache).distance_op;
    };
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    double sum = 0.0;
    for (double e : row.per_target) {
      sum += e;
      row.max_eps = std::max(row.max_eps, e);
    }
    row.mean_eps = sum / static_cast<double>(num_targets);
    report.rows.push_back(std::move(row));
  }
  return report;
}

inline void write_cover_csv(std::ostream& out, const CoverReport& report) {
  out << "n,mean_eps,max_eps,targets,seed\n";
  std::ostringstream line;
  line.precision(17);
  for (const auto& row : report.rows) {
    line.str("");
    line << row.n << ',' << row.mean_eps << ',' << row.max_eps << ',' << row.targets << ','
         << report.seed;
    out << line.str() << '\n';
  }
}

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares of ln(max eps) on n over rows with max eps > 0.
inline ScalingFit scaling_fit(const CoverReport& report) {
  std::vector<double> xs, ys;
  for (const auto& row : report.rows)
    if (row.max_eps > 0.0) {
      xs.push_back(row.n);
      ys.push_back(std::log(row.max_eps));
    }
  if (xs.size() < 3)
    throw std::invalid_argument("scaling_fit: need at least three lengths with eps > 0");
  const double count = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("scaling_fit: all lengths are equal");
  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

// ---------------------------------------------------------------------------
// Closed-form length bounds

struct BoundInputs {
  int d = 2;
  double lambda = 0.0;  // spectral gap parameter, in (0, 1)
  double k1 = 0.0;
  double k2 = 0.0;
  std::size_t set_size = 0;
  double eps = 0.0;
};

/// Smallest n with n > (d^2-1)/ln(1/L) ln(1/eps) + ln(2^(d^2-1)/k1)/ln(1/L).
/// Any such n guarantees a word within eps of every target.
inline int theorem1_length(const BoundInputs& b) {
  if (!(b.lambda < 1.0)) throw std::domain_error("theorem1_length: lambda must be < 1");
  if (!(b.lambda > 0.0)) throw std::domain_error("theorem1_length: lambda must be > 0");
  if (!(b.eps > 0.0 && b.eps <= 2.0))
    throw std::domain_error("theorem1_length: eps must lie in (0, 2]");
  if (!(b.k1 > 0.0)) throw std::domain_error("theorem1_length: k1 must be > 0");
  if (b.d < 2) throw std::domain_error("theorem1_length: d must be >= 2");
  const double dim = static_cast<double>(b.d * b.d - 1);
  const double log_inv_lambda = std::log(1.0 / b.lambda);
  const double rhs = dim / log_inv_lambda * std::log(1.0 / b.eps) +
                     (dim * std::log(2.0) - std::log(b.k1)) / log_inv_lambda;
  return std::max(0, static_cast<int>(std::floor(rhs)) + 1);
}

/// Smallest n with n >= (d^2-1)/ln(2|A|) ln(1/eps) - ln(k2)/ln(2|A|): fewer
/// words cannot cover SU(d) at precision eps.
inline int lower_bound_length(const BoundInputs& b) {
  if (b.set_size < 1) throw std::domain_error("lower_bound_length: set size must be >= 1");
  if (!(b.eps > 0.0 && b.eps <= 2.0))
    throw std::domain_error("lower_bound_length: eps must lie in (0, 2]");
  if (!(b.k2 > 0.0)) throw std::domain_error("lower_bound_length: k2 must be > 0");
  const double dim = static_cast<double>(b.d * b.d - 1);
  const double log_branch = std::log(2.0 * static_cast<double>(b.set_size));
  const double rhs = dim / log_branch * std::log(1.0 / b.eps) - std::log(b.k2) / log_branch;
  return std::max(0, static_cast<int>(std::ceil(rhs)));
}

// ---------------------------------------------------------------------------
// Perturbation of a non-universal set

/// Uniform random reduced word of length n over k generators.
inline Word random_reduced_word(std::size_t k, int n, Rng& rng) {
  Word w;
  if (k == 0 || n <= 0) return w;
  std::uniform_int_distribution<std::uint32_t> first(0, static_cast<std::uint32_t>(2 * k - 1));
  std::uniform_int_distribution<std::uint32_t> rest(0, static_cast<std::uint32_t>(2 * k - 2));
  std::uint32_t prev = first(rng);
  w.letters.push_back({prev / 2, (prev & 1u) ? -1 : 1});
  for (int i = 1; i < n; ++i) {
    std::uint32_t code = rest(rng);
    if (code >= (prev ^ 1u)) ++code;  // skip the inverse of the previous letter
    w.letters.push_back({code / 2, (code & 1u) ? -1 : 1});
    prev = code;
  }
  return w;
}

/// Largest op distance between a random length-n word evaluated over
/// perturb(base, delta) and the same word over base. Never exceeds n * delta.
inline double subgroup_experiment(const GateSet& base, double delta, int n,
                                  std::size_t samples, std::uint64_t seed) {
  if (!(delta >= 0.0)) throw std::invalid_argument("subgroup_experiment: delta must be >= 0");
  if (n < 0) throw std::invalid_argument("subgroup_experiment: n must be >= 0");
  Rng rng = make_rng(seed);
  const GateSet moved = perturb(base, delta, rng);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Word w = random_reduced_word(base.size(), n, rng);
    worst = std::max(worst, dist(evaluate(w, moved), evaluate(w, base), MetricKind::op));
  }
  return worst;
}

}  // namespace gateforge
