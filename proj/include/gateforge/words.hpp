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

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gateforge/gatesets.hpp"
#include "gateforge/vp_tree.hpp"

namespace gateforge {

/// One generator (0-based) or its inverse.
struct Letter {
  std::uint32_t generator = 0;
  int sign = 1;

  Letter inverse() const { return {generator, -sign}; }
  friend bool operator==(const Letter&, const Letter&) = default;
};

/// A product of generators and inverses, read left to right: the word
/// a1 a2 ... an stands for the matrix A1 A2 ... An.
struct Word {
  std::vector<Letter> letters;

  std::size_t size() const noexcept { return letters.size(); }
  bool empty() const noexcept { return letters.empty(); }

  /// No adjacent letter is followed by its own inverse.
  bool is_reduced() const {
    for (std::size_t i = 1; i < letters.size(); ++i)
      if (letters[i] == letters[i - 1].inverse()) return false;
    return true;
  }

  Word inverse() const {
    Word out;
    out.letters.reserve(letters.size());
    for (auto it = letters.rbegin(); it != letters.rend(); ++it)
      out.letters.push_back(it->inverse());
    return out;
  }

  friend Word operator+(Word a, const Word& b) {
    a.letters.insert(a.letters.end(), b.letters.begin(), b.letters.end());
    return a;
  }
  friend bool operator==(const Word&, const Word&) = default;
};

/// Free reduction: cancels adjacent generator/inverse pairs until none remain.
inline Word reduce(const Word& w) {
  Word out;
  out.letters.reserve(w.size());
  for (const Letter& l : w.letters) {
    if (!out.letters.empty() && out.letters.back() == l.inverse())
      out.letters.pop_back();
    else
      out.letters.push_back(l);
  }
  return out;
}

/// Signed 1-based generator indices joined by '.', e.g. "1.-2.3"; the empty
/// word is the empty string.
inline std::string to_string(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += '.';
    if (w.letters[i].sign < 0) out += '-';
    out += std::to_string(w.letters[i].generator + 1);
  }
  return out;
}

inline Word parse_word(std::string_view text) {
  Word w;
  if (text.empty()) return w;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t dot = std::min(text.find('.', pos), text.size());
    std::string_view tok = text.substr(pos, dot - pos);
    int sign = 1;
    if (!tok.empty() && tok.front() == '-') {
      sign = -1;
      tok.remove_prefix(1);
    }
    std::uint32_t index = 0;
    const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), index);
    if (ec != std::errc() || end != tok.data() + tok.size() || index == 0)
      throw std::invalid_argument("parse_word: bad letter '" +
                                  std::string(text.substr(pos, dot - pos)) + "'");
    w.letters.push_back({index - 1, sign});
    pos = dot + 1;
  }
  return w;
}

inline Unitary evaluate(const Word& w, const GateSet& gs) {
  Matrix m = Matrix::Identity(gs.dim(), gs.dim());
  for (const Letter& l : w.letters) {
    if (l.generator >= gs.size())
      throw std::out_of_range("evaluate: generator index " +
                              std::to_string(l.generator + 1) + " outside gate set of size " +
                              std::to_string(gs.size()));
    const Matrix& g = gs[l.generator].matrix();
    m = l.sign > 0 ? Matrix(m * g) : Matrix(m * g.adjoint());
  }
  return Unitary::from_matrix(std::move(m));
}

inline constexpr double kDefaultDedupTol = 1e-8;
inline constexpr std::size_t kDefaultMaxEntries = 10'000'000;

/// Deduplicated matrix image of all reduced words of length <= max_length,
/// one shortest word per distinct matrix, with a vantage-point index.
///
/// Entries are stored in order of word length. Each entry keeps its parent
/// entry and final letter, so words are rebuilt by walking parents; matrices
/// sit in one flat column-major buffer.
class Net {
 public:
  Net() = default;

  const GateSet& gateset() const noexcept { return gs_; }
  int dim() const noexcept { return gs_.dim(); }
  int max_length() const noexcept { return max_length_; }
  double dedup_tol() const noexcept { return tol_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  /// False when enumeration stopped at the entry budget.
  bool complete() const noexcept { return complete_; }

  Eigen::Map<const Matrix> matrix(std::size_t i) const {
    const std::size_t dd = static_cast<std::size_t>(dim()) * dim();
    return {data_.data() + i * dd, dim(), dim()};
  }

  std::size_t word_length(std::size_t i) const { return entries_.at(i).length; }

  Word word(std::size_t i) const {
    Word w;
    w.letters.resize(entries_.at(i).length);
    for (std::size_t k = w.letters.size(); k-- > 0;) {
      const Entry& e = entries_[i];
      w.letters[k] = {e.code / 2, (e.code & 1u) ? -1 : 1};
      i = e.parent;
    }
    return w;
  }

  /// Number of entries whose shortest word has exactly length m.
  std::size_t count_at_length(int m) const {
    if (m < 0 || static_cast<std::size_t>(m) + 1 >= level_offsets_.size()) return 0;
    return level_offsets_[m + 1] - level_offsets_[m];
  }

  double frobenius_to(std::size_t i, const Matrix& q) const {
    const std::size_t dd = static_cast<std::size_t>(dim()) * dim();
    const Complex* a = data_.data() + i * dd;
    const Complex* b = q.data();
    double s = 0.0;
    for (std::size_t k = 0; k < dd; ++k) s += std::norm(a[k] - b[k]);
    return std::sqrt(s);
  }

  double frobenius_between(std::size_t i, std::size_t j) const {
    const std::size_t dd = static_cast<std::size_t>(dim()) * dim();
    const Complex* a = data_.data() + i * dd;
    const Complex* b = data_.data() + j * dd;
    double s = 0.0;
    for (std::size_t k = 0; k < dd; ++k) s += std::norm(a[k] - b[k]);
    return std::sqrt(s);
  }

  double operator_to(std::size_t i, const Matrix& q) const {
    return operator_norm(Matrix(matrix(i)) - q);
  }

  const VpTree& index() const noexcept { return tree_; }

  void write_binary(std::ostream& out) const;
  static Net read_binary(std::istream& in, const GateSet& gs);

 private:
  struct Entry {
    std::uint32_t parent = 0;
    std::uint32_t code = 0;  // 2 * generator + (inverse ? 1 : 0)
    std::uint32_t length = 0;
  };

  friend Net enumerate_net_partial(const GateSet&, int, double, std::size_t);

  void build_index() {
    tree_ = VpTree(size(), [this](std::size_t i, std::size_t j) {
      return frobenius_between(i, j);
    });
  }

  GateSet gs_;
  int max_length_ = 0;
  double tol_ = kDefaultDedupTol;
  bool complete_ = true;
  std::vector<Entry> entries_;
  std::vector<Complex> data_;
  std::vector<std::size_t> level_offsets_;
  VpTree tree_;
};

namespace detail {

/// Spatial hash over the real and imaginary parts of the first two entries of
/// the first column. A point within `tol` of a stored point (in operator
/// norm, hence in every coordinate) lands in the same cell or in a neighbour
/// that the probe visits because the point lies within `tol` of that border.
class DedupHash {
 public:
  explicit DedupHash(double tol) : tol_(tol), cell_(std::max(64.0 * tol, 1e-9)) {}

  template <typename Visit>
  bool any_of_candidates(const Complex* m, int d, Visit&& visit) const {
    const auto coords = coordinates(m, d);
    std::array<std::array<std::int64_t, 3>, 4> options{};
    std::array<int, 4> counts{};
    for (int c = 0; c < 4; ++c) {
      const double x = coords[c];
      const auto cell = static_cast<std::int64_t>(std::floor(x / cell_));
      options[c][counts[c]++] = cell;
      if (x - static_cast<double>(cell) * cell_ <= tol_) options[c][counts[c]++] = cell - 1;
      if (static_cast<double>(cell + 1) * cell_ - x <= tol_) options[c][counts[c]++] = cell + 1;
    }
    for (int a = 0; a < counts[0]; ++a)
      for (int b = 0; b < counts[1]; ++b)
        for (int c = 0; c < counts[2]; ++c)
          for (int e = 0; e < counts[3]; ++e) {
            const auto it = buckets_.find(
                key({options[0][a], options[1][b], options[2][c], options[3][e]}));
            if (it == buckets_.end()) continue;
            for (std::uint32_t idx : it->second)
              if (visit(idx)) return true;
          }
    return false;
  }

  void insert(const Complex* m, int d, std::uint32_t idx) {
    const auto coords = coordinates(m, d);
    std::array<std::int64_t, 4> cells{};
    for (int c = 0; c < 4; ++c)
      cells[c] = static_cast<std::int64_t>(std::floor(coords[c] / cell_));
    buckets_[key(cells)].push_back(idx);
  }

 private:
  static std::array<double, 4> coordinates(const Complex* m, int d) {
    // Column-major: m[0] = (0,0), m[1] = (1,0).
    const Complex second = d > 1 ? m[1] : Complex(0.0, 0.0);
    return {m[0].real(), m[0].imag(), second.real(), second.imag()};
  }

  static std::uint64_t key(const std::array<std::int64_t, 4>& cells) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::int64_t c : cells) {
      h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0x100000001b3ull;
    }
    return h;
  }

  double tol_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets_;
};

}  // namespace detail

/// Breadth-first enumeration that stops, rather than throws, once
/// `max_entries` would be exceeded; check Net::complete().
inline Net enumerate_net_partial(const GateSet& gs, int n, double dedup_tol,
                                 std::size_t max_entries) {
  if (n < 0) throw std::invalid_argument("enumerate_net: length budget must be >= 0");
  if (!(dedup_tol >= 0.0)) throw std::invalid_argument("enumerate_net: dedup_tol must be >= 0");
  if (gs.size() == 0) throw std::invalid_argument("enumerate_net: empty gate set");
  if (max_entries == 0) throw std::invalid_argument("enumerate_net: max_entries must be positive");
  max_entries = std::min<std::size_t>(max_entries, std::numeric_limits<std::uint32_t>::max());

  const int d = gs.dim();
  const std::size_t dd = static_cast<std::size_t>(d) * d;
  const double sqrt_d = std::sqrt(static_cast<double>(d));

  Net net;
  net.gs_ = gs;
  net.max_length_ = n;
  net.tol_ = dedup_tol;

  std::vector<Matrix> letters;
  for (const auto& g : gs.generators()) {
    letters.push_back(g.matrix());
    letters.push_back(g.matrix().adjoint());
  }

  detail::DedupHash hash(dedup_tol);
  const Matrix id = Matrix::Identity(d, d);
  net.entries_.push_back({0, 0, 0});
  net.data_.assign(id.data(), id.data() + dd);
  hash.insert(net.data_.data(), d, 0);
  net.level_offsets_ = {0, 1};

  Matrix candidate(d, d);
  for (int length = 1; length <= n && net.complete_; ++length) {
    const std::size_t begin = net.level_offsets_[length - 1];
    const std::size_t end = net.level_offsets_[length];
    for (std::size_t p = begin; p < end && net.complete_; ++p) {
      const std::uint32_t last = net.entries_[p].code;
      for (std::uint32_t code = 0; code < letters.size(); ++code) {
        if (length > 1 && code == (last ^ 1u)) continue;
        candidate.noalias() = Eigen::Map<const Matrix>(net.data_.data() + p * dd, d, d) *
                              letters[code];
        const bool duplicate =
            hash.any_of_candidates(candidate.data(), d, [&](std::uint32_t idx) {
              const double f = net.frobenius_to(idx, candidate);
              if (f <= dedup_tol) return true;
              if (f > sqrt_d * dedup_tol) return false;
              return net.operator_to(idx, candidate) <= dedup_tol;
            });
        if (duplicate) continue;
        if (net.entries_.size() >= max_entries) {
          net.complete_ = false;
          break;
        }
        const auto idx = static_cast<std::uint32_t>(net.entries_.size());
        net.entries_.push_back({static_cast<std::uint32_t>(p), code,
                                static_cast<std::uint32_t>(length)});
        net.data_.insert(net.data_.end(), candidate.data(), candidate.data() + dd);
        hash.insert(candidate.data(), d, idx);
      }
    }
    net.level_offsets_.push_back(net.entries_.size());
  }
  net.build_index();
  return net;
}

/// All distinct matrices among reduced words of length <= n, each with a
/// shortest word. Throws BudgetExceeded past `max_entries`.
inline Net enumerate_net(const GateSet& gs, int n, double dedup_tol = kDefaultDedupTol,
                         std::size_t max_entries = kDefaultMaxEntries) {
  Net net = enumerate_net_partial(gs, n, dedup_tol, max_entries);
  if (!net.complete())
    throw BudgetExceeded("enumerate_net: entry budget exceeded at length budget " +
                             std::to_string(n),
                         net.size());
  return net;
}

struct NearestResult {
  std::size_t index = 0;
  Word word;
  double distance_op = 0.0;
  double distance_frob = 0.0;
};

/// Exact nearest entry in the requested metric. Frobenius queries go straight
/// to the index; operator-norm queries use op <= frob <= sqrt(d) op: the
/// op-nearest entry lies within sqrt(d) * op(frob-nearest) in Frobenius norm,
/// and every entry in that ball is rescored.
inline NearestResult nearest(const Net& net, const Unitary& target, MetricKind metric) {
  if (net.empty()) throw std::invalid_argument("nearest: empty net");
  if (net.dim() != target.dim()) throw DimensionMismatch("nearest", net.dim(), target.dim());
  const Matrix& q = target.matrix();
  auto frob = [&](std::size_t i) { return net.frobenius_to(i, q); };
  const auto hit = net.index().nearest(frob);
  std::size_t best = hit->index;
  double best_op = net.operator_to(best, q);
  if (metric == MetricKind::op) {
    const double radius = std::sqrt(static_cast<double>(net.dim())) * best_op;
    for (const auto& c : net.index().within(frob, radius * (1.0 + 1e-12) + 1e-15)) {
      const double o = net.operator_to(c.index, q);
      if (o < best_op || (o == best_op && c.index < best)) {
        best = c.index;
        best_op = o;
      }
    }
  }
  return {best, net.word(best), best_op, net.frobenius_to(best, q)};
}

/// Linear scan; same contract as nearest().
inline NearestResult nearest_exhaustive(const Net& net, const Unitary& target,
                                        MetricKind metric) {
  if (net.empty()) throw std::invalid_argument("nearest: empty net");
  if (net.dim() != target.dim()) throw DimensionMismatch("nearest", net.dim(), target.dim());
  const Matrix& q = target.matrix();
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < net.size(); ++i) {
    const double d =
        metric == MetricKind::op ? net.operator_to(i, q) : net.frobenius_to(i, q);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return {best, net.word(best), net.operator_to(best, q), net.frobenius_to(best, q)};
}

/// CSV: word, then re/im of each entry in row-major order.
inline void write_net_csv(std::ostream& out, const Net& net) {
  const int d = net.dim();
  out << "word";
  for (int r = 1; r <= d; ++r)
    for (int c = 1; c <= d; ++c) out << ",re_" << r << '_' << c << ",im_" << r << '_' << c;
  out << '\n';
  std::ostringstream line;
  line.precision(17);
  for (std::size_t i = 0; i < net.size(); ++i) {
    line.str("");
    line << to_string(net.word(i));
    const auto m = net.matrix(i);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) line << ',' << m(r, c).real() << ',' << m(r, c).imag();
    out << line.str() << '\n';
  }
}

namespace detail {

inline constexpr char kNetMagic[8] = {'G', 'F', 'N', 'E', 'T', '0', '0', '1'};

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("net cache: truncated file");
  return v;
}

}  // namespace detail

inline void Net::write_binary(std::ostream& out) const {
  out.write(detail::kNetMagic, sizeof detail::kNetMagic);
  detail::write_pod(out, content_hash(gs_));
  detail::write_pod(out, static_cast<std::int32_t>(max_length_));
  detail::write_pod(out, tol_);
  detail::write_pod(out, static_cast<std::uint8_t>(complete_));
  detail::write_pod(out, static_cast<std::uint64_t>(entries_.size()));
  detail::write_pod(out, static_cast<std::uint64_t>(level_offsets_.size()));
  for (std::size_t o : level_offsets_) detail::write_pod(out, static_cast<std::uint64_t>(o));
  out.write(reinterpret_cast<const char*>(entries_.data()),
            static_cast<std::streamsize>(entries_.size() * sizeof(Entry)));
  out.write(reinterpret_cast<const char*>(data_.data()),
            static_cast<std::streamsize>(data_.size() * sizeof(Complex)));
}

inline Net Net::read_binary(std::istream& in, const GateSet& gs) {
  char magic[sizeof detail::kNetMagic];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, detail::kNetMagic, sizeof magic) != 0)
    throw std::runtime_error("net cache: bad magic");
  if (detail::read_pod<std::uint64_t>(in) != content_hash(gs))
    throw std::runtime_error("net cache: gate set hash mismatch");
  Net net;
  net.gs_ = gs;
  net.max_length_ = detail::read_pod<std::int32_t>(in);
  net.tol_ = detail::read_pod<double>(in);
  net.complete_ = detail::read_pod<std::uint8_t>(in) != 0;
  const auto count = detail::read_pod<std::uint64_t>(in);
  const auto levels = detail::read_pod<std::uint64_t>(in);
  if (levels > 1u << 20 || count > std::numeric_limits<std::uint32_t>::max())
    throw std::runtime_error("net cache: corrupt header");
  for (std::uint64_t i = 0; i < levels; ++i)
    net.level_offsets_.push_back(static_cast<std::size_t>(detail::read_pod<std::uint64_t>(in)));
  net.entries_.resize(count);
  in.read(reinterpret_cast<char*>(net.entries_.data()),
          static_cast<std::streamsize>(count * sizeof(Entry)));
  net.data_.resize(count * static_cast<std::size_t>(gs.dim()) * gs.dim());
  in.read(reinterpret_cast<char*>(net.data_.data()),
          static_cast<std::streamsize>(net.data_.size() * sizeof(Complex)));
  if (!in) throw std::runtime_error("net cache: truncated file");
  net.build_index();
  return net;
}

}  // namespace gateforge
