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

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gateforge/su_core.hpp"

namespace gateforge {

/// An ordered, labelled list of SU(d) generators. Inverses are implicit.
class GateSet {
 public:
  GateSet() = default;

  GateSet(int dim, std::vector<Unitary> generators,
          std::vector<std::string> labels)
      : dim_(dim),
        generators_(std::move(generators)),
        labels_(std::move(labels)) {
    if (dim_ < 1) throw std::invalid_argument("GateSet: dim must be positive");
    if (generators_.size() != labels_.size())
      throw std::invalid_argument("GateSet: one label per generator required");
    for (const auto& g : generators_)
      if (g.dim() != dim_) throw DimensionMismatch("GateSet", dim_, g.dim());
    std::set<std::string> seen;
    for (const auto& l : labels_)
      if (!seen.insert(l).second)
        throw std::invalid_argument("GateSet: duplicate label '" + l + "'");
  }

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return generators_.size(); }
  const std::vector<Unitary>& generators() const noexcept { return generators_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const Unitary& operator[](std::size_t i) const { return generators_.at(i); }

 private:
  int dim_ = 0;
  std::vector<Unitary> generators_;
  std::vector<std::string> labels_;
};

/// V1 = [[1, 2i], [2i, 1]] / sqrt5, V2 = [[1, 2], [-2, 1]] / sqrt5,
/// V3 = diag(1 + 2i, 1 - 2i) / sqrt5.
inline GateSet lps_generators() {
  const double s = 1.0 / std::sqrt(5.0);
  const Complex one(s, 0.0);
  const Complex two(2.0 * s, 0.0);
  const Complex two_i(0.0, 2.0 * s);

  Matrix v1(2, 2), v2(2, 2), v3(2, 2);
  v1 << one, two_i, two_i, one;
  v2 << one, two, -two, one;
  v3 << Complex(s, 2.0 * s), Complex(0.0, 0.0), Complex(0.0, 0.0),
      Complex(s, -2.0 * s);
  return GateSet(2,
                 {Unitary::from_matrix(v1), Unitary::from_matrix(v2),
                  Unitary::from_matrix(v3)},
                 {"V1", "V2", "V3"});
}

/// I_{j-2} (+) u (+) I_{d-j}: u acts on basis vectors j-1 and j (1-based).
inline Unitary beta_embed(const Unitary& u, int j, int d) {
  if (u.dim() != 2) throw DimensionMismatch("beta_embed", 2, u.dim());
  if (j < 2 || j > d)
    throw std::out_of_range("beta_embed: need 2 <= j <= d (j = " +
                            std::to_string(j) + ", d = " + std::to_string(d) +
                            ")");
  Matrix m = Matrix::Identity(d, d);
  m.block(j - 2, j - 2, 2, 2) = u.matrix();
  return Unitary::from_matrix(std::move(m));
}

/// The SU(d) family built from the LPS gates: beta_j(V) for j in 2..d and
/// V in {V1, V2, V3}; 3(d-1) generators labelled "b<j>(V<i>)".
inline GateSet gd_generators(int d) {
  if (d < 2) throw std::invalid_argument("gd_generators: d must be >= 2");
  const GateSet lps = lps_generators();
  if (d == 2) return lps;
  std::vector<Unitary> gens;
  std::vector<std::string> labels;
  for (int j = 2; j <= d; ++j)
    for (std::size_t i = 0; i < lps.size(); ++i) {
      gens.push_back(beta_embed(lps[i], j, d));
      labels.push_back("b" + std::to_string(j) + "(" + lps.labels()[i] + ")");
    }
  return GateSet(d, std::move(gens), std::move(labels));
}

/// Two commuting phase gates, diag(e^{i pi/8}, e^{-i pi/8}) and
/// diag(e^{i}, e^{-i}). They generate a dense subgroup of the diagonal torus
/// only, so the set is not universal.
inline GateSet diagonal_gateset() {
  auto phase = [](double a) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = std::polar(1.0, a);
    m(1, 1) = std::polar(1.0, -a);
    return Unitary::from_matrix(std::move(m));
  };
  return GateSet(2, {phase(std::numbers::pi / 8.0), phase(1.0)}, {"P1", "P2"});
}

/// Moves every generator by at most delta in operator norm: G' = G exp(tH) for
/// a random traceless skew-hermitian direction H (uniform on the Frobenius
/// unit sphere), with t chosen so that |G' - G|_op = delta.
inline GateSet perturb(const GateSet& gs, double delta, Rng& rng) {
  if (!(delta >= 0.0)) throw std::invalid_argument("perturb: delta must be >= 0");
  if (delta == 0.0) return gs;
  const int d = gs.dim();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Unitary> out;
  out.reserve(gs.size());
  for (const auto& g : gs.generators()) {
    Matrix z(d, d);
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < d; ++r) {
        const double re = normal(rng);
        const double im = normal(rng);
        z(r, c) = Complex(re, im);
      }
    Matrix herm = (z + z.adjoint()) / 2.0;
    herm -= (herm.trace() / static_cast<double>(d)) * Matrix::Identity(d, d);
    herm /= herm.norm();

    Eigen::SelfAdjointEigenSolver<Matrix> eig(herm);
    const Eigen::VectorXd& k = eig.eigenvalues();
    const double kmax = k.cwiseAbs().maxCoeff();
    double t = 2.0 * std::asin(std::min(delta, 2.0) / 2.0) / kmax;

    Unitary moved = g;
    double shrink = 1e-12;
    for (int attempt = 0; attempt < 40; ++attempt, shrink *= 2.0) {
      Eigen::VectorXcd phases(d);
      for (int i = 0; i < d; ++i) phases(i) = std::polar(1.0, t * k(i));
      const Matrix step =
          eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
      moved = Unitary::from_matrix(g.matrix() * step);
      if (dist(g, moved, MetricKind::op) <= delta) break;
      t *= 1.0 - shrink;
    }
    out.push_back(std::move(moved));
  }
  return GateSet(d, std::move(out), gs.labels());
}

// ---------------------------------------------------------------------------
// Gate-set files

/// Tolerance the gate-set parser allows on ||U^dag U - I||_F and |det U - 1|.
inline constexpr double kParseUnitaryTol = 1e-8;

class GateSetError : public std::runtime_error {
 public:
  enum class Kind { malformed, non_unitary, dimension_mismatch };

  GateSetError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Text form: {"dim": d, "generators": [{"label": s, "matrix": [[re, im], ...]}]}
/// with each matrix given row-major as d*d [re, im] pairs.
inline std::string serialize_gateset(const GateSet& gs) {
  nlohmann::ordered_json doc;
  doc["dim"] = gs.dim();
  doc["generators"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < gs.size(); ++i) {
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    const Matrix& m = gs[i].matrix();
    for (int r = 0; r < gs.dim(); ++r)
      for (int c = 0; c < gs.dim(); ++c)
        entries.push_back({m(r, c).real(), m(r, c).imag()});
    doc["generators"].push_back(
        {{"label", gs.labels()[i]}, {"matrix", std::move(entries)}});
  }
  return doc.dump(2) + "\n";
}

inline GateSet parse_gateset(std::string_view text) {
  using Kind = GateSetError::Kind;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw GateSetError(Kind::malformed, std::string("gate set: ") + e.what());
  }
  auto malformed = [](const std::string& msg) {
    return GateSetError(Kind::malformed, "gate set: " + msg);
  };
  if (!doc.is_object()) throw malformed("top level must be an object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer())
    throw malformed("\"dim\" must be an integer");
  const int d = doc["dim"].get<int>();
  if (d < 1) throw malformed("\"dim\" must be positive");
  if (!doc.contains("generators") || !doc["generators"].is_array() ||
      doc["generators"].empty())
    throw malformed("\"generators\" must be a non-empty list");

  std::vector<Unitary> gens;
  std::vector<std::string> labels;
  std::set<std::string> seen;
  for (const auto& g : doc["generators"]) {
    if (!g.is_object() || !g.contains("label") || !g["label"].is_string())
      throw malformed("every generator needs a string \"label\"");
    std::string label = g["label"].get<std::string>();
    if (!seen.insert(label).second) throw malformed("duplicate label '" + label + "'");
    if (!g.contains("matrix") || !g["matrix"].is_array())
      throw malformed("generator '" + label + "' needs a \"matrix\" list");
    const auto& entries = g["matrix"];
    if (entries.size() != static_cast<std::size_t>(d) * d)
      throw GateSetError(Kind::dimension_mismatch,
                         "gate set: generator '" + label + "' has " +
                             std::to_string(entries.size()) +
                             " entries, expected " + std::to_string(d * d));
    Matrix m(d, d);
    for (std::size_t e = 0; e < entries.size(); ++e) {
      const auto& z = entries[e];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        throw malformed("generator '" + label +
                        "': every entry must be a [re, im] pair of numbers");
      m(static_cast<int>(e) / d, static_cast<int>(e) % d) =
          Complex(z[0].get<double>(), z[1].get<double>());
    }
    const double ue = unitarity_error(m);
    const double de = determinant_error(m);
    if (ue > kParseUnitaryTol || de > kParseUnitaryTol) {
      std::ostringstream msg;
      msg << "gate set: generator '" << label << "' is not in SU(" << d
          << ") (||U^dag U - I||_F = " << ue << ", |det U - 1| = " << de << ")";
      throw GateSetError(Kind::non_unitary, msg.str());
    }
    if (ue > kUnitaryTol || de > kUnitaryTol) m = project_to_special_unitary(m);
    gens.push_back(Unitary::from_matrix(std::move(m)));
    labels.push_back(std::move(label));
  }
  return GateSet(d, std::move(gens), std::move(labels));
}

/// 64-bit FNV-1a of the serialized form; identifies a gate set in cache keys.
inline std::uint64_t content_hash(const GateSet& gs) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : serialize_gateset(gs)) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string content_hash_hex(const GateSet& gs) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << content_hash(gs);
  return out.str();
}

}  // namespace gateforge
