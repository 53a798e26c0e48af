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

#include <catch2/catch_amalgamated.hpp>
#include <fstream>
#include <sstream>

#include "gateforge/compiler.hpp"
#include "gateforge/gatesets.hpp"
#include "test_util.hpp"

using namespace gateforge;
using Catch::Approx;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

SCENARIO("LPS generators") {
  const GateSet lps = lps_generators();
  REQUIRE(lps.size() == 3);
  REQUIRE(lps.dim() == 2);
  const double s = 1.0 / std::sqrt(5.0);
  const Complex i(0.0, 1.0);

  Matrix v1(2, 2);
  v1 << 1.0, 2.0 * i, 2.0 * i, 1.0;
  REQUIRE(test::max_entry_diff(lps[0].matrix(), s * v1) < 1e-16);
  Matrix v2(2, 2);
  v2 << 1.0, 2.0, -2.0, 1.0;
  REQUIRE(test::max_entry_diff(lps[1].matrix(), s * v2) < 1e-16);
  Matrix v3 = Matrix::Zero(2, 2);
  v3(0, 0) = 1.0 + 2.0 * i;
  v3(1, 1) = 1.0 - 2.0 * i;
  REQUIRE(test::max_entry_diff(lps[2].matrix(), s * v3) < 1e-16);

  for (const auto& v : lps.generators()) {
    REQUIRE(unitarity_error(v.matrix()) < 1e-12);
    REQUIRE(determinant_error(v.matrix()) < 1e-12);
    REQUIRE(std::abs(v.matrix().trace() - Complex(2.0 * s, 0.0)) < 1e-15);
  }
  REQUIRE(lps.labels() == std::vector<std::string>{"V1", "V2", "V3"});
}

SCENARIO("Block embedding") {
  Rng rng = make_rng(8);
  const Unitary u = haar_sample(2, rng);
  REQUIRE(beta_embed(u, 2, 2).matrix() == u.matrix());

  const Matrix b = beta_embed(u, 3, 3).matrix();
  REQUIRE(b(0, 0) == Complex(1.0, 0.0));
  REQUIRE(b.row(0).tail(2).isZero());
  REQUIRE(b.col(0).tail(2).isZero());
  REQUIRE(b.block(1, 1, 2, 2) == u.matrix());

  for (int d = 2; d <= 5; ++d)
    for (int j = 2; j <= d; ++j)
      REQUIRE(beta_embed(Unitary::identity(2), j, d).matrix() == Matrix::Identity(d, d));

  REQUIRE_THROWS_AS(beta_embed(u, 1, 3), std::out_of_range);
  REQUIRE_THROWS_AS(beta_embed(u, 4, 3), std::out_of_range);
  REQUIRE_THROWS_AS(beta_embed(Unitary::identity(3), 2, 3), DimensionMismatch);

  WHEN("composing in the SU(2) slot") {
    for (int trial = 0; trial < 50; ++trial) {
      const Unitary x = haar_sample(2, rng);
      const Unitary y = haar_sample(2, rng);
      for (int j = 2; j <= 4; ++j) {
        const Matrix lhs = beta_embed(x * y, j, 4).matrix();
        const Matrix rhs = (beta_embed(x, j, 4) * beta_embed(y, j, 4)).matrix();
        REQUIRE(test::max_entry_diff(lhs, rhs) < 1e-12);
      }
    }
  }
}

SCENARIO("The d-level family") {
  REQUIRE(serialize_gateset(gd_generators(2)) == serialize_gateset(lps_generators()));
  REQUIRE_THROWS(gd_generators(1));

  const GateSet g3 = gd_generators(3);
  REQUIRE(g3.size() == 6);
  const GateSet lps = lps_generators();
  for (std::size_t i = 0; i < 3; ++i) {
    REQUIRE(g3[i].matrix() == beta_embed(lps[i], 2, 3).matrix());
    REQUIRE(g3[3 + i].matrix() == beta_embed(lps[i], 3, 3).matrix());
  }
  REQUIRE(g3.labels()[0] == "b2(V1)");
  REQUIRE(g3.labels()[5] == "b3(V3)");

  for (int d = 2; d <= 6; ++d) {
    const GateSet gd = gd_generators(d);
    REQUIRE(gd.size() == static_cast<std::size_t>(3 * (d - 1)));
    for (std::size_t a = 0; a < gd.size(); ++a) {
      REQUIRE(unitarity_error(gd[a].matrix()) <= kUnitaryTol);
      REQUIRE(determinant_error(gd[a].matrix()) <= kUnitaryTol);
      for (std::size_t b = a + 1; b < gd.size(); ++b)
        REQUIRE(dist(gd[a], gd[b], MetricKind::op) > 1e-6);
    }
  }
}

SCENARIO("Perturbing a gate set") {
  Rng rng = make_rng(4);
  const GateSet g3 = gd_generators(3);
  WHEN("delta = 0") {
    const GateSet same = perturb(g3, 0.0, rng);
    REQUIRE(serialize_gateset(same) == serialize_gateset(g3));
  }
  WHEN("delta > 0") {
    for (double delta : {1e-6, 1e-3, 0.1, 0.7}) {
      const GateSet moved = perturb(g3, delta, rng);
      REQUIRE(moved.labels() == g3.labels());
      for (std::size_t i = 0; i < g3.size(); ++i) {
        const double d = dist(g3[i], moved[i], MetricKind::op);
        REQUIRE(d <= delta);
        REQUIRE(d == Approx(delta).epsilon(1e-9));
        REQUIRE(unitarity_error(moved[i].matrix()) <= 1e-10);
        REQUIRE(determinant_error(moved[i].matrix()) <= 1e-10);
      }
    }
  }
  WHEN("negative delta") { REQUIRE_THROWS(perturb(g3, -1.0, rng)); }
  WHEN("a word is evaluated over both sets") {
    const double delta = 1e-3;
    const GateSet lps = lps_generators();
    const GateSet moved = perturb(lps, delta, rng);
    for (int n : {1, 5, 20, 40}) {
      const Word w = random_reduced_word(lps.size(), n, rng);
      std::vector<Unitary> us, vs;
      for (const Letter& l : w.letters) {
        us.push_back(l.sign > 0 ? lps[l.generator] : lps[l.generator].adjoint());
        vs.push_back(l.sign > 0 ? moved[l.generator] : moved[l.generator].adjoint());
      }
      const HybridGap h = hybrid_gap(us, vs);
      REQUIRE(h.gap <= n * delta);
      REQUIRE(h.gap <= h.bound);
    }
  }
}

SCENARIO("Gate-set files") {
  const GateSet lps = lps_generators();
  WHEN("round-tripping") {
    for (const GateSet& gs : {lps, gd_generators(4)}) {
      const GateSet back = parse_gateset(serialize_gateset(gs));
      REQUIRE(back.dim() == gs.dim());
      REQUIRE(back.labels() == gs.labels());
      for (std::size_t i = 0; i < gs.size(); ++i)
        REQUIRE(test::max_entry_diff(back[i].matrix(), gs[i].matrix()) <= 1e-12);
    }
  }
  WHEN("reading the bundled LPS fixture") {
    const GateSet fixture = parse_gateset(read_file(GATEFORGE_DATA_DIR "/gatesets/lps.json"));
    REQUIRE(fixture.labels() == lps.labels());
    for (std::size_t i = 0; i < lps.size(); ++i)
      REQUIRE(test::max_entry_diff(fixture[i].matrix(), lps[i].matrix()) <= 1e-15);
  }
  auto kind_of = [](const std::string& text) {
    try {
      parse_gateset(text);
    } catch (const GateSetError& e) {
      return e.kind();
    }
    FAIL("expected a GateSetError");
    return GateSetError::Kind::malformed;
  };
  WHEN("the syntax is broken") {
    REQUIRE(kind_of("{\"dim\": 2, ") == GateSetError::Kind::malformed);
    REQUIRE(kind_of("[]") == GateSetError::Kind::malformed);
    REQUIRE(kind_of("{\"dim\": 2}") == GateSetError::Kind::malformed);
    REQUIRE(kind_of(R"({"dim": 1, "generators": [{"label": "a", "matrix": [[1, 0, 0]]}]})") ==
            GateSetError::Kind::malformed);
    REQUIRE(kind_of(R"({"dim": 1, "generators": [{"label": "a", "matrix": [[1, 0]]},
                                                 {"label": "a", "matrix": [[1, 0]]}]})") ==
            GateSetError::Kind::malformed);
  }
  WHEN("the entry count does not match dim") {
    REQUIRE(kind_of(R"({"dim": 2, "generators": [{"label": "a", "matrix": [[1, 0], [0, 0], [1, 0]]}]})") ==
            GateSetError::Kind::dimension_mismatch);
  }
  WHEN("a matrix is far from unitary") {
    // diag(a, 1/a) has det 1 and ||U^dag U - I||_F = 0.1 for this a.
    const double a = std::sqrt(1.0 + 0.1 / std::sqrt(2.0));
    REQUIRE(std::abs(std::hypot(a * a - 1.0, 1.0 / (a * a) - 1.0) - 0.1) < 5e-3);
    std::ostringstream text;
    text.precision(17);
    text << R"({"dim": 2, "generators": [{"label": "a", "matrix": [[)" << a
         << ", 0], [0, 0], [0, 0], [" << 1.0 / a << ", 0]]}]}";
    REQUIRE(kind_of(text.str()) == GateSetError::Kind::non_unitary);
  }
  WHEN("a matrix has determinant -1") {
    REQUIRE(kind_of(R"({"dim": 2, "generators": [{"label": "x", "matrix": [[0, 0], [1, 0], [1, 0], [0, 0]]}]})") ==
            GateSetError::Kind::non_unitary);
  }
  WHEN("a matrix is unitary to 1e-9 only") {
    const double c = std::cos(0.3) * (1.0 + 2e-10);
    const double s = std::sin(0.3);
    std::ostringstream text;
    text.precision(17);
    text << R"({"dim": 2, "generators": [{"label": "r", "matrix": [[)" << c << ", 0], [" << s
         << ", 0], [" << -s << ", 0], [" << c << ", 0]]}]}";
    const GateSet gs = parse_gateset(text.str());
    REQUIRE(unitarity_error(gs[0].matrix()) <= kUnitaryTol);
    REQUIRE(std::abs(gs[0](0, 0).real() - std::cos(0.3)) < 1e-9);
  }
  WHEN("hashing content") {
    REQUIRE(content_hash(lps) == content_hash(parse_gateset(serialize_gateset(lps))));
    REQUIRE(content_hash(lps) != content_hash(gd_generators(3)));
    REQUIRE(content_hash_hex(lps).size() == 16);
  }
}
