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
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gateforge/compiler.hpp"
#include "gateforge/words.hpp"
#include "test_util.hpp"

using namespace gateforge;

namespace {

Word w(std::initializer_list<std::pair<int, int>> letters) {
  Word out;
  for (auto [g, s] : letters) out.letters.push_back({static_cast<std::uint32_t>(g - 1), s});
  return out;
}

// Every reduced word of length <= n, in length order.
std::vector<Word> all_reduced_words(std::size_t k, int n) {
  std::vector<Word> out{Word{}};
  std::size_t begin = 0;
  for (int len = 1; len <= n; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (std::uint32_t g = 0; g < k; ++g)
        for (int s : {1, -1}) {
          const Letter l{g, s};
          if (!out[i].empty() && out[i].letters.back() == l.inverse()) continue;
          Word next = out[i];
          next.letters.push_back(l);
          out.push_back(std::move(next));
        }
    begin = end;
  }
  return out;
}

// Quadratic dedup in operator norm, keeping first (hence shortest) words.
std::vector<Matrix> brute_force_image(const GateSet& gs, int n, double tol) {
  std::vector<Matrix> kept;
  for (const Word& word : all_reduced_words(gs.size(), n)) {
    const Matrix m = evaluate(word, gs).matrix();
    bool seen = false;
    for (const Matrix& k : kept)
      if (operator_norm(k - m) <= tol) {
        seen = true;
        break;
      }
    if (!seen) kept.push_back(m);
  }
  return kept;
}

}  // namespace

SCENARIO("Evaluating and reducing words") {
  const GateSet lps = lps_generators();
  REQUIRE(evaluate(Word{}, lps).matrix() == Matrix::Identity(2, 2));
  REQUIRE(evaluate(w({{1, 1}}), lps).matrix() == lps[0].matrix());
  REQUIRE(test::max_entry_diff(evaluate(w({{1, 1}, {1, -1}}), lps).matrix(),
                               Matrix::Identity(2, 2)) < 1e-15);
  REQUIRE(test::max_entry_diff(evaluate(w({{1, 1}, {2, -1}}), lps).matrix(),
                               lps[0].matrix() * lps[1].matrix().adjoint()) < 1e-15);
  REQUIRE_THROWS_AS(evaluate(w({{4, 1}}), lps), std::out_of_range);

  REQUIRE(reduce(w({{1, 1}, {1, -1}})).empty());
  REQUIRE(reduce(w({{1, 1}, {2, 1}, {2, -1}, {1, 1}})) == w({{1, 1}, {1, 1}}));
  REQUIRE(reduce(w({{1, 1}, {2, 1}, {2, -1}, {1, -1}, {3, 1}})) == w({{3, 1}}));
  const Word reduced = w({{1, 1}, {2, -1}, {3, 1}, {3, 1}});
  REQUIRE(reduce(reduced) == reduced);
  REQUIRE(reduced.is_reduced());
  REQUIRE_FALSE(w({{2, -1}, {2, 1}}).is_reduced());

  WHEN("reducing random words") {
    Rng rng = make_rng(17);
    std::uniform_int_distribution<int> gen(1, 3), sign(0, 1), len(0, 30);
    for (int trial = 0; trial < 200; ++trial) {
      Word x;
      for (int i = len(rng); i > 0; --i)
        x.letters.push_back({static_cast<std::uint32_t>(gen(rng) - 1), sign(rng) ? 1 : -1});
      const Word r = reduce(x);
      REQUIRE(r.is_reduced());
      REQUIRE(reduce(r) == r);
      REQUIRE(test::max_entry_diff(evaluate(r, lps).matrix(), evaluate(x, lps).matrix()) < 1e-12);
      REQUIRE(reduce(x + x.inverse()).empty());
    }
  }
  WHEN("writing and reading text") {
    REQUIRE(to_string(w({{1, 1}, {2, -1}, {3, 1}})) == "1.-2.3");
    REQUIRE(to_string(Word{}).empty());
    REQUIRE(parse_word("1.-2.3") == w({{1, 1}, {2, -1}, {3, 1}}));
    REQUIRE(parse_word("").empty());
    for (const char* bad : {"0", "1..2", "a", "1.", "-", "1.2x"})
      REQUIRE_THROWS_AS(parse_word(bad), std::invalid_argument);
  }
}

SCENARIO("Net entry counts") {
  const GateSet lps = lps_generators();
  REQUIRE(enumerate_net(lps, 0).size() == 1);

  WHEN("checked against quadratic dedup") {
    for (int n = 1; n <= 4; ++n) {
      const auto image = brute_force_image(lps, n, kDefaultDedupTol);
      const Net net = enumerate_net(lps, n);
      REQUIRE(net.size() == image.size());
    }
    REQUIRE(enumerate_net(lps, 1).size() == 7);
    REQUIRE(enumerate_net(lps, 4).size() == 937);
  }
  WHEN("checked against the free-group count") {
    const Net net = enumerate_net(lps, 6);
    std::size_t expected = 1;
    std::size_t per_length = 6;
    for (int m = 1; m <= 6; ++m) {
      REQUIRE(net.count_at_length(m) == per_length);
      expected += per_length;
      per_length *= 5;
    }
    REQUIRE(net.size() == expected);
    REQUIRE(net.size() == 23437);
  }
  WHEN("the gate set has relations") {
    // Diagonal gates commute, so many words collapse.
    const GateSet diag = diagonal_gateset();
    const Net net = enumerate_net(diag, 4);
    const auto image = brute_force_image(diag, 4, kDefaultDedupTol);
    REQUIRE(net.size() == image.size());
    REQUIRE(net.size() < 1 + 4 + 12 + 36 + 108);
  }
  WHEN("the budget is too small") {
    try {
      enumerate_net(lps, 5, kDefaultDedupTol, 100);
      FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
      REQUIRE(e.reached() == 100);
    }
    const Net partial = enumerate_net_partial(lps, 5, kDefaultDedupTol, 100);
    REQUIRE_FALSE(partial.complete());
    REQUIRE(partial.size() == 100);
  }
  REQUIRE_THROWS(enumerate_net(lps, -1));
  REQUIRE_THROWS(enumerate_net(lps, 2, -1.0));
}

SCENARIO("Net invariants") {
  for (const GateSet& gs : {lps_generators(), gd_generators(3)}) {
    const Net net = enumerate_net(gs, gs.dim() == 2 ? 5 : 3);
    const int d = gs.dim();
    REQUIRE(net.word(0).empty());
    REQUIRE(test::max_entry_diff(Matrix(net.matrix(0)), Matrix::Identity(d, d)) == 0.0);

    std::size_t prev_len = 0;
    for (std::size_t i = 0; i < net.size(); ++i) {
      const Word word = net.word(i);
      REQUIRE(word.is_reduced());
      REQUIRE(word.size() == net.word_length(i));
      REQUIRE(word.size() >= prev_len);
      prev_len = word.size();
      REQUIRE(test::max_entry_diff(evaluate(word, gs).matrix(), Matrix(net.matrix(i))) <= 1e-10);
      // Inverse closure.
      const Unitary inv = Unitary::from_matrix(Matrix(net.matrix(i)).adjoint());
      REQUIRE(nearest(net, inv, MetricKind::op).distance_op <= net.dedup_tol());
    }
  }
}

SCENARIO("Nearest-entry lookup") {
  const GateSet lps = lps_generators();
  const Net net = enumerate_net(lps, 5);
  WHEN("the target is an entry") {
    for (std::size_t i : {0u, 1u, 40u, 500u, 3000u}) {
      const auto hit = nearest(net, Unitary::from_matrix(Matrix(net.matrix(i))), MetricKind::op);
      REQUIRE(hit.index == i);
      REQUIRE(hit.distance_op == 0.0);
      REQUIRE(hit.word == net.word(i));
    }
  }
  WHEN("the target is V1 nudged by 1e-4") {
    Rng rng = make_rng(5);
    const GateSet moved = perturb(lps, 1e-4, rng);
    REQUIRE(dist(moved[0], lps[0], MetricKind::op) == Catch::Approx(1e-4).epsilon(1e-9));
    for (MetricKind metric : {MetricKind::op, MetricKind::frobenius}) {
      const auto hit = nearest(net, moved[0], metric);
      REQUIRE(hit.word == w({{1, 1}}));
      REQUIRE(hit.distance_op == Catch::Approx(1e-4).epsilon(1e-6));
      const auto scan = nearest_exhaustive(net, moved[0], metric);
      REQUIRE(scan.word == hit.word);
    }
  }
  WHEN("compared with a linear scan") {
    for (const GateSet& gs : {lps, gd_generators(3)}) {
      const Net n = gs.dim() == 2 ? net : enumerate_net(gs, 3);
      for (std::uint64_t t = 0; t < 100; ++t) {
        Rng rng = substream(99, t);
        const Unitary target = haar_sample(gs.dim(), rng);
        for (MetricKind metric : {MetricKind::op, MetricKind::frobenius}) {
          const auto fast = nearest(n, target, metric);
          const auto scan = nearest_exhaustive(n, target, metric);
          const double fd = metric == MetricKind::op ? fast.distance_op : fast.distance_frob;
          const double sd = metric == MetricKind::op ? scan.distance_op : scan.distance_frob;
          REQUIRE(fd <= sd + 1e-14);
          REQUIRE(fd >= sd - 1e-14);
        }
      }
    }
  }
  WHEN("the dimensions differ") {
    REQUIRE_THROWS_AS(nearest(net, Unitary::identity(3), MetricKind::op), DimensionMismatch);
  }
  WHEN("the net is empty") {
    REQUIRE_THROWS(nearest(Net{}, Unitary::identity(2), MetricKind::op));
  }
}

SCENARIO("Net files") {
  const GateSet lps = lps_generators();
  const Net net = enumerate_net(lps, 3);
  WHEN("round-tripping the binary form") {
    std::stringstream buf;
    net.write_binary(buf);
    const Net back = Net::read_binary(buf, lps);
    REQUIRE(back.size() == net.size());
    REQUIRE(back.max_length() == 3);
    for (std::size_t i = 0; i < net.size(); ++i) {
      REQUIRE(back.word(i) == net.word(i));
      REQUIRE(Matrix(back.matrix(i)) == Matrix(net.matrix(i)));
    }
    std::stringstream again;
    net.write_binary(again);
    REQUIRE_THROWS(Net::read_binary(again, gd_generators(3)));
    std::stringstream truncated(buf.str().substr(0, 40));
    REQUIRE_THROWS(Net::read_binary(truncated, lps));
  }
  WHEN("writing CSV") {
    std::ostringstream out;
    write_net_csv(out, net);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "word,re_1_1,im_1_1,re_1_2,im_1_2,re_2_1,im_2_1,re_2_2,im_2_2");
    std::getline(in, line);
    REQUIRE(line == ",1,0,0,0,0,0,1,0");
    std::getline(in, line);
    REQUIRE(line.rfind("1,", 0) == 0);
    std::size_t rows = 2;
    while (std::getline(in, line)) ++rows;
    REQUIRE(rows == net.size());
  }
  WHEN("going through a disk cache") {
    const auto dir = std::filesystem::temp_directory_path() / "gateforge_test_cache";
    std::filesystem::remove_all(dir);
    {
      NetCache cache(dir);
      REQUIRE(cache.get(lps, 4)->size() == 937);
    }
    REQUIRE(std::distance(std::filesystem::directory_iterator(dir),
                          std::filesystem::directory_iterator{}) == 1);
    NetCache reload(dir);
    const auto net4 = reload.get(lps, 4);
    REQUIRE(net4->size() == 937);
    REQUIRE(reload.get(lps, 4) == net4);
    std::filesystem::remove_all(dir);
  }
}
