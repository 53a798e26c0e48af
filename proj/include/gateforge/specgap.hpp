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

// Spectral gap of the averaging operator T(A) = (1/2|A|) sum (A~ + A~^-1).
//
// On L^2(SU(2)) the operator splits into finite blocks, one per irreducible
// representation (spin j, dimension 2j + 1). The constants live entirely in
// the two_j = 0 block, so |T - P| is the supremum of the block norms over
// two_j >= 1. Computing blocks up to a cutoff gives a lower bound on it.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "gateforge/gatesets.hpp"

namespace gateforge {

/// Largest two_j the lift supports in double precision.
inline constexpr int kMaxTwoJ = 60;

/// sqrt(5)/3, the gap parameter of the LPS generators.
inline const double kLpsLambda = std::sqrt(5.0) / 3.0;

/// Spin-(two_j/2) representation of u in the orthonormal weight basis
/// |k> ~ sqrt(C(N,k)) x^(N-k) y^k of degree-N polynomials, N = two_j:
///   D(k', k) = sqrt(C(N,k)/C(N,k')) [x^(N-k') y^k'] (a x + c y)^(N-k) (b x + d y)^k
/// where u = [[a, b], [c, d]]. two_j = 1 reproduces u.
inline Unitary irrep_lift(const Unitary& u, int two_j) {
  if (u.dim() != 2) throw DimensionMismatch("irrep_lift", 2, u.dim());
  if (two_j < 0 || two_j > kMaxTwoJ)
    throw std::out_of_range("irrep_lift: two_j must lie in [0, " +
                            std::to_string(kMaxTwoJ) + "]");
  using LComplex = std::complex<long double>;
  const int n = two_j;
  const auto sz = static_cast<std::size_t>(n + 1);

  std::vector<std::vector<long double>> binom(sz, std::vector<long double>(sz, 0.0L));
  for (int i = 0; i <= n; ++i) {
    binom[i][0] = binom[i][i] = 1.0L;
    for (int k = 1; k < i; ++k) binom[i][k] = binom[i - 1][k - 1] + binom[i - 1][k];
  }
  auto powers = [&](Complex z) {
    std::vector<LComplex> p(sz);
    p[0] = 1.0L;
    for (int i = 1; i <= n; ++i) p[i] = p[i - 1] * LComplex(z.real(), z.imag());
    return p;
  };
  const auto pa = powers(u(0, 0));
  const auto pb = powers(u(0, 1));
  const auto pc = powers(u(1, 0));
  const auto pd = powers(u(1, 1));

  Matrix out(n + 1, n + 1);
  for (int k = 0; k <= n; ++k) {
    const int p = n - k;
    for (int kp = 0; kp <= n; ++kp) {
      LComplex acc = 0.0L;
      for (int s = std::max(0, kp - k); s <= std::min(p, kp); ++s) {
        const int t = kp - s;
        acc += binom[p][s] * binom[k][t] * pa[p - s] * pc[s] * pb[k - t] * pd[t];
      }
      acc *= std::sqrt(binom[n][k] / binom[n][kp]);
      out(kp, k) = Complex(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
    }
  }
  return Unitary::from_matrix(std::move(out));
}

/// The hermitian block of T(A) on one irreducible representation.
struct MixingBlock {
  int two_j = 0;
  Matrix matrix;
};

inline MixingBlock mixing_block(const GateSet& gs, int two_j) {
  if (gs.dim() != 2) throw DimensionMismatch("mixing_block", 2, gs.dim());
  if (gs.size() == 0) throw std::invalid_argument("mixing_block: empty gate set");
  Matrix sum = Matrix::Zero(two_j + 1, two_j + 1);
  for (const auto& g : gs.generators()) {
    const Matrix lifted = irrep_lift(g, two_j).matrix();
    sum += lifted + lifted.adjoint();
  }
  sum /= 2.0 * static_cast<double>(gs.size());
  return {two_j, std::move(sum)};
}

/// Largest absolute eigenvalue of the (hermitian) block.
inline double block_norm(const MixingBlock& b) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(b.matrix, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

struct GapEstimate {
  int two_j_max = 0;
  std::vector<double> block_norms;  // block_norms[i] belongs to two_j = i + 1
  double lambda_hat = 0.0;
};

/// Max block norm over 1 <= two_j <= two_j_max: a lower bound on |T - P|.
inline GapEstimate lambda_estimate(const GateSet& gs, int two_j_max) {
  if (two_j_max < 1) throw std::invalid_argument("lambda_estimate: two_j_max must be >= 1");
  GapEstimate est;
  est.two_j_max = two_j_max;
  for (int tj = 1; tj <= two_j_max; ++tj) {
    est.block_norms.push_back(block_norm(mixing_block(gs, tj)));
    est.lambda_hat = std::max(est.lambda_hat, est.block_norms.back());
  }
  return est;
}

/// True when gs holds exactly the three LPS generators, in order.
inline bool is_lps(const GateSet& gs) {
  const GateSet lps = lps_generators();
  if (gs.dim() != 2 || gs.size() != lps.size()) return false;
  for (std::size_t i = 0; i < gs.size(); ++i)
    if ((gs[i].matrix() - lps[i].matrix()).cwiseAbs().maxCoeff() > 1e-12) return false;
  return true;
}

/// CSV of per-block norms followed by a lambda_hat summary line and, when
/// given, the known reference value.
inline void write_gap_csv(std::ostream& out, const GapEstimate& est,
                          std::optional<double> reference = std::nullopt) {
  std::ostringstream body;
  body.precision(17);
  body << "two_j,block_norm\n";
  for (std::size_t i = 0; i < est.block_norms.size(); ++i)
    body << i + 1 << ',' << est.block_norms[i] << '\n';
  body << "lambda_hat," << est.lambda_hat << '\n';
  if (reference) body << "reference," << *reference << '\n';
  out << body.str();
}

// ---------------------------------------------------------------------------
// SU(d) composition bound

inline double pairs(int d) { return 0.5 * d * (d - 1); }

/// Smallest m >= 1 with C(d,2) lambda^m < 1.
inline int minimal_m(int d, double lambda) {
  if (d < 2) throw std::invalid_argument("minimal_m: d must be >= 2");
  if (!(lambda < 1.0)) throw std::domain_error("minimal_m: lambda must be < 1");
  if (!(lambda > 0.0)) throw std::domain_error("minimal_m: lambda must be > 0");
  int m = 1;
  while (pairs(d) * std::pow(lambda, m) >= 1.0) ++m;
  return m;
}

struct Prop4Bound {
  double word_block_bound = 0.0;  // bound on |T^(m C(d,2)) - P| for the d-level set
  double per_step_bound = 0.0;    // its (m C(d,2))-th root: a bound on Lambda
  // 1 - word_block_bound, computed directly. For d >= 4 the bounds themselves
  // round to 1.0 in double precision while this stays positive.
  double word_gap = 0.0;
  double log_per_step_bound = 0.0;  // ln(per_step_bound) = ln(1 - word_gap) / (m C(d,2))
};

/// Words built as products of C(d,2) embedded length-m LPS words are a
/// fraction (d-1)^(-m C(d,2)) of all words of that length, and average to
/// within C(d,2) lambda^m of Haar. Hence
///   |T^(mC) - P| <= 1 - (d-1)^(-mC) (1 - C lambda^m),  C = C(d,2).
inline Prop4Bound prop4_bound(int d, int m, double lambda) {
  if (m < minimal_m(d, lambda))
    throw std::domain_error("prop4_bound: m is below minimal_m(d, lambda); bound would be >= 1");
  const double c = pairs(d);
  const double steps = static_cast<double>(m) * c;
  const double fraction = std::exp(-steps * std::log(static_cast<double>(d - 1)));
  Prop4Bound out;
  out.word_gap = fraction * (1.0 - c * std::pow(lambda, m));
  out.word_block_bound = 1.0 - out.word_gap;
  out.log_per_step_bound = std::log1p(-out.word_gap) / steps;
  out.per_step_bound = std::exp(out.log_per_step_bound);
  return out;
}

}  // namespace gateforge
