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

// Core SU(d) machinery: the checked Unitary type, the two distance metrics,
// Haar sampling, Haar volumes of operator-norm balls and the telescoping
// ("hybrid") product bound.

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gateforge/error.hpp"
#include "gateforge/random.hpp"

namespace gateforge {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Tolerance on ||U^dag U - I||_F and |det U - 1| for a valid Unitary.
inline constexpr double kUnitaryTol = 1e-10;

inline double unitarity_error(const Matrix& m) {
  return (m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())).norm();
}

inline double determinant_error(const Matrix& m) {
  return std::abs(m.determinant() - Complex(1.0, 0.0));
}

/// A d x d complex matrix in SU(d). Construction is checked; a matrix that
/// misses either tolerance is rejected, never repaired.
class Unitary {
 public:
  Unitary() : m_(Matrix::Identity(1, 1)) {}

  static Unitary from_matrix(Matrix m) {
    if (m.rows() != m.cols() || m.rows() < 1)
      throw NotSpecialUnitary("matrix is not square");
    const double ue = unitarity_error(m);
    if (ue > kUnitaryTol)
      throw NotSpecialUnitary("matrix is not unitary (||U^dag U - I||_F = " +
                              std::to_string(ue) + ")");
    const double de = determinant_error(m);
    if (de > kUnitaryTol)
      throw NotSpecialUnitary("determinant is not one (|det U - 1| = " +
                              std::to_string(de) + ")");
    return Unitary(std::move(m));
  }

  static Unitary identity(int d) {
    return Unitary(Matrix::Identity(d, d));
  }

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const noexcept { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }

  Unitary adjoint() const { return Unitary(m_.adjoint()); }

  friend Unitary operator*(const Unitary& a, const Unitary& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("product", a.dim(), b.dim());
    return Unitary(a.m_ * b.m_);
  }

 private:
  explicit Unitary(Matrix m) : m_(std::move(m)) {}

  Matrix m_;
};

enum class MetricKind { op, frobenius };

inline const char* to_string(MetricKind k) {
  return k == MetricKind::op ? "op" : "frobenius";
}

/// Largest singular value.
inline double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

inline double dist(const Unitary& u, const Unitary& v, MetricKind metric) {
  if (u.dim() != v.dim()) throw DimensionMismatch("dist", u.dim(), v.dim());
  const Matrix diff = u.matrix() - v.matrix();
  return metric == MetricKind::op ? operator_norm(diff) : diff.norm();
}

/// [[e^{ia} cos t, e^{ib} sin t], [-e^{-ib} sin t, e^{-ia} cos t]]
inline Unitary su2_from_angles(double alpha, double beta, double theta) {
  Matrix m(2, 2);
  m(0, 0) = std::polar(1.0, alpha) * std::cos(theta);
  m(0, 1) = std::polar(1.0, beta) * std::sin(theta);
  m(1, 0) = -std::polar(1.0, -beta) * std::sin(theta);
  m(1, 1) = std::polar(1.0, -alpha) * std::cos(theta);
  return Unitary::from_matrix(std::move(m));
}

/// Haar-random element of SU(d): complex Ginibre matrix, QR with the phases
/// of diag(R) moved into Q, then division by the principal d-th root of det.
inline Unitary haar_sample(int d, Rng& rng) {
  if (d < 2) throw std::invalid_argument("haar_sample: d must be >= 2");
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix z(d, d);
  for (int c = 0; c < d; ++c)
    for (int r = 0; r < d; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(r, c) = Complex(re, im);
    }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix& packed = qr.matrixQR();
  for (int k = 0; k < d; ++k) {
    const Complex rkk = packed(k, k);
    const double a = std::abs(rkk);
    if (a > 0.0) q.col(k) *= rkk / a;
  }
  const double phase = std::arg(q.determinant());
  q *= std::polar(1.0, -phase / d);
  return Unitary::from_matrix(std::move(q));
}

/// Nearest element of SU(d) to a near-unitary matrix: the polar factor, with
/// its determinant phase divided out along the principal branch.
inline Matrix project_to_special_unitary(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix p = svd.matrixU() * svd.matrixV().adjoint();
  const double phase = std::arg(p.determinant());
  p *= std::polar(1.0, -phase / static_cast<double>(m.rows()));
  return p;
}

/// Running mean and variance (Welford).
class SampleStats {
 public:
  void add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  std::size_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  /// Unbiased sample variance; zero below two samples.
  double variance() const noexcept {
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
  }
  double standard_error() const noexcept {
    return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_))
                      : 0.0;
  }

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Haar measure of {U in SU(2) : |U - I|_op < r}. An element with eigenphases
/// +-a sits at distance 2 sin(a/2) from I, and a has density (2/pi) sin^2 a.
inline double ball_volume_su2(double r) {
  if (!(r >= 0.0 && r <= 2.0))
    throw std::out_of_range("ball_volume_su2: r must lie in [0, 2]");
  if (r == 0.0) return 0.0;
  const double upper = 2.0 * std::asin(std::min(1.0, r / 2.0));
  auto density = [](double a) {
    const double s = std::sin(a);
    return (2.0 / std::numbers::pi) * s * s;
  };
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      density, 0.0, upper, 12, 1e-14);
  return std::clamp(v, 0.0, 1.0);
}

inline double distance_to_identity(const Unitary& u) {
  return operator_norm(u.matrix() - Matrix::Identity(u.dim(), u.dim()));
}

/// Monte-Carlo estimate of the Haar volume of op-norm balls around I, one
/// estimate per radius from a shared sample.
inline std::vector<SampleStats> ball_volume_monte_carlo(
    int d, std::span<const double> radii, std::size_t samples, Rng& rng) {
  std::vector<SampleStats> stats(radii.size());
  for (std::size_t s = 0; s < samples; ++s) {
    const double r = distance_to_identity(haar_sample(d, rng));
    for (std::size_t i = 0; i < radii.size(); ++i)
      stats[i].add(r < radii[i] ? 1.0 : 0.0);
  }
  return stats;
}

/// Bracketing constants k1 <= V(r) / r^(d^2-1) <= k2 over radii in (0, r0].
struct VolumeConstants {
  int d = 2;
  double r0 = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
};

struct MonteCarloOptions {
  std::size_t samples = 200000;
  std::uint64_t seed = 1;
};

/// Evenly spaced radii r0/points, 2 r0/points, ..., r0.
inline std::vector<double> radius_grid(double r0, int points) {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(std::max(points, 0)));
  for (int i = 1; i <= points; ++i) grid.push_back(r0 * i / points);
  return grid;
}

inline VolumeConstants volume_constants_fit(int d, double r0,
                                            std::span<const double> grid,
                                            MonteCarloOptions mc = {}) {
  if (d < 2) throw std::invalid_argument("volume_constants_fit: d must be >= 2");
  if (grid.empty()) throw std::invalid_argument("volume_constants_fit: empty grid");
  if (!(r0 > 0.0 && r0 <= 2.0))
    throw std::invalid_argument("volume_constants_fit: r0 must lie in (0, 2]");
  for (double r : grid)
    if (!(r > 0.0 && r <= r0))
      throw std::invalid_argument("volume_constants_fit: grid radius outside (0, r0]");

  const double power = static_cast<double>(d * d - 1);
  std::vector<double> volume(grid.size());
  if (d == 2) {
    std::transform(grid.begin(), grid.end(), volume.begin(), ball_volume_su2);
  } else {
    Rng rng = make_rng(mc.seed);
    const auto stats = ball_volume_monte_carlo(d, grid, mc.samples, rng);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (stats[i].mean() <= 0.0)
        throw std::runtime_error(
            "volume_constants_fit: no Monte-Carlo sample fell inside radius " +
            std::to_string(grid[i]) + "; raise the sample count");
      volume[i] = stats[i].mean();
    }
  }

  VolumeConstants out{d, r0, INFINITY, 0.0};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double ratio = volume[i] / std::pow(grid[i], power);
    out.k1 = std::min(out.k1, ratio);
    out.k2 = std::max(out.k2, ratio);
  }
  return out;
}

struct HybridGap {
  double gap = 0.0;
  double bound = 0.0;
};

/// Compares U_m...U_1 with V_m...V_1: gap is their op distance, bound the sum
/// of factorwise op distances. gap <= bound always.
inline HybridGap hybrid_gap(std::span<const Unitary> us,
                            std::span<const Unitary> vs) {
  if (us.size() != vs.size())
    throw std::invalid_argument("hybrid_gap: lists differ in length");
  if (us.empty()) return {};
  const int d = us.front().dim();
  Matrix pu = Matrix::Identity(d, d);
  Matrix pv = Matrix::Identity(d, d);
  double bound = 0.0;
  for (std::size_t i = 0; i < us.size(); ++i) {
    if (us[i].dim() != d) throw DimensionMismatch("hybrid_gap", d, us[i].dim());
    if (vs[i].dim() != d) throw DimensionMismatch("hybrid_gap", d, vs[i].dim());
    pu = us[i].matrix() * pu;
    pv = vs[i].matrix() * pv;
    bound += dist(us[i], vs[i], MetricKind::op);
  }
  return {operator_norm(pu - pv), bound};
}

}  // namespace gateforge
