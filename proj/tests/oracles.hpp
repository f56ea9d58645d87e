#pragma once

// Test-only oracles, independent of the library's solver paths: brute-force
// projection by subset enumeration, support-function hull comparison, grid
// scans, and deterministic random generators.

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "dcopt/geometry.hpp"
#include "dcopt/types.hpp"

namespace oracles {

using dcopt::Index;
using dcopt::MatrixX;
using dcopt::Polytope;
using dcopt::SupportPoint;
using dcopt::VectorX;

using Rng = std::mt19937_64;

inline VectorX<double> random_vector(Rng& rng, Index n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  VectorX<double> v(n);
  for (Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

inline VectorX<double> random_unit(Rng& rng, Index n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  VectorX<double> v(n);
  do {
    for (Index i = 0; i < n; ++i) v[i] = dist(rng);
  } while (v.norm() < 1e-6);
  return v / v.norm();
}

inline Polytope<double> random_polytope(Rng& rng, Index dim, Index max_vertices,
                                        double box = 2.0) {
  std::uniform_int_distribution<Index> count(1, max_vertices);
  const Index n = count(rng);
  MatrixX<double> pts(1 + dim, n);
  for (Index k = 0; k < n; ++k) pts.col(k) = random_vector(rng, 1 + dim, -box, box);
  return Polytope<double>(pts);
}

// Hull equality through support values in random unit directions.
inline bool hulls_equal(const Polytope<double>& p, const Polytope<double>& q, Rng& rng,
                        int directions = 100, double tol = 1e-8) {
  if (p.dim() != q.dim()) return false;
  for (int t = 0; t < directions; ++t) {
    const auto dir = SupportPoint<double>::from_lifted(random_unit(rng, 1 + p.dim()));
    if (std::abs(dcopt::support_value(p, dir) - dcopt::support_value(q, dir)) > tol) return false;
  }
  return true;
}

// Exact projection of the origin onto conv(columns) by enumerating every
// vertex subset, solving the KKT system on its affine hull, and keeping the
// feasible candidate of least norm. Input is normalized to unit size first
// so the fixed tolerances below stay meaningful at any scale.
inline VectorX<double> brute_force_min_norm(const MatrixX<double>& raw) {
  const double unit = std::max(1.0, raw.colwise().norm().maxCoeff());
  const MatrixX<double> pts = raw / unit;
  const Index n = pts.cols();
  double best = std::numeric_limits<double>::infinity();
  VectorX<double> best_point = pts.col(0);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<Index> idx;
    for (Index j = 0; j < n; ++j)
      if (mask & (std::uint64_t{1} << j)) idx.push_back(j);
    MatrixX<double> b(pts.rows(), static_cast<Index>(idx.size()));
    for (Index i = 0; i < b.cols(); ++i) b.col(i) = pts.col(idx[static_cast<std::size_t>(i)]);
    const Index k = b.cols();
    MatrixX<double> kkt(k + 1, k + 1);
    kkt.topLeftCorner(k, k) = b.transpose() * b;
    kkt.topRightCorner(k, 1).setOnes();
    kkt.bottomLeftCorner(1, k).setOnes();
    kkt(k, k) = 0.0;
    VectorX<double> rhs = VectorX<double>::Zero(k + 1);
    rhs[k] = 1.0;
    Eigen::FullPivLU<MatrixX<double>> lu(kkt);
    if (!lu.isInvertible()) continue;
    VectorX<double> mu = lu.solve(rhs).head(k);
    if ((mu.array() < -1e-9).any()) continue;
    const VectorX<double> cand = b * mu;
    if (cand.norm() < best) {
      best = cand.norm();
      best_point = cand;
    }
  }
  return best_point;
}

// 1-D grid minimization of a callable over [lo, hi].
template <typename F>
double grid_min_1d(F&& f, double lo, double hi, int steps = 20001) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < steps; ++i) {
    const double x = lo + (hi - lo) * i / (steps - 1);
    best = std::min(best, f(x));
  }
  return best;
}

template <typename F>
double grid_argmin_1d(F&& f, double lo, double hi, int steps = 20001) {
  double best = std::numeric_limits<double>::infinity();
  double arg = lo;
  for (int i = 0; i < steps; ++i) {
    const double x = lo + (hi - lo) * i / (steps - 1);
    const double v = f(x);
    if (v < best) {
      best = v;
      arg = x;
    }
  }
  return arg;
}

} // namespace oracles
