#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include "dcopt/types.hpp"

namespace dcopt {

template <typename Scalar>
struct MinNormResult {
  SupportPoint<Scalar> point;  // the projection (a*, v*)
  VectorX<Scalar> weights;     // convex coefficients over the input vertices
  Scalar norm{};
  int iterations = 0;
};

/// Projection of the origin onto the convex hull of a raw point set.
template <typename Scalar>
struct VecProjection {
  VectorX<Scalar> point;
  VectorX<Scalar> weights;
  Scalar norm{};
  int iterations = 0;
};

namespace detail {

// min ||B mu||^2 subject to sum(mu) = 1 over the columns of B, via the
// bordered Gram system; falls back to a ridge when the system is singular.
template <typename Scalar>
VectorX<Scalar> affine_minimizer(const MatrixX<Scalar>& b) {
  const Index k = b.cols();
  MatrixX<Scalar> kkt(k + 1, k + 1);
  kkt.topLeftCorner(k, k) = b.transpose() * b;
  kkt.topRightCorner(k, 1).setOnes();
  kkt.bottomLeftCorner(1, k).setOnes();
  kkt(k, k) = Scalar(0);
  VectorX<Scalar> rhs = VectorX<Scalar>::Zero(k + 1);
  rhs[k] = Scalar(1);

  Eigen::FullPivLU<MatrixX<Scalar>> lu(kkt);
  VectorX<Scalar> sol;
  bool ok = lu.isInvertible();
  if (ok) {
    sol = lu.solve(rhs);
    ok = ((kkt * sol - rhs).norm() <= Scalar(1e-8) * (Scalar(1) + rhs.norm()));
  }
  if (!ok) {
    kkt.topLeftCorner(k, k).diagonal().array() += Scalar(tol::kRidge);
    sol = MatrixX<Scalar>(kkt).fullPivLu().solve(rhs);
  }
  return sol.head(k);
}

// Wolfe's minimum-norm-point method over the columns of `pts`.
template <typename Scalar>
VecProjection<Scalar> min_norm_point_of_columns(const MatrixX<Scalar>& pts) {
  const Index n = pts.cols();
  const Scalar stop = Scalar(tol::kMinNorm);

  // Start from the shortest input point.
  Index start = 0;
  pts.colwise().squaredNorm().minCoeff(&start);
  std::vector<Index> corral{start};
  VectorX<Scalar> lambda = VectorX<Scalar>::Ones(1);
  VectorX<Scalar> x = pts.col(start);

  int iters = 0;
  const int max_major = 32 * static_cast<int>(n) + 64;
  while (iters++ < max_major) {
    // Most violating vertex of the stopping test max_q <x, x - q>.
    Index j = 0;
    (pts.transpose() * x).minCoeff(&j);
    if (x.squaredNorm() - x.dot(pts.col(j)) <= stop * (Scalar(1) + x.squaredNorm())) break;
    bool already = false;
    for (Index c : corral)
      if (c == j) { already = true; break; }
    if (already) break; // no further progress possible

    corral.push_back(j);
    VectorX<Scalar> ext(lambda.size() + 1);
    ext.head(lambda.size()) = lambda;
    ext[lambda.size()] = Scalar(0);
    lambda = ext;

    // Minor cycles: project onto the affine hull, clip back to the simplex.
    for (;;) {
      MatrixX<Scalar> b(pts.rows(), static_cast<Index>(corral.size()));
      for (Index i = 0; i < b.cols(); ++i) b.col(i) = pts.col(corral[static_cast<std::size_t>(i)]);
      VectorX<Scalar> mu = affine_minimizer(b);
      if ((mu.array() >= Scalar(-1e-12)).all()) {
        lambda = mu.cwiseMax(Scalar(0));
        x = b * lambda;
        break;
      }
      Scalar theta = Scalar(1);
      for (Index i = 0; i < mu.size(); ++i) {
        if (mu[i] < Scalar(0) && lambda[i] > mu[i])
          theta = std::min(theta, lambda[i] / (lambda[i] - mu[i]));
      }
      lambda = (Scalar(1) - theta) * lambda + theta * mu;
      std::vector<Index> next;
      std::vector<Scalar> next_w;
      for (Index i = 0; i < lambda.size(); ++i) {
        if (lambda[i] > Scalar(1e-12)) {
          next.push_back(corral[static_cast<std::size_t>(i)]);
          next_w.push_back(lambda[i]);
        }
      }
      if (next.empty()) { // fully degenerate; keep the best single point
        Index best = corral.front();
        next.push_back(best);
        next_w.push_back(Scalar(1));
      }
      corral = next;
      lambda.resize(static_cast<Index>(next_w.size()));
      for (Index i = 0; i < lambda.size(); ++i) lambda[i] = next_w[static_cast<std::size_t>(i)];
      lambda /= lambda.sum();
    }
  }

  VecProjection<Scalar> out;
  out.weights = VectorX<Scalar>::Zero(n);
  for (Index i = 0; i < static_cast<Index>(corral.size()); ++i)
    out.weights[corral[static_cast<std::size_t>(i)]] += lambda[i];
  out.weights /= out.weights.sum();
  out.point = pts * out.weights;
  out.norm = out.point.norm();
  out.iterations = iters;
  return out;
}

} // namespace detail

/// Euclidean projection of the origin onto conv(P) with a convex-combination
/// certificate. Satisfies the variational inequality <p, q - p> >= -1e-8 for
/// every vertex q, and ||p|| <= ||q||.
template <typename Scalar>
MinNormResult<Scalar> min_norm_point(const Polytope<Scalar>& p) {
  auto raw = detail::min_norm_point_of_columns<Scalar>(p.lifted());
  MinNormResult<Scalar> out;
  out.point = SupportPoint<Scalar>::from_lifted(raw.point);
  out.weights = std::move(raw.weights);
  out.norm = raw.norm;
  out.iterations = raw.iterations;
  return out;
}

/// Projection of the origin onto the convex hull of the slope vectors alone
/// (the R x {0} boundedness test of support sets).
template <typename Scalar>
VecProjection<Scalar> min_norm_of_slopes(const Polytope<Scalar>& p) {
  return detail::min_norm_point_of_columns<Scalar>(MatrixX<Scalar>(p.slopes()));
}

using MinNormResultd = MinNormResult<double>;

} // namespace dcopt
