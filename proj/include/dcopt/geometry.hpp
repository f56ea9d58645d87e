#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "dcopt/linprog.hpp"
#include "dcopt/types.hpp"

namespace dcopt {

/// Support function of conv(P) in a direction of R^{1+d}:
/// max_k ( dir.a * a_k + <dir.v, v_k> ).
template <typename Scalar>
Scalar support_value(const Polytope<Scalar>& p, const SupportPoint<Scalar>& dir) {
  if (dir.dim() != p.dim()) throw std::invalid_argument("support_value: dimension mismatch");
  return (p.lifted().transpose() * dir.lifted()).maxCoeff();
}

namespace detail {

// Drops duplicate columns (Euclidean distance <= tol::kDedup).
template <typename Scalar>
MatrixX<Scalar> dedup_columns(const MatrixX<Scalar>& pts) {
  std::vector<Index> keep;
  for (Index k = 0; k < pts.cols(); ++k) {
    bool dup = false;
    for (Index j : keep) {
      if ((pts.col(k) - pts.col(j)).norm() <= Scalar(tol::kDedup)) { dup = true; break; }
    }
    if (!dup) keep.push_back(k);
  }
  MatrixX<Scalar> out(pts.rows(), static_cast<Index>(keep.size()));
  for (Index i = 0; i < out.cols(); ++i) out.col(i) = pts.col(keep[static_cast<std::size_t>(i)]);
  return out;
}

// LP feasibility: is `target` a convex combination of the columns of `pts`?
template <typename Scalar>
bool in_convex_hull(const MatrixX<Scalar>& pts, const VectorX<Scalar>& target) {
  const Index n = pts.cols();
  auto lp = LpProblem<Scalar>::with_simplex_vars(n);
  lp.constraints.resize(pts.rows() + 1, n);
  lp.constraints.topRows(pts.rows()) = pts;
  lp.constraints.row(pts.rows()).setOnes();
  lp.rhs.resize(pts.rows() + 1);
  lp.rhs.head(pts.rows()) = target;
  lp.rhs[pts.rows()] = Scalar(1);
  lp.relations.assign(static_cast<std::size_t>(pts.rows() + 1), LpRelation::kEq);
  return solve_lp(lp).status == LpStatus::kOptimal;
}

} // namespace detail

/// Keeps exactly the extreme points of conv(P.vertices): a vertex is removed
/// iff it is a convex combination of the remaining ones (LP-certified).
/// Idempotent and hull-preserving.
template <typename Scalar>
Polytope<Scalar> prune_to_extreme(const Polytope<Scalar>& p) {
  MatrixX<Scalar> pts = detail::dedup_columns(p.lifted());
  std::vector<bool> keep(static_cast<std::size_t>(pts.cols()), true);
  Index kept = pts.cols();
  for (Index k = 0; k < pts.cols() && kept > 1; ++k) {
    MatrixX<Scalar> others(pts.rows(), kept - 1);
    Index c = 0;
    for (Index j = 0; j < pts.cols(); ++j)
      if (j != k && keep[static_cast<std::size_t>(j)]) others.col(c++) = pts.col(j);
    if (detail::in_convex_hull<Scalar>(others, pts.col(k))) {
      keep[static_cast<std::size_t>(k)] = false;
      --kept;
    }
  }
  MatrixX<Scalar> out(pts.rows(), kept);
  Index c = 0;
  for (Index j = 0; j < pts.cols(); ++j)
    if (keep[static_cast<std::size_t>(j)]) out.col(c++) = pts.col(j);
  return Polytope<Scalar>(std::move(out));
}

namespace detail {

template <typename Scalar>
Polytope<Scalar> maybe_prune(Polytope<Scalar> p, Index threshold) {
  if (p.vertex_count() > threshold) return prune_to_extreme(p);
  return p;
}

} // namespace detail

/// conv(P) + conv(Q): vertex candidates are all pairwise sums.
template <typename Scalar>
Polytope<Scalar> minkowski_sum(const Polytope<Scalar>& p, const Polytope<Scalar>& q,
                               Index prune_threshold = kAutoPruneThreshold) {
  if (p.dim() != q.dim()) throw std::invalid_argument("minkowski_sum: dimension mismatch");
  MatrixX<Scalar> out(p.lifted().rows(), p.vertex_count() * q.vertex_count());
  Index c = 0;
  for (Index i = 0; i < p.vertex_count(); ++i)
    for (Index j = 0; j < q.vertex_count(); ++j) out.col(c++) = p.lifted().col(i) + q.lifted().col(j);
  return detail::maybe_prune(Polytope<Scalar>(std::move(out)), prune_threshold);
}

/// conv of the union of the parts: vertex lists concatenated.
template <typename Scalar>
Polytope<Scalar> conv_union(std::span<const Polytope<Scalar>> parts,
                            Index prune_threshold = kAutoPruneThreshold) {
  if (parts.empty()) throw std::invalid_argument("conv_union: empty part list");
  const Index d = parts.front().dim();
  Index total = 0;
  for (const auto& part : parts) {
    if (part.dim() != d) throw std::invalid_argument("conv_union: dimension mismatch");
    total += part.vertex_count();
  }
  MatrixX<Scalar> out(1 + d, total);
  Index c = 0;
  for (const auto& part : parts) {
    out.middleCols(c, part.vertex_count()) = part.lifted();
    c += part.vertex_count();
  }
  return detail::maybe_prune(Polytope<Scalar>(std::move(out)), prune_threshold);
}

template <typename Scalar>
Polytope<Scalar> conv_union(std::initializer_list<Polytope<Scalar>> parts,
                            Index prune_threshold = kAutoPruneThreshold) {
  return conv_union(std::span<const Polytope<Scalar>>(parts.begin(), parts.size()), prune_threshold);
}

/// Every vertex multiplied by k (both a and v); k = -1 is Minkowski negation.
template <typename Scalar>
Polytope<Scalar> scale(const Polytope<Scalar>& p, Scalar k) {
  if (!std::isfinite(k)) throw std::invalid_argument("scale: non-finite factor");
  return Polytope<Scalar>(MatrixX<Scalar>(k * p.lifted()));
}

/// Every vertex shifted by t.
template <typename Scalar>
Polytope<Scalar> translate(const Polytope<Scalar>& p, const SupportPoint<Scalar>& t) {
  if (t.dim() != p.dim()) throw std::invalid_argument("translate: dimension mismatch");
  return Polytope<Scalar>(MatrixX<Scalar>(p.lifted().colwise() + t.lifted()));
}

} // namespace dcopt
