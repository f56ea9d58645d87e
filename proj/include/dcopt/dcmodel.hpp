#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "dcopt/expr.hpp"
#include "dcopt/geometry.hpp"
#include "dcopt/supportset.hpp"
#include "dcopt/types.hpp"

namespace dcopt {

/// A piecewise-affine DC function f = f1 - f2 held as the affine support
/// sets of its convex components: f(x) = max over S_plus - max over S_minus.
template <typename Scalar>
struct DCFunction {
  Index dim{};
  Polytope<Scalar> s_plus;
  Polytope<Scalar> s_minus;
  std::optional<Expr<Scalar>> source;

  DCFunction(Index d, Polytope<Scalar> plus, Polytope<Scalar> minus)
      : dim(d), s_plus(std::move(plus)), s_minus(std::move(minus)) {}
};

/// Codifferential pair of f at a base point, produced by shifting the
/// component support sets: increments satisfy
///   f(x + dx) - f(x) = max_{(a,v) in hypo} (a + <v,dx>)
///                    + min_{(b,w) in hyper} (b + <w,dx>),
/// with max a over hypo = 0 and min b over hyper = 0.
template <typename Scalar>
struct CodiffPair {
  Polytope<Scalar> hypo;
  Polytope<Scalar> hyper;
  VectorX<Scalar> base_point;
  Scalar f_at_base{};
};

template <typename Scalar>
Scalar evaluate(const DCFunction<Scalar>& f, const VectorX<Scalar>& x) {
  return eval_support(f.s_plus, x) - eval_support(f.s_minus, x);
}

namespace detail {

template <typename Scalar>
struct DCPair {
  Polytope<Scalar> plus;
  Polytope<Scalar> minus;
};

template <typename Scalar>
DCPair<Scalar> dc_pair_of(const Expr<Scalar>& e, Index dim, Index prune_threshold,
                          const std::string& path);

// Minkowski sum over a list of polytopes, starting from {0}.
template <typename Scalar>
Polytope<Scalar> sum_all(const std::vector<Polytope<Scalar>>& parts, Index dim,
                         Index prune_threshold) {
  Polytope<Scalar> acc = Polytope<Scalar>::origin(dim);
  for (const auto& p : parts) acc = minkowski_sum(acc, p, prune_threshold);
  return acc;
}

// Max rule: plus = conv_i( plus_i + sum_{j != i} minus_j ),
//           minus = sum_i minus_i. The min rule is its mirror.
template <typename Scalar>
DCPair<Scalar> max_rule(const std::vector<DCPair<Scalar>>& parts, Index dim,
                        Index prune_threshold) {
  std::vector<Polytope<Scalar>> branches;
  branches.reserve(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    Polytope<Scalar> branch = parts[i].plus;
    for (std::size_t j = 0; j < parts.size(); ++j)
      if (j != i) branch = minkowski_sum(branch, parts[j].minus, prune_threshold);
    branches.push_back(std::move(branch));
  }
  std::vector<Polytope<Scalar>> minuses;
  minuses.reserve(parts.size());
  for (const auto& p : parts) minuses.push_back(p.minus);
  return {conv_union(std::span<const Polytope<Scalar>>(branches), prune_threshold),
          sum_all(minuses, dim, prune_threshold)};
}

template <typename Scalar>
DCPair<Scalar> min_rule(const std::vector<DCPair<Scalar>>& parts, Index dim,
                        Index prune_threshold) {
  std::vector<DCPair<Scalar>> negated;
  negated.reserve(parts.size());
  for (const auto& p : parts) negated.push_back({p.minus, p.plus});
  auto swapped = max_rule(negated, dim, prune_threshold);
  return {std::move(swapped.minus), std::move(swapped.plus)};
}

// DC pair of the negated child. Constants and affine leaves remain
// single-point convex parts under negation; everything else swaps the pair.
template <typename Scalar>
DCPair<Scalar> negate_pair(const Expr<Scalar>& child, DCPair<Scalar> c) {
  if (child.kind() == ExprKind::kConst || child.kind() == ExprKind::kAffine)
    return {Polytope<Scalar>(MatrixX<Scalar>(-c.plus.lifted())), std::move(c.minus)};
  return {std::move(c.minus), std::move(c.plus)};
}

template <typename Scalar>
DCPair<Scalar> dc_pair_of(const Expr<Scalar>& e, Index dim, Index prune_threshold,
                          const std::string& path) {
  switch (e.kind()) {
    case ExprKind::kConst:
      return {Polytope<Scalar>::singleton(e.scalar(), VectorX<Scalar>::Zero(dim)),
              Polytope<Scalar>::origin(dim)};
    case ExprKind::kAffine:
      if (e.slope().size() != dim)
        throw std::invalid_argument("build_dc: affine leaf of dimension " +
                                    std::to_string(e.slope().size()) + " at " + path +
                                    " (expected " + std::to_string(dim) + ")");
      return {Polytope<Scalar>::singleton(e.intercept(), e.slope()),
              Polytope<Scalar>::origin(dim)};
    case ExprKind::kNeg: {
      const auto& child = e.children()[0];
      return negate_pair(child, dc_pair_of(child, dim, prune_threshold, path + ".neg"));
    }
    case ExprKind::kAbs: {
      // |e| = max{e, -e}
      const auto& child = e.children()[0];
      auto c = dc_pair_of(child, dim, prune_threshold, path + ".abs");
      auto n = negate_pair(child, c);
      return max_rule<Scalar>({std::move(c), std::move(n)}, dim, prune_threshold);
    }
    case ExprKind::kScale: {
      auto c = dc_pair_of(e.children()[0], dim, prune_threshold, path + ".scale");
      const Scalar k = e.scalar();
      if (k >= Scalar(0)) return {scale(c.plus, k), scale(c.minus, k)};
      return {scale(c.minus, -k), scale(c.plus, -k)};
    }
    case ExprKind::kSum:
    case ExprKind::kMax:
    case ExprKind::kMin: {
      std::vector<DCPair<Scalar>> parts;
      parts.reserve(e.children().size());
      const char* tag = e.kind() == ExprKind::kSum ? ".sum[" : (e.kind() == ExprKind::kMax ? ".max[" : ".min[");
      for (std::size_t i = 0; i < e.children().size(); ++i)
        parts.push_back(dc_pair_of(e.children()[i], dim, prune_threshold,
                                   path + tag + std::to_string(i) + "]"));
      if (e.kind() == ExprKind::kMax) return max_rule(parts, dim, prune_threshold);
      if (e.kind() == ExprKind::kMin) return min_rule(parts, dim, prune_threshold);
      std::vector<Polytope<Scalar>> pluses, minuses;
      for (auto& p : parts) {
        pluses.push_back(std::move(p.plus));
        minuses.push_back(std::move(p.minus));
      }
      return {sum_all(pluses, dim, prune_threshold), sum_all(minuses, dim, prune_threshold)};
    }
  }
  throw std::logic_error("build_dc: corrupted node kind");
}

} // namespace detail

/// Builds the DC decomposition of a piecewise-affine expression at the
/// support-set level: sums become Minkowski sums, maxima and minima the
/// cross-shifted hull rules, scaling swaps the pair on negative factors.
template <typename Scalar>
DCFunction<Scalar> build_dc(const Expr<Scalar>& e, Index dim,
                            Index prune_threshold = kAutoPruneThreshold) {
  if (dim < 1) throw std::invalid_argument("build_dc: dimension must be >= 1");
  auto pair = detail::dc_pair_of(e, dim, prune_threshold, "root");
  DCFunction<Scalar> f(dim, std::move(pair.plus), std::move(pair.minus));
  f.source = e;
  return f;
}

/// Codifferential of f at x through the shift formula:
///   hypo  = { (a - f1(x) + <v, x>, v)  : (a, v) in S_plus  }
///   hyper = { (-b + f2(x) - <w, x>, -w) : (b, w) in S_minus }.
template <typename Scalar>
CodiffPair<Scalar> global_codifferential(const DCFunction<Scalar>& f, const VectorX<Scalar>& x) {
  if (x.size() != f.dim) throw std::invalid_argument("global_codifferential: dimension mismatch");
  const Scalar f1 = eval_support(f.s_plus, x);
  const Scalar f2 = eval_support(f.s_minus, x);

  MatrixX<Scalar> hypo = f.s_plus.lifted();
  hypo.row(0) += (x.transpose() * f.s_plus.slopes()).eval();
  hypo.row(0).array() -= f1;

  MatrixX<Scalar> hyper = -f.s_minus.lifted();
  hyper.row(0) -= (x.transpose() * f.s_minus.slopes()).eval();
  hyper.row(0).array() += f2;

  return {Polytope<Scalar>(std::move(hypo)), Polytope<Scalar>(std::move(hyper)), x, f1 - f2};
}

/// Canonical finite set C with cl co C = hyper: the extreme points of the
/// hyperdifferential at x, in lexicographic order.
template <typename Scalar>
std::vector<SupportPoint<Scalar>> hyper_extreme_points(const DCFunction<Scalar>& f,
                                                       const VectorX<Scalar>& x) {
  auto pts = prune_to_extreme(global_codifferential(f, x).hyper).vertices();
  std::sort(pts.begin(), pts.end(), lex_less<Scalar>);
  return pts;
}

using DCFunctiond = DCFunction<double>;
using CodiffPaird = CodiffPair<double>;

} // namespace dcopt
