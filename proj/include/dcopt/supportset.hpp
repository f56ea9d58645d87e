#pragma once

#include <optional>
#include <stdexcept>

#include "dcopt/geometry.hpp"
#include "dcopt/linprog.hpp"
#include "dcopt/minnorm.hpp"
#include "dcopt/types.hpp"

namespace dcopt {

/// f(x) = max over vertices of a + <v, x> (the sup is attained: finite set).
template <typename Scalar>
Scalar eval_support(const Polytope<Scalar>& s, const VectorX<Scalar>& x) {
  if (x.size() != s.dim()) throw std::invalid_argument("eval_support: dimension mismatch");
  return (s.intercepts().transpose() + s.slopes().transpose() * x).maxCoeff();
}

namespace detail {

// maximize sum(l_k a_k) s.t. sum(l_k v_k) = v over the unit simplex.
template <typename Scalar>
LpOutcome<Scalar> vertical_slice_lp(const Polytope<Scalar>& s, const VectorX<Scalar>& v) {
  const Index n = s.vertex_count();
  auto lp = LpProblem<Scalar>::with_simplex_vars(n);
  lp.objective = s.intercepts().transpose();
  lp.constraints.resize(s.dim() + 1, n);
  lp.constraints.topRows(s.dim()) = s.slopes();
  lp.constraints.row(s.dim()).setOnes();
  lp.rhs.resize(s.dim() + 1);
  lp.rhs.head(s.dim()) = v;
  lp.rhs[s.dim()] = Scalar(1);
  lp.relations.assign(static_cast<std::size_t>(s.dim() + 1), LpRelation::kEq);
  return solve_lp(lp);
}

} // namespace detail

/// sup{ a : (a, v) in conv(S) }, which equals -f*(v) for the Fenchel
/// conjugate f* of the supported function. nullopt when v is outside the
/// slope hull, i.e. v is not in dom f*.
template <typename Scalar>
std::optional<Scalar> conjugate_value(const Polytope<Scalar>& s, const VectorX<Scalar>& v) {
  if (v.size() != s.dim()) throw std::invalid_argument("conjugate_value: dimension mismatch");
  const auto out = detail::vertical_slice_lp(s, v);
  if (out.status != LpStatus::kOptimal) return std::nullopt;
  return *out.value;
}

/// Membership test for the eps-subdifferential at x: true iff some
/// (a, v) in conv(S) has a + <v, x> >= f(x) - eps.
template <typename Scalar>
bool eps_subdiff_contains(const Polytope<Scalar>& s, const VectorX<Scalar>& x, Scalar eps,
                          const VectorX<Scalar>& v) {
  if (eps < Scalar(0)) throw std::invalid_argument("eps_subdiff_contains: negative eps");
  const auto best = conjugate_value(s, v);
  if (!best) return false;
  return *best + v.dot(x) >= eval_support(s, x) - eps - Scalar(tol::kLp);
}

/// Bounded below iff the slope hull contains the origin.
template <typename Scalar>
bool is_bounded_below(const Polytope<Scalar>& s) {
  return min_norm_of_slopes(s).norm <= Scalar(tol::kSupport);
}

/// Greatest lower bound of the supported function; nullopt means -infinity.
template <typename Scalar>
std::optional<Scalar> infimum(const Polytope<Scalar>& s) {
  if (!is_bounded_below(s)) return std::nullopt;
  const VectorX<Scalar> zero = VectorX<Scalar>::Zero(s.dim());
  const auto out = detail::vertical_slice_lp(s, zero);
  if (out.status != LpStatus::kOptimal)
    throw std::logic_error("infimum: slice LP disagreed with the boundedness test");
  return *out.value;
}

namespace detail {

// Certified ray along which the supported function decreases without bound:
// the min-norm point u of the slope hull has <v_i, u> >= ||u||^2 for all i,
// so f(x - t u) <= f(x) - t ||u||^2.
template <typename Scalar>
VectorX<Scalar> unbounded_ray(const Polytope<Scalar>& s) {
  return min_norm_of_slopes(s).point;
}

} // namespace detail

/// A global minimizer when one exists, nullopt when the infimum is not
/// attained. Throws UnboundedError when the function is unbounded below.
template <typename Scalar>
std::optional<VectorX<Scalar>> attained_minimizer(const Polytope<Scalar>& s) {
  const auto inf = infimum(s);
  if (!inf)
    throw UnboundedError<Scalar>("attained_minimizer: function unbounded below",
                                 detail::unbounded_ray(s));
  // Normal-cone system with b normalized to 1: <v_i, w> <= -(a_i - a_f).
  const Index d = s.dim();
  LpProblem<Scalar> lp;
  lp.objective = VectorX<Scalar>::Zero(d);
  lp.constraints = s.slopes().transpose();
  lp.rhs = (-(s.intercepts().transpose().array() - *inf)).matrix();
  lp.relations.assign(static_cast<std::size_t>(s.vertex_count()), LpRelation::kLe);
  lp.lower_bounds = VectorX<Scalar>::Constant(d, -std::numeric_limits<Scalar>::infinity());
  const auto out = solve_lp(lp);
  if (out.status != LpStatus::kOptimal) return std::nullopt;
  return *out.point;
}

enum class NonnegKind { kZeroInSet, kPositiveGap, kNegativeWitness, kUnboundedBelow };

/// Trichotomy certificate for "f >= 0 everywhere".
///  - kZeroInSet:       0 in conv(S); hence f >= 0.
///  - kPositiveGap:     min-norm point has a* > 0; then inf f > 0.
///  - kNegativeWitness: witness x = v*/a* evaluates below zero.
///  - kUnboundedBelow:  f(x - t direction) -> -inf.
/// `marginal` flags verdicts decided inside the tolerance band.
template <typename Scalar>
struct NonnegVerdict {
  NonnegKind kind{};
  bool marginal = false;
  Scalar a_star{};
  VectorX<Scalar> v_star;
  std::optional<VectorX<Scalar>> witness;
  std::optional<Scalar> witness_value;
  std::optional<VectorX<Scalar>> direction;
};

template <typename Scalar>
NonnegVerdict<Scalar> nonnegativity_certificate(const Polytope<Scalar>& s) {
  const Scalar tau = Scalar(tol::kSupport);
  const auto mn = min_norm_point(s);
  NonnegVerdict<Scalar> verdict;
  verdict.a_star = mn.point.a;
  verdict.v_star = mn.point.v;
  if (mn.norm <= tau) {
    verdict.kind = NonnegKind::kZeroInSet;
    return verdict;
  }
  // The positive-gap implication needs boundedness below; report the
  // unbounded certificate instead of a wrong one.
  if (!is_bounded_below(s)) {
    verdict.kind = NonnegKind::kUnboundedBelow;
    verdict.direction = detail::unbounded_ray(s);
    return verdict;
  }
  if (verdict.a_star > tau) {
    verdict.kind = NonnegKind::kPositiveGap;
    return verdict;
  }
  if (verdict.a_star < -tau) {
    verdict.kind = NonnegKind::kNegativeWitness;
    VectorX<Scalar> x = verdict.v_star / verdict.a_star;
    verdict.witness = x;
    verdict.witness_value = eval_support(s, x);
    return verdict;
  }
  // Bounded below with |a*| <= tau and 0 barely outside the set: ambiguous.
  verdict.kind = NonnegKind::kZeroInSet;
  verdict.marginal = true;
  return verdict;
}

/// Certificate for "f >= 0 on the sublevel set {g <= 0}", via the min-norm
/// point of conv(S_f union S_g). A negative witness additionally satisfies
/// g(x) < 0, which is rechecked before returning.
template <typename Scalar>
NonnegVerdict<Scalar> nonneg_on_sublevel(const Polytope<Scalar>& s_f, const Polytope<Scalar>& s_g) {
  if (s_f.dim() != s_g.dim()) throw std::invalid_argument("nonneg_on_sublevel: dimension mismatch");
  auto verdict = nonnegativity_certificate(conv_union<Scalar>({s_f, s_g}));
  if (verdict.kind == NonnegKind::kNegativeWitness) {
    verdict.witness_value = eval_support(s_f, *verdict.witness);
    if (eval_support(s_g, *verdict.witness) >= Scalar(0))
      throw std::logic_error("nonneg_on_sublevel: witness left the sublevel set");
  }
  return verdict;
}

} // namespace dcopt
