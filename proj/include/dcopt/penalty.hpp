#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dcopt/dcmodel.hpp"
#include "dcopt/expr.hpp"
#include "dcopt/types.hpp"

namespace dcopt {

/// min f0(x)  s.t.  g_i(x) <= 0,  h_j(x) = 0, all piecewise-affine DC.
template <typename Scalar>
struct Problem {
  Index dim{};
  Expr<Scalar> objective = Expr<Scalar>::constant(Scalar(0));
  std::vector<Expr<Scalar>> inequalities;
  std::vector<Expr<Scalar>> equalities;
  bool ipcq_asserted = false;
  std::string ipcq_note;
};

/// Constraint violation phi(x) = sum max{0, g_i(x)} + sum |h_j(x)|.
template <typename Scalar>
Scalar violation(const Problem<Scalar>& p, const VectorX<Scalar>& x) {
  Scalar acc = Scalar(0);
  for (const auto& g : p.inequalities) acc += std::max(Scalar(0), g(x));
  for (const auto& h : p.equalities) acc += std::abs(h(x));
  return acc;
}

/// The l1 penalty F_lambda = f0 + lambda * phi as an expression.
template <typename Scalar>
Expr<Scalar> penalty_expr(const Problem<Scalar>& p, Scalar lambda) {
  if (!(lambda >= Scalar(0))) throw std::invalid_argument("penalty: lambda must be nonnegative");
  std::vector<Expr<Scalar>> terms;
  for (const auto& g : p.inequalities)
    terms.push_back(Expr<Scalar>::max_of({Expr<Scalar>::constant(Scalar(0)), g}));
  for (const auto& h : p.equalities) terms.push_back(Expr<Scalar>::abs(h));
  if (terms.empty()) return p.objective;
  return Expr<Scalar>::sum({p.objective, Expr<Scalar>::scale(lambda, Expr<Scalar>::sum(terms))});
}

/// DC decomposition of the l1 penalty function.
template <typename Scalar>
DCFunction<Scalar> build_penalty(const Problem<Scalar>& p, Scalar lambda,
                                 Index prune_threshold = kAutoPruneThreshold) {
  return build_dc(penalty_expr(p, lambda), p.dim, prune_threshold);
}

enum class ProbeKind { kLikelyBounded, kUnboundedEvidence };

/// Result of the C_alpha boundedness probe. Heuristic by construction: a
/// clean pass only says no escape was sampled, never that none exists.
template <typename Scalar>
struct ProbeVerdict {
  ProbeKind kind = ProbeKind::kLikelyBounded;
  std::optional<VectorX<Scalar>> evidence; // point of C_alpha outside the box
  Scalar f_star_estimate{};
  bool f_star_from_grid = false;
};

template <typename Scalar>
struct ProbeOptions {
  Scalar alpha = Scalar(0.5);
  VectorX<Scalar> box_lo;
  VectorX<Scalar> box_hi;
  int samples = 512;
  std::uint64_t seed = 1234;
  std::optional<Scalar> f_star; // reference optimal value; grid-scanned if absent
};

namespace detail {

// Coarse feasible-value estimate by grid scan (d <= 3). Falls back to the
// penalty value when no grid point is feasible.
template <typename Scalar>
std::pair<Scalar, bool> grid_f_star(const Problem<Scalar>& p, Scalar lambda,
                                    const VectorX<Scalar>& lo, const VectorX<Scalar>& hi) {
  const Index d = p.dim;
  if (d > 3)
    throw HypothesisError("sublevel probe: supply f_star for dimensions above three");
  const Index per_axis = d == 1 ? 4001 : (d == 2 ? 201 : 41);
  std::vector<Index> idx(static_cast<std::size_t>(d), 0);
  Scalar best_feasible = std::numeric_limits<Scalar>::infinity();
  Scalar best_penalty = std::numeric_limits<Scalar>::infinity();
  const auto f_lambda = penalty_expr(p, lambda);
  for (;;) {
    VectorX<Scalar> x(d);
    for (Index k = 0; k < d; ++k)
      x[k] = lo[k] + (hi[k] - lo[k]) * Scalar(idx[static_cast<std::size_t>(k)]) / Scalar(per_axis - 1);
    if (violation(p, x) <= Scalar(1e-9))
      best_feasible = std::min(best_feasible, p.objective(x));
    best_penalty = std::min(best_penalty, f_lambda(x));
    Index carry = 0;
    while (carry < d) {
      if (++idx[static_cast<std::size_t>(carry)] < per_axis) break;
      idx[static_cast<std::size_t>(carry)] = 0;
      ++carry;
    }
    if (carry == d) break;
  }
  if (std::isfinite(best_feasible)) return {best_feasible, true};
  return {best_penalty, true};
}

} // namespace detail

/// Samples the boundary of the given box and dilations of it, looking for
/// points of C_alpha = { f0 < f* + alpha, g_i < alpha, |h_j| < alpha } that
/// escape the box. Any hit is evidence against the boundedness clause of the
/// exactness condition; no hit only means "likely bounded".
template <typename Scalar>
ProbeVerdict<Scalar> sublevel_bounded_probe(const Problem<Scalar>& p, Scalar lambda,
                                            const ProbeOptions<Scalar>& opts) {
  if (!(lambda >= Scalar(0))) throw std::invalid_argument("probe: lambda must be nonnegative");
  if (!(opts.alpha > Scalar(0))) throw std::invalid_argument("probe: alpha must be positive");
  if (opts.box_lo.size() != p.dim || opts.box_hi.size() != p.dim)
    throw std::invalid_argument("probe: box dimension mismatch");

  ProbeVerdict<Scalar> verdict;
  if (opts.f_star) {
    verdict.f_star_estimate = *opts.f_star;
  } else {
    auto [estimate, from_grid] = detail::grid_f_star(p, lambda, opts.box_lo, opts.box_hi);
    verdict.f_star_estimate = estimate;
    verdict.f_star_from_grid = from_grid;
  }

  const VectorX<Scalar> center = (opts.box_lo + opts.box_hi) / Scalar(2);
  auto inside_box = [&](const VectorX<Scalar>& x) {
    return (x.array() >= opts.box_lo.array()).all() && (x.array() <= opts.box_hi.array()).all();
  };
  auto in_c_alpha = [&](const VectorX<Scalar>& x) {
    if (!(p.objective(x) < verdict.f_star_estimate + opts.alpha)) return false;
    for (const auto& g : p.inequalities)
      if (!(g(x) < opts.alpha)) return false;
    for (const auto& h : p.equalities)
      if (!(std::abs(h(x)) < opts.alpha)) return false;
    return true;
  };

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<Scalar> unit(Scalar(0), Scalar(1));
  std::uniform_int_distribution<Index> axis(0, p.dim - 1);
  const Scalar factors[] = {Scalar(1), Scalar(1.5), Scalar(2), Scalar(4), Scalar(8)};
  for (int k = 0; k < opts.samples; ++k) {
    VectorX<Scalar> x(p.dim);
    for (Index i = 0; i < p.dim; ++i)
      x[i] = opts.box_lo[i] + (opts.box_hi[i] - opts.box_lo[i]) * unit(rng);
    const Index pin = axis(rng);
    x[pin] = unit(rng) < Scalar(0.5) ? opts.box_lo[pin] : opts.box_hi[pin];
    const Scalar factor = factors[k % 5];
    x = center + factor * (x - center);
    if (!inside_box(x) && in_c_alpha(x)) {
      verdict.kind = ProbeKind::kUnboundedEvidence;
      verdict.evidence = x;
      return verdict;
    }
  }
  verdict.kind = ProbeKind::kLikelyBounded;
  return verdict;
}

using Problemd = Problem<double>;

} // namespace dcopt
