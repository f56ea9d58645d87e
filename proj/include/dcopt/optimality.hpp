#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dcopt/dcmodel.hpp"
#include "dcopt/geometry.hpp"
#include "dcopt/linprog.hpp"
#include "dcopt/minnorm.hpp"
#include "dcopt/types.hpp"

namespace dcopt {

/// Outcome of the min-norm projection for one choice of z (or one tuple of
/// z_i in the constrained case): the projection (a(z), v(z)), whether the
/// optimality condition a(z) >= 0 holds, and a strictly improving point when
/// it does not.
template <typename Scalar>
struct ZVerdict {
  std::vector<SupportPoint<Scalar>> z;
  Scalar a_z{};
  VectorX<Scalar> v_z;
  bool satisfied = false;
  bool marginal = false; // satisfied only inside the tolerance band
  std::optional<Scalar> xi; // LP route: max xi with (xi, 0) in hypo + z
  std::optional<VectorX<Scalar>> descent_point;
  std::optional<Scalar> descent_value;
};

template <typename Scalar>
struct OptimalityReport {
  VectorX<Scalar> base_point;
  Scalar base_value{};
  std::vector<ZVerdict<Scalar>> verdicts;
  bool globally_optimal = false;
  std::optional<std::pair<VectorX<Scalar>, Scalar>> best_descent;
  bool ipcq_asserted = false;
  std::string ipcq_note;
  std::vector<std::string> notes;
};

template <typename Scalar>
struct CheckOptions {
  Scalar tol_opt = Scalar(tol::kOpt);
  Index prune_threshold = kAutoPruneThreshold;
  bool ipcq_asserted = false;
  std::string ipcq_note;
  std::size_t max_constraints = 6;
  std::size_t max_extreme_per_function = 16;
};

namespace detail {

// Horizontal-section test: (R x {0}) meets conv(P) iff the
// slope system has a simplex solution.
template <typename Scalar>
bool horizontal_section_nonempty(const Polytope<Scalar>& p) {
  const VectorX<Scalar> zero = VectorX<Scalar>::Zero(p.dim());
  return in_convex_hull<Scalar>(MatrixX<Scalar>(p.slopes()), zero);
}

// max { xi : (xi, 0) in conv(P) }, or nullopt when the section is empty.
template <typename Scalar>
std::optional<Scalar> horizontal_section_max(const Polytope<Scalar>& p) {
  const Index n = p.vertex_count();
  auto lp = LpProblem<Scalar>::with_simplex_vars(n);
  lp.objective = p.intercepts().transpose();
  lp.constraints.resize(p.dim() + 1, n);
  lp.constraints.topRows(p.dim()) = p.slopes();
  lp.constraints.row(p.dim()).setOnes();
  lp.rhs = VectorX<Scalar>::Zero(p.dim() + 1);
  lp.rhs[p.dim()] = Scalar(1);
  lp.relations.assign(static_cast<std::size_t>(p.dim() + 1), LpRelation::kEq);
  const auto out = solve_lp(lp);
  if (out.status != LpStatus::kOptimal) return std::nullopt;
  return *out.value;
}

template <typename Scalar>
VectorX<Scalar> slope_ray(const Polytope<Scalar>& p) {
  return min_norm_of_slopes(p).point;
}

// Descent point along a certified unbounded ray of max over conv(P):
// stepping t = (max a + 1) / ||u||^2 along -u drops the value below -1.
template <typename Scalar>
VectorX<Scalar> ray_descent_point(const Polytope<Scalar>& p, const VectorX<Scalar>& base) {
  const VectorX<Scalar> u = slope_ray(p);
  const Scalar t = (p.intercepts().maxCoeff() + Scalar(1)) / u.squaredNorm();
  return base - t * u;
}

template <typename Scalar>
void finalize_report(OptimalityReport<Scalar>& report, bool maximize) {
  report.globally_optimal = true;
  for (const auto& v : report.verdicts) {
    report.globally_optimal = report.globally_optimal && v.satisfied;
    if (v.descent_point) {
      const bool better = !report.best_descent ||
                          (maximize ? *v.descent_value > report.best_descent->second
                                    : *v.descent_value < report.best_descent->second);
      if (better) report.best_descent = {*v.descent_point, *v.descent_value};
    }
  }
}

} // namespace detail

/// Boundedness below of f, decided exactly for the DC pair via the
/// horizontal sections of the shifted hypodifferential: bounded below iff
/// every extreme z of the hyperdifferential admits (xi, 0) in hypo + z.
template <typename Scalar>
bool bounded_below_codiff(const DCFunction<Scalar>& f, const VectorX<Scalar>& x_star) {
  const auto pair = global_codifferential(f, x_star);
  for (const auto& z : hyper_extreme_points(f, x_star)) {
    if (!detail::horizontal_section_nonempty(translate(pair.hypo, z))) return false;
  }
  return true;
}

/// Necessary and sufficient global-minimum check for a DC function bounded
/// below: for every extreme point z of the hyperdifferential at x_star the
/// projection of the origin onto hypo + z must have a(z) >= 0. A failing z
/// yields the strictly better point x_star + v(z)/a(z).
template <typename Scalar>
OptimalityReport<Scalar> check_global_min(const DCFunction<Scalar>& f,
                                          const VectorX<Scalar>& x_star,
                                          const CheckOptions<Scalar>& opts = {}) {
  const auto pair = global_codifferential(f, x_star);
  const auto zs = hyper_extreme_points(f, x_star);

  OptimalityReport<Scalar> report;
  report.base_point = x_star;
  report.base_value = pair.f_at_base;

  for (const auto& z : zs) {
    const auto shifted = translate(pair.hypo, z);
    if (!detail::horizontal_section_nonempty(shifted))
      throw UnboundedError<Scalar>("check_global_min: objective unbounded below",
                                   detail::slope_ray(shifted));
  }

  for (const auto& z : zs) {
    const auto shifted = translate(pair.hypo, z);
    const auto mn = min_norm_point(shifted);
    ZVerdict<Scalar> verdict;
    verdict.z = {z};
    verdict.a_z = mn.point.a;
    verdict.v_z = mn.point.v;
    verdict.satisfied = verdict.a_z >= -opts.tol_opt;
    verdict.marginal = verdict.satisfied && verdict.a_z < Scalar(0);
    if (!verdict.satisfied) {
      const VectorX<Scalar> better = x_star + verdict.v_z / verdict.a_z;
      const Scalar value = evaluate(f, better);
      if (!(value < report.base_value + Scalar(1e-9)))
        throw std::logic_error("check_global_min: descent certificate failed verification");
      verdict.descent_point = better;
      verdict.descent_value = value;
    }
    report.verdicts.push_back(std::move(verdict));
  }
  detail::finalize_report(report, /*maximize=*/false);
  return report;
}

/// Mirror of check_global_min for global maxima: roles of the pair swap,
/// the projection runs over hyper + z for extreme z of the hypodifferential,
/// and the condition becomes b(z) <= 0.
template <typename Scalar>
OptimalityReport<Scalar> check_global_max(const DCFunction<Scalar>& f,
                                          const VectorX<Scalar>& x_star,
                                          const CheckOptions<Scalar>& opts = {}) {
  const auto pair = global_codifferential(f, x_star);
  auto zs = prune_to_extreme(pair.hypo).vertices();
  std::sort(zs.begin(), zs.end(), lex_less<Scalar>);

  OptimalityReport<Scalar> report;
  report.base_point = x_star;
  report.base_value = pair.f_at_base;

  for (const auto& z : zs) {
    const auto shifted = translate(pair.hyper, z);
    if (!detail::horizontal_section_nonempty(shifted))
      throw UnboundedError<Scalar>("check_global_max: objective unbounded above",
                                   VectorX<Scalar>(-detail::slope_ray(shifted)));
  }

  for (const auto& z : zs) {
    const auto shifted = translate(pair.hyper, z);
    const auto mn = min_norm_point(shifted);
    ZVerdict<Scalar> verdict;
    verdict.z = {z};
    verdict.a_z = mn.point.a;
    verdict.v_z = mn.point.v;
    verdict.satisfied = verdict.a_z <= opts.tol_opt;
    verdict.marginal = verdict.satisfied && verdict.a_z > Scalar(0);
    if (!verdict.satisfied) {
      const VectorX<Scalar> better = x_star + verdict.v_z / verdict.a_z;
      const Scalar value = evaluate(f, better);
      if (!(value > report.base_value - Scalar(1e-9)))
        throw std::logic_error("check_global_max: ascent certificate failed verification");
      verdict.descent_point = better;
      verdict.descent_value = value;
    }
    report.verdicts.push_back(std::move(verdict));
  }
  detail::finalize_report(report, /*maximize=*/true);
  return report;
}

/// Inequality-constrained global-optimality check at a feasible x_star under
/// a user-asserted IPCQ. For every tuple (z_0, ..., z_l) over the per-function
/// extreme sets, projects the origin onto
///   L(z) = conv{ hypo f_0 + z_0, hypo f_i + z_i + (f_i(x_star), 0) }.
/// A failing tuple yields a point strictly better for f_0 and strictly
/// feasible for every constraint; both facts are verified before reporting.
template <typename Scalar>
OptimalityReport<Scalar> check_constrained(const DCFunction<Scalar>& f0,
                                           const std::vector<DCFunction<Scalar>>& constraints,
                                           const VectorX<Scalar>& x_star,
                                           const CheckOptions<Scalar>& opts = {}) {
  if (constraints.empty()) return check_global_min(f0, x_star, opts);
  if (constraints.size() > opts.max_constraints)
    throw HypothesisError("check_constrained: too many constraints for tuple enumeration "
                          "(raise max_constraints to override)");
  if (!opts.ipcq_asserted)
    throw HypothesisError("check_constrained: IPCQ assertion required");

  OptimalityReport<Scalar> report;
  report.base_point = x_star;
  report.base_value = evaluate(f0, x_star);
  report.ipcq_asserted = true;
  report.ipcq_note = opts.ipcq_note;

  std::vector<Scalar> at_base;
  for (const auto& g : constraints) {
    at_base.push_back(evaluate(g, x_star));
    if (at_base.back() > Scalar(tol::kFeas))
      throw HypothesisError("check_constrained: candidate point is infeasible");
  }
  if (!bounded_below_codiff(f0, x_star))
    report.notes.push_back("objective is unbounded below on the whole space; "
                           "boundedness on the feasible set is assumed, not verified");

  // Per-function shifted hypodifferentials and extreme-point sets.
  std::vector<Polytope<Scalar>> hypos;
  std::vector<std::vector<SupportPoint<Scalar>>> cs;
  {
    const auto pair0 = global_codifferential(f0, x_star);
    hypos.push_back(pair0.hypo);
    cs.push_back(hyper_extreme_points(f0, x_star));
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      auto pair = global_codifferential(constraints[i], x_star);
      VectorX<Scalar> zero = VectorX<Scalar>::Zero(f0.dim);
      hypos.push_back(translate(pair.hypo, SupportPoint<Scalar>(at_base[i], zero)));
      cs.push_back(hyper_extreme_points(constraints[i], x_star));
    }
  }
  for (const auto& c : cs)
    if (c.size() > opts.max_extreme_per_function)
      throw HypothesisError("check_constrained: extreme-point set too large "
                            "(raise max_extreme_per_function to override)");

  std::vector<std::size_t> idx(cs.size(), 0);
  for (;;) {
    ZVerdict<Scalar> verdict;
    std::vector<Polytope<Scalar>> parts;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const auto& z = cs[i][idx[i]];
      verdict.z.push_back(z);
      parts.push_back(translate(hypos[i], z));
    }
    const auto l_of_z = conv_union(std::span<const Polytope<Scalar>>(parts), opts.prune_threshold);
    const auto mn = min_norm_point(l_of_z);
    verdict.a_z = mn.point.a;
    verdict.v_z = mn.point.v;
    verdict.satisfied = verdict.a_z >= -opts.tol_opt;
    verdict.marginal = verdict.satisfied && verdict.a_z < Scalar(0);
    if (!verdict.satisfied) {
      const VectorX<Scalar> better = x_star + verdict.v_z / verdict.a_z;
      const Scalar value = evaluate(f0, better);
      bool interior = true;
      for (const auto& g : constraints) interior = interior && evaluate(g, better) < Scalar(0);
      if (!(value < report.base_value + Scalar(1e-9)) || !interior)
        throw std::logic_error("check_constrained: descent certificate failed verification");
      verdict.descent_point = better;
      verdict.descent_value = value;
    }
    report.verdicts.push_back(std::move(verdict));

    std::size_t carry = 0;
    while (carry < idx.size()) {
      if (++idx[carry] < cs[carry].size()) break;
      idx[carry] = 0;
      ++carry;
    }
    if (carry == idx.size()) break;
  }
  detail::finalize_report(report, /*maximize=*/false);
  return report;
}

/// LP form of the global-minimum conditions, with no boundedness hypothesis:
/// x_star is a global minimizer iff for every extreme z some (xi, 0) with
/// xi >= 0 lies in hypo + z. Failing z's still carry a verified strictly
/// better point (from the projection, or from a certified unbounded ray).
template <typename Scalar>
OptimalityReport<Scalar> check_global_min_lp(const DCFunction<Scalar>& f,
                                             const VectorX<Scalar>& x_star,
                                             const CheckOptions<Scalar>& opts = {}) {
  const auto pair = global_codifferential(f, x_star);
  OptimalityReport<Scalar> report;
  report.base_point = x_star;
  report.base_value = pair.f_at_base;

  for (const auto& z : hyper_extreme_points(f, x_star)) {
    const auto shifted = translate(pair.hypo, z);
    const auto xi = detail::horizontal_section_max(shifted);
    ZVerdict<Scalar> verdict;
    verdict.z = {z};
    verdict.xi = xi;
    verdict.v_z = VectorX<Scalar>::Zero(f.dim);
    if (xi) {
      verdict.a_z = *xi; // best attainable xi; >= 0 means this z is satisfied
      verdict.satisfied = *xi >= -opts.tol_opt;
      verdict.marginal = verdict.satisfied && *xi < Scalar(0);
    } else {
      verdict.satisfied = false; // no horizontal point at all: unbounded below
    }
    if (!verdict.satisfied) {
      VectorX<Scalar> better;
      if (xi) {
        const auto mn = min_norm_point(shifted);
        verdict.a_z = mn.point.a;
        verdict.v_z = mn.point.v;
        better = x_star + mn.point.v / mn.point.a;
      } else {
        better = detail::ray_descent_point(shifted, x_star);
        verdict.v_z = detail::slope_ray(shifted);
      }
      const Scalar value = evaluate(f, better);
      if (!(value < report.base_value + Scalar(1e-9)))
        throw std::logic_error("check_global_min_lp: descent certificate failed verification");
      verdict.descent_point = better;
      verdict.descent_value = value;
    }
    report.verdicts.push_back(std::move(verdict));
  }
  detail::finalize_report(report, /*maximize=*/false);
  return report;
}

} // namespace dcopt
