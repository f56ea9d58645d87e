#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "dcopt/dcmodel.hpp"
#include "dcopt/minnorm.hpp"
#include "dcopt/optimality.hpp"
#include "dcopt/types.hpp"

namespace dcopt {

template <typename Scalar>
struct McdParams {
  Scalar alpha_star = Scalar(10);                       // step-size upper bound
  int max_iters = 1000;
  Scalar stop_tol = Scalar(1e-10);                      // minimal per-iteration decrease
  Scalar mu = std::numeric_limits<Scalar>::infinity();  // extreme-point filter level
  CheckOptions<Scalar> check;                           // terminal verdict options
};

template <typename Scalar>
struct McdStep {
  VectorX<Scalar> x;          // iterate the step starts from
  Scalar value{};             // f(x)
  SupportPoint<Scalar> z;     // chosen extreme point of the hyperdifferential
  VectorX<Scalar> direction;  // v(z); the step moves along -direction
  Scalar alpha{};
};

template <typename Scalar>
struct McdTrace {
  std::vector<McdStep<Scalar>> steps;
  VectorX<Scalar> final_x;
  Scalar final_value{};
  int iterations = 0;
  bool hit_max_iters = false;
  OptimalityReport<Scalar> final_check;
};

template <typename Scalar>
struct LineSearchResult {
  Scalar alpha{};
  Scalar value{};
};

/// Exact minimization of g(alpha) = f(x - alpha w) over [0, alpha_star].
/// g is piecewise affine, so its minimum sits at an endpoint or at a
/// crossing of two affine pieces inside one of the two max structures; all
/// of those are enumerated. Ties resolve to the smallest alpha.
template <typename Scalar>
LineSearchResult<Scalar> line_search_exact(const DCFunction<Scalar>& f, const VectorX<Scalar>& x,
                                           const VectorX<Scalar>& w, Scalar alpha_star) {
  if (!(alpha_star > Scalar(0)))
    throw std::invalid_argument("line_search_exact: alpha_star must be positive");
  if (x.size() != f.dim || w.size() != f.dim)
    throw std::invalid_argument("line_search_exact: dimension mismatch");

  const VectorX<Scalar> plus_c = f.s_plus.intercepts().transpose() + f.s_plus.slopes().transpose() * x;
  const VectorX<Scalar> plus_d = -(f.s_plus.slopes().transpose() * w);
  const VectorX<Scalar> minus_c =
      f.s_minus.intercepts().transpose() + f.s_minus.slopes().transpose() * x;
  const VectorX<Scalar> minus_d = -(f.s_minus.slopes().transpose() * w);

  auto g = [&](Scalar alpha) {
    return (plus_c + alpha * plus_d).maxCoeff() - (minus_c + alpha * minus_d).maxCoeff();
  };

  std::vector<Scalar> candidates{Scalar(0), alpha_star};
  auto add_crossings = [&](const VectorX<Scalar>& c, const VectorX<Scalar>& d) {
    for (Index i = 0; i < c.size(); ++i) {
      for (Index j = i + 1; j < c.size(); ++j) {
        const Scalar denom = d[j] - d[i];
        if (std::abs(denom) < Scalar(1e-14)) continue;
        const Scalar alpha = (c[i] - c[j]) / denom;
        if (alpha > Scalar(0) && alpha < alpha_star) candidates.push_back(alpha);
      }
    }
  };
  add_crossings(plus_c, plus_d);
  add_crossings(minus_c, minus_d);
  std::sort(candidates.begin(), candidates.end());

  LineSearchResult<Scalar> best{candidates.front(), g(candidates.front())};
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const Scalar value = g(candidates[i]);
    if (value < best.value) best = {candidates[i], value};
  }
  return best;
}

/// Codifferential descent with exact line search. Each iteration projects
/// the origin onto hypo + z for every filtered extreme z of the
/// hyperdifferential, line-searches along every -v(z), and takes the best
/// candidate. Values are non-increasing along the trace; the run stops when
/// no candidate improves by stop_tol, and the final iterate carries a full
/// global-optimality verdict.
template <typename Scalar>
McdTrace<Scalar> mcd_run(const DCFunction<Scalar>& f, const VectorX<Scalar>& x0,
                         const McdParams<Scalar>& params) {
  if (!(params.alpha_star > Scalar(0)))
    throw std::invalid_argument("mcd_run: alpha_star must be positive");
  if (params.max_iters < 1) throw std::invalid_argument("mcd_run: max_iters must be >= 1");
  if (!(params.mu > Scalar(0))) throw std::invalid_argument("mcd_run: mu must be positive");
  if (x0.size() != f.dim) throw std::invalid_argument("mcd_run: dimension mismatch");

  {
    const auto pair = global_codifferential(f, x0);
    for (const auto& z : hyper_extreme_points(f, x0)) {
      const auto shifted = translate(pair.hypo, z);
      if (!detail::horizontal_section_nonempty(shifted))
        throw UnboundedError<Scalar>("mcd_run: objective unbounded below",
                                     detail::slope_ray(shifted));
    }
  }

  McdTrace<Scalar> trace;
  VectorX<Scalar> x = x0;
  Scalar value = evaluate(f, x);

  for (int n = 0; n < params.max_iters; ++n) {
    ++trace.iterations;
    const auto pair = global_codifferential(f, x);
    auto zs = hyper_extreme_points(f, x);
    std::erase_if(zs, [&](const SupportPoint<Scalar>& z) { return z.a > params.mu; });
    if (zs.empty()) zs = hyper_extreme_points(f, x); // mu below min b; cannot occur for mu > 0

    bool found = false;
    SupportPoint<Scalar> best_z;
    VectorX<Scalar> best_dir;
    Scalar best_alpha{};
    Scalar best_value{};
    for (const auto& z : zs) {
      const auto mn = min_norm_point(translate(pair.hypo, z));
      const auto ls = line_search_exact(f, x, mn.point.v, params.alpha_star);
      // strict < keeps the earliest z in canonical order on ties
      if (!found || ls.value < best_value) {
        found = true;
        best_z = z;
        best_dir = mn.point.v;
        best_alpha = ls.alpha;
        best_value = ls.value;
      }
    }
    if (!found || value - best_value < params.stop_tol) break;
    trace.steps.push_back({x, value, best_z, best_dir, best_alpha});
    x = x - best_alpha * best_dir;
    value = best_value;
    if (n + 1 == params.max_iters) trace.hit_max_iters = true;
  }

  trace.final_x = x;
  trace.final_value = value;
  trace.final_check = check_global_min(f, x, params.check);
  return trace;
}

} // namespace dcopt
