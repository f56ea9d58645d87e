#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dcopt/types.hpp"

namespace dcopt {

enum class LpRelation { kLe, kEq, kGe };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

/// maximize objective . x  subject to  constraints(i,:) . x  REL  rhs(i)
/// and x(j) >= lower_bounds(j); a lower bound of -infinity makes x(j) free.
template <typename Scalar>
struct LpProblem {
  VectorX<Scalar> objective;
  MatrixX<Scalar> constraints;
  std::vector<LpRelation> relations;
  VectorX<Scalar> rhs;
  VectorX<Scalar> lower_bounds;

  static LpProblem with_simplex_vars(Index n) {
    LpProblem p;
    p.objective = VectorX<Scalar>::Zero(n);
    p.lower_bounds = VectorX<Scalar>::Zero(n);
    return p;
  }
};

template <typename Scalar>
struct LpOutcome {
  LpStatus status = LpStatus::kInfeasible;
  std::optional<VectorX<Scalar>> point; // present iff optimal
  std::optional<Scalar> value;          // present iff optimal
  std::optional<VectorX<Scalar>> ray;   // present iff unbounded; feasible ascent ray
  long iterations = 0;                  // total simplex pivots over both phases
};

namespace detail {

// One simplex run on the tableau T = [A | b] with objective row `cost`
// (maximization, reduced costs computed against the current basis).
// Bland's rule on entering and leaving choices; terminates without cycling.
template <typename Scalar>
struct SimplexTableau {
  MatrixX<Scalar> body;        // m x (n+1), last column is the rhs
  std::vector<Index> basis;    // basis column per row
  long pivots = 0;

  Index rows() const { return body.rows(); }
  Index cols() const { return body.cols() - 1; }

  void pivot(Index r, Index s) {
    body.row(r) /= body(r, s);
    for (Index i = 0; i < rows(); ++i) {
      if (i == r) continue;
      const Scalar f = body(i, s);
      if (f != Scalar(0)) body.row(i) -= f * body.row(r);
    }
    basis[static_cast<std::size_t>(r)] = s;
    ++pivots;
  }

  // Maximizes cost . x over the current feasible basis. Returns false when
  // unbounded; `entering` then holds the offending column.
  bool run(const VectorX<Scalar>& cost, const std::vector<bool>& allowed, long max_pivots,
           Index* entering_out) {
    const Scalar eps = Scalar(tol::kLp);
    for (;;) {
      // reduced costs: c_j - c_B . B^{-1} A_j
      VectorX<Scalar> dual = VectorX<Scalar>::Zero(rows());
      for (Index i = 0; i < rows(); ++i) dual[i] = cost[basis[static_cast<std::size_t>(i)]];
      Index s = -1;
      for (Index j = 0; j < cols(); ++j) {
        if (!allowed[static_cast<std::size_t>(j)]) continue;
        const Scalar red = cost[j] - dual.dot(body.col(j));
        if (red > eps) { s = j; break; } // Bland: smallest improving index
      }
      if (s < 0) return true;
      Index r = -1;
      Scalar best_ratio = std::numeric_limits<Scalar>::infinity();
      for (Index i = 0; i < rows(); ++i) {
        const Scalar a = body(i, s);
        if (a <= Scalar(tol::kLp)) continue;
        const Scalar ratio = body(i, cols()) / a;
        // Bland tie-break: smallest basis index among minimal ratios.
        if (r < 0 || ratio < best_ratio ||
            (ratio == best_ratio &&
             basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(r)])) {
          best_ratio = ratio;
          r = i;
        }
      }
      if (r < 0) {
        if (entering_out) *entering_out = s;
        return false;
      }
      pivot(r, s);
      if (pivots > max_pivots)
        throw std::logic_error("simplex: pivot budget exceeded");
    }
  }
};

} // namespace detail

/// Two-phase dense simplex. Optimal outcomes are feasible within tol::kLp and
/// maximal within tol::kLp; infeasibility is certified by a positive phase-1
/// optimum, unboundedness by a feasible ray with positive objective growth.
template <typename Scalar>
LpOutcome<Scalar> solve_lp(const LpProblem<Scalar>& problem) {
  const Index n = problem.objective.size();
  const Index m = problem.constraints.rows();
  if (problem.constraints.cols() != n && m > 0)
    throw std::invalid_argument("solve_lp: objective/constraint width mismatch");
  if (problem.rhs.size() != m || static_cast<Index>(problem.relations.size()) != m)
    throw std::invalid_argument("solve_lp: row count mismatch");
  if (problem.lower_bounds.size() != n)
    throw std::invalid_argument("solve_lp: lower_bounds size mismatch");
  if (!problem.objective.allFinite() || (m > 0 && !problem.constraints.allFinite()) ||
      !problem.rhs.allFinite())
    throw std::invalid_argument("solve_lp: non-finite problem data");

  // Shift finite lower bounds to zero; split free variables as y+ - y-.
  std::vector<Index> pos_col(static_cast<std::size_t>(n)), neg_col(static_cast<std::size_t>(n), -1);
  Index ny = 0;
  for (Index j = 0; j < n; ++j) {
    pos_col[static_cast<std::size_t>(j)] = ny++;
    if (std::isinf(problem.lower_bounds[j])) neg_col[static_cast<std::size_t>(j)] = ny++;
  }
  VectorX<Scalar> shift = VectorX<Scalar>::Zero(n);
  for (Index j = 0; j < n; ++j)
    if (!std::isinf(problem.lower_bounds[j])) shift[j] = problem.lower_bounds[j];

  MatrixX<Scalar> a = MatrixX<Scalar>::Zero(m, ny);
  VectorX<Scalar> c = VectorX<Scalar>::Zero(ny);
  VectorX<Scalar> b = problem.rhs - problem.constraints * shift;
  for (Index j = 0; j < n; ++j) {
    const Index jp = pos_col[static_cast<std::size_t>(j)];
    if (m > 0) a.col(jp) = problem.constraints.col(j);
    c[jp] = problem.objective[j];
    const Index jn = neg_col[static_cast<std::size_t>(j)];
    if (jn >= 0) {
      if (m > 0) a.col(jn) = -problem.constraints.col(j);
      c[jn] = -problem.objective[j];
    }
  }
  const Scalar obj_offset = problem.objective.dot(shift);

  // Equality standard form: slack (+1) for <=, surplus (-1) for >=.
  Index n_slack = 0;
  for (LpRelation rel : problem.relations)
    if (rel != LpRelation::kEq) ++n_slack;
  MatrixX<Scalar> eq = MatrixX<Scalar>::Zero(m, ny + n_slack);
  eq.leftCols(ny) = a;
  {
    Index s = ny;
    for (Index i = 0; i < m; ++i) {
      const LpRelation rel = problem.relations[static_cast<std::size_t>(i)];
      if (rel == LpRelation::kLe) eq(i, s++) = Scalar(1);
      else if (rel == LpRelation::kGe) eq(i, s++) = Scalar(-1);
    }
  }
  for (Index i = 0; i < m; ++i) {
    if (b[i] < Scalar(0)) {
      eq.row(i) = -eq.row(i);
      b[i] = -b[i];
    }
  }

  // Identity basis: reuse slack columns that survived sign-flipping as +1;
  // add an artificial variable for every other row.
  const Index n_struct = ny + n_slack;
  std::vector<Index> art_rows;
  std::vector<Index> basis_of_row(static_cast<std::size_t>(m), -1);
  for (Index i = 0; i < m; ++i) {
    for (Index j = ny; j < n_struct; ++j) {
      if (eq(i, j) == Scalar(1)) {
        bool unit = true;
        for (Index k = 0; k < m; ++k)
          if (k != i && eq(k, j) != Scalar(0)) { unit = false; break; }
        if (unit) { basis_of_row[static_cast<std::size_t>(i)] = j; break; }
      }
    }
    if (basis_of_row[static_cast<std::size_t>(i)] < 0) art_rows.push_back(i);
  }
  const Index n_total = n_struct + static_cast<Index>(art_rows.size());

  detail::SimplexTableau<Scalar> t;
  t.body = MatrixX<Scalar>::Zero(m, n_total + 1);
  t.body.leftCols(n_struct) = eq;
  t.body.col(n_total) = b;
  t.basis.assign(static_cast<std::size_t>(m), -1);
  {
    Index col = n_struct;
    for (Index i : art_rows) {
      t.body(i, col) = Scalar(1);
      basis_of_row[static_cast<std::size_t>(i)] = col++;
    }
    for (Index i = 0; i < m; ++i) t.basis[static_cast<std::size_t>(i)] = basis_of_row[static_cast<std::size_t>(i)];
  }

  const long max_pivots = 10 * (m + n_total) * (m + n_total) + 64;
  LpOutcome<Scalar> out;

  // Phase 1: drive artificials to zero.
  if (!art_rows.empty()) {
    VectorX<Scalar> phase1 = VectorX<Scalar>::Zero(n_total);
    phase1.tail(static_cast<Index>(art_rows.size())).setConstant(Scalar(-1));
    std::vector<bool> allowed(static_cast<std::size_t>(n_total), true);
    t.run(phase1, allowed, max_pivots, nullptr); // bounded: objective <= 0
    Scalar infeas = Scalar(0);
    for (Index i = 0; i < m; ++i)
      if (t.basis[static_cast<std::size_t>(i)] >= n_struct) infeas += t.body(i, n_total);
    if (infeas > Scalar(tol::kLp)) {
      out.status = LpStatus::kInfeasible;
      out.iterations = t.pivots;
      return out;
    }
    // Pivot remaining zero-level artificials out where possible.
    for (Index i = 0; i < m; ++i) {
      if (t.basis[static_cast<std::size_t>(i)] < n_struct) continue;
      for (Index j = 0; j < n_struct; ++j) {
        if (std::abs(t.body(i, j)) > Scalar(tol::kLp)) { t.pivot(i, j); break; }
      }
    }
  }

  // Phase 2 on the real objective, artificial columns locked out.
  VectorX<Scalar> cost = VectorX<Scalar>::Zero(n_total);
  cost.head(ny) = c;
  std::vector<bool> allowed(static_cast<std::size_t>(n_total), true);
  for (Index j = n_struct; j < n_total; ++j) allowed[static_cast<std::size_t>(j)] = false;
  Index entering = -1;
  const bool bounded = t.run(cost, allowed, max_pivots, &entering);
  out.iterations = t.pivots;

  auto recover = [&](const VectorX<Scalar>& y) {
    VectorX<Scalar> x = shift;
    for (Index j = 0; j < n; ++j) {
      x[j] += y[pos_col[static_cast<std::size_t>(j)]];
      const Index jn = neg_col[static_cast<std::size_t>(j)];
      if (jn >= 0) x[j] -= y[jn];
    }
    return x;
  };

  VectorX<Scalar> y = VectorX<Scalar>::Zero(n_total);
  for (Index i = 0; i < m; ++i) y[t.basis[static_cast<std::size_t>(i)]] = t.body(i, n_total);

  if (!bounded) {
    // Ray: entering column direction in the current basis.
    VectorX<Scalar> dir = VectorX<Scalar>::Zero(n_total);
    dir[entering] = Scalar(1);
    for (Index i = 0; i < m; ++i) dir[t.basis[static_cast<std::size_t>(i)]] = -t.body(i, entering);
    out.status = LpStatus::kUnbounded;
    out.ray = recover(dir) - shift; // ray lives in the homogeneous space
    return out;
  }

  out.status = LpStatus::kOptimal;
  out.point = recover(y);
  out.value = cost.dot(y) + obj_offset;
  return out;
}

using LpProblemd = LpProblem<double>;
using LpOutcomed = LpOutcome<double>;

} // namespace dcopt
