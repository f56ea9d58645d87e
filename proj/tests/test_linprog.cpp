#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"

#include "dcopt/linprog.hpp"

using namespace dcopt;

namespace {

LpProblemd box_problem(double ub) {
  LpProblemd p;
  p.objective = VectorX<double>::Ones(1);
  p.constraints = MatrixX<double>::Ones(1, 1);
  p.relations = {LpRelation::kLe};
  p.rhs = VectorX<double>::Constant(1, ub);
  p.lower_bounds = VectorX<double>::Zero(1);
  return p;
}

} // namespace

TEST_CASE("one-variable box: maximize x s.t. x <= 3, x >= 0") {
  const auto out = solve_lp(box_problem(3.0));
  REQUIRE(out.status == LpStatus::kOptimal);
  CHECK((*out.value) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK((*out.point)[0] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("empty box is infeasible") {
  auto p = box_problem(-1.0);
  p.objective.setZero();
  CHECK(solve_lp(p).status == LpStatus::kInfeasible);
}

TEST_CASE("unbounded ray is reported") {
  LpProblemd p;
  p.objective = VectorX<double>::Ones(1);
  p.constraints = MatrixX<double>::Zero(0, 1);
  p.relations = {};
  p.rhs = VectorX<double>::Zero(0);
  p.lower_bounds = VectorX<double>::Zero(1);
  const auto out = solve_lp(p);
  REQUIRE(out.status == LpStatus::kUnbounded);
  REQUIRE(out.ray.has_value());
  CHECK((*out.ray)[0] > 0.0);
}

TEST_CASE("free variables via -inf lower bounds") {
  LpProblemd p;
  p.objective = -VectorX<double>::Ones(1);
  p.constraints = MatrixX<double>::Ones(1, 1);
  p.relations = {LpRelation::kGe};
  p.rhs = VectorX<double>::Constant(1, -5.0);
  p.lower_bounds = VectorX<double>::Constant(1, -std::numeric_limits<double>::infinity());
  const auto out = solve_lp(p);
  REQUIRE(out.status == LpStatus::kOptimal);
  CHECK((*out.value) == doctest::Approx(5.0).epsilon(1e-10));
  CHECK((*out.point)[0] == doctest::Approx(-5.0).epsilon(1e-10));
}

TEST_CASE("finite lower bounds shift correctly") {
  // maximize -x s.t. x >= -5 encoded through the bound alone
  LpProblemd p;
  p.objective = -VectorX<double>::Ones(1);
  p.constraints = MatrixX<double>::Zero(0, 1);
  p.relations = {};
  p.rhs = VectorX<double>::Zero(0);
  p.lower_bounds = VectorX<double>::Constant(1, -5.0);
  const auto out = solve_lp(p);
  REQUIRE(out.status == LpStatus::kOptimal);
  CHECK((*out.value) == doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("malformed dimensions throw") {
  LpProblemd p = box_problem(1.0);
  p.rhs.resize(2);
  p.rhs.setZero();
  CHECK_THROWS_AS(solve_lp(p), std::invalid_argument);
}

TEST_CASE("N-gon support set pins the infimum of sqrt(1+x^2)+x-1") {
  // maximize sum(l_k a_k) s.t. sum(l_k v_k) = 0 over a regular 256-gon
  // inscribed in the circle (a+1)^2 + (v-1)^2 <= 1.
  const int n = 256;
  auto p = LpProblemd::with_simplex_vars(n);
  p.objective.resize(n);
  p.constraints.resize(2, n);
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * k / n;
    p.objective[k] = -1.0 + std::cos(th);
    p.constraints(0, k) = 1.0 + std::sin(th);
    p.constraints(1, k) = 1.0;
  }
  p.rhs.resize(2);
  p.rhs << 0.0, 1.0;
  p.relations = {LpRelation::kEq, LpRelation::kEq};
  const auto out = solve_lp(p);
  REQUIRE(out.status == LpStatus::kOptimal);
  CHECK(std::abs(*out.value - (-1.0)) < 1e-3);
}

TEST_CASE("duality gap vanishes on random bounded LPs") {
  oracles::Rng rng(20240811);
  for (int trial = 0; trial < 60; ++trial) {
    const Index m = 2 + static_cast<Index>(trial % 3);
    const Index n = 2 + static_cast<Index>((trial / 3) % 3);
    // primal: max c.x s.t. A x <= b, sum(x) <= cap, x >= 0; x = 0 feasible
    MatrixX<double> a(m + 1, n);
    a.topRows(m) = MatrixX<double>::NullaryExpr(
        m, n, [&]() { return oracles::random_vector(rng, 1)[0]; });
    a.row(m).setOnes();
    VectorX<double> b(m + 1);
    b.head(m) = oracles::random_vector(rng, m, 0.5, 1.5);
    b[m] = 10.0;
    VectorX<double> c = oracles::random_vector(rng, n, -1.0, 1.0);

    LpProblemd primal;
    primal.objective = c;
    primal.constraints = a;
    primal.rhs = b;
    primal.relations.assign(static_cast<std::size_t>(m + 1), LpRelation::kLe);
    primal.lower_bounds = VectorX<double>::Zero(n);
    const auto pout = solve_lp(primal);
    REQUIRE(pout.status == LpStatus::kOptimal);
    CHECK(pout.iterations <= 10 * (m + 1 + n) * (m + 1 + n));

    // dual: min b.y s.t. A'y >= c, y >= 0
    LpProblemd dual;
    dual.objective = -b;
    dual.constraints = (-a.transpose()).eval();
    dual.rhs = -c;
    dual.relations.assign(static_cast<std::size_t>(n), LpRelation::kLe);
    dual.lower_bounds = VectorX<double>::Zero(m + 1);
    const auto dout = solve_lp(dual);
    REQUIRE(dout.status == LpStatus::kOptimal);
    CHECK(std::abs(*pout.value - (-*dout.value)) < 1e-7);
  }
}

TEST_CASE("optimal points are feasible within tolerance") {
  oracles::Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 3;
    MatrixX<double> a(2, n);
    for (Index i = 0; i < a.size(); ++i) a(i / n, i % n) = oracles::random_vector(rng, 1)[0];
    LpProblemd p;
    p.objective = oracles::random_vector(rng, n);
    p.constraints = a;
    p.rhs = oracles::random_vector(rng, 2, 0.2, 1.0);
    p.relations = {LpRelation::kLe, LpRelation::kEq};
    p.lower_bounds = VectorX<double>::Zero(n);
    const auto out = solve_lp(p);
    if (out.status != LpStatus::kOptimal) continue;
    const VectorX<double> ax = a * (*out.point);
    CHECK(ax[0] <= p.rhs[0] + tol::kLp);
    CHECK(std::abs(ax[1] - p.rhs[1]) <= 1e-8);
    CHECK(((*out.point).array() >= -tol::kLp).all());
  }
}
