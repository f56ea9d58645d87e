#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"

#include "dcopt/supportset.hpp"

using namespace dcopt;

namespace {

Polytoped abs_set() { return Polytoped({{0.0, {1.0}}, {0.0, {-1.0}}}); }
Polytoped two_abs_set() { return Polytoped({{0.0, {2.0}}, {0.0, {-2.0}}}); }
Polytoped abs_shift4_set() { return Polytoped({{-4.0, {1.0}}, {4.0, {-1.0}}}); }

// Regular n-gon inscribed in the circle (a+1)^2 + (v-1)^2 <= 1; supports the
// function sqrt(1+x^2) + x - 1 up to the polygonal gap.
Polytoped disk_ngon(int n) {
  MatrixX<double> pts(2, n);
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * k / n;
    pts(0, k) = -1.0 + std::cos(th);
    pts(1, k) = 1.0 + std::sin(th);
  }
  return Polytoped(pts);
}

VectorX<double> vec1(double x) { return VectorX<double>::Constant(1, x); }

} // namespace

TEST_CASE("eval_support reproduces |x|, 2|x| and the disk function") {
  CHECK(eval_support(abs_set(), vec1(2.0)) == doctest::Approx(2.0));
  CHECK(eval_support(two_abs_set(), vec1(-2.0)) == doctest::Approx(4.0));
  const auto disk = disk_ngon(256);
  for (int x = -5; x <= 5; ++x) {
    const double exact = std::sqrt(1.0 + x * x) + x - 1.0;
    CHECK(std::abs(eval_support(disk, vec1(x)) - exact) < 1e-3);
  }
}

TEST_CASE("conjugate values and the domain of the conjugate") {
  const auto c0 = conjugate_value(abs_set(), vec1(0.0));
  REQUIRE(c0.has_value());
  CHECK(*c0 == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(!conjugate_value(abs_set(), vec1(2.0)).has_value());
  const auto disk = conjugate_value(disk_ngon(256), vec1(0.0));
  REQUIRE(disk.has_value());
  CHECK(std::abs(*disk - (-1.0)) < 1e-3);
}

TEST_CASE("eps-subdifferential membership") {
  CHECK(eps_subdiff_contains(abs_set(), vec1(0.0), 0.0, vec1(0.5)));
  CHECK(!eps_subdiff_contains(abs_set(), vec1(1.0), 0.0, vec1(0.0)));
  CHECK(eps_subdiff_contains(abs_set(), vec1(1.0), 1.0, vec1(0.0)));
  CHECK(eps_subdiff_contains(two_abs_set(), vec1(-2.0), 0.0, vec1(-2.0)));
  CHECK_THROWS_AS(eps_subdiff_contains(abs_set(), vec1(0.0), -1.0, vec1(0.0)),
                  std::invalid_argument);
}

TEST_CASE("eps-subdifferential agrees with the defining inequality on a grid") {
  // v is an eps-subgradient at x iff f(y) >= f(x) + v (y - x) - eps for all y.
  auto scan = [](const Polytoped& s, double x, double eps, double v) {
    for (int i = 0; i <= 4000; ++i) {
      const double y = -20.0 + 0.01 * i;
      const double fy = eval_support(s, vec1(y));
      const double fx = eval_support(s, vec1(x));
      if (fy < fx + v * (y - x) - eps - 1e-12) return false;
    }
    return true;
  };
  for (double x : {-1.0, 0.0, 1.0, 3.0}) {
    for (double eps : {0.0, 0.25, 1.0, 2.0}) {
      for (double v : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        CHECK(eps_subdiff_contains(abs_set(), vec1(x), eps, vec1(v)) == scan(abs_set(), x, eps, v));
      }
    }
  }
}

TEST_CASE("eps-subdifferential membership is monotone in eps") {
  oracles::Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = oracles::random_polytope(rng, 2, 6);
    const auto x = oracles::random_vector(rng, 2, -2.0, 2.0);
    const auto v = oracles::random_vector(rng, 2, -2.0, 2.0);
    bool prev = eps_subdiff_contains(s, x, 0.0, v);
    for (double eps : {0.1, 0.5, 2.0, 10.0}) {
      const bool now = eps_subdiff_contains(s, x, eps, v);
      if (prev) CHECK(now);
      prev = now;
    }
  }
}

TEST_CASE("boundedness below") {
  CHECK(is_bounded_below(abs_set()));
  CHECK(!is_bounded_below(Polytoped({{0.0, {1.0}}})));
  CHECK(is_bounded_below(disk_ngon(256)));
}

TEST_CASE("infimum values") {
  REQUIRE(infimum(abs_set()).has_value());
  CHECK(*infimum(abs_set()) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(std::abs(*infimum(disk_ngon(256)) - (-1.0)) < 1e-3);
  CHECK(*infimum(abs_shift4_set()) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(!infimum(Polytoped({{0.0, {1.0}}})).has_value());
}

TEST_CASE("attained minimizers") {
  auto w = attained_minimizer(abs_set());
  REQUIRE(w.has_value());
  CHECK(std::abs((*w)[0]) < 1e-8);
  w = attained_minimizer(abs_shift4_set());
  REQUIRE(w.has_value());
  CHECK((*w)[0] == doctest::Approx(4.0).epsilon(1e-8));
  CHECK_THROWS_AS(attained_minimizer(Polytoped({{0.0, {1.0}}})), UnboundedError<double>);
}

TEST_CASE("polygonal disk surrogate attains only a far-away minimizer") {
  // The smooth disk function has no minimizer; its 256-gon surrogate attains
  // one of large magnitude, showing the degeneracy of the approximation.
  const auto disk = disk_ngon(256);
  const auto w = attained_minimizer(disk);
  REQUIRE(w.has_value());
  CHECK(std::abs((*w)[0]) > 10.0);
  // The surrogate's own minimum is genuinely down there.
  const double at_w = eval_support(disk, *w);
  CHECK(at_w <= *infimum(disk) + 1e-7);
  const double scan = oracles::grid_min_1d(
      [&](double x) { return eval_support(disk, vec1(x)); }, (*w)[0] - 5.0, (*w)[0] + 5.0);
  CHECK(at_w <= scan + 1e-9);
}

TEST_CASE("nonnegativity trichotomy on the worked one-dimensional sets") {
  CHECK(nonnegativity_certificate(abs_set()).kind == NonnegKind::kZeroInSet);

  const Polytoped abs_plus_one({{1.0, {1.0}}, {1.0, {-1.0}}});
  const auto gap = nonnegativity_certificate(abs_plus_one);
  CHECK(gap.kind == NonnegKind::kPositiveGap);
  CHECK(gap.a_star == doctest::Approx(1.0).epsilon(1e-9));

  const Polytoped hypo({{0.0, {-1.0}}, {0.0, {-3.0}}, {-8.0, {3.0}}, {-8.0, {1.0}}});
  const auto neg = nonnegativity_certificate(translate(hypo, SupportPointd{3.0, {-1.0}}));
  REQUIRE(neg.kind == NonnegKind::kNegativeWitness);
  CHECK((*neg.witness)[0] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(*neg.witness_value < 0.0);
}

TEST_CASE("unbounded certificate decreases without bound") {
  const Polytoped affine({{1.0, {1.0}}});
  const auto verdict = nonnegativity_certificate(affine);
  REQUIRE(verdict.kind == NonnegKind::kUnboundedBelow);
  const VectorX<double> d = *verdict.direction;
  double prev = eval_support(affine, vec1(0.0));
  for (double t : {10.0, 100.0, 1000.0}) {
    const double cur = eval_support(affine, VectorX<double>(-t * d));
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("certificates verified against grid scans") {
  oracles::Rng rng(32);
  int positives = 0, negatives = 0;
  for (int trial = 0; trial < 80; ++trial) {
    auto s = oracles::random_polytope(rng, 1, 6);
    if (trial % 3 == 0) { // bias intercepts upward to hit PositiveGap cases
      MatrixX<double> lifted = s.lifted();
      lifted.row(0).array() += 2.0;
      s = Polytoped(lifted);
    }
    const auto verdict = nonnegativity_certificate(s);
    switch (verdict.kind) {
      case NonnegKind::kPositiveGap: {
        ++positives;
        const double lo = oracles::grid_min_1d(
            [&](double x) { return eval_support(s, vec1(x)); }, -100.0, 100.0);
        CHECK(lo >= 0.0);
        break;
      }
      case NonnegKind::kNegativeWitness:
        ++negatives;
        CHECK(eval_support(s, *verdict.witness) < 0.0);
        break;
      case NonnegKind::kZeroInSet: {
        const double lo = oracles::grid_min_1d(
            [&](double x) { return eval_support(s, vec1(x)); }, -100.0, 100.0);
        CHECK(lo >= -1e-6);
        break;
      }
      case NonnegKind::kUnboundedBelow: {
        const VectorX<double> d = *verdict.direction;
        CHECK(eval_support(s, VectorX<double>(-1000.0 * d)) <
              eval_support(s, VectorX<double>(-10.0 * d)));
        break;
      }
    }
  }
  CHECK(positives > 0);
  CHECK(negatives > 0);
}

TEST_CASE("sublevel certificates") {
  const Polytoped g_line({{-1.0, {1.0}}});
  CHECK(nonneg_on_sublevel(abs_set(), g_line).kind == NonnegKind::kZeroInSet);

  const Polytoped abs_plus_one({{1.0, {1.0}}, {1.0, {-1.0}}});
  const auto v = nonneg_on_sublevel(abs_plus_one, g_line);
  CHECK((v.kind == NonnegKind::kZeroInSet || v.kind == NonnegKind::kPositiveGap));
  // Grid oracle: min of |x|+1 over {x - 1 <= 0} is indeed nonnegative.
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 2000; ++i) {
    const double x = -100.0 + 0.1 * i;
    if (x - 1.0 <= 0.0) lo = std::min(lo, std::abs(x) + 1.0);
  }
  CHECK(lo >= 0.0);
}

TEST_CASE("sublevel witness stays strictly inside the sublevel set") {
  // f = |x| - 1 dips below zero on {x - 1 <= 0}; the witness must have g < 0.
  const Polytoped s_f({{-1.0, {1.0}}, {-1.0, {-1.0}}});
  const Polytoped s_g({{-1.0, {1.0}}});
  const auto verdict = nonneg_on_sublevel(s_f, s_g);
  REQUIRE(verdict.kind == NonnegKind::kNegativeWitness);
  CHECK(eval_support(s_f, *verdict.witness) < 0.0);
  CHECK(eval_support(s_g, *verdict.witness) < 0.0);
  CHECK(*verdict.witness_value == doctest::Approx(eval_support(s_f, *verdict.witness)));
}

TEST_CASE("sublevel check refuses a certificate for an unbounded objective") {
  // f = g = 1 + x/2: a positive-gap certificate would be wrong here (f is
  // negative on part of {g < 0}); the boundedness test reports unboundedness.
  const Polytoped aff({{1.0, {0.5}}});
  const auto verdict = nonneg_on_sublevel(aff, aff);
  CHECK(verdict.kind == NonnegKind::kUnboundedBelow);
  const VectorX<double> d = *verdict.direction;
  CHECK(eval_support(aff, VectorX<double>(-100.0 * d)) < 0.0);
}

TEST_CASE("Fenchel inequality against evaluation") {
  oracles::Rng rng(33);
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = oracles::random_polytope(rng, 2, 6);
    // pick v inside the slope hull so the conjugate is finite
    VectorX<double> w = oracles::random_vector(rng, s.vertex_count(), 0.0, 1.0);
    w /= w.sum();
    const VectorX<double> v = s.slopes() * w;
    const auto conj = conjugate_value(s, v);
    REQUIRE(conj.has_value());
    for (int t = 0; t < 25; ++t) {
      const auto x = oracles::random_vector(rng, 2, -3.0, 3.0);
      CHECK(*conj <= eval_support(s, x) - v.dot(x) + 1e-8);
    }
  }
}

TEST_CASE("infimum lower-bounds evaluation everywhere") {
  oracles::Rng rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = oracles::random_polytope(rng, 2, 6);
    const auto inf = infimum(s);
    if (!inf) continue;
    for (int t = 0; t < 1000; ++t) {
      const auto x = oracles::random_vector(rng, 2, -50.0, 50.0);
      CHECK(*inf <= eval_support(s, x) + 1e-8);
    }
  }
}

TEST_CASE("attained minimizer evaluates to the infimum") {
  oracles::Rng rng(35);
  int attained = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = oracles::random_polytope(rng, 2, 6);
    if (!is_bounded_below(s)) continue;
    const auto w = attained_minimizer(s);
    if (!w) continue;
    ++attained;
    CHECK(eval_support(s, *w) == doctest::Approx(*infimum(s)).epsilon(1e-7));
  }
  CHECK(attained > 0);
}
