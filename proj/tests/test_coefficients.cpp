#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "slts/coefficients.hpp"
#include "slts/errors.hpp"
#include "slts/ivp.hpp"
#include "support/generators.hpp"

using namespace slts;

namespace {

CoefficientSet unit_coefficients() {
  return CoefficientSet(Expression::parse("1"), Expression::parse("1"),
                        Expression::parse("0"));
}

TimeScale six_points() {
  return TimeScale({{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}});
}

}  // namespace

TEST_CASE("hypothesis validation: pass and named failures") {
  const HypothesisReport ok = validate_hypothesis(unit_coefficients(), six_points());
  CHECK(ok.ok);
  REQUIRE(ok.clauses.size() == 4);

  const CoefficientSet bad_r(Expression::parse("-1"), Expression::parse("1"),
                             Expression::parse("0"));
  const HypothesisReport rneg = validate_hypothesis(bad_r, six_points());
  CHECK_FALSE(rneg.ok);
  CHECK_FALSE(rneg.clauses[0].passed);
  CHECK(rneg.clauses[0].id == "(i)");

  const HypothesisReport few =
      validate_hypothesis(unit_coefficients(), TimeScale({{0, 0}, {1, 1}, {2, 2}, {3, 3}}));
  CHECK_FALSE(few.ok);
  CHECK_FALSE(few.clauses[3].passed);
  CHECK(few.clauses[3].id == "(iv)");

  const CoefficientSet zero_p(Expression::parse("1"), Expression::parse("t - 2"),
                              Expression::parse("0"));
  const HypothesisReport pz = validate_hypothesis(zero_p, six_points());
  CHECK_FALSE(pz.ok);
  CHECK_FALSE(pz.clauses[2].passed);
}

TEST_CASE("an interval makes clause (iv) pass") {
  CHECK(validate_hypothesis(unit_coefficients(), TimeScale({{0.0, 0.25}})).ok);
}

TEST_CASE("bar extension: identity on the trimmed scale, constant on gaps") {
  const TimeScale ts({{0.0, 1.0}, {2.0, 2.0}});
  const PiecewiseExpression f(Expression::parse("t^2"));
  CHECK(extend_bar(f, ts, 0.5) == doctest::Approx(0.25));
  CHECK(extend_bar(f, ts, 1.5) == doctest::Approx(4.0));  // value at sigma_kappa = 2
  CHECK(extend_bar(f, ts, 1.2) == doctest::Approx(extend_bar(f, ts, 1.8)));
  CHECK_THROWS_AS(extend_bar(f, ts, 2.5), ValidationError);

  // scattered minimum: a is off the trimmed scale, so the bar reads sigma(a)
  const TimeScale ts2({{0.0, 0.0}, {1.0, 2.0}});
  CHECK(extend_bar(f, ts2, 0.0) == doctest::Approx(1.0));
  CHECK(extend_bar(f, ts2, -3.0) == doctest::Approx(1.0));
  CHECK(extend_bar(f, ts2, 1.5) == doctest::Approx(2.25));
}

TEST_CASE("per-component coefficients evaluate by component") {
  const TimeScale ts({{0.0, 1.0}, {2.0, 2.0}});
  const PiecewiseExpression f(
      std::vector<Expression>{Expression::parse("1"), Expression::parse("10")});
  CHECK(f.eval(ts, 0.5) == doctest::Approx(1.0));
  CHECK(f.eval(ts, 2.0) == doctest::Approx(10.0));
  CHECK(f.eval_bar(ts, 1.5) == doctest::Approx(10.0));
  const PiecewiseExpression wrong(
      std::vector<Expression>{Expression::parse("1"), Expression::parse("2"),
                              Expression::parse("3")});
  CHECK_THROWS_AS(wrong.eval(ts, 0.5), ValidationError);
}

TEST_CASE("hat extension interpolates affinely across the gap") {
  // p = 0.5 on the point component makes u(2) = 3 from u(1) = 1, d(1) = 1
  const TimeScale ts({{0.0, 1.0}, {2.0, 2.0}});
  const CoefficientSet cs(
      PiecewiseExpression(Expression::parse("1")),
      PiecewiseExpression(std::vector<Expression>{Expression::parse("1"),
                                                  Expression::parse("0.5")}),
      PiecewiseExpression(Expression::parse("0")));
  cs.validate(ts);
  const Trajectory u = solve_ivp(ts, cs, 0.0, 0.0, 0.0, 1.0);
  CHECK(u.value(1.0).real() == doctest::Approx(1.0));
  CHECK(u.value(2.0).real() == doctest::Approx(3.0));

  // u_nabla(2) = (3 - 1)/1 = 2, so u_hat(1.5) = 3 + 2*(1.5 - 2) = 2
  CHECK(extend_hat(u, ts, 1.5).real() == doctest::Approx(2.0));

  // identity on the scale
  CHECK(extend_hat(u, ts, 0.7).real() == doctest::Approx(u.value(0.7).real()));
  CHECK(extend_hat(u, ts, 2.0).real() == doctest::Approx(3.0));

  // three-point collinearity on the gap
  const Complex h1 = extend_hat(u, ts, 1.2);
  const Complex h2 = extend_hat(u, ts, 1.5);
  const Complex h3 = extend_hat(u, ts, 1.8);
  CHECK(std::abs(h2 - 0.5 * (h1 + h3)) < 1e-12);

  // continuity at the gap edges
  CHECK(std::abs(extend_hat(u, ts, 1.0 + 1e-9) - u.value(1.0)) < 1e-8);
  CHECK(std::abs(extend_hat(u, ts, 2.0 - 1e-9) - u.value(2.0)) < 1e-8);

  CHECK_THROWS_AS(extend_hat(u, ts, 2.5), ValidationError);
}

TEST_CASE("geometric length") {
  const CoefficientSet unit = unit_coefficients();
  CHECK(geometric_length(unit, TimeScale({{0.0, 2.0}})) == doctest::Approx(2.0));
  CHECK(geometric_length(unit, six_points()) == doctest::Approx(0.0));
  const CoefficientSet r4(Expression::parse("4"), Expression::parse("1"),
                          Expression::parse("0"));
  CHECK(geometric_length(r4, TimeScale({{0.0, 1.0}})) == doctest::Approx(2.0));

  // additive over components and homogeneous of degree 1/2 in r
  const TimeScale hybrid({{0.0, 1.0}, {2.0, 3.0}, {4.0, 4.0}});
  const double both = geometric_length(unit, hybrid);
  CHECK(both == doctest::Approx(2.0));
  const CoefficientSet r9(Expression::parse("9"), Expression::parse("1"),
                          Expression::parse("0"));
  CHECK(geometric_length(r9, hybrid) == doctest::Approx(3.0 * both).epsilon(1e-12));

  const CoefficientSet pneg(Expression::parse("1"), Expression::parse("-1"),
                            Expression::parse("0"));
  CHECK_THROWS_AS(geometric_length(pneg, TimeScale({{0.0, 1.0}})), ValidationError);
}

TEST_CASE("measure triple masses") {
  const TimeScale ts({{0.0, 1.0}, {2.0, 2.0}});
  const CoefficientSet cs(Expression::parse("2"), Expression::parse("4"),
                          Expression::parse("t"));
  const MeasureTriple mt(ts, cs);
  // varrho = r d(sigma_kappa): Lebesgue part 2*|[0,1]| plus atom 2*1 at t=1
  CHECK(mt.varrho_mass(-1.0, 3.0) == doctest::Approx(4.0));
  CHECK(mt.varrho_mass(0.0, 0.5) == doctest::Approx(1.0));
  // chi = q d(sigma_kappa): integral of t over [0,1] plus 1*q(1)
  CHECK(mt.chi_mass(-1.0, 3.0) == doctest::Approx(0.5 + 1.0));
  // varsigma has full support: density 1/4 everywhere (p-bar is constant 4)
  CHECK(mt.varsigma_mass(0.0, 1.0) == doctest::Approx(0.25));
  CHECK(mt.varsigma_mass(1.0, 2.0) == doctest::Approx(0.25));  // gap carries mass
}

TEST_CASE("measure-form expression matches the scale form on a hybrid solve") {
  const TimeScale ts({{0.0, 1.2}, {2.0, 2.0}, {2.8, 4.0}});
  const CoefficientSet cs(Expression::parse("1 + 0.2*sin(0.8*t)"),
                          Expression::parse("1.1 + 0.15*cos(0.6*t)"),
                          Expression::parse("0.4*cos(t)"));
  cs.validate(ts);
  const Complex z(0.45, 0.0);
  IvpOptions opts;
  opts.rel_tol = 1e-13;
  opts.abs_tol = 1e-15;
  const Trajectory u = solve_ivp(ts, cs, z, 0.0, 0.9, 0.35, {}, opts);
  const MeasureTriple mt(ts, cs);
  auto uhat = [&](double x) { return extend_hat(u, ts, x); };

  // ell u = z u exactly along the solve; tau of the extension must agree
  for (double x : {0.3, 0.61, 0.97, 3.1, 3.55, 3.9}) {
    const Complex lhs = mt.tau(uhat, x);
    const Complex rhs = z * u.value(x);
    CHECK(std::abs(lhs - rhs) <= 1e-8 * (1.0 + std::abs(rhs)));
  }
  for (double atom : {1.2, 2.0}) {
    const Complex lhs = mt.tau(uhat, atom);
    const Complex rhs = z * u.value(atom);
    CHECK(std::abs(lhs - rhs) <= 1e-8 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("tau rejects points without sigma_kappa mass") {
  const TimeScale ts({{0.0, 0.0}, {1.0, 2.0}});
  const CoefficientSet cs = unit_coefficients();
  const MeasureTriple mt(ts, cs);
  auto f = [](double x) { return Complex(x, 0.0); };
  CHECK_THROWS_AS(mt.tau(f, 0.0), ValidationError);  // scattered minimum
  CHECK_THROWS_AS(mt.tau(f, 2.0), ValidationError);  // right endpoint
  CHECK_THROWS_AS(mt.tau(f, 0.5), ValidationError);  // gap interior
}
