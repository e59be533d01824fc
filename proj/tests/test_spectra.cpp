#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "slts/errors.hpp"
#include "slts/spectra.hpp"
#include "support/generators.hpp"
#include "support/tridiag.hpp"

using namespace slts;
using std::numbers::pi;

namespace {

CoefficientSet unit_coefficients() {
  return CoefficientSet(Expression::parse("1"), Expression::parse("1"),
                        Expression::parse("0"));
}

TimeScale interval01() { return TimeScale({{0.0, 1.0}}); }

BoundaryCondition dirichlet() { return BoundaryCondition::separated(0.0, 0.0); }

TimeScale points_upto(int n) {
  std::vector<Component> comps;
  for (int i = 0; i <= n; ++i) comps.push_back({double(i), double(i)});
  return TimeScale(std::move(comps));
}

}  // namespace

TEST_CASE("characteristic function of the classical Dirichlet problem") {
  const TimeScale ts = interval01();
  const CoefficientSet cs = unit_coefficients();
  // D(lambda) = sin(sqrt(lambda))/sqrt(lambda): D(0) = 1, D(pi^2) = 0
  CHECK(characteristic_function(0.0, ts, cs, dirichlet()).real() ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(characteristic_function(pi * pi, ts, cs, dirichlet())) < 1e-10);
  const Complex probe(17.3, 0.0);
  const double expect = std::sin(std::sqrt(17.3)) / std::sqrt(17.3);
  CHECK(characteristic_function(probe, ts, cs, dirichlet()).real() ==
        doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("characteristic function is analytic in lambda") {
  const TimeScale ts({{0.0, 1.0}, {1.5, 1.5}, {2.0, 2.0}});
  const CoefficientSet cs = unit_coefficients();
  const BoundaryCondition bc = BoundaryCondition::separated(0.4, 0.9);
  SpectralOptions opts;
  opts.ivp.rel_tol = 1e-12;
  opts.ivp.abs_tol = 1e-14;
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  const double h = 1e-5;
  for (int trial = 0; trial < 4; ++trial) {
    const Complex z(unit(rng), unit(rng));
    auto D = [&](Complex w) { return characteristic_function(w, ts, cs, bc, opts); };
    const Complex dx = (D(z + h) - D(z - h)) / (2.0 * h);
    const Complex dy = (D(z + Complex(0, h)) - D(z - Complex(0, h))) / (2.0 * h);
    const Complex zbar = 0.5 * (dx + Complex(0, 1) * dy);
    CHECK(std::abs(zbar) <= 1e-6 * (1.0 + std::abs(dx)));
  }
}

TEST_CASE("classical Dirichlet spectrum to 1e-8 relative") {
  const std::vector<double> ev =
      find_eigenvalues(interval01(), unit_coefficients(), dirichlet(), 0.0, 100.0, 3);
  REQUIRE(ev.size() == 3);
  for (int n = 0; n < 3; ++n) {
    const double exact = (n + 1.0) * (n + 1.0) * pi * pi;
    CHECK(std::abs(ev[n] - exact) <= 1e-8 * exact);
  }
}

TEST_CASE("discrete spectrum matches the tridiagonal oracle") {
  const int n = 9;
  const TimeScale ts = points_upto(n);
  const CoefficientSet cs(Expression::parse("1"), Expression::parse("1"),
                          Expression::parse("0.3*sin(t)"));
  const double half_pi = pi / 2.0;
  const BoundaryCondition bc = BoundaryCondition::separated(half_pi, half_pi);

  const auto oracle = slts::testing::assemble_discrete(ts, cs, half_pi, half_pi);
  const std::vector<double> expected = slts::testing::tridiag_eigenvalues(
      oracle.diag, oracle.off, static_cast<int>(oracle.diag.size()));

  const std::vector<double> ev = find_eigenvalues(ts, cs, bc, -2.0, 6.0, 20);
  REQUIRE(ev.size() == expected.size());
  for (std::size_t i = 0; i < ev.size(); ++i) {
    CHECK(std::abs(ev[i] - expected[i]) <= 1e-10);
  }
}

TEST_CASE("separated eigenvalues are simple") {
  // the eigenspace is one-dimensional: the independent solution theta_lambda
  // leaves a right-boundary residual bounded away from zero
  const TimeScale ts({{0.0, 1.0}, {1.5, 1.5}, {2.0, 2.0}});
  const CoefficientSet cs = unit_coefficients();
  const BoundaryCondition bc = BoundaryCondition::separated(0.7, 0.2);
  const std::vector<double> ev = find_eigenvalues(ts, cs, bc, -10.0, 60.0, 6);
  REQUIRE(!ev.empty());
  for (double lambda : ev) {
    const FundamentalSystem fs = fundamental_system(ts, cs, lambda, bc.alpha());
    const StatePair th = fs.theta.at(ts.b());
    const double res =
        std::abs(th.u * std::cos(bc.beta()) - th.d * std::sin(bc.beta()));
    CHECK(res > 1e-3);
  }
}

TEST_CASE("periodic conditions: simple root at 0, double root at 4 pi^2") {
  const BoundaryCondition periodic =
      BoundaryCondition::coupled(0.0, {{{1.0, 0.0}, {0.0, 1.0}}});
  const std::vector<double> ev = find_eigenvalues(interval01(), unit_coefficients(),
                                                  periodic, -5.0, 50.0, 10);
  REQUIRE(ev.size() >= 2);
  CHECK(std::abs(ev[0]) <= 1e-8);
  CHECK(std::abs(ev[1] - 4.0 * pi * pi) <= 1e-6);
}

TEST_CASE("eigenpair: normalized first eigenfunction of the classical problem") {
  const Eigenpair pair = eigenpair(pi * pi, interval01(), unit_coefficients(),
                                   dirichlet());
  // sqrt(2) sin(pi x) within 1e-7 pointwise
  for (double x : {0.1, 0.25, 0.5, 0.77, 0.9}) {
    const double exact = std::sqrt(2.0) * std::sin(pi * x);
    CHECK(std::abs(pair.eigenfunction.value(x).real() - exact) <= 1e-7);
  }
  // norming constant 1/||sin(pi x)/pi||^2 = 2 pi^2
  CHECK(pair.norming_constant == doctest::Approx(2.0 * pi * pi).epsilon(1e-8));
  CHECK_THROWS_AS(
      eigenpair(11.0, interval01(), unit_coefficients(), dirichlet()),
      NumericalError);
}

TEST_CASE("eigenfunctions are orthonormal with zero boundary residuals") {
  const TimeScale ts({{0.0, 1.0}, {1.25, 1.25}, {1.5, 1.5}, {1.75, 1.75}, {2.0, 2.0}});
  const CoefficientSet cs = unit_coefficients();
  const BoundaryCondition bc = dirichlet();
  const SpectralResult sr = solve_spectrum(ts, cs, bc, 0.0, 60.0, 4, {});
  REQUIRE(sr.eigenfunctions.size() >= 3);
  auto weight = [&](double x) { return Complex(cs.r(ts, x), 0.0); };
  for (std::size_t j = 0; j < sr.eigenfunctions.size(); ++j) {
    for (std::size_t k = j; k < sr.eigenfunctions.size(); ++k) {
      const Complex ip = integrate(
          ts,
          [&](double x) {
            return sr.eigenfunctions[j].value(x) *
                   std::conj(sr.eigenfunctions[k].value(x));
          },
          weight);
      CHECK(std::abs(ip - (j == k ? 1.0 : 0.0)) <= 1e-8);
    }
    CHECK(std::abs(bc_residual_left(sr.eigenfunctions[j], ts, bc.alpha())) <= 1e-8);
    CHECK(std::abs(bc_residual_right(sr.eigenfunctions[j], ts, bc.beta())) <= 1e-8);
  }
}

TEST_CASE("Green kernel closed form and symmetry") {
  // z = 0, Dirichlet on [0,1]: u_a = x, u_b = x - 1, W = -1
  // G(0.25, 0.75) = 0.25 * 0.25 = 0.0625
  const GreenKernel G(0.0, interval01(), unit_coefficients(), dirichlet());
  CHECK(G(0.25, 0.75).real() == doctest::Approx(0.0625).epsilon(1e-9));
  CHECK(G(0.75, 0.25).real() == doctest::Approx(0.0625).epsilon(1e-9));
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double x = unit(rng), y = unit(rng);
    CHECK(std::abs(G(x, y) - G(y, x)) <= 1e-12);
  }
  // at an eigenvalue the kernel does not exist
  CHECK_THROWS_AS(GreenKernel(pi* pi, interval01(), unit_coefficients(), dirichlet()),
                  NumericalError);
}

TEST_CASE("resolvent identity and spectral action") {
  const TimeScale ts({{0.0, 1.0}, {1.5, 1.5}, {2.0, 2.0}});
  const CoefficientSet cs = unit_coefficients();
  const BoundaryCondition bc = dirichlet();
  const Complex z(1.3, 0.9);
  auto f = [](double x) { return Complex(std::sin(1.1 * x) + 0.3, 0.0); };
  const ResolventApplication Rf(z, f, ts, cs, bc);

  // (ell - z) R_z f = f, checked through numerical differentiation of the output
  const ScaleFunction rf = Rf.as_function();
  for (double x : {0.31, 0.67, 1.0, 1.5}) {
    const Complex lhs = apply_ell_at(rf, cs, ts, x) - z * Rf.value(x);
    CHECK(std::abs(lhs - f(x)) <= 1e-7 * (1.0 + std::abs(f(x))));
  }

  // R_z phi_k = phi_k / (lambda_k - z)
  const SpectralResult sr = solve_spectrum(ts, cs, bc, 0.0, 40.0, 2, {});
  REQUIRE(!sr.eigenfunctions.empty());
  const Trajectory& phi0 = sr.eigenfunctions[0];
  const ResolventApplication Rphi(
      z, [&](double x) { return phi0.value(x); }, ts, cs, bc);
  for (double x : {0.2, 0.52, 1.0, 1.5, 2.0}) {
    const Complex expect = phi0.value(x) / (sr.eigenvalues[0] - z);
    CHECK(std::abs(Rphi.value(x) - expect) <= 1e-7 * (1.0 + std::abs(expect)));
  }

  // zero in, zero out
  const ResolventApplication Rzero(
      z, [](double) { return Complex(0.0, 0.0); }, ts, cs, bc);
  CHECK(std::abs(Rzero.value(0.5)) == 0.0);
}

TEST_CASE("m-function: closed form, Herglotz sign, pole blowup") {
  const TimeScale ts = interval01();
  const CoefficientSet cs = unit_coefficients();
  // m(-1) = -coth(1)
  const MSample at_m1 = m_function(Complex(-1.0, 0.0), ts, cs, dirichlet());
  CHECK(at_m1.m.real() == doctest::Approx(-1.0 / std::tanh(1.0)).epsilon(1e-10));
  CHECK(std::abs(at_m1.m.imag()) < 1e-10);

  const MSample at_i = m_function(Complex(0.0, 1.0), ts, cs, dirichlet());
  CHECK(at_i.m.imag() > 0.0);

  // |m| grows without bound approaching the lowest eigenvalue
  double prev = 0.0;
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    const MSample near_pole =
        m_function(Complex(pi * pi, eps), ts, cs, dirichlet());
    CHECK(std::abs(near_pole.m) > prev);
    prev = std::abs(near_pole.m);
  }
  CHECK(prev > 1e4);
  CHECK_THROWS_AS(m_function(Complex(pi * pi, 0.0), ts, cs, dirichlet()),
                  NumericalError);
}

TEST_CASE("m-function residue at an eigenvalue is minus the norming constant") {
  const TimeScale ts({{0.0, 1.0}, {1.5, 1.5}, {2.0, 2.0}});
  const CoefficientSet cs = unit_coefficients();
  const BoundaryCondition bc = BoundaryCondition::separated(0.5, 0.3);
  const SpectralResult sr = solve_spectrum(ts, cs, bc, -10.0, 30.0, 2, {});
  REQUIRE(!sr.eigenvalues.empty());
  const double eps = 1e-6;
  for (std::size_t k = 0; k < sr.eigenvalues.size(); ++k) {
    const MSample s = m_function(Complex(sr.eigenvalues[k], eps), ts, cs, bc);
    const Complex residue = Complex(0.0, eps) * s.m;
    CHECK(std::abs(residue - (-sr.norming_constants[k])) <=
          1e-5 * sr.norming_constants[k]);
  }
}

TEST_CASE("m is increasing between consecutive poles on the real axis") {
  const TimeScale ts = interval01();
  const CoefficientSet cs = unit_coefficients();
  const std::vector<double> ev =
      find_eigenvalues(ts, cs, dirichlet(), 0.0, 100.0, 3);
  REQUIRE(ev.size() >= 2);
  double prev = -1e300;
  for (int i = 1; i <= 9; ++i) {
    const double lambda = ev[0] + (ev[1] - ev[0]) * i / 10.0;
    const MSample s = m_function(Complex(lambda, 0.0), ts, cs, dirichlet());
    CHECK(s.m.real() > prev);
    prev = s.m.real();
  }
}

TEST_CASE("spectrum recovery from the boundary behavior of m") {
  const TimeScale ts = interval01();
  const CoefficientSet cs = unit_coefficients();
  const std::vector<double> ev =
      find_eigenvalues(ts, cs, dirichlet(), 0.0, 120.0, 3);
  const double eps = 1e-4;
  for (double lambda : ev) {
    const MSample on_peak = m_function(Complex(lambda, eps), ts, cs, dirichlet());
    CHECK(on_peak.m.imag() > 1.0);  // spike of height ~ gamma/eps
  }
  // midpoints between eigenvalues show no mass
  for (std::size_t i = 0; i + 1 < ev.size(); ++i) {
    const double mid = 0.5 * (ev[i] + ev[i + 1]);
    const MSample off_peak = m_function(Complex(mid, eps), ts, cs, dirichlet());
    CHECK(off_peak.m.imag() < 1.0);
  }
}

TEST_CASE("transform: round trip, Parseval, intertwining") {
  const TimeScale ts = interval01();
  const CoefficientSet cs = unit_coefficients();
  const SpectralResult sr = solve_spectrum(ts, cs, dirichlet(), 0.0, 120.0, 3, {});
  REQUIRE(sr.eigenfunctions.size() == 3);

  // f in the span of the first three eigenfunctions
  const Complex a0(0.8, 0.0), a1(-0.5, 0.0), a2(0.31, 0.0);
  auto f = [&](double x) {
    return a0 * sr.eigenfunctions[0].value(x) + a1 * sr.eigenfunctions[1].value(x) +
           a2 * sr.eigenfunctions[2].value(x);
  };
  const std::vector<Complex> coeffs = spectral_transform_forward(f, sr, ts, cs);
  REQUIRE(coeffs.size() == 3);

  // Parseval with exactly three terms
  const double norm_sq =
      integrate(ts, [&](double x) { return std::norm(f(x)); },
                [&](double x) { return Complex(cs.r(ts, x), 0.0); })
          .real();
  double sum = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    sum += std::norm(coeffs[k]) * sr.norming_constants[k];
  CHECK(std::abs(norm_sq - sum) <= 1e-8);

  // forward then inverse reproduces f
  const ScaleFunction finv = spectral_transform_inverse(coeffs, sr);
  for (double x : {0.12, 0.5, 0.89}) {
    CHECK(std::abs(finv.value(x) - f(x)) <= 1e-8);
  }

  // transform of ell f is lambda_k times the transform of f
  auto ellf = [&](double x) {
    return a0 * sr.eigenvalues[0] * sr.eigenfunctions[0].value(x) +
           a1 * sr.eigenvalues[1] * sr.eigenfunctions[1].value(x) +
           a2 * sr.eigenvalues[2] * sr.eigenfunctions[2].value(x);
  };
  const std::vector<Complex> lcoeffs = spectral_transform_forward(ellf, sr, ts, cs);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(std::abs(lcoeffs[k] - sr.eigenvalues[k] * coeffs[k]) <= 1e-7);
  }
}

TEST_CASE("asymptotic ratios approach pi^2/L^2") {
  const SpectralResult sr = solve_spectrum(interval01(), unit_coefficients(),
                                           dirichlet(), 0.0, 400.0, 6, {});
  const AsymptoticReport rep = asymptotic_ratio(sr, 1.0);
  REQUIRE(rep.applicable);
  // E_5/25 = 36 pi^2 / 25
  const AsymptoticRow& last = rep.rows.back();
  CHECK(last.n == 5);
  CHECK(last.ratio == doctest::Approx(36.0 * pi * pi / 25.0).epsilon(1e-8));
  CHECK(rep.relative_gap == doctest::Approx(std::pow(1.0 + 1.0 / 5.0, 2) - 1.0)
                                .epsilon(1e-6));

  // rescaled interval: the limit is pi^2/4
  const TimeScale wide({{0.0, 2.0}});
  const SpectralResult sr2 =
      solve_spectrum(wide, unit_coefficients(), dirichlet(), 0.0, 100.0, 6, {});
  const AsymptoticReport rep2 = asymptotic_ratio(sr2, 2.0);
  REQUIRE(rep2.applicable);
  CHECK(rep2.rows.back().ratio ==
        doctest::Approx(36.0 * pi * pi / 4.0 / 25.0).epsilon(1e-8));

  // discrete-dominated scale: inapplicable report
  const AsymptoticReport rep3 = asymptotic_ratio(sr, 0.0);
  CHECK_FALSE(rep3.applicable);
  CHECK(rep3.note.find("not captured") != std::string::npos);
}

TEST_CASE("Dirichlet and Neumann eigenvalues interlace") {
  const TimeScale ts = interval01();
  const CoefficientSet cs = unit_coefficients();
  const std::vector<double> d = find_eigenvalues(ts, cs, dirichlet(), -1.0, 150.0, 3);
  const std::vector<double> n = find_eigenvalues(
      ts, cs, BoundaryCondition::separated(pi / 2.0, pi / 2.0), -1.0, 150.0, 4);
  REQUIRE(d.size() >= 3);
  REQUIRE(n.size() >= 4);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(n[k] <= d[k] + 1e-7);
    CHECK(d[k] <= n[k + 1] + 1e-7);
  }
}

TEST_CASE("Weyl disks: single truncation, free decay, limit-circle potential") {
  const CoefficientSet cs = unit_coefficients();
  const Complex z(0.0, 1.0);

  // one bounded truncation: a genuine disk with positive radius
  {
    const TimeScale full({{0.0, 8.0}});
    const std::vector<TimeScale> one{full.truncate(5.0)};
    const auto disks = weyl_disks(z, one, cs, 0.0);
    REQUIRE(disks.size() == 1);
    CHECK(disks[0].radius > 0.0);
  }

  // free problem: radii decay toward zero (limit point at infinity)
  {
    const TimeScale full({{0.0, 20.0}});
    std::vector<TimeScale> truncs;
    for (double b : {5.0, 10.0, 15.0, 20.0}) truncs.push_back(full.truncate(b));
    const auto disks = weyl_disks(z, truncs, cs, 0.0);
    REQUIRE(disks.size() == 4);
    for (std::size_t i = 0; i + 1 < disks.size(); ++i) {
      CHECK(disks[i + 1].radius < disks[i].radius);
    }
    for (const WeylDisk& d : disks) {
      CHECK(d.radius <= 1.0 / d.b);
    }
    CHECK(disks.back().radius < 1e-10);
  }

  // q = -t^4: all solutions square integrable, radii stabilize at a positive value
  {
    const CoefficientSet osc(Expression::parse("1"), Expression::parse("1"),
                             Expression::parse("-t^4"));
    const TimeScale full({{0.0, 10.0}});
    std::vector<TimeScale> truncs;
    for (double b : {4.0, 6.0, 8.0, 10.0}) truncs.push_back(full.truncate(b));
    const auto disks = weyl_disks(z, truncs, osc, 0.0);
    REQUIRE(disks.size() == 4);
    for (const WeylDisk& d : disks) CHECK(d.radius > 0.0);
    for (std::size_t i = 0; i + 1 < disks.size(); ++i) {
      CHECK(disks[i + 1].radius <= disks[i].radius * (1.0 + 1e-9));
    }
    CHECK(disks.back().radius > 0.5 * disks.front().radius);
  }

  // non-nested truncations are rejected
  {
    const TimeScale full({{0.0, 8.0}});
    std::vector<TimeScale> bad{full.truncate(5.0), TimeScale({{0.5, 7.0}})};
    CHECK_THROWS_AS(weyl_disks(z, bad, cs, 0.0), ValidationError);
  }
}

TEST_CASE("hybrid spectrum against a fine-mesh discrete oracle") {
  // coarse version of the hybrid acceptance setup to keep unit tests quick
  const TimeScale hybrid(
      {{0.0, 1.0}, {1.25, 1.25}, {1.5, 1.5}, {1.75, 1.75}, {2.0, 2.0}});
  const CoefficientSet cs = unit_coefficients();
  const std::vector<double> ev =
      find_eigenvalues(hybrid, cs, dirichlet(), 0.0, 60.0, 3);
  REQUIRE(ev.size() == 3);

  const double h = 1e-3;
  std::vector<Component> comps;
  for (int i = 0; i <= 1000; ++i) comps.push_back({i * h, i * h});
  comps.push_back({1.25, 1.25});
  comps.push_back({1.5, 1.5});
  comps.push_back({1.75, 1.75});
  comps.push_back({2.0, 2.0});
  const TimeScale mesh(std::move(comps));
  const auto oracle = slts::testing::assemble_discrete(mesh, cs, 0.0, 0.0);
  const auto expected = slts::testing::tridiag_eigenvalues(oracle.diag, oracle.off, 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(ev[i] - expected[i]) <= 5e-3);  // O(h^2) mesh error at h = 1e-3
  }
}
