#ifndef SLTS_RK45_HPP
#define SLTS_RK45_HPP

// Embedded Dormand-Prince 5(4) pair with FSAL and dense output, specialized
// to the two-component complex state (u, u^[1]) propagated on continuous
// segments. Tableau and dense-output weights follow Hairer, Norsett & Wanner,
// "Solving Ordinary Differential Equations I" (DOPRI5).

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "slts/errors.hpp"
#include "slts/trajectory.hpp"

namespace slts {

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  long max_steps = 2000000;
};

namespace dopri5 {

constexpr double c2 = 0.2, c3 = 0.3, c4 = 0.8, c5 = 8.0 / 9.0;
constexpr double a21 = 0.2, a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0,
                 d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0,
                 d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0,
                 d7 = 69997945.0 / 29380423.0;

inline StatePair axpy(const StatePair& y, double h, const StatePair& k) {
  return {y.u + h * k.u, y.d + h * k.d};
}

}  // namespace dopri5

/// Integrates dy/dt = f(t, y) from t0 to t1 (either direction). When dense or
/// nodes are non-null they receive the quintic Hermite dense output and the
/// accepted step points (excluding the initial point), both in ascending x.
/// Throws NumericalError on step-size underflow or budget exhaustion.
template <class Rhs>
StatePair integrate_dopri5(Rhs&& f, double t0, double t1, StatePair y0,
                           const OdeOptions& opts, DenseSegment* dense = nullptr,
                           std::vector<Trajectory::Node>* nodes = nullptr) {
  using namespace dopri5;
  if (t0 == t1) return y0;
  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  const double uround = std::numeric_limits<double>::epsilon();

  auto err_norm = [&](const StatePair& e, const StatePair& ya, const StatePair& yb) {
    const double scu = opts.abs_tol +
                       opts.rel_tol * std::max(std::abs(ya.u), std::abs(yb.u));
    const double scd = opts.abs_tol +
                       opts.rel_tol * std::max(std::abs(ya.d), std::abs(yb.d));
    const double ru = std::abs(e.u) / scu;
    const double rd = std::abs(e.d) / scd;
    return std::sqrt(0.5 * (ru * ru + rd * rd));
  };

  double t = t0;
  StatePair y = y0;
  StatePair k1 = f(t, y);

  // initial step-size guess (Hairer's hinit, simplified)
  double h;
  {
    const double d0 = err_norm({y.u, y.d}, y, y);
    const double dd1 = err_norm({k1.u, k1.d}, y, y);
    double h0 = (d0 < 1e-10 || dd1 < 1e-10) ? 1e-6 : 0.01 * (d0 / dd1);
    h0 = std::min(h0, span);
    StatePair y1e = axpy(y, dir * h0, k1);
    StatePair k2e = f(t + dir * h0, y1e);
    const double d2 =
        err_norm({k2e.u - k1.u, k2e.d - k1.d}, y, y) / h0;
    double h1 = std::max(dd1, d2) <= 1e-15
                    ? std::max(1e-6, h0 * 1e-3)
                    : std::pow(0.01 / std::max(dd1, d2), 0.2);
    h = std::min({100.0 * h0, h1, span});
  }

  long nstep = 0;
  bool rejected = false;
  while (dir * (t1 - t) > 0.0) {
    if (++nstep > opts.max_steps)
      throw NumericalError("integrator step budget exhausted near t = " +
                           std::to_string(t));
    if (h < 16.0 * uround * std::max(std::abs(t), 1.0))
      throw NumericalError("step size underflow (stiffness or singularity) at t = " +
                           std::to_string(t));
    h = std::min(h, std::abs(t1 - t));
    const double hs = dir * h;

    StatePair k2 = f(t + c2 * hs, axpy(y, hs * a21, k1));
    StatePair k3 = f(t + c3 * hs, {y.u + hs * (a31 * k1.u + a32 * k2.u),
                                   y.d + hs * (a31 * k1.d + a32 * k2.d)});
    StatePair k4 = f(t + c4 * hs,
                     {y.u + hs * (a41 * k1.u + a42 * k2.u + a43 * k3.u),
                      y.d + hs * (a41 * k1.d + a42 * k2.d + a43 * k3.d)});
    StatePair k5 = f(t + c5 * hs,
                     {y.u + hs * (a51 * k1.u + a52 * k2.u + a53 * k3.u + a54 * k4.u),
                      y.d + hs * (a51 * k1.d + a52 * k2.d + a53 * k3.d + a54 * k4.d)});
    const double tph = t + hs;
    StatePair k6 = f(tph, {y.u + hs * (a61 * k1.u + a62 * k2.u + a63 * k3.u +
                                       a64 * k4.u + a65 * k5.u),
                           y.d + hs * (a61 * k1.d + a62 * k2.d + a63 * k3.d +
                                       a64 * k4.d + a65 * k5.d)});
    StatePair ynew = {y.u + hs * (a71 * k1.u + a73 * k3.u + a74 * k4.u +
                                  a75 * k5.u + a76 * k6.u),
                      y.d + hs * (a71 * k1.d + a73 * k3.d + a74 * k4.d +
                                  a75 * k5.d + a76 * k6.d)};
    StatePair k7 = f(tph, ynew);
    StatePair errv = {hs * (e1 * k1.u + e3 * k3.u + e4 * k4.u + e5 * k5.u +
                            e6 * k6.u + e7 * k7.u),
                      hs * (e1 * k1.d + e3 * k3.d + e4 * k4.d + e5 * k5.d +
                            e6 * k6.d + e7 * k7.d)};
    const double err = err_norm(errv, y, ynew);

    if (err <= 1.0) {
      if (dense != nullptr) {
        // 4th-order continuous extension gives the midpoint; the quintic
        // Hermite through both endpoints and the midpoint serves dense output.
        auto contd5 = [&](Complex y0c, Complex ydiff, Complex bspl, Complex c4c,
                          Complex c5c, double theta) {
          const double th1 = 1.0 - theta;
          return y0c + theta * (ydiff + th1 * (bspl + theta * (c4c + th1 * c5c)));
        };
        StatePair ymid, fmid;
        {
          const Complex ydu = ynew.u - y.u, ydd = ynew.d - y.d;
          const Complex bsu = hs * k1.u - ydu, bsd = hs * k1.d - ydd;
          const Complex c4u = -hs * k7.u + ydu - bsu, c4d = -hs * k7.d + ydd - bsd;
          const Complex c5u = hs * (d1 * k1.u + d3 * k3.u + d4 * k4.u + d5 * k5.u +
                                    d6 * k6.u + d7 * k7.u);
          const Complex c5d = hs * (d1 * k1.d + d3 * k3.d + d4 * k4.d + d5 * k5.d +
                                    d6 * k6.d + d7 * k7.d);
          ymid = {contd5(y.u, ydu, bsu, c4u, c5u, 0.5),
                  contd5(y.d, ydd, bsd, c4d, c5d, 0.5)};
          fmid = f(t + 0.5 * hs, ymid);
        }
        if (hs > 0.0) {
          dense->add_step(t, tph,
                          DenseSegment::hermite_quintic(y.u, hs * k1.u, ymid.u,
                                                        hs * fmid.u, ynew.u,
                                                        hs * k7.u),
                          DenseSegment::hermite_quintic(y.d, hs * k1.d, ymid.d,
                                                        hs * fmid.d, ynew.d,
                                                        hs * k7.d));
        } else {
          dense->add_step(tph, t,
                          DenseSegment::hermite_quintic(ynew.u, -hs * k7.u, ymid.u,
                                                        -hs * fmid.u, y.u,
                                                        -hs * k1.u),
                          DenseSegment::hermite_quintic(ynew.d, -hs * k7.d, ymid.d,
                                                        -hs * fmid.d, y.d,
                                                        -hs * k1.d));
        }
      }
      t = tph;
      y = ynew;
      k1 = k7;  // FSAL
      if (nodes != nullptr) nodes->push_back({t, y});
      double fac = 0.9 * std::pow(std::max(err, 1e-16), -0.2);
      fac = std::min(rejected ? 1.0 : 10.0, std::max(0.2, fac));
      h *= fac;
      rejected = false;
    } else {
      rejected = true;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
  }
  return y;
}

}  // namespace slts

#endif
