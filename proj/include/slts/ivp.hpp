#ifndef SLTS_IVP_HPP
#define SLTS_IVP_HPP

#include <complex>
#include <functional>

#include "slts/coefficients.hpp"
#include "slts/rk45.hpp"
#include "slts/time_scale.hpp"
#include "slts/trajectory.hpp"

namespace slts {

struct IvpOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// When set, solve_ivp insists on a validated coefficient hypothesis.
  bool require_hypothesis = true;
};

/// Inhomogeneity g evaluated on the scale; an empty function means g = 0.
using SourceFn = std::function<Complex(double)>;

/// Exact step across a right-scattered point t with graininess mu:
///   d' = d + mu * [(q(t) - z r(t)) u - r(t) g(t)]
///   u' = u + mu * d'/p(sigma(t))
/// Throws NumericalError when p(sigma(t)) = 0.
StatePair step_scattered(const StatePair& s, double t, const CoefficientSet& cs,
                         const TimeScale& ts, Complex z, Complex g_val = 0.0);

/// Algebraic inverse of step_scattered: state at sigma(t) back to t.
StatePair step_scattered_inverse(const StatePair& s_next, double t,
                                 const CoefficientSet& cs, const TimeScale& ts,
                                 Complex z, Complex g_val = 0.0);

/// Adaptive integration of u' = d/p, d' = (q - z r) u - r g over [alpha, beta]
/// (either direction). Optional dense output and accepted-node recording.
/// Detects p = 0 and p sign changes inside the segment.
StatePair step_continuous(const StatePair& s, double alpha, double beta,
                          const CoefficientSet& cs, const TimeScale& ts, Complex z,
                          const SourceFn& g, const OdeOptions& ode,
                          DenseSegment* dense = nullptr,
                          std::vector<Trajectory::Node>* nodes = nullptr);

/// Solves (ell - z)u = g with u(c) = d1, u^[1](c) = d2, propagating in both
/// directions from the anchor c (which must lie on the trimmed scale).
Trajectory solve_ivp(const TimeScale& ts, const CoefficientSet& cs, Complex z,
                     double c, Complex d1, Complex d2, const SourceFn& g = {},
                     const IvpOptions& opts = {});

/// Lean left-to-right propagation from sigma(a) to b without any recording;
/// used by characteristic-function scans.
StatePair shoot(const TimeScale& ts, const CoefficientSet& cs, Complex z,
                const StatePair& at_sigma_a, const SourceFn& g = {},
                const IvpOptions& opts = {});

/// theta and phi anchored at sigma(a):
///   theta(sigma(a)) = cos(phi_alpha),  theta^[1](sigma(a)) = -sin(phi_alpha)
///   phi(sigma(a))   = sin(phi_alpha),  phi^[1](sigma(a))   =  cos(phi_alpha)
/// phi satisfies the separated boundary condition at sigma(a); W(theta,phi)=1.
struct FundamentalSystem {
  Trajectory theta;
  Trajectory phi;
};
FundamentalSystem fundamental_system(const TimeScale& ts, const CoefficientSet& cs,
                                     Complex z, double phi_alpha,
                                     const IvpOptions& opts = {});

/// W(f,g)(x) = f(x) g^[1](x) - f^[1](x) g(x); x must lie on the trimmed scale.
Complex wronskian(const Trajectory& f, const Trajectory& g, double x);

/// Max over the union of both sample grids of |W(x) - W(x_first)|; the
/// constancy witness for pairs of homogeneous solutions.
double wronskian_variation(const Trajectory& f, const Trajectory& g);

/// 2x2 matrix mapping the state at sigma(a) to the state at b. Wronskian
/// preservation makes det M(z) = 1 for real coefficients.
struct TransferMatrix {
  Complex m11, m12, m21, m22;
  Complex det() const { return m11 * m22 - m12 * m21; }
  StatePair apply(const StatePair& s) const {
    return {m11 * s.u + m12 * s.d, m21 * s.u + m22 * s.d};
  }
  double norm() const;
};
TransferMatrix transfer_matrix(const TimeScale& ts, const CoefficientSet& cs,
                               Complex z, const IvpOptions& opts = {});

}  // namespace slts

#endif
