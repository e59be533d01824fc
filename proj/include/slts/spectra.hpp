#ifndef SLTS_SPECTRA_HPP
#define SLTS_SPECTRA_HPP

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "slts/coefficients.hpp"
#include "slts/ivp.hpp"
#include "slts/operators.hpp"
#include "slts/time_scale.hpp"
#include "slts/trajectory.hpp"

namespace slts {

struct SpectralOptions {
  IvpOptions ivp{};
  int initial_grid = 256;       // uniform scan points over the requested range
  int refine_factor = 4;        // grid refinement where |D| dips without sign change
  int max_refine_levels = 2;
  double bisect_rel_tol = 1e-12;
  double pole_guard = 1e-10;    // reject kernels/m-values when |D(z)| drops below
                                // pole_guard * scale
  double transfer_norm_warn = 1e8;
};

/// D(lambda): for separated conditions the right-boundary residual of the
/// left-condition solution phi_lambda; for coupled conditions
/// det(M(lambda) - e^{i phi} R) with M the transfer matrix. Zero exactly at
/// eigenvalues.
Complex characteristic_function(Complex lambda, const TimeScale& ts,
                                const CoefficientSet& cs, const BoundaryCondition& bc,
                                const SpectralOptions& opts = {});

/// All real zeros of D in [lo, hi] (at most max_count, ascending): sign-change
/// bracketing on an adaptively refined grid, then bisection to relative
/// tolerance; dips without sign change are minimized to catch double roots of
/// coupled problems. Coupled search requires phi = 0. Throws NumericalError
/// (with a grid trace) if the bracket budget is exhausted.
std::vector<double> find_eigenvalues(const TimeScale& ts, const CoefficientSet& cs,
                                     const BoundaryCondition& bc, double lo,
                                     double hi, int max_count,
                                     const SpectralOptions& opts = {});

/// Normalized eigenfunction and the spectral-measure atom mass
/// 1/||phi_lambda||^2 recorded before normalization. Separated conditions
/// only; lambda must be a located zero of D.
struct Eigenpair {
  double lambda;
  Trajectory eigenfunction;    // unit norm in L2(r d sigma_kappa)
  double norming_constant;
};
Eigenpair eigenpair(double lambda, const TimeScale& ts, const CoefficientSet& cs,
                    const BoundaryCondition& bc, const SpectralOptions& opts = {});

struct SpectralResult {
  std::vector<double> eigenvalues;
  std::vector<Trajectory> eigenfunctions;   // unit norm, aligned with eigenvalues
  std::vector<double> norming_constants;    // spectral-measure atom masses
  BoundaryCondition bc = BoundaryCondition::separated(0.0, 0.0);
  double bisect_rel_tol = 0.0;
};

/// find_eigenvalues plus eigenpairs (separated conditions).
SpectralResult solve_spectrum(const TimeScale& ts, const CoefficientSet& cs,
                              const BoundaryCondition& bc, double lo, double hi,
                              int max_count, const SpectralOptions& opts = {});

/// G_z(x,y) = u_a(min) u_b(max) / W(u_b, u_a) with u_a satisfying the left
/// condition and u_b the right condition. Construction throws NumericalError
/// when z sits at (or numerically near) an eigenvalue.
class GreenKernel {
 public:
  GreenKernel(Complex z, const TimeScale& ts, const CoefficientSet& cs,
              const BoundaryCondition& bc, const SpectralOptions& opts = {});

  Complex operator()(double x, double y) const;
  Complex wronskian() const { return w_; }
  const Trajectory& left_solution() const { return u_a_; }
  const Trajectory& right_solution() const { return u_b_; }
  Complex z() const { return z_; }

 private:
  Complex z_;
  Trajectory u_a_, u_b_;
  Complex w_;
};

Complex green_kernel(Complex z, double x, double y, const TimeScale& ts,
                     const CoefficientSet& cs, const BoundaryCondition& bc,
                     const SpectralOptions& opts = {});

/// (R_z f)(x) = integral of G_z(x,y) f(y) r(y) d sigma_kappa(y), evaluable
/// anywhere on the scale together with its quasi-derivative.
class ResolventApplication {
 public:
  ResolventApplication(Complex z, std::function<Complex(double)> f,
                       const TimeScale& ts, const CoefficientSet& cs,
                       const BoundaryCondition& bc, const SpectralOptions& opts = {});

  Complex value(double x) const;
  Complex qderiv(double x) const;
  ScaleFunction as_function() const;

 private:
  // partial integrals of u_a f r and u_b f r against sigma_kappa up to every
  // component boundary, refined locally on demand
  Complex lower_integral(double x) const;   // over (a, x]
  Complex upper_integral(double x) const;   // over (x, b]
  TimeScale ts_;
  CoefficientSet cs_;
  std::function<Complex(double)> f_;
  GreenKernel kernel_;
  QuadratureOptions quad_;
  // cumulative integrals of u_a f r and u_b f r over (a, comp_i.hi]
  std::vector<Complex> lower_a_;
  std::vector<Complex> lower_b_;
  Complex total_upper_;
};

std::vector<std::pair<double, Complex>> resolvent_apply(
    Complex z, const std::function<Complex(double)>& f, const TimeScale& ts,
    const CoefficientSet& cs, const BoundaryCondition& bc,
    std::span<const double> grid, const SpectralOptions& opts = {});

struct MSample {
  Complex z;
  Complex m;
};

/// Weyl-Titchmarsh m(z): the coefficient making theta_z + m(z) phi_z satisfy
/// the right boundary condition. Throws NumericalError near eigenvalues.
MSample m_function(Complex z, const TimeScale& ts, const CoefficientSet& cs,
                   const BoundaryCondition& bc, const SpectralOptions& opts = {});

/// Forward transform: c_k = integral of phi_k f r d(sigma_kappa) with the
/// pre-normalization solutions phi_k, so Parseval reads
/// ||f||^2 = sum c_k^2 norming_constant_k.
std::vector<Complex> spectral_transform_forward(
    const std::function<Complex(double)>& f, const SpectralResult& sr,
    const TimeScale& ts, const CoefficientSet& cs, const QuadratureOptions& opts = {});

/// Inverse transform: sum of c_k norming_constant_k phi_k, returned as an
/// evaluable function (valid while sr lives).
ScaleFunction spectral_transform_inverse(std::span<const Complex> coefficients,
                                         const SpectralResult& sr);

struct AsymptoticRow {
  int n;
  double eigenvalue;
  double ratio;    // E_n / n^2
  double target;   // pi^2 / L^2
};

struct AsymptoticReport {
  bool applicable = false;
  std::string note;
  double length = 0.0;
  std::vector<AsymptoticRow> rows;
  double relative_gap = 0.0;  // |E_n/n^2 - target| / target at the largest n
};

/// Eigenvalue growth against the continuous-part length L; inapplicable when
/// L = 0 (discrete-dominated scale, reported as such).
AsymptoticReport asymptotic_ratio(const SpectralResult& sr, double L);

struct WeylDisk {
  double b;         // truncation endpoint
  Complex center;
  double radius;
};

/// Disk of m-values over all right-boundary angles for each truncation,
/// fitted from a 64-angle sweep. Shrinking radii suggest limit-point
/// behavior, stabilizing radii suggest limit-circle behavior; this is a
/// heuristic diagnostic, never a certificate. Truncations must be nested
/// restrictions of the same scale.
std::vector<WeylDisk> weyl_disks(Complex z, std::span<const TimeScale> truncations,
                                 const CoefficientSet& cs, double phi_alpha,
                                 const SpectralOptions& opts = {});

}  // namespace slts

#endif
