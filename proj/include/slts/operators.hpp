#ifndef SLTS_OPERATORS_HPP
#define SLTS_OPERATORS_HPP

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slts/coefficients.hpp"
#include "slts/time_scale.hpp"
#include "slts/trajectory.hpp"

namespace slts {

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Separated {phi_alpha, phi_beta} or coupled {phi, R} boundary data. Angles
/// are canonicalized into [0, pi) at construction (out-of-range values are
/// reduced mod pi with a warning on stderr); coupled data requires
/// |det R - 1| <= 1e-12.
class BoundaryCondition {
 public:
  enum class Kind { Separated, Coupled };

  static BoundaryCondition separated(double phi_alpha, double phi_beta);
  static BoundaryCondition coupled(double phi, const Matrix2& R);

  Kind kind() const { return kind_; }
  bool is_separated() const { return kind_ == Kind::Separated; }
  double alpha() const;  // separated only
  double beta() const;   // separated only
  double phi() const;    // coupled only
  const Matrix2& R() const;  // coupled only

  std::string describe() const;

 private:
  BoundaryCondition() = default;
  Kind kind_ = Kind::Separated;
  double alpha_ = 0.0, beta_ = 0.0;  // separated
  double phi_ = 0.0;                 // coupled
  Matrix2 R_{{{1.0, 0.0}, {0.0, 1.0}}};
};

struct Violation {
  std::string clause;  // the inequality or requirement that failed
  std::string detail;  // witness values and the failure mode
};

struct ValidityReport {
  bool valid = true;
  std::vector<Violation> violations;
  std::string summary() const;
};

/// Checks the self-adjointness exclusion clauses:
///  separated: phi_alpha != 0 when sigma(a) is right scattered, and
///             p(b) sin(phi_beta) != (b - rho(b)) cos(phi_beta) when rho(b)
///             is right scattered;
///  coupled:   det R = 1, and p(b) R12 != (b - rho(b)) R22 when sigma(a) and
///             rho(b) are right scattered.
/// Excluded parameters are rejected (the report names the multi-valued
/// failure mode and the trimmed-scale remedy) rather than modeled as linear
/// relations.
ValidityReport validate_bc(const TimeScale& ts, const CoefficientSet& cs,
                           const BoundaryCondition& bc);

enum class Side { Left, Right, Coupled };

/// Boundary residuals:
///   left:    f(sigma(a)) cos(phi_alpha) - f^[1](sigma(a)) sin(phi_alpha)
///   right:   f(b) cos(phi_beta) - f^[1](b) sin(phi_beta)
///   coupled: (f(b), f^[1](b))^T - e^{i phi} R (f(sigma(a)), f^[1](sigma(a)))^T
Complex bc_residual_left(const Trajectory& f, const TimeScale& ts, double phi_alpha);
Complex bc_residual_right(const Trajectory& f, const TimeScale& ts, double phi_beta);
std::pair<Complex, Complex> bc_residual_coupled(const Trajectory& f,
                                                const TimeScale& ts,
                                                const BoundaryCondition& bc);
/// Umbrella: for Side::Coupled the two components are returned as a pair in
/// .first/.second; otherwise .second is zero.
std::pair<Complex, Complex> bc_residual(const Trajectory& f, const TimeScale& ts,
                                        const BoundaryCondition& bc, Side side);

/// A function on the scale given by value and quasi-derivative evaluators
/// (trajectories, resolvent outputs, and linear combinations all fit).
struct ScaleFunction {
  std::function<Complex(double)> value;
  std::function<Complex(double)> qderiv;
};

ScaleFunction as_scale_function(const Trajectory& traj);
ScaleFunction combine(std::span<const Complex> weights,
                      std::span<const Trajectory* const> trajs);

/// ell f = (1/r)(-(p f^nabla)^Delta + q f) evaluated pointwise:
/// difference quotients at atoms, numerically differentiated quasi-derivative
/// at interior continuous points. x must carry sigma_kappa mass.
Complex apply_ell_at(const ScaleFunction& f, const CoefficientSet& cs,
                     const TimeScale& ts, double x);

std::vector<std::pair<double, Complex>> apply_ell(const ScaleFunction& f,
                                                  const CoefficientSet& cs,
                                                  const TimeScale& ts,
                                                  std::span<const double> points);

/// Default evaluation grid for ell: all sigma_kappa atoms plus equispaced
/// interior samples of every continuous component.
std::vector<double> ell_grid(const TimeScale& ts, int per_component = 33);

/// |<ell f, g> - <f, ell g>| with the inner product over r d(sigma_kappa).
/// Preconditions: both trajectories satisfy the boundary condition residuals
/// below residual_tol (throws ValidationError otherwise).
double symmetry_defect(const Trajectory& f, const Trajectory& g,
                       const BoundaryCondition& bc, const CoefficientSet& cs,
                       const TimeScale& ts, double residual_tol = 1e-6,
                       const QuadratureOptions& opts = {});

}  // namespace slts

#endif
