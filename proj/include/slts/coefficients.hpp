#ifndef SLTS_COEFFICIENTS_HPP
#define SLTS_COEFFICIENTS_HPP

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "slts/expression.hpp"
#include "slts/time_scale.hpp"
#include "slts/trajectory.hpp"

namespace slts {

/// A scalar coefficient given either by one global expression or by one
/// expression per scale component.
class PiecewiseExpression {
 public:
  PiecewiseExpression() = default;
  PiecewiseExpression(Expression global);                // NOLINT(google-explicit-constructor)
  explicit PiecewiseExpression(std::vector<Expression> per_component);

  bool per_component() const { return parts_.size() > 1; }
  std::size_t part_count() const { return parts_.size(); }
  const std::vector<Expression>& parts() const { return parts_; }

  /// Value at a scale point (throws ValidationError when t is off the scale
  /// and the coefficient is per-component).
  double eval(const TimeScale& ts, double t) const;
  /// The extension to the whole line: value at sigma_kappa(t) off the scale,
  /// constant on every gap. Requires t <= b.
  double eval_bar(const TimeScale& ts, double t) const;

 private:
  std::vector<Expression> parts_;
};

struct HypothesisClause {
  std::string id;           // "(i)".."(iv)"
  std::string description;
  bool passed = true;
  std::optional<double> witness;  // first offending point
  std::string detail;
};

struct HypothesisReport {
  bool ok = false;
  std::vector<HypothesisClause> clauses;
  std::string summary() const;
};

/// The coefficient triple (r, p, q): r the weight (positive), p the
/// stiffness (nonzero), q the potential. Immutable after construction;
/// validate() caches its report, so call it before sharing across threads.
class CoefficientSet {
 public:
  CoefficientSet() = default;
  CoefficientSet(PiecewiseExpression r, PiecewiseExpression p, PiecewiseExpression q);

  double r(const TimeScale& ts, double t) const { return r_.eval(ts, t); }
  double p(const TimeScale& ts, double t) const { return p_.eval(ts, t); }
  double q(const TimeScale& ts, double t) const { return q_.eval(ts, t); }
  double r_bar(const TimeScale& ts, double t) const { return r_.eval_bar(ts, t); }
  double p_bar(const TimeScale& ts, double t) const { return p_.eval_bar(ts, t); }
  double q_bar(const TimeScale& ts, double t) const { return q_.eval_bar(ts, t); }

  const PiecewiseExpression& r_expr() const { return r_; }
  const PiecewiseExpression& p_expr() const { return p_; }
  const PiecewiseExpression& q_expr() const { return q_; }

  /// Samples the positivity/reality/nonvanishing clauses on all atoms plus
  /// 64 Chebyshev-distributed points per continuous component (a sampled
  /// check: almost-everywhere conditions cannot be certified this way).
  const HypothesisReport& validate(const TimeScale& ts) const;
  bool hypothesis_ok() const;  // throws if validate() has not run

 private:
  PiecewiseExpression r_, p_, q_;
  mutable std::optional<HypothesisReport> report_;
};

HypothesisReport validate_hypothesis(const CoefficientSet& cs, const TimeScale& ts);

/// Extension of a coefficient off the scale (constant on gaps).
double extend_bar(const PiecewiseExpression& f, const TimeScale& ts, double t);

/// Extension of a solution to the real line: identity on T, affine across
/// every gap with the backward-difference slope. Requires a <= x <= b.
Complex extend_hat(const Trajectory& u, const TimeScale& ts, double x);

/// L = sum over nondegenerate components of the integral of sqrt(r/p).
/// Requires p > 0 there (throws ValidationError otherwise).
double geometric_length(const CoefficientSet& cs, const TimeScale& ts,
                        const QuadratureOptions& opts = {});

struct TauOptions {
  double inner_h = 1e-3;        // half-width of d/d(varsigma) quotients
  double outer_delta = 2e-2;    // half-width of d/d(varrho) quotients
  double edge_offset = 5e-2;    // extrapolation span at segment edges
};

/// The measure triple induced by a coefficient set: varrho = r d(sigma_kappa),
/// varsigma with density 1/p-bar against Lebesgue measure, chi = q
/// d(sigma_kappa). Provided for cross-validating the measure form of the
/// differential expression against the scale form; the production solver
/// never goes through it.
class MeasureTriple {
 public:
  MeasureTriple(TimeScale ts, CoefficientSet cs);

  double varrho_mass(double lo, double hi) const;    // closed [lo, hi]
  double varsigma_mass(double lo, double hi) const;
  double chi_mass(double lo, double hi) const;

  /// Applies the measure-form expression
  ///   tau f = -d/d(varrho) (df/d(varsigma)) + (q/r) f
  /// to an extended function by Radon-Nikodym difference quotients
  /// (Richardson-extrapolated; gap slopes are read exactly). x must carry
  /// sigma_kappa mass: an atom or a point inside a continuous component.
  Complex tau(const std::function<Complex(double)>& f_hat, double x,
              const TauOptions& topt = {}) const;

  const TimeScale& scale() const { return ts_; }

 private:
  Complex dq_varsigma(const std::function<Complex(double)>& f, double x,
                      double h) const;
  TimeScale ts_;
  CoefficientSet cs_;
  ScaleMeasure sigma_kappa_;
};

}  // namespace slts

#endif
