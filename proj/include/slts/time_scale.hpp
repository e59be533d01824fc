#ifndef SLTS_TIME_SCALE_HPP
#define SLTS_TIME_SCALE_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "slts/quadrature.hpp"

namespace slts {

/// One closed component [lo, hi] of a time scale. lo == hi marks an
/// isolated point.
struct Component {
  double lo;
  double hi;
  bool is_point() const { return lo == hi; }
  double length() const { return hi - lo; }
};

/// Classification of a real t relative to a scale.
struct PointClass {
  bool in_scale = false;
  bool right_scattered = false;
  bool left_scattered = false;
  double graininess = 0.0;  // sigma(t) - t, >= 0
};

enum class Direction { Forward, Backward };

enum class MeasureKind { Sigma, SigmaKappa, Rho };

/// Query interval for measure masses. Endpoint closedness only matters when
/// an atom sits exactly on an endpoint.
struct Interval {
  double lo;
  double hi;
  bool lo_closed = true;
  bool hi_closed = true;
};

/// A time scale given as a finite ordered union of disjoint closed components
/// (intervals and isolated points). Immutable after construction; all queries
/// are pure.
class TimeScale {
 public:
  /// Throws ValidationError unless components are nonempty, each has
  /// lo <= hi, and they are strictly increasing (positive gaps).
  explicit TimeScale(std::vector<Component> components, double snap_tol = 0.0);

  double a() const { return components_.front().lo; }
  double b() const { return components_.back().hi; }
  const std::vector<Component>& components() const { return components_; }
  double snap_tol() const { return snap_tol_; }

  /// Membership test; points within snap_tol of a component edge count as
  /// members (the default snap_tol of 0 means exact comparison).
  bool contains(double t) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t component_index(double t) const;
  /// Snaps t onto the nearest component edge within snap_tol; identity otherwise.
  double snap(double t) const;

  double sigma(double t) const;  // forward jump, = b for t >= b
  double rho(double t) const;    // backward jump, = a for t <= a
  /// Forward shift of the trimmed scale: sigma(t) for t > a, sigma(a) below.
  double sigma_kappa(double t) const;

  PointClass classify(double t) const;
  std::pair<double, PointClass> jump(double t, Direction dir) const;
  double graininess(double t) const { return classify(t).graininess; }

  enum class Trim { Lower, Upper, LowerKappa };
  /// Lower/LowerKappa drop a right-scattered minimum; Upper drops a
  /// left-scattered maximum. Throws ValidationError if nothing remains.
  TimeScale trim(Trim side) const;

  bool min_is_right_scattered() const { return components_.front().is_point() && components_.size() > 1; }
  bool max_is_left_scattered() const { return components_.back().is_point() && components_.size() > 1; }

  /// True when the scale has more than n points (a nondegenerate component
  /// counts as infinitely many).
  bool has_more_points_than(std::size_t n) const;

  /// T intersected with [a, cut]; throws ValidationError when empty.
  TimeScale truncate(double cut) const;

  bool same_components(const TimeScale& other) const;

  /// Total Lebesgue measure of the scale.
  double lebesgue_length() const;

 private:
  std::vector<Component> components_;
  double snap_tol_;
};

/// An atom of one of the induced measures.
struct Atom {
  double location;
  double mass;
};

/// One of the Borel measures induced by a scale, decomposed as an
/// indicator-weighted Lebesgue part on T plus point masses:
///   Sigma       atoms of size graininess at every right-scattered point,
///   SigmaKappa  same with the lower clamp moved to sigma(a) (no atom at a),
///   Rho         atoms of size t - rho(t) at every left-scattered point.
class ScaleMeasure {
 public:
  ScaleMeasure(const TimeScale& ts, MeasureKind kind);

  MeasureKind kind() const { return kind_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  double mass(const Interval& set) const;
  double mass(std::span<const Interval> sets) const;

 private:
  TimeScale scale_;
  MeasureKind kind_;
  std::vector<Atom> atoms_;
};

double measure_mass(const TimeScale& ts, MeasureKind which, const Interval& set);
double measure_mass(const TimeScale& ts, MeasureKind which,
                    std::span<const Interval> sets);

/// Integral of f*weight against d(sigma_kappa) over the trimmed scale:
/// adaptive quadrature on every nondegenerate component plus atom sums.
/// Throws NumericalError on non-finite values at required nodes.
std::complex<double> integrate(
    const TimeScale& ts, const std::function<std::complex<double>(double)>& f,
    const std::function<std::complex<double>(double)>& weight,
    const QuadratureOptions& opts = {});

double integrate_real(const TimeScale& ts, const std::function<double(double)>& f,
                      const std::function<double(double)>& weight,
                      const QuadratureOptions& opts = {});

}  // namespace slts

#endif
