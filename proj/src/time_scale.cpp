#include "slts/time_scale.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slts/errors.hpp"

namespace slts {

TimeScale::TimeScale(std::vector<Component> components, double snap_tol)
    : components_(std::move(components)), snap_tol_(snap_tol) {
  if (components_.empty()) throw ValidationError("time scale has no components");
  if (snap_tol_ < 0.0) throw ValidationError("snap tolerance must be >= 0");
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const Component& c = components_[i];
    if (!std::isfinite(c.lo) || !std::isfinite(c.hi)) {
      throw ValidationError("time scale component " + std::to_string(i) +
                            " has a non-finite endpoint");
    }
    if (c.lo > c.hi) {
      throw ValidationError("time scale component " + std::to_string(i) +
                            " has lo > hi");
    }
    if (i > 0 && components_[i - 1].hi >= c.lo) {
      throw ValidationError(
          "time scale components must be strictly increasing with positive "
          "gaps (component " + std::to_string(i) + " starts at " +
          std::to_string(c.lo) + ", previous ends at " +
          std::to_string(components_[i - 1].hi) + ")");
    }
  }
}

double TimeScale::snap(double t) const {
  if (snap_tol_ == 0.0) return t;
  for (const Component& c : components_) {
    if (std::abs(t - c.lo) <= snap_tol_) return c.lo;
    if (std::abs(t - c.hi) <= snap_tol_) return c.hi;
  }
  return t;
}

std::size_t TimeScale::component_index(double t) const {
  const double x = snap(t);
  // first component with hi >= x
  auto it = std::lower_bound(
      components_.begin(), components_.end(), x,
      [](const Component& c, double v) { return c.hi < v; });
  if (it == components_.end() || x < it->lo) return npos;
  return static_cast<std::size_t>(it - components_.begin());
}

bool TimeScale::contains(double t) const { return component_index(t) != npos; }

double TimeScale::sigma(double t) const {
  const double x = snap(t);
  if (x >= b()) return b();
  std::size_t idx = component_index(x);
  if (idx != npos) {
    const Component& c = components_[idx];
    if (x < c.hi) return x;                  // interior or left edge: right dense
    return components_[idx + 1].lo;          // right edge of a component before a gap
  }
  // in a gap or below a: next component start
  auto it = std::lower_bound(components_.begin(), components_.end(), x,
                             [](const Component& c, double v) { return c.lo <= v; });
  return it->lo;
}

double TimeScale::rho(double t) const {
  const double x = snap(t);
  if (x <= a()) return a();
  std::size_t idx = component_index(x);
  if (idx != npos) {
    const Component& c = components_[idx];
    if (x > c.lo) return x;
    return components_[idx - 1].hi;
  }
  // in a gap or above b: previous component end
  auto it = std::upper_bound(components_.begin(), components_.end(), x,
                             [](double v, const Component& c) { return v < c.hi; });
  return (it - 1)->hi;
}

double TimeScale::sigma_kappa(double t) const {
  return t > a() ? sigma(t) : sigma(a());
}

PointClass TimeScale::classify(double t) const {
  PointClass pc;
  const double x = snap(t);
  pc.in_scale = contains(x);
  const double s = sigma(x);
  const double r = rho(x);
  pc.graininess = std::max(0.0, s - x);
  pc.right_scattered = pc.in_scale && s > x;
  pc.left_scattered = pc.in_scale && r < x;
  return pc;
}

std::pair<double, PointClass> TimeScale::jump(double t, Direction dir) const {
  const double v = dir == Direction::Forward ? sigma(t) : rho(t);
  return {v, classify(t)};
}

TimeScale TimeScale::trim(Trim side) const {
  std::vector<Component> comps = components_;
  if (side == Trim::Lower || side == Trim::LowerKappa) {
    if (min_is_right_scattered()) comps.erase(comps.begin());
  } else {
    if (max_is_left_scattered()) comps.pop_back();
  }
  if (comps.empty()) throw ValidationError("trimming leaves an empty scale");
  return TimeScale(std::move(comps), snap_tol_);
}

bool TimeScale::has_more_points_than(std::size_t n) const {
  std::size_t count = 0;
  for (const Component& c : components_) {
    if (!c.is_point()) return true;
    if (++count > n) return true;
  }
  return false;
}

TimeScale TimeScale::truncate(double cut) const {
  std::vector<Component> comps;
  for (const Component& c : components_) {
    if (c.hi <= cut) {
      comps.push_back(c);
    } else if (c.lo <= cut) {
      comps.push_back({c.lo, cut});
    }
  }
  if (comps.empty()) throw ValidationError("truncation cut lies below the scale");
  return TimeScale(std::move(comps), snap_tol_);
}

bool TimeScale::same_components(const TimeScale& other) const {
  if (components_.size() != other.components_.size()) return false;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (components_[i].lo != other.components_[i].lo ||
        components_[i].hi != other.components_[i].hi)
      return false;
  }
  return true;
}

double TimeScale::lebesgue_length() const {
  double len = 0.0;
  for (const Component& c : components_) len += c.length();
  return len;
}

ScaleMeasure::ScaleMeasure(const TimeScale& ts, MeasureKind kind)
    : scale_(ts), kind_(kind) {
  const auto& comps = ts.components();
  if (kind == MeasureKind::Rho) {
    // atoms at left-scattered points
    for (std::size_t i = 1; i < comps.size(); ++i) {
      atoms_.push_back({comps[i].lo, comps[i].lo - comps[i - 1].hi});
    }
  } else {
    // atoms at right-scattered points; SigmaKappa drops the one at a
    for (std::size_t i = 0; i + 1 < comps.size(); ++i) {
      const double t = comps[i].hi;
      if (kind == MeasureKind::SigmaKappa && t <= ts.a()) continue;
      atoms_.push_back({t, comps[i + 1].lo - t});
    }
  }
}

double ScaleMeasure::mass(const Interval& set) const {
  if (set.hi < set.lo) return 0.0;
  double m = 0.0;
  // Lebesgue part: |T ∩ set| (endpoint closedness is immaterial here)
  for (const Component& c : scale_.components()) {
    const double lo = std::max(c.lo, set.lo);
    const double hi = std::min(c.hi, set.hi);
    if (hi > lo) m += hi - lo;
  }
  for (const Atom& atom : atoms_) {
    const bool above_lo =
        atom.location > set.lo || (set.lo_closed && atom.location == set.lo);
    const bool below_hi =
        atom.location < set.hi || (set.hi_closed && atom.location == set.hi);
    if (above_lo && below_hi) m += atom.mass;
  }
  return m;
}

double ScaleMeasure::mass(std::span<const Interval> sets) const {
  double m = 0.0;
  for (const Interval& s : sets) m += mass(s);
  return m;
}

double measure_mass(const TimeScale& ts, MeasureKind which, const Interval& set) {
  return ScaleMeasure(ts, which).mass(set);
}

double measure_mass(const TimeScale& ts, MeasureKind which,
                    std::span<const Interval> sets) {
  return ScaleMeasure(ts, which).mass(sets);
}

std::complex<double> integrate(
    const TimeScale& ts, const std::function<std::complex<double>(double)>& f,
    const std::function<std::complex<double>(double)>& weight,
    const QuadratureOptions& opts) {
  std::complex<double> total = 0.0;
  auto fw = [&](double t) { return f(t) * weight(t); };
  for (const Component& c : ts.components()) {
    if (!c.is_point()) total += gauss_kronrod(fw, c.lo, c.hi, opts);
  }
  const ScaleMeasure sm(ts, MeasureKind::SigmaKappa);
  for (const Atom& atom : sm.atoms()) {
    const std::complex<double> v = fw(atom.location);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NumericalError("non-finite integrand value at atom t = " +
                           std::to_string(atom.location));
    }
    total += atom.mass * v;
  }
  return total;
}

double integrate_real(const TimeScale& ts, const std::function<double(double)>& f,
                      const std::function<double(double)>& weight,
                      const QuadratureOptions& opts) {
  return integrate(
             ts, [&](double t) { return std::complex<double>(f(t), 0.0); },
             [&](double t) { return std::complex<double>(weight(t), 0.0); }, opts)
      .real();
}

}  // namespace slts
