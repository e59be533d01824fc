#include "slts/ivp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "slts/errors.hpp"

namespace slts {

namespace {

Complex source_at(const SourceFn& g, double t) {
  return g ? g(t) : Complex(0.0, 0.0);
}

double checked_p(const CoefficientSet& cs, const TimeScale& ts, double t) {
  const double pv = cs.p(ts, t);
  if (pv == 0.0)
    throw NumericalError("p vanishes at t = " + std::to_string(t));
  return pv;
}

}  // namespace

StatePair step_scattered(const StatePair& s, double t, const CoefficientSet& cs,
                         const TimeScale& ts, Complex z, Complex g_val) {
  const PointClass pc = ts.classify(t);
  if (!pc.in_scale || !pc.right_scattered)
    throw ValidationError("scattered step requires a right-scattered point, t = " +
                          std::to_string(t));
  const double mu = pc.graininess;
  const double rv = cs.r(ts, t);
  const double qv = cs.q(ts, t);
  const double ps = checked_p(cs, ts, ts.sigma(t));
  StatePair out;
  out.d = s.d + mu * ((qv - z * rv) * s.u - rv * g_val);
  out.u = s.u + mu * out.d / ps;
  return out;
}

StatePair step_scattered_inverse(const StatePair& s_next, double t,
                                 const CoefficientSet& cs, const TimeScale& ts,
                                 Complex z, Complex g_val) {
  const PointClass pc = ts.classify(t);
  if (!pc.in_scale || !pc.right_scattered)
    throw ValidationError("inverse scattered step requires a right-scattered point");
  const double mu = pc.graininess;
  const double rv = cs.r(ts, t);
  const double qv = cs.q(ts, t);
  const double ps = checked_p(cs, ts, ts.sigma(t));
  StatePair out;
  out.u = s_next.u - mu * s_next.d / ps;
  out.d = s_next.d - mu * ((qv - z * rv) * out.u - rv * g_val);
  return out;
}

StatePair step_continuous(const StatePair& s, double alpha, double beta,
                          const CoefficientSet& cs, const TimeScale& ts, Complex z,
                          const SourceFn& g, const OdeOptions& ode,
                          DenseSegment* dense, std::vector<Trajectory::Node>* nodes) {
  if (alpha == beta) return s;
  const double p0 = checked_p(cs, ts, std::min(alpha, beta));
  const double p_sign = p0 > 0.0 ? 1.0 : -1.0;
  auto rhs = [&](double t, const StatePair& y) -> StatePair {
    const double pv = checked_p(cs, ts, t);
    if (pv * p_sign < 0.0)
      throw NumericalError("p changes sign inside [" + std::to_string(alpha) +
                           ", " + std::to_string(beta) + "] near t = " +
                           std::to_string(t));
    const double rv = cs.r(ts, t);
    const double qv = cs.q(ts, t);
    return {y.d / pv, (qv - z * rv) * y.u - rv * source_at(g, t)};
  };
  return integrate_dopri5(rhs, alpha, beta, s, ode, dense, nodes);
}

namespace {

struct PropagationRecorder {
  Trajectory* traj = nullptr;  // null: lean mode
  bool dense() const { return traj != nullptr; }
};

// Sweeps rightward from (x0, s) in component i0 up to b. Degenerate anchor
// components are assumed already recorded by the caller.
StatePair sweep_right(const TimeScale& ts, const CoefficientSet& cs, Complex z,
                      const SourceFn& g, double x0, StatePair s, std::size_t i0,
                      const OdeOptions& ode, PropagationRecorder rec) {
  const auto& comps = ts.components();
  double x = x0;
  for (std::size_t i = i0; i < comps.size(); ++i) {
    const Component& comp = comps[i];
    if (!comp.is_point() && x < comp.hi) {
      if (rec.dense()) {
        DenseSegment seg;
        std::vector<Trajectory::Node> nodes;
        nodes.push_back({x, s});
        s = step_continuous(s, x, comp.hi, cs, ts, z, g, ode, &seg, &nodes);
        rec.traj->add_segment(i, std::move(seg), nodes);
      } else {
        s = step_continuous(s, x, comp.hi, cs, ts, z, g, ode);
      }
    }
    if (i + 1 == comps.size()) break;
    s = step_scattered(s, comp.hi, cs, ts, z, source_at(g, comp.hi));
    x = comps[i + 1].lo;
    if (rec.dense() && comps[i + 1].is_point()) rec.traj->set_point_state(x, s);
  }
  return s;
}

// Sweeps leftward from (x0, s) in component i0 down to a.
void sweep_left(const TimeScale& ts, const CoefficientSet& cs, Complex z,
                const SourceFn& g, double x0, StatePair s, std::size_t i0,
                const OdeOptions& ode, PropagationRecorder rec) {
  const auto& comps = ts.components();
  double x = x0;
  for (std::size_t i = i0 + 1; i-- > 0;) {
    const Component& comp = comps[i];
    if (!comp.is_point() && x > comp.lo) {
      if (rec.dense()) {
        DenseSegment seg;
        std::vector<Trajectory::Node> nodes;
        nodes.push_back({x, s});
        s = step_continuous(s, x, comp.lo, cs, ts, z, g, ode, &seg, &nodes);
        rec.traj->add_segment(i, std::move(seg), nodes);
      } else {
        s = step_continuous(s, x, comp.lo, cs, ts, z, g, ode);
      }
    }
    if (i == 0) break;
    const double t = comps[i - 1].hi;  // right-scattered predecessor
    if (i == 1 && comps[0].is_point()) {
      // scale minimum with a gap above: u(a) is determined by the anchor data
      // but no backward difference exists, so the quasi-derivative slot is NaN
      const double mu = comps[1].lo - t;
      const double ps = checked_p(cs, ts, comps[1].lo);
      const Complex ua = s.u - mu * s.d / ps;
      if (rec.dense()) {
        rec.traj->set_point_state(
            t, {ua, Complex(std::numeric_limits<double>::quiet_NaN(),
                            std::numeric_limits<double>::quiet_NaN())});
      }
      break;
    }
    s = step_scattered_inverse(s, t, cs, ts, z, source_at(g, t));
    x = t;
    if (rec.dense() && comps[i - 1].is_point()) rec.traj->set_point_state(x, s);
  }
}

void require_hypothesis_ok(const TimeScale& ts, const CoefficientSet& cs) {
  const HypothesisReport& rep = cs.validate(ts);
  if (!rep.ok)
    throw ValidationError("coefficient hypothesis fails:\n" + rep.summary());
}

}  // namespace

Trajectory solve_ivp(const TimeScale& ts, const CoefficientSet& cs, Complex z,
                     double c, Complex d1, Complex d2, const SourceFn& g,
                     const IvpOptions& opts) {
  if (opts.require_hypothesis) require_hypothesis_ok(ts, cs);
  const double cc = ts.snap(c);
  const std::size_t ic = ts.component_index(cc);
  if (ic == TimeScale::npos)
    throw ValidationError("anchor c = " + std::to_string(c) + " is not on the scale");
  if (cc == ts.a() && ts.min_is_right_scattered())
    throw ValidationError("anchor must lie on the trimmed scale (c = a is excluded "
                          "when a is right scattered)");
  const OdeOptions ode{opts.rel_tol, opts.abs_tol};
  Trajectory traj(ts, z);
  PropagationRecorder rec{&traj};
  const StatePair s0{d1, d2};
  if (ts.components()[ic].is_point()) traj.set_point_state(cc, s0);
  sweep_right(ts, cs, z, g, cc, s0, ic, ode, rec);
  sweep_left(ts, cs, z, g, cc, s0, ic, ode, rec);
  traj.finish();
  return traj;
}

StatePair shoot(const TimeScale& ts, const CoefficientSet& cs, Complex z,
                const StatePair& at_sigma_a, const SourceFn& g,
                const IvpOptions& opts) {
  const double x0 = ts.sigma_kappa(ts.a());
  const std::size_t i0 = ts.component_index(x0);
  const OdeOptions ode{opts.rel_tol, opts.abs_tol};
  return sweep_right(ts, cs, z, g, x0, at_sigma_a, i0, ode, PropagationRecorder{});
}

FundamentalSystem fundamental_system(const TimeScale& ts, const CoefficientSet& cs,
                                     Complex z, double phi_alpha,
                                     const IvpOptions& opts) {
  const double anchor = ts.sigma_kappa(ts.a());
  const double ca = std::cos(phi_alpha), sa = std::sin(phi_alpha);
  FundamentalSystem fs;
  fs.theta = solve_ivp(ts, cs, z, anchor, ca, -sa, {}, opts);
  fs.phi = solve_ivp(ts, cs, z, anchor, sa, ca, {}, opts);
  return fs;
}

Complex wronskian(const Trajectory& f, const Trajectory& g, double x) {
  const TimeScale& ts = f.scale();
  if (!ts.contains(x) || (ts.snap(x) == ts.a() && ts.min_is_right_scattered()))
    throw ValidationError("Wronskian evaluation requires x on the trimmed scale");
  const StatePair fs = f.at(x);
  const StatePair gs = g.at(x);
  return fs.u * gs.d - fs.d * gs.u;
}

double wronskian_variation(const Trajectory& f, const Trajectory& g) {
  const TimeScale& ts = f.scale();
  std::vector<double> grid;
  for (const auto& n : f.samples()) grid.push_back(n.x);
  for (const auto& n : g.samples()) grid.push_back(n.x);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const bool drop_a = ts.min_is_right_scattered();
  double maxdev = 0.0;
  bool have_ref = false;
  Complex ref;
  for (double x : grid) {
    if (drop_a && x == ts.a()) continue;
    const Complex w = wronskian(f, g, x);
    if (!have_ref) {
      ref = w;
      have_ref = true;
    } else {
      maxdev = std::max(maxdev, std::abs(w - ref));
    }
  }
  return maxdev;
}

double TransferMatrix::norm() const {
  return std::sqrt(std::norm(m11) + std::norm(m12) + std::norm(m21) + std::norm(m22));
}

TransferMatrix transfer_matrix(const TimeScale& ts, const CoefficientSet& cs,
                               Complex z, const IvpOptions& opts) {
  const StatePair col1 = shoot(ts, cs, z, {1.0, 0.0}, {}, opts);
  const StatePair col2 = shoot(ts, cs, z, {0.0, 1.0}, {}, opts);
  return {col1.u, col2.u, col1.d, col2.d};
}

}  // namespace slts
