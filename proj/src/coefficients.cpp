#include "slts/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slts/errors.hpp"

namespace slts {

PiecewiseExpression::PiecewiseExpression(Expression global) {
  parts_.push_back(std::move(global));
}

PiecewiseExpression::PiecewiseExpression(std::vector<Expression> per_component)
    : parts_(std::move(per_component)) {
  if (parts_.empty()) throw ValidationError("piecewise coefficient has no parts");
}

double PiecewiseExpression::eval(const TimeScale& ts, double t) const {
  if (parts_.empty()) throw EvalError("evaluating an empty coefficient");
  if (parts_.size() == 1) return parts_[0](t);
  if (parts_.size() != ts.components().size()) {
    throw ValidationError("per-component coefficient has " +
                          std::to_string(parts_.size()) + " parts but the scale has " +
                          std::to_string(ts.components().size()) + " components");
  }
  const std::size_t idx = ts.component_index(t);
  if (idx == TimeScale::npos) {
    throw ValidationError("coefficient evaluated off the scale at t = " +
                          std::to_string(t));
  }
  return parts_[idx](t);
}

double PiecewiseExpression::eval_bar(const TimeScale& ts, double t) const {
  if (t > ts.b()) {
    throw ValidationError("bar extension queried beyond the right endpoint");
  }
  // identity on the trimmed scale, value at sigma_kappa(t) everywhere else
  const bool in_trimmed =
      ts.contains(t) && (t > ts.a() || !ts.min_is_right_scattered());
  const double where = in_trimmed ? ts.snap(t) : ts.sigma_kappa(t);
  return eval(ts, where);
}

double extend_bar(const PiecewiseExpression& f, const TimeScale& ts, double t) {
  return f.eval_bar(ts, t);
}

CoefficientSet::CoefficientSet(PiecewiseExpression r, PiecewiseExpression p,
                               PiecewiseExpression q)
    : r_(std::move(r)), p_(std::move(p)), q_(std::move(q)) {}

namespace {

// Chebyshev-distributed sample points plus both endpoints, per component.
std::vector<double> continuous_samples(const Component& c, int n = 64) {
  std::vector<double> pts;
  pts.reserve(n + 2);
  const double mid = 0.5 * (c.lo + c.hi);
  const double half = 0.5 * (c.hi - c.lo);
  pts.push_back(c.lo);
  for (int j = n - 1; j >= 0; --j) {
    pts.push_back(mid + half * std::cos(std::numbers::pi * (2 * j + 1) / (2.0 * n)));
  }
  pts.push_back(c.hi);
  return pts;
}

void check_clause(HypothesisClause& clause, const TimeScale& ts,
                  const PiecewiseExpression& f, const std::vector<double>& pts,
                  const std::function<bool(double)>& good,
                  const std::string& what) {
  for (double t : pts) {
    double v;
    try {
      v = f.eval(ts, t);
    } catch (const EvalError& e) {
      clause.passed = false;
      clause.witness = t;
      clause.detail = std::string("evaluation failed: ") + e.what();
      return;
    }
    if (!std::isfinite(v) || !good(v)) {
      clause.passed = false;
      clause.witness = t;
      clause.detail = what + " violated: value " + std::to_string(v) + " at t = " +
                      std::to_string(t);
      return;
    }
  }
}

}  // namespace

HypothesisReport validate_hypothesis(const CoefficientSet& cs, const TimeScale& ts) {
  HypothesisReport report;

  // sample sets: sigma_kappa atoms for r and q, rho atoms for p, plus the
  // continuous components for all three
  std::vector<double> rq_pts, p_pts;
  const ScaleMeasure sk(ts, MeasureKind::SigmaKappa);
  for (const Atom& atom : sk.atoms()) rq_pts.push_back(atom.location);
  const ScaleMeasure rho_m(ts, MeasureKind::Rho);
  for (const Atom& atom : rho_m.atoms()) p_pts.push_back(atom.location);
  for (const Component& c : ts.components()) {
    if (c.is_point()) continue;
    auto pts = continuous_samples(c);
    rq_pts.insert(rq_pts.end(), pts.begin(), pts.end());
    p_pts.insert(p_pts.end(), pts.begin(), pts.end());
  }

  HypothesisClause c1{"(i)", "r is positive (sampled against sigma_kappa)", true, {}, {}};
  check_clause(c1, ts, cs.r_expr(), rq_pts, [](double v) { return v > 0.0; },
               "positivity of r");
  HypothesisClause c2{"(ii)", "q is real-valued and finite (sampled against sigma_kappa)",
                      true, {}, {}};
  check_clause(c2, ts, cs.q_expr(), rq_pts, [](double) { return true; },
               "finiteness of q");
  HypothesisClause c3{"(iii)", "p is real and nonzero (sampled against rho)", true, {}, {}};
  check_clause(c3, ts, cs.p_expr(), p_pts, [](double v) { return v != 0.0; },
               "nonvanishing of p");
  HypothesisClause c4{"(iv)", "the scale consists of more than four points", true, {}, {}};
  if (!ts.has_more_points_than(4)) {
    c4.passed = false;
    c4.detail = "scale has at most four points; the solution space degenerates";
  }

  report.clauses = {c1, c2, c3, c4};
  report.ok = c1.passed && c2.passed && c3.passed && c4.passed;
  return report;
}

std::string HypothesisReport::summary() const {
  std::string s;
  for (const HypothesisClause& c : clauses) {
    s += "clause " + c.id + " " + (c.passed ? "pass" : "FAIL") + ": " + c.description;
    if (!c.passed && !c.detail.empty()) s += " [" + c.detail + "]";
    s += "\n";
  }
  return s;
}

const HypothesisReport& CoefficientSet::validate(const TimeScale& ts) const {
  if (!report_) report_ = validate_hypothesis(*this, ts);
  return *report_;
}

bool CoefficientSet::hypothesis_ok() const {
  if (!report_) throw ValidationError("hypothesis has not been validated yet");
  return report_->ok;
}

Complex extend_hat(const Trajectory& u, const TimeScale& ts, double x) {
  if (x < ts.a() || x > ts.b()) {
    throw ValidationError("hat extension queried outside [a, b] at x = " +
                          std::to_string(x));
  }
  if (ts.contains(x)) return u.value(x);
  // in a gap: affine between the bracketing scale points
  const double s = ts.sigma(x);
  const double t = ts.rho(x);
  const Complex us = u.value(s);
  const Complex ut = u.value(t);
  const Complex slope = (us - ut) / (s - t);
  return us + slope * (x - s);
}

double geometric_length(const CoefficientSet& cs, const TimeScale& ts,
                        const QuadratureOptions& opts) {
  double total = 0.0;
  for (const Component& c : ts.components()) {
    if (c.is_point()) continue;
    total += gauss_kronrod_real(
        [&](double t) {
          const double rv = cs.r(ts, t);
          const double pv = cs.p(ts, t);
          if (pv <= 0.0) {
            throw ValidationError(
                "geometric length requires p > 0 on continuous components "
                "(p = " + std::to_string(pv) + " at t = " + std::to_string(t) + ")");
          }
          if (rv < 0.0) {
            throw ValidationError("geometric length requires r >= 0 (r = " +
                                  std::to_string(rv) + " at t = " +
                                  std::to_string(t) + ")");
          }
          return std::sqrt(rv / pv);
        },
        c.lo, c.hi, opts);
  }
  return total;
}

MeasureTriple::MeasureTriple(TimeScale ts, CoefficientSet cs)
    : ts_(std::move(ts)), cs_(std::move(cs)),
      sigma_kappa_(ts_, MeasureKind::SigmaKappa) {}

double MeasureTriple::varrho_mass(double lo, double hi) const {
  if (hi < lo) return 0.0;
  double m = 0.0;
  for (const Component& c : ts_.components()) {
    const double l = std::max(c.lo, lo), h = std::min(c.hi, hi);
    if (h > l)
      m += gauss_kronrod_real([&](double t) { return cs_.r(ts_, t); }, l, h);
  }
  for (const Atom& atom : sigma_kappa_.atoms()) {
    if (atom.location >= lo && atom.location <= hi)
      m += atom.mass * cs_.r(ts_, atom.location);
  }
  return m;
}

double MeasureTriple::chi_mass(double lo, double hi) const {
  if (hi < lo) return 0.0;
  double m = 0.0;
  for (const Component& c : ts_.components()) {
    const double l = std::max(c.lo, lo), h = std::min(c.hi, hi);
    if (h > l)
      m += gauss_kronrod_real([&](double t) { return cs_.q(ts_, t); }, l, h);
  }
  for (const Atom& atom : sigma_kappa_.atoms()) {
    if (atom.location >= lo && atom.location <= hi)
      m += atom.mass * cs_.q(ts_, atom.location);
  }
  return m;
}

double MeasureTriple::varsigma_mass(double lo, double hi) const {
  if (hi < lo) return 0.0;
  return gauss_kronrod_real([&](double t) { return 1.0 / cs_.p_bar(ts_, t); }, lo,
                            hi);
}

Complex MeasureTriple::dq_varsigma(const std::function<Complex(double)>& f,
                                   double x, double h) const {
  // d f / d(varsigma) via symmetric quotients, Richardson over h, h/2, h/4
  auto quot = [&](double hh) {
    return (f(x + hh) - f(x - hh)) / varsigma_mass(x - hh, x + hh);
  };
  const Complex q1 = quot(h), q2 = quot(0.5 * h), q3 = quot(0.25 * h);
  const Complex a1 = (4.0 * q2 - q1) / 3.0;
  const Complex a2 = (4.0 * q3 - q2) / 3.0;
  return (16.0 * a2 - a1) / 15.0;
}

Complex MeasureTriple::tau(const std::function<Complex(double)>& f_hat, double x,
                           const TauOptions& topt) const {
  const PointClass pc = ts_.classify(x);
  if (!pc.in_scale)
    throw ValidationError("tau evaluation off the scale at x = " + std::to_string(x));
  const double rv = cs_.r(ts_, x);
  if (rv == 0.0) throw NumericalError("tau evaluation with r = 0 at x = " + std::to_string(x));
  const Complex zero_order = (cs_.q(ts_, x) / rv) * f_hat(x);

  const std::size_t ci = ts_.component_index(x);
  const Component& comp = ts_.components()[ci];

  if (pc.right_scattered && x > ts_.a()) {
    // atom of varrho: jump of df/d(varsigma) over the atom mass
    const double mu = pc.graininess;
    const double xi = x + 0.5 * mu;  // quotient fully inside the gap: exact slope
    const Complex g_right = dq_varsigma(f_hat, xi, 0.25 * mu);
    Complex g_left;
    if (pc.left_scattered) {
      const double nu = x - ts_.rho(x);
      g_left = dq_varsigma(f_hat, x - 0.5 * nu, 0.25 * nu);
    } else {
      // left-dense: extrapolate the quotient to the segment edge
      const double span = std::min(topt.edge_offset, 0.45 * comp.length());
      const double offs[5] = {1.0, 0.8, 0.6, 0.4, 0.2};
      Complex g[5];
      double s[5];
      for (int i = 0; i < 5; ++i) {
        s[i] = span * offs[i];
        g[i] = dq_varsigma(f_hat, x - s[i],
                           std::min(topt.inner_h, 0.45 * span * 0.2));
      }
      // polynomial extrapolation to s = 0
      Complex val = 0.0;
      for (int i = 0; i < 5; ++i) {
        double w = 1.0;
        for (int j = 0; j < 5; ++j) {
          if (j != i) w *= (0.0 - s[j]) / (s[i] - s[j]);
        }
        val += w * g[i];
      }
      g_left = val;
    }
    const double atom_mass = rv * mu;
    return -(g_right - g_left) / atom_mass + zero_order;
  }

  if (comp.is_point() || x <= comp.lo || x >= comp.hi) {
    throw ValidationError(
        "tau difference quotients need an interior continuous point or an "
        "atom; x = " + std::to_string(x) + " is neither");
  }

  // interior continuous point: symmetric quotient of g against varrho,
  // Richardson over delta, delta/2, delta/4
  const double margin = std::min(x - comp.lo, comp.hi - x);
  const double delta = std::min(topt.outer_delta, 0.45 * margin);
  const double h = std::min(topt.inner_h, 0.2 * delta);
  auto g = [&](double y) { return dq_varsigma(f_hat, y, h); };
  auto quot = [&](double dd) {
    return (g(x + dd) - g(x - dd)) / varrho_mass(x - dd, x + dd);
  };
  const Complex q1 = quot(delta), q2 = quot(0.5 * delta), q3 = quot(0.25 * delta);
  const Complex a1 = (4.0 * q2 - q1) / 3.0;
  const Complex a2 = (4.0 * q3 - q2) / 3.0;
  const Complex dgdrho = (16.0 * a2 - a1) / 15.0;
  return -dgdrho + zero_order;
}

}  // namespace slts
