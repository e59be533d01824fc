#include "slts/operators.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <iostream>
#include <numbers>

#include "slts/errors.hpp"

namespace slts {

namespace {

double canonical_angle(double phi, const char* name) {
  if (phi >= 0.0 && phi < std::numbers::pi) return phi;
  double reduced = std::fmod(phi, std::numbers::pi);
  if (reduced < 0.0) reduced += std::numbers::pi;
  std::cerr << "warning: boundary angle " << name << " = " << phi
            << " reduced to " << reduced << " (mod pi)\n";
  return reduced;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

BoundaryCondition BoundaryCondition::separated(double phi_alpha, double phi_beta) {
  BoundaryCondition bc;
  bc.kind_ = Kind::Separated;
  bc.alpha_ = canonical_angle(phi_alpha, "phi_alpha");
  bc.beta_ = canonical_angle(phi_beta, "phi_beta");
  return bc;
}

BoundaryCondition BoundaryCondition::coupled(double phi, const Matrix2& R) {
  BoundaryCondition bc;
  bc.kind_ = Kind::Coupled;
  bc.phi_ = canonical_angle(phi, "phi");
  bc.R_ = R;
  const double det = R[0][0] * R[1][1] - R[0][1] * R[1][0];
  if (std::abs(det - 1.0) > 1e-12) {
    throw ValidationError("coupled boundary matrix must have det R = 1 (det = " +
                          num(det) + ")");
  }
  return bc;
}

double BoundaryCondition::alpha() const {
  if (kind_ != Kind::Separated) throw ValidationError("not a separated condition");
  return alpha_;
}
double BoundaryCondition::beta() const {
  if (kind_ != Kind::Separated) throw ValidationError("not a separated condition");
  return beta_;
}
double BoundaryCondition::phi() const {
  if (kind_ != Kind::Coupled) throw ValidationError("not a coupled condition");
  return phi_;
}
const Matrix2& BoundaryCondition::R() const {
  if (kind_ != Kind::Coupled) throw ValidationError("not a coupled condition");
  return R_;
}

std::string BoundaryCondition::describe() const {
  if (kind_ == Kind::Separated)
    return "separated(phi_alpha = " + num(alpha_) + ", phi_beta = " + num(beta_) + ")";
  return "coupled(phi = " + num(phi_) + ", R = [[" + num(R_[0][0]) + ", " +
         num(R_[0][1]) + "], [" + num(R_[1][0]) + ", " + num(R_[1][1]) + "]])";
}

std::string ValidityReport::summary() const {
  if (valid) return "boundary condition admissible\n";
  std::string s;
  for (const Violation& v : violations) {
    s += "violated: " + v.clause + "\n  " + v.detail + "\n";
  }
  return s;
}

ValidityReport validate_bc(const TimeScale& ts, const CoefficientSet& cs,
                           const BoundaryCondition& bc) {
  ValidityReport report;
  const double b = ts.b();
  const double sigma_a = ts.sigma(ts.a());
  const bool sa_scattered = ts.classify(sigma_a).right_scattered;
  const double rho_b = ts.rho(b);
  const bool rb_scattered = ts.classify(rho_b).right_scattered && rho_b < b;

  const char* remedy =
      "the endpoint value decouples from the weighted space and the operator "
      "assignment becomes multi-valued; rebuild the problem on the trimmed "
      "scale (drop the scattered endpoint) to recover a single-valued operator";

  if (bc.is_separated()) {
    if (sa_scattered && std::abs(std::sin(bc.alpha())) <= 1e-12) {
      report.violations.push_back(
          {"phi_alpha != 0 when sigma(a) is right scattered",
           "phi_alpha = " + num(bc.alpha()) + " pins f(sigma(a)) = 0 while f(a) "
           "stays free; " + std::string(remedy)});
    }
    if (rb_scattered) {
      const double pb = cs.p(ts, b);
      const double lhs = pb * std::sin(bc.beta());
      const double rhs = (b - rho_b) * std::cos(bc.beta());
      const double scale = std::max({std::abs(pb), b - rho_b, 1.0});
      if (std::abs(lhs - rhs) <= 1e-12 * scale) {
        report.violations.push_back(
            {"p(b) sin(phi_beta) != (b - rho(b)) cos(phi_beta) when rho(b) is "
             "right scattered",
             "p(b) sin(phi_beta) = " + num(lhs) + " equals (b - rho(b)) "
             "cos(phi_beta) = " + num(rhs) + ", so the condition pins f(rho(b)) "
             "and leaves f(b) free; " + std::string(remedy)});
      }
    }
  } else {
    const Matrix2& R = bc.R();
    const double det = R[0][0] * R[1][1] - R[0][1] * R[1][0];
    if (std::abs(det - 1.0) > 1e-12) {
      report.violations.push_back(
          {"det R = 1", "det R = " + num(det) + " violates unimodularity"});
    }
    if (sa_scattered && rb_scattered) {
      const double pb = cs.p(ts, b);
      const double lhs = pb * R[0][1];
      const double rhs = (b - rho_b) * R[1][1];
      const double scale = std::max({std::abs(pb), b - rho_b, 1.0});
      if (std::abs(lhs - rhs) <= 1e-12 * scale) {
        report.violations.push_back(
            {"p(b) R12 != (b - rho(b)) R22 when sigma(a) and rho(b) are right "
             "scattered",
             "p(b) R12 = " + num(lhs) + " equals (b - rho(b)) R22 = " + num(rhs) +
             "; the coupled condition degenerates at the scattered endpoints; " +
             std::string(remedy)});
      }
    }
  }
  report.valid = report.violations.empty();
  return report;
}

Complex bc_residual_left(const Trajectory& f, const TimeScale& ts, double phi_alpha) {
  const double sa = ts.sigma(ts.a());
  const StatePair s = f.at(sa);
  return s.u * std::cos(phi_alpha) - s.d * std::sin(phi_alpha);
}

Complex bc_residual_right(const Trajectory& f, const TimeScale& ts, double phi_beta) {
  const StatePair s = f.at(ts.b());
  return s.u * std::cos(phi_beta) - s.d * std::sin(phi_beta);
}

std::pair<Complex, Complex> bc_residual_coupled(const Trajectory& f,
                                                const TimeScale& ts,
                                                const BoundaryCondition& bc) {
  const Matrix2& R = bc.R();
  const Complex rot = std::exp(Complex(0.0, bc.phi()));
  const StatePair sa = f.at(ts.sigma(ts.a()));
  const StatePair sb = f.at(ts.b());
  return {sb.u - rot * (R[0][0] * sa.u + R[0][1] * sa.d),
          sb.d - rot * (R[1][0] * sa.u + R[1][1] * sa.d)};
}

std::pair<Complex, Complex> bc_residual(const Trajectory& f, const TimeScale& ts,
                                        const BoundaryCondition& bc, Side side) {
  switch (side) {
    case Side::Left:
      return {bc_residual_left(f, ts, bc.alpha()), 0.0};
    case Side::Right:
      return {bc_residual_right(f, ts, bc.beta()), 0.0};
    case Side::Coupled:
      return bc_residual_coupled(f, ts, bc);
  }
  return {0.0, 0.0};
}

ScaleFunction as_scale_function(const Trajectory& traj) {
  return {[&traj](double x) { return traj.value(x); },
          [&traj](double x) { return traj.qderiv(x); }};
}

ScaleFunction combine(std::span<const Complex> weights,
                      std::span<const Trajectory* const> trajs) {
  std::vector<Complex> w(weights.begin(), weights.end());
  std::vector<const Trajectory*> t(trajs.begin(), trajs.end());
  return {[w, t](double x) {
            Complex v = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) v += w[i] * t[i]->value(x);
            return v;
          },
          [w, t](double x) {
            Complex v = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) v += w[i] * t[i]->qderiv(x);
            return v;
          }};
}

namespace {

// 4th-order central difference of the quasi-derivative, with the step shrunk
// near segment edges so the stencil stays inside.
Complex qderiv_slope(const ScaleFunction& f, double x, double lo, double hi) {
  const double margin = std::min(x - lo, hi - x);
  const double h = std::min(1e-3 * std::max(1.0, hi - lo), 0.45 * margin);
  if (h <= 0.0)
    throw ValidationError("ell evaluation needs an interior continuous point");
  const Complex d1 = f.qderiv(x + h) - f.qderiv(x - h);
  const Complex d2 = f.qderiv(x + 2.0 * h) - f.qderiv(x - 2.0 * h);
  return (8.0 * d1 - d2) / (12.0 * h);
}

}  // namespace

Complex apply_ell_at(const ScaleFunction& f, const CoefficientSet& cs,
                     const TimeScale& ts, double x) {
  const PointClass pc = ts.classify(x);
  if (!pc.in_scale)
    throw ValidationError("ell evaluation off the scale at x = " + std::to_string(x));
  const double rv = cs.r(ts, x);
  if (rv == 0.0)
    throw NumericalError("ell evaluation with r = 0 at x = " + std::to_string(x));
  const double qv = cs.q(ts, x);

  if (pc.right_scattered && x > ts.a()) {
    const double s = ts.sigma(x);
    const Complex dd = (f.qderiv(s) - f.qderiv(x)) / pc.graininess;
    return (-dd + qv * f.value(x)) / rv;
  }
  const std::size_t ci = ts.component_index(x);
  const Component& comp = ts.components()[ci];
  if (comp.is_point() || x <= comp.lo || x >= comp.hi) {
    throw ValidationError(
        "ell evaluation needs an atom or an interior continuous point; x = " +
        std::to_string(x) + " is neither");
  }
  const Complex dd = qderiv_slope(f, x, comp.lo, comp.hi);
  return (-dd + qv * f.value(x)) / rv;
}

std::vector<std::pair<double, Complex>> apply_ell(const ScaleFunction& f,
                                                  const CoefficientSet& cs,
                                                  const TimeScale& ts,
                                                  std::span<const double> points) {
  std::vector<std::pair<double, Complex>> out;
  out.reserve(points.size());
  for (double x : points) out.emplace_back(x, apply_ell_at(f, cs, ts, x));
  return out;
}

std::vector<double> ell_grid(const TimeScale& ts, int per_component) {
  std::vector<double> pts;
  const ScaleMeasure sk(ts, MeasureKind::SigmaKappa);
  for (const Atom& atom : sk.atoms()) pts.push_back(atom.location);
  for (const Component& c : ts.components()) {
    if (c.is_point()) continue;
    for (int j = 1; j <= per_component; ++j) {
      pts.push_back(c.lo + c.length() * j / (per_component + 1.0));
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double symmetry_defect(const Trajectory& f, const Trajectory& g,
                       const BoundaryCondition& bc, const CoefficientSet& cs,
                       const TimeScale& ts, double residual_tol,
                       const QuadratureOptions& opts) {
  auto check = [&](const Trajectory& traj, const char* name) {
    double res;
    if (bc.is_separated()) {
      res = std::max(std::abs(bc_residual_left(traj, ts, bc.alpha())),
                     std::abs(bc_residual_right(traj, ts, bc.beta())));
    } else {
      auto [r1, r2] = bc_residual_coupled(traj, ts, bc);
      res = std::max(std::abs(r1), std::abs(r2));
    }
    if (res > residual_tol) {
      throw ValidationError(std::string("symmetry defect requires domain members: ") +
                            name + " has boundary residual " + num(res));
    }
  };
  check(f, "f");
  check(g, "g");

  const ScaleFunction ff = as_scale_function(f);
  const ScaleFunction gg = as_scale_function(g);
  auto weight = [&](double x) { return Complex(cs.r(ts, x), 0.0); };
  const Complex lhs = integrate(
      ts, [&](double x) { return apply_ell_at(ff, cs, ts, x) * std::conj(gg.value(x)); },
      weight, opts);
  const Complex rhs = integrate(
      ts, [&](double x) { return ff.value(x) * std::conj(apply_ell_at(gg, cs, ts, x)); },
      weight, opts);
  return std::abs(lhs - rhs);
}

}  // namespace slts
