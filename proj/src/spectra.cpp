#include "slts/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "slts/errors.hpp"

namespace slts {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

IvpOptions scan_options(const SpectralOptions& opts) {
  IvpOptions ivp = opts.ivp;
  ivp.require_hypothesis = false;  // checked once by the caller
  return ivp;
}

// right-boundary residual of the left-condition solution phi_lambda
Complex separated_characteristic(Complex lambda, const TimeScale& ts,
                                 const CoefficientSet& cs, double phi_alpha,
                                 double phi_beta, const IvpOptions& ivp) {
  const StatePair start{std::sin(phi_alpha), std::cos(phi_alpha)};
  const StatePair end = shoot(ts, cs, lambda, start, {}, ivp);
  return end.u * std::cos(phi_beta) - end.d * std::sin(phi_beta);
}

Complex coupled_characteristic(Complex lambda, const TimeScale& ts,
                               const CoefficientSet& cs, double phi,
                               const Matrix2& R, const IvpOptions& ivp) {
  const TransferMatrix M = transfer_matrix(ts, cs, lambda, ivp);
  const Complex rot = std::exp(Complex(0.0, phi));
  const Complex a = M.m11 - rot * R[0][0];
  const Complex b = M.m12 - rot * R[0][1];
  const Complex c = M.m21 - rot * R[1][0];
  const Complex d = M.m22 - rot * R[1][1];
  return a * d - b * c;
}

void require_valid(const TimeScale& ts, const CoefficientSet& cs,
                   const BoundaryCondition& bc) {
  const HypothesisReport& hyp = cs.validate(ts);
  if (!hyp.ok)
    throw ValidationError("coefficient hypothesis fails:\n" + hyp.summary());
  const ValidityReport rep = validate_bc(ts, cs, bc);
  if (!rep.valid)
    throw ValidationError("boundary condition rejected:\n" + rep.summary());
}

}  // namespace

Complex characteristic_function(Complex lambda, const TimeScale& ts,
                                const CoefficientSet& cs, const BoundaryCondition& bc,
                                const SpectralOptions& opts) {
  const IvpOptions ivp = scan_options(opts);
  if (bc.is_separated())
    return separated_characteristic(lambda, ts, cs, bc.alpha(), bc.beta(), ivp);
  return coupled_characteristic(lambda, ts, cs, bc.phi(), bc.R(), ivp);
}

namespace {

struct ScanPoint {
  double x;
  double d;
};

double bisect_root(const std::function<double(double)>& f, double xl, double xr,
                   double fl, double rel_tol) {
  // fl and f(xr) have opposite signs
  for (int it = 0; it < 200; ++it) {
    const double xm = 0.5 * (xl + xr);
    const double tol = rel_tol * std::max({std::abs(xl), std::abs(xr), 1.0});
    if (xr - xl <= tol || xm <= xl || xm >= xr) return xm;
    const double fm = f(xm);
    if (fm == 0.0) return xm;
    if ((fl < 0.0) != (fm < 0.0)) {
      xr = xm;
    } else {
      xl = xm;
      fl = fm;
    }
  }
  return 0.5 * (xl + xr);
}

double golden_minimize(const std::function<double(double)>& f, double xl, double xr,
                       double rel_tol) {
  constexpr double invphi = 0.6180339887498949;
  double c = xr - invphi * (xr - xl);
  double d = xl + invphi * (xr - xl);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 120; ++it) {
    if (xr - xl <= rel_tol * std::max({std::abs(xl), std::abs(xr), 1.0})) break;
    if (fc < fd) {
      xr = d;
      d = c;
      fd = fc;
      c = xr - invphi * (xr - xl);
      fc = f(c);
    } else {
      xl = c;
      c = d;
      fc = fd;
      d = xl + invphi * (xr - xl);
      fd = f(d);
    }
  }
  return 0.5 * (xl + xr);
}

// Scans |D| dips without sign change at one refinement level; returns the
// refined point set for cells around interior local minima.
std::vector<double> dip_refinement(const std::vector<ScanPoint>& pts, int factor) {
  std::vector<double> extra;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const double l = std::abs(pts[i - 1].d);
    const double m = std::abs(pts[i].d);
    const double r = std::abs(pts[i + 1].d);
    const bool sign_change = (pts[i - 1].d < 0.0) != (pts[i].d < 0.0) ||
                             (pts[i].d < 0.0) != (pts[i + 1].d < 0.0);
    if (m <= l && m <= r && !sign_change) {
      for (int j = 1; j < factor; ++j) {
        extra.push_back(pts[i - 1].x + (pts[i].x - pts[i - 1].x) * j / factor);
        extra.push_back(pts[i].x + (pts[i + 1].x - pts[i].x) * j / factor);
      }
    }
  }
  return extra;
}

}  // namespace

std::vector<double> find_eigenvalues(const TimeScale& ts, const CoefficientSet& cs,
                                     const BoundaryCondition& bc, double lo,
                                     double hi, int max_count,
                                     const SpectralOptions& opts) {
  if (hi <= lo) throw ValidationError("eigenvalue range must have lo < hi");
  if (max_count <= 0) return {};
  require_valid(ts, cs, bc);
  if (!bc.is_separated() && bc.phi() != 0.0) {
    throw ValidationError(
        "eigenvalue search for coupled conditions is limited to phi = 0 (the "
        "characteristic function is complex-valued otherwise); evaluate "
        "characteristic_function at chosen complex points instead");
  }
  const IvpOptions ivp = scan_options(opts);
  auto dfun = [&](double x) -> double {
    const Complex d = bc.is_separated()
                          ? separated_characteristic(x, ts, cs, bc.alpha(),
                                                     bc.beta(), ivp)
                          : coupled_characteristic(x, ts, cs, bc.phi(), bc.R(), ivp);
    return d.real();
  };

  // initial uniform grid
  std::vector<ScanPoint> pts;
  const int n0 = std::max(8, opts.initial_grid);
  pts.reserve(n0 + 1);
  for (int i = 0; i <= n0; ++i) {
    const double x = lo + (hi - lo) * i / n0;
    pts.push_back({x, dfun(x)});
  }

  // refine around dips without sign change
  for (int level = 0; level < opts.max_refine_levels; ++level) {
    std::vector<double> extra = dip_refinement(pts, opts.refine_factor);
    if (extra.empty()) break;
    for (double x : extra) pts.push_back({x, dfun(x)});
    std::sort(pts.begin(), pts.end(),
              [](const ScanPoint& a, const ScanPoint& b) { return a.x < b.x; });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const ScanPoint& a, const ScanPoint& b) {
                            return a.x == b.x;
                          }),
              pts.end());
  }

  std::vector<std::pair<double, double>> brackets;  // [xl, xr] with sign change
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i].d == 0.0) {
      brackets.emplace_back(pts[i].x, pts[i].x);
    } else if ((pts[i].d < 0.0) != (pts[i + 1].d < 0.0)) {
      brackets.emplace_back(pts[i].x, pts[i + 1].x);
    }
  }
  if (brackets.size() > 4096) {
    std::string trace;
    for (std::size_t i = 0; i < 8 && i < pts.size(); ++i)
      trace += "  D(" + num(pts[i].x) + ") = " + num(pts[i].d) + "\n";
    throw NumericalError("bracket budget exhausted: " +
                         std::to_string(brackets.size()) +
                         " sign changes in the scan range; grid trace:\n" + trace);
  }

  std::vector<double> roots;
  for (const auto& [xl, xr] : brackets) {
    if (xl == xr) {
      roots.push_back(xl);
    } else {
      roots.push_back(bisect_root(dfun, xl, xr, dfun(xl), opts.bisect_rel_tol));
    }
  }

  // double roots of coupled problems: persistent dips with |D| at noise level
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const double m = std::abs(pts[i].d);
    const bool sign_change = (pts[i - 1].d < 0.0) != (pts[i].d < 0.0) ||
                             (pts[i].d < 0.0) != (pts[i + 1].d < 0.0);
    if (sign_change || m > std::abs(pts[i - 1].d) || m > std::abs(pts[i + 1].d))
      continue;
    const double edge = std::max(std::abs(pts[i - 1].d), std::abs(pts[i + 1].d));
    const double xm = golden_minimize([&](double x) { return std::abs(dfun(x)); },
                                      pts[i - 1].x, pts[i + 1].x,
                                      opts.bisect_rel_tol);
    const double dm = std::abs(dfun(xm));
    if (dm <= 1e-9 * std::max(edge, 1e-30)) roots.push_back(xm);
  }

  std::sort(roots.begin(), roots.end());
  // deduplicate within bisection resolution
  std::vector<double> eigenvalues;
  for (double r : roots) {
    const double tol = 16.0 * opts.bisect_rel_tol * std::max(std::abs(r), 1.0);
    if (eigenvalues.empty() || r - eigenvalues.back() > tol) eigenvalues.push_back(r);
  }
  if (static_cast<int>(eigenvalues.size()) > max_count)
    eigenvalues.resize(max_count);
  return eigenvalues;
}

Eigenpair eigenpair(double lambda, const TimeScale& ts, const CoefficientSet& cs,
                    const BoundaryCondition& bc, const SpectralOptions& opts) {
  if (!bc.is_separated())
    throw ValidationError("eigenpairs require separated boundary conditions");
  require_valid(ts, cs, bc);
  const IvpOptions ivp = scan_options(opts);

  // lambda must be a zero of D within tolerance of the local scale
  const double delta = 1e-6 * std::max(std::abs(lambda), 1.0);
  const double d0 = std::abs(
      separated_characteristic(lambda, ts, cs, bc.alpha(), bc.beta(), ivp));
  const double dl = std::abs(separated_characteristic(lambda - delta, ts, cs,
                                                      bc.alpha(), bc.beta(), ivp));
  const double dr = std::abs(separated_characteristic(lambda + delta, ts, cs,
                                                      bc.alpha(), bc.beta(), ivp));
  if (d0 > 1e-4 * std::max({dl, dr, d0})) {
    throw NumericalError("lambda = " + num(lambda) +
                         " is not a characteristic zero within tolerance "
                         "(|D| = " + num(d0) + " against neighbors " + num(dl) +
                         ", " + num(dr) + ")");
  }

  const double anchor = ts.sigma_kappa(ts.a());
  Trajectory phi = solve_ivp(ts, cs, lambda, anchor, std::sin(bc.alpha()),
                             std::cos(bc.alpha()), {}, ivp);
  const double norm_sq =
      integrate(
          ts, [&](double x) { return std::norm(phi.value(x)); },
          [&](double x) { return Complex(cs.r(ts, x), 0.0); })
          .real();
  if (!(norm_sq > 0.0))
    throw NumericalError("eigenfunction has non-positive norm");
  Eigenpair pair{lambda, std::move(phi), 1.0 / norm_sq};
  pair.eigenfunction.scale_values(1.0 / std::sqrt(norm_sq));
  return pair;
}

SpectralResult solve_spectrum(const TimeScale& ts, const CoefficientSet& cs,
                              const BoundaryCondition& bc, double lo, double hi,
                              int max_count, const SpectralOptions& opts) {
  SpectralResult sr;
  sr.bc = bc;
  sr.bisect_rel_tol = opts.bisect_rel_tol;
  sr.eigenvalues = find_eigenvalues(ts, cs, bc, lo, hi, max_count, opts);
  if (bc.is_separated()) {
    for (double lambda : sr.eigenvalues) {
      Eigenpair pair = eigenpair(lambda, ts, cs, bc, opts);
      sr.eigenfunctions.push_back(std::move(pair.eigenfunction));
      sr.norming_constants.push_back(pair.norming_constant);
    }
  }
  return sr;
}

GreenKernel::GreenKernel(Complex z, const TimeScale& ts, const CoefficientSet& cs,
                         const BoundaryCondition& bc, const SpectralOptions& opts)
    : z_(z) {
  if (!bc.is_separated())
    throw ValidationError("the factorized kernel requires separated conditions");
  require_valid(ts, cs, bc);
  const IvpOptions ivp = scan_options(opts);
  const double anchor = ts.sigma_kappa(ts.a());
  u_a_ = solve_ivp(ts, cs, z, anchor, std::sin(bc.alpha()), std::cos(bc.alpha()),
                   {}, ivp);
  u_b_ = solve_ivp(ts, cs, z, ts.b(), std::sin(bc.beta()), std::cos(bc.beta()),
                   {}, ivp);
  w_ = slts::wronskian(u_b_, u_a_, ts.b());
  const StatePair sa = u_a_.at(ts.b());
  const double scale =
      std::max(std::abs(sa.u) + std::abs(sa.d), 1e-300);
  if (std::abs(w_) < opts.pole_guard * scale) {
    throw NumericalError("resolvent pole: z = " + num(z.real()) +
                         (z.imag() < 0 ? " - " : " + ") + num(std::abs(z.imag())) +
                         "i sits at (or numerically near) an eigenvalue "
                         "(|W| = " + num(std::abs(w_)) + ")");
  }
}

Complex GreenKernel::operator()(double x, double y) const {
  const double xlo = std::min(x, y), xhi = std::max(x, y);
  return u_a_.value(xlo) * u_b_.value(xhi) / w_;
}

Complex green_kernel(Complex z, double x, double y, const TimeScale& ts,
                     const CoefficientSet& cs, const BoundaryCondition& bc,
                     const SpectralOptions& opts) {
  return GreenKernel(z, ts, cs, bc, opts)(x, y);
}

ResolventApplication::ResolventApplication(Complex z, std::function<Complex(double)> f,
                                           const TimeScale& ts,
                                           const CoefficientSet& cs,
                                           const BoundaryCondition& bc,
                                           const SpectralOptions& opts)
    : ts_(ts), cs_(cs), f_(std::move(f)), kernel_(z, ts, cs, bc, opts) {
  quad_.rel_tol = opts.ivp.rel_tol;
  quad_.abs_tol = opts.ivp.abs_tol;
  const auto& comps = ts_.components();
  const ScaleMeasure sm(ts_, MeasureKind::SigmaKappa);
  lower_a_.assign(comps.size(), Complex(0.0, 0.0));
  lower_b_.assign(comps.size(), Complex(0.0, 0.0));
  Complex runA = 0.0, runB = 0.0;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const Component& c = comps[i];
    if (!c.is_point()) {
      runA += gauss_kronrod(
          [&](double y) {
            return kernel_.left_solution().value(y) * f_(y) * cs_.r(ts_, y);
          },
          c.lo, c.hi, quad_);
      runB += gauss_kronrod(
          [&](double y) {
            return kernel_.right_solution().value(y) * f_(y) * cs_.r(ts_, y);
          },
          c.lo, c.hi, quad_);
    }
    for (const Atom& atom : sm.atoms()) {
      if (atom.location == c.hi) {
        const Complex fr = f_(atom.location) * cs_.r(ts_, atom.location) * atom.mass;
        runA += kernel_.left_solution().value(atom.location) * fr;
        runB += kernel_.right_solution().value(atom.location) * fr;
      }
    }
    lower_a_[i] = runA;
    lower_b_[i] = runB;
  }
  total_upper_ = runB;
}

Complex ResolventApplication::lower_integral(double x) const {
  // integral of u_a f r over (a, x]
  const std::size_t i = ts_.component_index(x);
  if (i == TimeScale::npos)
    throw ValidationError("resolvent evaluation off the scale");
  const Component& c = ts_.components()[i];
  if (c.is_point() || x >= c.hi) return lower_a_[i];
  Complex base = i == 0 ? Complex(0.0) : lower_a_[i - 1];
  if (x > c.lo) {
    base += gauss_kronrod(
        [&](double y) {
          return kernel_.left_solution().value(y) * f_(y) * cs_.r(ts_, y);
        },
        c.lo, x, quad_);
  }
  return base;
}

Complex ResolventApplication::upper_integral(double x) const {
  // integral of u_b f r over (x, b]
  const std::size_t i = ts_.component_index(x);
  if (i == TimeScale::npos)
    throw ValidationError("resolvent evaluation off the scale");
  const Component& c = ts_.components()[i];
  Complex lower = i == 0 ? Complex(0.0) : lower_b_[i - 1];
  if (c.is_point() || x >= c.hi) {
    lower = lower_b_[i];
  } else if (x > c.lo) {
    lower += gauss_kronrod(
        [&](double y) {
          return kernel_.right_solution().value(y) * f_(y) * cs_.r(ts_, y);
        },
        c.lo, x, quad_);
  }
  return total_upper_ - lower;
}

Complex ResolventApplication::value(double x) const {
  const Complex A = lower_integral(x);
  const Complex B = upper_integral(x);
  return (kernel_.right_solution().value(x) * A +
          kernel_.left_solution().value(x) * B) /
         kernel_.wronskian();
}

Complex ResolventApplication::qderiv(double x) const {
  const Complex A = lower_integral(x);
  const Complex B = upper_integral(x);
  return (kernel_.right_solution().qderiv(x) * A +
          kernel_.left_solution().qderiv(x) * B) /
         kernel_.wronskian();
}

ScaleFunction ResolventApplication::as_function() const {
  return {[this](double x) { return value(x); },
          [this](double x) { return qderiv(x); }};
}

std::vector<std::pair<double, Complex>> resolvent_apply(
    Complex z, const std::function<Complex(double)>& f, const TimeScale& ts,
    const CoefficientSet& cs, const BoundaryCondition& bc,
    std::span<const double> grid, const SpectralOptions& opts) {
  const ResolventApplication app(z, f, ts, cs, bc, opts);
  std::vector<std::pair<double, Complex>> out;
  out.reserve(grid.size());
  for (double x : grid) out.emplace_back(x, app.value(x));
  return out;
}

MSample m_function(Complex z, const TimeScale& ts, const CoefficientSet& cs,
                   const BoundaryCondition& bc, const SpectralOptions& opts) {
  if (!bc.is_separated())
    throw ValidationError("the m-function requires separated conditions");
  require_valid(ts, cs, bc);
  const IvpOptions ivp = scan_options(opts);
  const double ca = std::cos(bc.alpha()), sa = std::sin(bc.alpha());
  const StatePair theta_b = shoot(ts, cs, z, {ca, -sa}, {}, ivp);
  const StatePair phi_b = shoot(ts, cs, z, {sa, ca}, {}, ivp);
  const double cb = std::cos(bc.beta()), sb = std::sin(bc.beta());
  const Complex d_theta = theta_b.u * cb - theta_b.d * sb;
  const Complex d_phi = phi_b.u * cb - phi_b.d * sb;
  const double scale =
      std::max(std::abs(phi_b.u) + std::abs(phi_b.d), 1e-300);
  if (std::abs(d_phi) < opts.pole_guard * scale) {
    throw NumericalError("m-function pole: z is numerically at an eigenvalue "
                         "(|D| = " + num(std::abs(d_phi)) + ")");
  }
  return {z, -d_theta / d_phi};
}

std::vector<Complex> spectral_transform_forward(
    const std::function<Complex(double)>& f, const SpectralResult& sr,
    const TimeScale& ts, const CoefficientSet& cs, const QuadratureOptions& opts) {
  std::vector<Complex> coeffs;
  coeffs.reserve(sr.eigenfunctions.size());
  for (std::size_t k = 0; k < sr.eigenfunctions.size(); ++k) {
    // the transform uses the pre-normalization solution phi_k = psi_k / sqrt(gamma_k)
    const Trajectory& psi = sr.eigenfunctions[k];
    const double scale = 1.0 / std::sqrt(sr.norming_constants[k]);
    coeffs.push_back(scale *
                     integrate(
                         ts, [&](double x) { return psi.value(x) * f(x); },
                         [&](double x) { return Complex(cs.r(ts, x), 0.0); }, opts));
  }
  return coeffs;
}

ScaleFunction spectral_transform_inverse(std::span<const Complex> coefficients,
                                         const SpectralResult& sr) {
  if (coefficients.size() > sr.eigenfunctions.size())
    throw ValidationError("more coefficients than computed eigenfunctions");
  std::vector<Complex> c(coefficients.begin(), coefficients.end());
  const SpectralResult* srp = &sr;
  auto value = [c, srp](double x) {
    Complex v = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      const double root_gamma = std::sqrt(srp->norming_constants[k]);
      v += c[k] * root_gamma * srp->eigenfunctions[k].value(x);
    }
    return v;
  };
  auto qd = [c, srp](double x) {
    Complex v = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      const double root_gamma = std::sqrt(srp->norming_constants[k]);
      v += c[k] * root_gamma * srp->eigenfunctions[k].qderiv(x);
    }
    return v;
  };
  return {value, qd};
}

AsymptoticReport asymptotic_ratio(const SpectralResult& sr, double L) {
  AsymptoticReport report;
  report.length = L;
  if (L <= 0.0) {
    report.applicable = false;
    report.note =
        "asymptotics not captured: the scale has Lebesgue measure zero, so the "
        "n^2 growth law does not apply (discrete-dominated spectrum)";
    return report;
  }
  if (sr.eigenvalues.size() < 5) {
    report.applicable = false;
    report.note = "at least 5 eigenvalues are needed for a meaningful ratio table";
    return report;
  }
  report.applicable = true;
  const double target = std::numbers::pi * std::numbers::pi / (L * L);
  for (std::size_t n = 1; n < sr.eigenvalues.size(); ++n) {
    const double ratio = sr.eigenvalues[n] / (static_cast<double>(n) * n);
    report.rows.push_back({static_cast<int>(n), sr.eigenvalues[n], ratio, target});
  }
  const AsymptoticRow& last = report.rows.back();
  report.relative_gap = std::abs(last.ratio - target) / target;
  return report;
}

namespace {

// least-squares circle through the m-values (algebraic fit); falls back to
// centroid + spread when the sweep collapses below double resolution
WeylDisk fit_disk(double b, const std::vector<Complex>& w) {
  Complex centroid = 0.0;
  for (Complex v : w) centroid += v;
  centroid /= static_cast<double>(w.size());
  double spread = 0.0;
  for (Complex v : w) spread = std::max(spread, std::abs(v - centroid));

  // normal equations for x^2 + y^2 + D x + E y + F = 0
  double sxx = 0, sxy = 0, syy = 0, sx = 0, sy = 0, sxz = 0, syz = 0, sz = 0;
  const double n = static_cast<double>(w.size());
  for (Complex v : w) {
    const double x = v.real(), y = v.imag(), zq = x * x + y * y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    sx += x;
    sy += y;
    sxz += x * zq;
    syz += y * zq;
    sz += zq;
  }
  // Solve [sxx sxy sx; sxy syy sy; sx sy n] [D E F]^T = -[sxz syz sz]^T
  double A[3][4] = {{sxx, sxy, sx, -sxz}, {sxy, syy, sy, -syz}, {sx, sy, n, -sz}};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (std::abs(A[piv][col]) < 1e-300 * std::max(1.0, std::abs(sz))) {
      return {b, centroid, spread};  // degenerate sweep
    }
    std::swap(A[col], A[piv]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double fac = A[r][col] / A[col][col];
      for (int cc = col; cc < 4; ++cc) A[r][cc] -= fac * A[col][cc];
    }
  }
  const double D = A[0][3] / A[0][0];
  const double E = A[1][3] / A[1][1];
  const double F = A[2][3] / A[2][2];
  const Complex center(-0.5 * D, -0.5 * E);
  const double r2 = 0.25 * (D * D + E * E) - F;
  if (!(r2 > 0.0) || !std::isfinite(r2)) return {b, centroid, spread};
  return {b, center, std::sqrt(r2)};
}

}  // namespace

std::vector<WeylDisk> weyl_disks(Complex z, std::span<const TimeScale> truncations,
                                 const CoefficientSet& cs, double phi_alpha,
                                 const SpectralOptions& opts) {
  if (truncations.empty()) return {};
  if (z.imag() <= 0.0)
    throw ValidationError("the disk sweep needs Im z > 0");
  for (std::size_t k = 0; k + 1 < truncations.size(); ++k) {
    if (truncations[k].b() >= truncations[k + 1].b() ||
        !truncations[k].same_components(truncations[k + 1].truncate(truncations[k].b()))) {
      throw ValidationError("truncations must be nested restrictions of one scale "
                            "with increasing right endpoints");
    }
  }
  const IvpOptions ivp = scan_options(opts);
  std::vector<WeylDisk> disks;
  for (const TimeScale& ts : truncations) {
    const double ca = std::cos(phi_alpha), sa = std::sin(phi_alpha);
    const StatePair theta_b = shoot(ts, cs, z, {ca, -sa}, {}, ivp);
    const StatePair phi_b = shoot(ts, cs, z, {sa, ca}, {}, ivp);
    std::vector<Complex> samples;
    samples.reserve(64);
    for (int j = 0; j < 64; ++j) {
      const double beta = std::numbers::pi * j / 64.0;
      const double cb = std::cos(beta), sb = std::sin(beta);
      const Complex den = phi_b.u * cb - phi_b.d * sb;
      if (std::abs(den) < 1e-300) continue;
      samples.push_back(-(theta_b.u * cb - theta_b.d * sb) / den);
    }
    if (samples.size() < 8)
      throw NumericalError("degenerate angle sweep at truncation b = " +
                           num(ts.b()));
    disks.push_back(fit_disk(ts.b(), samples));
  }
  return disks;
}

}  // namespace slts
