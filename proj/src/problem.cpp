#include "slts/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "slts/errors.hpp"
#include "slts/ivp.hpp"

namespace slts {

using nlohmann::json;

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::optional<SolverTolerances> parse_tolerances(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return std::nullopt;
  try {
    SolverTolerances tol;
    tol.rel = std::stod(text.substr(0, comma));
    tol.abs = std::stod(text.substr(comma + 1));
    if (tol.rel <= 0.0 || tol.abs <= 0.0) return std::nullopt;
    return tol;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

namespace {

[[noreturn]] void field_error(const std::string& name, const std::string& field,
                              const std::string& what) {
  throw ValidationError(name + ": " + field + ": " + what);
}

double get_number(const json& j, const std::string& name, const std::string& field) {
  if (!j.is_number()) field_error(name, field, "expected a number");
  return j.get<double>();
}

TimeScale parse_scale(const json& j, const std::string& name) {
  if (!j.is_object() || !j.contains("components"))
    field_error(name, "timescale", "expected an object with a components array");
  const json& comps = j["components"];
  if (!comps.is_array() || comps.empty())
    field_error(name, "timescale.components", "expected a nonempty array of [lo, hi] pairs");
  std::vector<Component> components;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const json& c = comps[i];
    if (!c.is_array() || c.size() != 2)
      field_error(name, "timescale.components[" + std::to_string(i) + "]",
                  "expected a [lo, hi] pair");
    components.push_back({get_number(c[0], name, "timescale.components"),
                          get_number(c[1], name, "timescale.components")});
  }
  double snap = 0.0;
  if (j.contains("snap_tol")) snap = get_number(j["snap_tol"], name, "timescale.snap_tol");
  try {
    return TimeScale(std::move(components), snap);
  } catch (const ValidationError& e) {
    field_error(name, "timescale", e.what());
  }
}

PiecewiseExpression parse_coefficient(const json& j, const std::string& name,
                                      const std::string& field) {
  auto parse_one = [&](const json& e, const std::string& where) {
    if (!e.is_string()) field_error(name, where, "expected an expression string");
    try {
      return Expression::parse(e.get<std::string>());
    } catch (const ParseError& pe) {
      throw ParseError(name + ": " + where + ": " + pe.what(), pe.offset(),
                       pe.expected());
    }
  };
  if (j.is_string()) return PiecewiseExpression(parse_one(j, field));
  if (j.is_array()) {
    std::vector<Expression> parts;
    for (std::size_t i = 0; i < j.size(); ++i) {
      parts.push_back(parse_one(j[i], field + "[" + std::to_string(i) + "]"));
    }
    return PiecewiseExpression(std::move(parts));
  }
  field_error(name, field, "expected an expression string or a per-component list");
}

BoundaryCondition parse_bc(const json& j, const std::string& name) {
  if (!j.is_object() || !j.contains("type"))
    field_error(name, "boundary", "expected an object with a type");
  const std::string type = j["type"].get<std::string>();
  if (type == "separated") {
    if (!j.contains("alpha") || !j.contains("beta"))
      field_error(name, "boundary", "separated conditions need alpha and beta");
    return BoundaryCondition::separated(get_number(j["alpha"], name, "boundary.alpha"),
                                        get_number(j["beta"], name, "boundary.beta"));
  }
  if (type == "coupled") {
    if (!j.contains("R")) field_error(name, "boundary", "coupled conditions need R");
    const json& R = j["R"];
    if (!R.is_array() || R.size() != 2 || !R[0].is_array() || R[0].size() != 2 ||
        !R[1].is_array() || R[1].size() != 2)
      field_error(name, "boundary.R", "expected a 2x2 matrix");
    Matrix2 m{{{get_number(R[0][0], name, "boundary.R"),
                get_number(R[0][1], name, "boundary.R")},
               {get_number(R[1][0], name, "boundary.R"),
                get_number(R[1][1], name, "boundary.R")}}};
    const double phi = j.contains("phi") ? get_number(j["phi"], name, "boundary.phi") : 0.0;
    return BoundaryCondition::coupled(phi, m);
  }
  field_error(name, "boundary.type", "expected \"separated\" or \"coupled\"");
}

TaskDefaults parse_task(const json& j, const std::string& name) {
  TaskDefaults task;
  if (!j.is_object()) field_error(name, "task", "expected an object");
  if (j.contains("range")) {
    const json& r = j["range"];
    if (!r.is_array() || r.size() != 2)
      field_error(name, "task.range", "expected [lo, hi]");
    task.range = {get_number(r[0], name, "task.range"),
                  get_number(r[1], name, "task.range")};
  }
  if (j.contains("max")) task.max_count = j["max"].get<int>();
  if (j.contains("z")) {
    const json& z = j["z"];
    if (!z.is_array() || z.empty() || z.size() > 2)
      field_error(name, "task.z", "expected [re] or [re, im]");
    task.z = Complex(get_number(z[0], name, "task.z"),
                     z.size() == 2 ? get_number(z[1], name, "task.z") : 0.0);
  }
  if (j.contains("ic")) {
    const json& ic = j["ic"];
    if (!ic.is_array() || ic.size() != 3)
      field_error(name, "task.ic", "expected [c, u, d]");
    task.ic = {{get_number(ic[0], name, "task.ic"), get_number(ic[1], name, "task.ic"),
                get_number(ic[2], name, "task.ic")}};
  }
  if (j.contains("f")) task.f = j["f"].get<std::string>();
  if (j.contains("truncations")) {
    for (const json& t : j["truncations"])
      task.truncations.push_back(get_number(t, name, "task.truncations"));
  }
  if (j.contains("grid")) task.grid = j["grid"].get<int>();
  return task;
}

}  // namespace

ProblemSpec parse_problem_text(const std::string& text, const std::string& name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(name + ": " + e.what(), e.byte);
  }
  if (!doc.is_object()) throw ValidationError(name + ": expected a JSON object");
  for (const char* required : {"timescale", "coefficients", "boundary"}) {
    if (!doc.contains(required))
      throw ValidationError(name + ": missing required field \"" +
                            std::string(required) + "\"");
  }

  ProblemSpec spec;
  spec.source_name = name;
  spec.ts = parse_scale(doc["timescale"], name);

  const json& coeff = doc["coefficients"];
  if (!coeff.is_object())
    throw ValidationError(name + ": coefficients: expected an object with r, p, q");
  for (const char* required : {"r", "p", "q"}) {
    if (!coeff.contains(required))
      throw ValidationError(name + ": coefficients: missing \"" +
                            std::string(required) + "\"");
  }
  spec.cs = CoefficientSet(parse_coefficient(coeff["r"], name, "coefficients.r"),
                           parse_coefficient(coeff["p"], name, "coefficients.p"),
                           parse_coefficient(coeff["q"], name, "coefficients.q"));

  spec.bc = parse_bc(doc["boundary"], name);

  if (doc.contains("tolerances")) {
    const json& tol = doc["tolerances"];
    if (tol.contains("rel")) spec.tol.rel = get_number(tol["rel"], name, "tolerances.rel");
    if (tol.contains("abs")) spec.tol.abs = get_number(tol["abs"], name, "tolerances.abs");
  }
  if (doc.contains("task")) spec.task = parse_task(doc["task"], name);

  spec.hypothesis = validate_hypothesis(spec.cs, spec.ts);
  spec.cs.validate(spec.ts);  // prime the cached report
  spec.bc_report = validate_bc(spec.ts, spec.cs, spec.bc);
  return spec;
}

ProblemSpec parse_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open problem file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem_text(ss.str(), path);
}

void ProblemSpec::ensure_valid() const {
  if (!hypothesis.ok) {
    for (const HypothesisClause& c : hypothesis.clauses) {
      if (!c.passed) {
        throw ValidationError(source_name + ": coefficient hypothesis clause " +
                              c.id + " fails (" + c.description + "): " + c.detail);
      }
    }
  }
  if (!bc_report.valid) {
    throw ValidationError(source_name + ": boundary condition rejected: " +
                          bc_report.violations.front().clause + " -- " +
                          bc_report.violations.front().detail);
  }
}

ProblemSpec load_problem(const std::string& path) {
  ProblemSpec spec = parse_problem_file(path);
  spec.ensure_valid();
  return spec;
}

SpectralOptions ProblemSpec::spectral_options() const {
  SpectralOptions opts;
  opts.ivp.rel_tol = tol.rel;
  opts.ivp.abs_tol = tol.abs;
  return opts;
}

std::vector<double> scale_grid(const TimeScale& ts, int n) {
  std::vector<double> pts;
  const double total = ts.lebesgue_length();
  for (const Component& c : ts.components()) {
    if (c.is_point()) {
      pts.push_back(c.lo);
      continue;
    }
    const int k = std::max(
        2, total > 0.0 ? static_cast<int>(std::lround(n * c.length() / total)) : 2);
    for (int j = 0; j <= k; ++j) pts.push_back(c.lo + c.length() * j / k);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

namespace {

std::string complex_pair(Complex v) {
  return "[" + format_float(v.real()) + ", " + format_float(v.imag()) + "]";
}

int cmd_validate(const ProblemSpec& spec, std::ostream& out) {
  out << "problem: " << spec.source_name << "\n";
  out << "scale: [" << format_float(spec.ts.a()) << ", " << format_float(spec.ts.b())
      << "] with " << spec.ts.components().size() << " component(s)\n";
  out << "boundary: " << spec.bc.describe() << "\n";
  out << "hypothesis:\n" << spec.hypothesis.summary();
  out << "boundary admissibility:\n" << spec.bc_report.summary();
  const bool ok = spec.all_valid();
  out << (ok ? "VALID\n" : "INVALID\n");
  return ok ? 0 : 1;
}

int cmd_ivp(const ProblemSpec& spec, const CommandFlags& flags, std::ostream& out) {
  const Complex z = flags.z ? *flags.z : spec.task.z.value_or(Complex(0.0, 0.0));
  std::array<double, 3> ic{spec.ts.sigma_kappa(spec.ts.a()), 0.0, 1.0};
  if (spec.task.ic) ic = *spec.task.ic;
  if (flags.ic) ic = *flags.ic;
  IvpOptions opts;
  opts.rel_tol = spec.tol.rel;
  opts.abs_tol = spec.tol.abs;
  const Trajectory traj =
      solve_ivp(spec.ts, spec.cs, z, ic[0], ic[1], ic[2], {}, opts);
  out << "x,re_u,im_u,re_d,im_d\n";
  for (const auto& node : traj.samples()) {
    out << format_float(node.x) << "," << format_float(node.s.u.real()) << ","
        << format_float(node.s.u.imag()) << "," << format_float(node.s.d.real())
        << "," << format_float(node.s.d.imag()) << "\n";
  }
  return 0;
}

int cmd_eig(const ProblemSpec& spec, const CommandFlags& flags, std::ostream& out) {
  const auto range = flags.range ? *flags.range
                                 : spec.task.range.value_or(std::pair{0.0, 100.0});
  const int max_count = flags.max_count ? *flags.max_count
                                        : spec.task.max_count.value_or(10);
  const SpectralResult sr = solve_spectrum(spec.ts, spec.cs, spec.bc, range.first,
                                           range.second, max_count,
                                           spec.spectral_options());
  out << "{\n  \"eigenvalues\": [";
  for (std::size_t i = 0; i < sr.eigenvalues.size(); ++i)
    out << (i ? ", " : "") << format_float(sr.eigenvalues[i]);
  out << "],\n  \"norming_constants\": [";
  for (std::size_t i = 0; i < sr.norming_constants.size(); ++i)
    out << (i ? ", " : "") << format_float(sr.norming_constants[i]);
  out << "]\n}\n";
  return 0;
}

int cmd_green(const ProblemSpec& spec, const CommandFlags& flags, std::ostream& out) {
  const Complex z = flags.z ? *flags.z : spec.task.z.value_or(Complex(0.0, 0.0));
  const int n = flags.grid ? *flags.grid : spec.task.grid.value_or(20);
  const GreenKernel kernel(z, spec.ts, spec.cs, spec.bc, spec.spectral_options());
  const std::vector<double> grid = scale_grid(spec.ts, n);
  out << "x,y,re_G,im_G\n";
  for (double x : grid) {
    for (double y : grid) {
      const Complex g = kernel(x, y);
      out << format_float(x) << "," << format_float(y) << ","
          << format_float(g.real()) << "," << format_float(g.imag()) << "\n";
    }
  }
  return 0;
}

int cmd_mfunc(const ProblemSpec& spec, const CommandFlags& flags, std::ostream& out) {
  const auto range = flags.range ? *flags.range
                                 : spec.task.range.value_or(std::pair{-10.0, 100.0});
  const int n = flags.grid ? *flags.grid : spec.task.grid.value_or(64);
  const SpectralOptions opts = spec.spectral_options();
  out << "re_z,im_z,re_m,im_m\n";
  for (double im : {1.0, 0.1, 0.01, 0.0001}) {
    for (int i = 0; i <= n; ++i) {
      const double re = range.first + (range.second - range.first) * i / n;
      const MSample s = m_function(Complex(re, im), spec.ts, spec.cs, spec.bc, opts);
      out << format_float(re) << "," << format_float(im) << ","
          << format_float(s.m.real()) << "," << format_float(s.m.imag()) << "\n";
    }
  }
  return 0;
}

int cmd_transform(const ProblemSpec& spec, const CommandFlags& flags,
                  std::ostream& out) {
  if (!spec.task.f)
    throw ValidationError(spec.source_name +
                          ": transform needs task.f (an expression for the input)");
  Expression fexpr;
  try {
    fexpr = Expression::parse(*spec.task.f);
  } catch (const ParseError& e) {
    throw ParseError(spec.source_name + ": task.f: " + e.what(), e.offset(),
                     e.expected());
  }
  const auto range = flags.range ? *flags.range
                                 : spec.task.range.value_or(std::pair{0.0, 100.0});
  const int max_count = flags.max_count ? *flags.max_count
                                        : spec.task.max_count.value_or(5);
  const SpectralResult sr = solve_spectrum(spec.ts, spec.cs, spec.bc, range.first,
                                           range.second, max_count,
                                           spec.spectral_options());
  auto f = [&](double x) { return Complex(fexpr(x), 0.0); };
  const std::vector<Complex> coeffs =
      spectral_transform_forward(f, sr, spec.ts, spec.cs);
  const double norm_sq =
      integrate(
          spec.ts, [&](double x) { return std::norm(f(x)); },
          [&](double x) { return Complex(spec.cs.r(spec.ts, x), 0.0); })
          .real();
  double parseval = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    parseval += std::norm(coeffs[k]) * sr.norming_constants[k];
  const ScaleFunction inv = spectral_transform_inverse(coeffs, sr);
  double max_err = 0.0;
  for (double x : scale_grid(spec.ts, 64))
    max_err = std::max(max_err, std::abs(inv.value(x) - f(x)));

  out << "{\n  \"eigenvalues\": [";
  for (std::size_t i = 0; i < sr.eigenvalues.size(); ++i)
    out << (i ? ", " : "") << format_float(sr.eigenvalues[i]);
  out << "],\n  \"coefficients\": [";
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    out << (i ? ", " : "") << complex_pair(coeffs[i]);
  out << "],\n  \"norming_constants\": [";
  for (std::size_t i = 0; i < sr.norming_constants.size(); ++i)
    out << (i ? ", " : "") << format_float(sr.norming_constants[i]);
  out << "],\n  \"f_norm_sq\": " << format_float(norm_sq)
      << ",\n  \"parseval_sum\": " << format_float(parseval)
      << ",\n  \"parseval_defect\": " << format_float(std::abs(norm_sq - parseval))
      << ",\n  \"max_reconstruction_error\": " << format_float(max_err) << "\n}\n";
  return 0;
}

int cmd_asymptotics(const ProblemSpec& spec, const CommandFlags& flags,
                    std::ostream& out) {
  const auto range = flags.range ? *flags.range
                                 : spec.task.range.value_or(std::pair{0.0, 1000.0});
  const int max_count = flags.max_count ? *flags.max_count
                                        : spec.task.max_count.value_or(12);
  const SpectralResult sr = solve_spectrum(spec.ts, spec.cs, spec.bc, range.first,
                                           range.second, max_count,
                                           spec.spectral_options());
  const double L = geometric_length(spec.cs, spec.ts);
  const AsymptoticReport report = asymptotic_ratio(sr, L);
  out << "{\n  \"length\": " << format_float(report.length)
      << ",\n  \"applicable\": " << (report.applicable ? "true" : "false");
  if (!report.note.empty()) out << ",\n  \"note\": \"" << report.note << "\"";
  if (report.applicable) {
    out << ",\n  \"target\": " << format_float(report.rows.front().target)
        << ",\n  \"relative_gap\": " << format_float(report.relative_gap)
        << ",\n  \"rows\": [";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      const AsymptoticRow& row = report.rows[i];
      out << (i ? ",\n    " : "\n    ") << "{\"n\": " << row.n
          << ", \"eigenvalue\": " << format_float(row.eigenvalue)
          << ", \"ratio\": " << format_float(row.ratio) << "}";
    }
    out << "\n  ]";
  }
  out << "\n}\n";
  return 0;
}

int cmd_weyl(const ProblemSpec& spec, const CommandFlags& flags, std::ostream& out) {
  if (spec.task.truncations.empty())
    throw ValidationError(spec.source_name +
                          ": weyl needs task.truncations (increasing cut points)");
  if (!spec.bc.is_separated())
    throw ValidationError("the disk diagnostic requires a separated condition");
  const Complex z = flags.z ? *flags.z : spec.task.z.value_or(Complex(0.0, 1.0));
  std::vector<TimeScale> scales;
  for (double cut : spec.task.truncations) scales.push_back(spec.ts.truncate(cut));
  const std::vector<WeylDisk> disks =
      weyl_disks(z, scales, spec.cs, spec.bc.alpha(), spec.spectral_options());
  out << "{\n  \"z\": " << complex_pair(z)
      << ",\n  \"note\": \"heuristic diagnostic: radii shrinking toward zero "
         "suggest limit-point behavior at the right end, radii stabilizing at a "
         "positive value suggest limit-circle behavior; never a certificate\""
      << ",\n  \"disks\": [";
  for (std::size_t i = 0; i < disks.size(); ++i) {
    out << (i ? ",\n    " : "\n    ") << "{\"b\": " << format_float(disks[i].b)
        << ", \"center\": " << complex_pair(disks[i].center)
        << ", \"radius\": " << format_float(disks[i].radius) << "}";
  }
  out << "\n  ]\n}\n";
  return 0;
}

}  // namespace

int run_command(const std::string& command, ProblemSpec& spec,
                const CommandFlags& flags, std::ostream& out, std::ostream& err) {
  if (command == "validate") return cmd_validate(spec, out);
  spec.ensure_valid();
  if (command == "ivp") return cmd_ivp(spec, flags, out);
  if (command == "eig") return cmd_eig(spec, flags, out);
  if (command == "green") return cmd_green(spec, flags, out);
  if (command == "mfunc") return cmd_mfunc(spec, flags, out);
  if (command == "transform") return cmd_transform(spec, flags, out);
  if (command == "asymptotics") return cmd_asymptotics(spec, flags, out);
  if (command == "weyl") return cmd_weyl(spec, flags, out);
  err << "unknown command: " << command << "\n";
  return 1;
}

}  // namespace slts
