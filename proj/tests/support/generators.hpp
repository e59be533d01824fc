#ifndef SLTS_TESTS_GENERATORS_HPP
#define SLTS_TESTS_GENERATORS_HPP

// Deterministic random instances for property tests: small scales mixing
// intervals and isolated points, with smooth positive coefficients built as
// expression strings (so the parser is exercised too). Magnitudes are kept
// tame so solver tolerances dominate the error budget.

#include <algorithm>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "slts/coefficients.hpp"
#include "slts/expression.hpp"
#include "slts/time_scale.hpp"

namespace slts::testing {

struct GeneratorOptions {
  int max_intervals = 2;
  int max_points = 3;
  double min_gap = 0.4;
  double max_gap = 1.2;
  double min_len = 0.6;
  double max_len = 1.4;
  double coeff_wobble = 0.35;   // relative modulation of r and p around 1
  double q_amplitude = 0.8;
};

struct RandomProblem {
  TimeScale ts{std::vector<Component>{{0.0, 1.0}}};
  CoefficientSet cs;
};

inline std::string coeff_string(std::mt19937& rng, double base, double wobble) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double c0 = base * (0.9 + 0.2 * unit(rng));
  const double c1 = wobble * c0 * unit(rng);
  const double freq = 0.3 + 1.2 * unit(rng);
  const double phase = 6.28 * unit(rng);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.6f + %.6f*sin(%.6f*t + %.6f)", c0, c1, freq,
                phase);
  return buf;
}

inline RandomProblem random_problem(std::mt19937& rng,
                                    const GeneratorOptions& opt = {}) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> n_int(1, opt.max_intervals);
  std::uniform_int_distribution<int> n_pts(0, opt.max_points);

  const int intervals = n_int(rng);
  int points = n_pts(rng);
  if (intervals == 1 && points == 0) points = 1;

  // shuffle the kinds, then lay components left to right
  std::vector<bool> kind;  // true = interval
  for (int i = 0; i < intervals; ++i) kind.push_back(true);
  for (int i = 0; i < points; ++i) kind.push_back(false);
  std::shuffle(kind.begin(), kind.end(), rng);

  std::vector<Component> comps;
  double cursor = -1.0 + 2.0 * unit(rng);
  for (bool is_interval : kind) {
    if (!comps.empty())
      cursor += opt.min_gap + (opt.max_gap - opt.min_gap) * unit(rng);
    if (is_interval) {
      const double len = opt.min_len + (opt.max_len - opt.min_len) * unit(rng);
      comps.push_back({cursor, cursor + len});
      cursor += len;
    } else {
      comps.push_back({cursor, cursor});
    }
  }

  RandomProblem prob;
  prob.ts = TimeScale(std::move(comps));
  std::uniform_real_distribution<double> qamp(-opt.q_amplitude, opt.q_amplitude);
  char qbuf[128];
  std::snprintf(qbuf, sizeof qbuf, "%.6f*cos(%.6f*t)", qamp(rng),
                0.4 + 1.1 * unit(rng));
  prob.cs = CoefficientSet(
      Expression::parse(coeff_string(rng, 1.0, opt.coeff_wobble)),
      Expression::parse(coeff_string(rng, 1.0, opt.coeff_wobble)),
      Expression::parse(qbuf));
  return prob;
}

}  // namespace slts::testing

#endif
