#ifndef SLTS_TRAJECTORY_HPP
#define SLTS_TRAJECTORY_HPP

#include <array>
#include <complex>
#include <vector>

#include "slts/time_scale.hpp"

namespace slts {

using Complex = std::complex<double>;

/// Solution state at one point: the value u and the first quasi-derivative
/// u^[1] = p u^nabla, the pair the solver propagates.
struct StatePair {
  Complex u{0.0, 0.0};
  Complex d{0.0, 0.0};
};

/// Dense output over one continuous segment: per accepted integrator step a
/// quintic Hermite polynomial (endpoint values/slopes plus midpoint data) for
/// each state component, parameterized on theta in [0,1].
class DenseSegment {
 public:
  struct Step {
    double lo, hi;
    std::array<Complex, 6> cu, cd;  // polynomial coefficients in theta
  };

  /// Builds the quintic from values y and scaled slopes k = h*f at
  /// theta = 0, 1/2, 1.
  static std::array<Complex, 6> hermite_quintic(Complex y0, Complex k0,
                                                Complex ym, Complex km,
                                                Complex y1, Complex k1);

  void add_step(double lo, double hi, const std::array<Complex, 6>& cu,
                const std::array<Complex, 6>& cd);
  void finalize();  // sort ascending; called once after integration

  bool empty() const { return steps_.empty(); }
  double lo() const { return steps_.front().lo; }
  double hi() const { return steps_.back().hi; }
  StatePair eval(double x) const;
  void scale_by(Complex factor);

  const std::vector<Step>& steps() const { return steps_; }

 private:
  std::vector<Step> steps_;
};

/// A solution of (ell - z)u = g sampled over a whole scale: exact states at
/// every scale point the solver visits plus dense output on the continuous
/// components. Values are evaluable at any x in T; the quasi-derivative is
/// evaluable everywhere except at a right-scattered minimum (where no
/// backward difference exists and the stored slot is NaN).
class Trajectory {
 public:
  struct Node {
    double x;
    StatePair s;
  };

  Trajectory() = default;
  Trajectory(TimeScale scale, Complex z);

  const TimeScale& scale() const { return scale_; }
  Complex z() const { return z_; }

  /// State at x in T. Throws ValidationError when x is not on the scale.
  StatePair at(double x) const;
  Complex value(double x) const { return at(x).u; }
  Complex qderiv(double x) const { return at(x).d; }

  /// All recorded nodes (scale points and accepted integrator steps),
  /// ascending in x.
  const std::vector<Node>& samples() const { return samples_; }

  /// Multiplies the whole trajectory by a scalar (used for normalization).
  void scale_values(Complex factor);

  // -- construction hooks used by the solver --
  void set_point_state(double x, StatePair s);       // isolated scale point
  void add_segment(std::size_t component_index, DenseSegment segment,
                   const std::vector<Node>& nodes);
  void finish();  // sorts samples, deduplicates

 private:
  TimeScale scale_{std::vector<Component>{{0.0, 1.0}}};
  Complex z_{0.0, 0.0};
  struct ComponentData {
    bool has_point = false;
    Node point{};
    DenseSegment dense;
  };
  std::vector<ComponentData> comps_;
  std::vector<Node> samples_;
};

}  // namespace slts

#endif
