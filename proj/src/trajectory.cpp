#include "slts/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slts/errors.hpp"

namespace slts {

std::array<Complex, 6> DenseSegment::hermite_quintic(Complex y0, Complex k0,
                                                     Complex ym, Complex km,
                                                     Complex y1, Complex k1) {
  // Inverse of the collocation matrix for value/slope at theta = 0, 1/2, 1.
  std::array<Complex, 6> c;
  c[0] = y0;
  c[1] = k0;
  c[2] = -23.0 * y0 - 6.0 * k0 + 16.0 * ym - 8.0 * km + 7.0 * y1 - k1;
  c[3] = 66.0 * y0 + 13.0 * k0 - 32.0 * ym + 32.0 * km - 34.0 * y1 + 5.0 * k1;
  c[4] = -68.0 * y0 - 12.0 * k0 + 16.0 * ym - 40.0 * km + 52.0 * y1 - 8.0 * k1;
  c[5] = 24.0 * y0 + 4.0 * k0 + 16.0 * km - 24.0 * y1 + 4.0 * k1;
  return c;
}

void DenseSegment::add_step(double lo, double hi, const std::array<Complex, 6>& cu,
                            const std::array<Complex, 6>& cd) {
  steps_.push_back({lo, hi, cu, cd});
}

void DenseSegment::finalize() {
  std::sort(steps_.begin(), steps_.end(),
            [](const Step& a, const Step& b) { return a.lo < b.lo; });
}

namespace {
Complex horner(const std::array<Complex, 6>& c, double theta) {
  Complex v = c[5];
  for (int i = 4; i >= 0; --i) v = v * theta + c[i];
  return v;
}
}  // namespace

void DenseSegment::scale_by(Complex factor) {
  for (Step& st : steps_) {
    for (auto& c : st.cu) c *= factor;
    for (auto& c : st.cd) c *= factor;
  }
}

StatePair DenseSegment::eval(double x) const {
  auto it = std::upper_bound(
      steps_.begin(), steps_.end(), x,
      [](double v, const Step& s) { return v < s.lo; });
  if (it != steps_.begin()) --it;
  const Step& s = *it;
  const double theta = (x - s.lo) / (s.hi - s.lo);
  return {horner(s.cu, theta), horner(s.cd, theta)};
}

Trajectory::Trajectory(TimeScale scale, Complex z)
    : scale_(std::move(scale)), z_(z) {
  comps_.resize(scale_.components().size());
}

void Trajectory::set_point_state(double x, StatePair s) {
  const std::size_t idx = scale_.component_index(x);
  if (idx == TimeScale::npos)
    throw ValidationError("trajectory point off the scale: x = " + std::to_string(x));
  comps_[idx].has_point = true;
  comps_[idx].point = {x, s};
  samples_.push_back({x, s});
}

void Trajectory::add_segment(std::size_t component_index, DenseSegment segment,
                             const std::vector<Node>& nodes) {
  segment.finalize();
  DenseSegment& dst = comps_[component_index].dense;
  for (const auto& st : segment.steps()) dst.add_step(st.lo, st.hi, st.cu, st.cd);
  dst.finalize();
  samples_.insert(samples_.end(), nodes.begin(), nodes.end());
}

void Trajectory::finish() {
  std::sort(samples_.begin(), samples_.end(),
            [](const Node& a, const Node& b) { return a.x < b.x; });
  samples_.erase(std::unique(samples_.begin(), samples_.end(),
                             [](const Node& a, const Node& b) { return a.x == b.x; }),
                 samples_.end());
}

StatePair Trajectory::at(double x) const {
  const std::size_t idx = scale_.component_index(x);
  if (idx == TimeScale::npos)
    throw ValidationError("trajectory evaluation off the scale: x = " +
                          std::to_string(x));
  const ComponentData& cd = comps_[idx];
  if (scale_.components()[idx].is_point() || cd.dense.empty()) {
    if (!cd.has_point)
      throw ValidationError("trajectory does not cover x = " + std::to_string(x));
    return cd.point.s;
  }
  return cd.dense.eval(scale_.snap(x));
}

void Trajectory::scale_values(Complex factor) {
  for (ComponentData& cd : comps_) {
    if (cd.has_point) {
      cd.point.s.u *= factor;
      cd.point.s.d *= factor;
    }
    cd.dense.scale_by(factor);
  }
  for (Node& n : samples_) {
    n.s.u *= factor;
    n.s.d *= factor;
  }
}

}  // namespace slts
