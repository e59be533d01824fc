#ifndef SLTS_QUADRATURE_HPP
#define SLTS_QUADRATURE_HPP

#include <complex>
#include <functional>

namespace slts {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_panels = 4000;
};

/// Adaptive Gauss-Kronrod 7/15 quadrature over [lo, hi]. Panels are split
/// worst-first until the summed error estimate meets the tolerance or the
/// panel budget runs out (the best estimate is returned in that case).
/// Throws NumericalError if the integrand produces a non-finite value.
std::complex<double> gauss_kronrod(
    const std::function<std::complex<double>(double)>& f, double lo, double hi,
    const QuadratureOptions& opts = {});

double gauss_kronrod_real(const std::function<double(double)>& f, double lo,
                          double hi, const QuadratureOptions& opts = {});

}  // namespace slts

#endif
