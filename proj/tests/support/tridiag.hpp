#ifndef SLTS_TESTS_TRIDIAG_HPP
#define SLTS_TESTS_TRIDIAG_HPP

// Independent oracle for pure-discrete problems: assemble the difference
// operator as a symmetric tridiagonal matrix (boundary rows folded by the
// angle conditions) and locate eigenvalues by Sturm-count bisection. Nothing
// here touches the shooting path.

#include <vector>

#include "slts/coefficients.hpp"
#include "slts/time_scale.hpp"

namespace slts::testing {

/// Number of eigenvalues of the symmetric tridiagonal matrix strictly below x.
int sturm_count(const std::vector<double>& diag, const std::vector<double>& off,
                double x);

/// First k eigenvalues (ascending) by bisection on the Sturm count.
std::vector<double> tridiag_eigenvalues(const std::vector<double>& diag,
                                        const std::vector<double>& off, int k,
                                        double tol = 1e-12);

struct DiscreteOperator {
  std::vector<double> points;   // scale points t_0..t_N
  std::vector<double> weights;  // r_i * mu_i on the retained unknowns
  std::vector<double> diag;     // symmetrized tridiagonal
  std::vector<double> off;
};

/// Assembles the eigenvalue problem for a pure-discrete scale with separated
/// angles: unknowns are the mass points, the angle conditions eliminate the
/// endpoint values (phi_alpha = 0 drops the first unknown, matching the
/// operator part of the excluded-parameter relation).
DiscreteOperator assemble_discrete(const TimeScale& ts, const CoefficientSet& cs,
                                   double phi_alpha, double phi_beta);

}  // namespace slts::testing

#endif
