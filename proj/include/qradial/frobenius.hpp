#pragma once

#include <Eigen/Core>
#include <vector>

#include "qradial/errors.hpp"

// Frobenius-series machinery for the dimensionless radial problem: the
// three-term recurrence for the expansion coefficients, the truncation
// condition that collapses the series to a polynomial at special delta,
// root isolation of the truncation polynomial, and node counting of the
// resulting exact eigenfunctions.
//
// Ansatz: u(x) = x^gamma exp(-delta x/2 - x^2/2) f(x), f(x) = sum_j a_j x^j,
// with a_{-1} = 0, a_0 = 1 and
//
//   a_{j+2} = delta (2j + 2 gamma + 3) / (2 (j+2) (j + 2(gamma+1))) a_{j+1}
//           + (2j - Theta) / ((j+2) (j + 2(gamma+1))) a_j,
//   Theta   = W - 2(gamma+1) + delta^2/4.
//
// Requiring a_{n+1} = a_{n+2} = 0 is equivalent to Theta = 2n together with
// a_{n+1}(delta) = 0, a polynomial condition of degree n+1 in delta.

namespace qradial {

struct CoefficientSequence {
  double gamma = 0.0;
  double delta = 0.0;
  double eigenvalue = 0.0;         // W
  Eigen::VectorXd a;               // a_0 .. a_{j_max}, a_0 = 1

  double theta() const { return eigenvalue - 2.0 * (gamma + 1.0) + delta * delta / 4.0; }
};

// One exact polynomial solution. Roots are indexed i = 1..n+1 in strictly
// descending delta order, so the i-th solution has i-1 radial nodes.
struct TruncationSolution {
  int n = 0;                       // polynomial degree
  int i = 1;                       // root index, 1-based
  double gamma = 0.0;
  double delta_root = 0.0;
  double eigenvalue = 0.0;         // W = 2(n + gamma + 1) - delta_root^2/4
  Eigen::VectorXd coeffs;          // a_0 .. a_n
};

struct RootDiagnostics {
  double max_imag_residual = 0.0;  // largest |Im| in the companion-matrix output
  bool suspect_degenerate = false; // two roots closer than the degeneracy tolerance
};

// Run the recurrence for given (gamma, delta, W) up to a_{j_max}.
CoefficientSequence coefficients(double gamma, double delta, double w, int j_max);

// Coefficients (ascending powers of delta) of P(delta) = a_{n+1}(delta) with
// Theta = 2n substituted; degree exactly n+1.  Built with exact rational
// arithmetic internally and rounded once at the end.
Eigen::VectorXd truncation_polynomial(int n, double gamma);

// All n+1 real roots of the truncation polynomial, strictly descending.
std::vector<double> truncation_roots(int n, double gamma, RootDiagnostics* diag = nullptr);

// W = 2(n + gamma + 1) - delta_root^2 / 4
double exact_eigenvalue(int n, double gamma, double delta_root);

// Full record for root index i (1 <= i <= n+1).
TruncationSolution polynomial_solution(int n, int i, double gamma);

// Convenience: all n+1 solutions ordered by i.
std::vector<TruncationSolution> all_solutions(int n, double gamma);

// Number of simple zeros of the polynomial factor in (0, oo); equals the node
// count of u since the exponential prefactor never vanishes.  A degenerate
// (multiple) root is counted once and reported through *degenerate_warning.
int count_nodes(const TruncationSolution& sol, bool* degenerate_warning = nullptr);

// Real roots of a polynomial (ascending coefficients) inside (lo, hi), found
// by recursive monotone-interval bisection on critical points.  Exposed for
// reuse by node counting and tests.
std::vector<double> real_roots_in_interval(const Eigen::VectorXd& ascending_coeffs,
                                           double lo, double hi,
                                           bool* degenerate_warning = nullptr);

}  // namespace qradial
