#pragma once

#include <Eigen/Core>
#include <cmath>
#include <vector>

#include "qradial/errors.hpp"
#include "qradial/model.hpp"

// Rayleigh-Ritz solver over the non-orthogonal basis
//
//   phi_j(x) = x^(gamma + j) exp(-x^2/2),   j = 0 .. N-1,
//
// under the radial inner product <f,g> = int_0^oo f g x dx.  All matrix
// elements reduce to Gaussian moments G(m) = int_0^oo x^m e^{-x^2} dx
// = Gamma((m+1)/2)/2 and are assembled analytically; the generalized
// symmetric problem H v = W S v is reduced by Cholesky to standard form.
//
// The basis is notoriously ill-conditioned: lambda_min of the unit-diagonal
// overlap decays by ~17x for each basis function added.  spectrum() grows the
// basis on a schedule, watches the Cholesky pivots, and escalates from long
// double to IEEE binary128 when the requested tolerance is unreachable at the
// long-double conditioning wall.

namespace qradial {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

struct BasisSpec {
  double gamma = 0.0;
  int size = 1;

  BasisSpec() = default;
  BasisSpec(double gamma_, int size_) : gamma(gamma_), size(size_) {
    if (!(gamma >= 0.0)) throw std::domain_error("BasisSpec: gamma must be >= 0");
    if (size < 1) throw std::domain_error("BasisSpec: size must be >= 1");
  }
};

// G(m) = Gamma((m+1)/2)/2, m > -1.
inline double gaussian_moment(double m) {
  if (!(m > -1.0)) throw std::domain_error("gaussian_moment: requires m > -1 (divergent otherwise)");
  return 0.5 * std::tgamma(0.5 * (m + 1.0));
}

// Gamma function hook; specialized for the binary128 scalar in the library.
template <typename Scalar>
Scalar tgamma_scalar(Scalar x) {
  using std::tgamma;
  return tgamma(x);
}

namespace detail {

// tab[t+1] = G(2 gamma + t) for t = -1 .. count-2.  The t = -1 slot is only
// meaningful for gamma > 0 (it always appears with coefficient gamma^2 + ...,
// which vanishes in the gamma = 0 corner that would need G(-1)).
template <typename Scalar>
std::vector<Scalar> moment_table(double gamma, int count) {
  std::vector<Scalar> tab(static_cast<std::size_t>(count), Scalar(0));
  const Scalar g(gamma);
  auto seed = [&](int t) { return tgamma_scalar<Scalar>(g + Scalar(t + 1) / 2) / 2; };
  if (gamma > 0.0) tab[0] = seed(-1);
  if (count > 1) tab[1] = seed(0);
  if (count > 2) tab[2] = seed(1);
  for (int t = 0; t + 3 < count; ++t) tab[static_cast<std::size_t>(t) + 3] = tab[static_cast<std::size_t>(t) + 1] * (2 * g + Scalar(t + 1)) / 2;
  return tab;
}

}  // namespace detail

// S_ij = <phi_i, phi_j> = G(2 gamma + i + j + 1)
template <typename Scalar>
MatrixX<Scalar> overlap_matrix_t(const BasisSpec& basis) {
  const int n = basis.size;
  const auto tab = detail::moment_table<Scalar>(basis.gamma, 2 * n + 5);
  MatrixX<Scalar> s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = tab[static_cast<std::size_t>(i + j + 2)];
  return s;
}

// Weak form: H_ij = int [phi_i' phi_j' x + gamma^2 phi_i phi_j / x
//                         + (delta x + x^2) phi_i phi_j x] dx.
// Expanding the derivatives gives, with M = 2 gamma + i + j,
//   H_ij = [(gamma+i)(gamma+j) + gamma^2] G(M-1) - M G(M+1) + 2 G(M+3)
//        + delta G(M+2).
template <typename Scalar>
MatrixX<Scalar> hamiltonian_matrix_t(const BasisSpec& basis, Scalar delta) {
  const int n = basis.size;
  const Scalar g(basis.gamma);
  const auto tab = detail::moment_table<Scalar>(basis.gamma, 2 * n + 5);
  auto moment = [&](int t) { return tab[static_cast<std::size_t>(t + 1)]; };
  MatrixX<Scalar> h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Scalar c = (g + Scalar(i)) * (g + Scalar(j)) + g * g;
      Scalar v = -(2 * g + Scalar(i + j)) * moment(i + j + 1) + 2 * moment(i + j + 3) +
                 delta * moment(i + j + 2);
      if (c != Scalar(0)) v += c * moment(i + j - 1);
      h(i, j) = v;
    }
  return h;
}

// X_ij = <phi_i, x phi_j> = G(2 gamma + i + j + 2)
template <typename Scalar>
MatrixX<Scalar> x_matrix_t(const BasisSpec& basis) {
  const int n = basis.size;
  const auto tab = detail::moment_table<Scalar>(basis.gamma, 2 * n + 5);
  MatrixX<Scalar> x(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x(i, j) = tab[static_cast<std::size_t>(i + j + 3)];
  return x;
}

inline Eigen::MatrixXd overlap_matrix(const BasisSpec& basis) { return overlap_matrix_t<double>(basis); }
inline Eigen::MatrixXd hamiltonian_matrix(const BasisSpec& basis, double delta) {
  return hamiltonian_matrix_t<double>(basis, delta);
}

struct GeneralizedEigenProblem {
  Eigen::MatrixXd hamiltonian;  // symmetric
  Eigen::MatrixXd overlap;      // symmetric positive definite
};

struct GeneralizedSolution {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, S-normalized (v^T S v = 1), original basis coordinates
  double pivot_ratio = 1.0; // min/max squared Cholesky pivot of the normalized overlap
};

// Smallest `count` eigenpairs of H v = W S v via Cholesky reduction.
// Throws ConditioningError when the overlap fails its Cholesky or the pivot
// guard; in that case retry with a smaller basis.
GeneralizedSolution solve_generalized(const GeneralizedEigenProblem& prob, int count);

enum class PrecisionStage { long_double, binary128 };

struct LevelResult {
  int index = 0;
  double eigenvalue = 0.0;
  bool converged = false;
  double est_error = 0.0;  // |W_j(N) - W_j(N - step)| at the reported N
};

struct SpectrumResult {
  DimensionlessModel model;
  std::vector<LevelResult> levels;  // strictly increasing eigenvalues
  int basis_size_used = 0;
  PrecisionStage stage_used = PrecisionStage::long_double;

  bool fully_converged() const {
    for (const auto& l : levels)
      if (!l.converged) return false;
    return !levels.empty();
  }
};

// Adaptive spectrum: grows N until the first n_levels eigenvalues move by
// less than tol between consecutive sizes, or the conditioning guards stop
// growth (partial result, converged flags false).
SpectrumResult spectrum(const DimensionlessModel& model, int n_levels = 5, double tol = 1e-9,
                        int max_basis = 80);

struct SpectrumSolution {
  SpectrumResult result;
  BasisSpec basis;
  Eigen::MatrixXd vectors;  // S-normalized eigenvectors, original basis coordinates
};

SpectrumSolution spectrum_with_vectors(const DimensionlessModel& model, int n_levels = 5,
                                       double tol = 1e-9, int max_basis = 80);

// Single solve at a fixed basis size and precision stage (used to compare
// neighbouring delta values on an identical subspace).
SpectrumSolution solve_at_basis(const DimensionlessModel& model, int basis_size, int n_levels,
                                PrecisionStage stage);

// <x> = sum_ij v_i v_j G(2 gamma + i + j + 2) for an S-normalized eigvec.
double expectation_x(const DimensionlessModel& model, const Eigen::VectorXd& eigvec,
                     const BasisSpec& basis);

}  // namespace qradial
