#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Cholesky>
#include <cmath>

#include "qradial/frobenius.hpp"
#include "qradial/variational.hpp"
#include "support/quadrature.hpp"

using namespace qradial;

namespace {

const double kSqrtPi = std::sqrt(M_PI);

double basis_fn(double gamma, int j, double x) {
  return std::pow(x, gamma + j) * std::exp(-x * x / 2.0);
}

double basis_fn_prime(double gamma, int j, double x) {
  return ((gamma + j) * std::pow(x, gamma + j - 1.0) - std::pow(x, gamma + j + 1.0)) *
         std::exp(-x * x / 2.0);
}

// Weak-form matrix element by quadrature: independent route for the analytic
// Gamma-moment assembly.
double h_by_quadrature(double gamma, double delta, int i, int j) {
  return testsupport::integrate_halfline([=](double x) {
    if (x == 0.0) return 0.0;
    const double fi = basis_fn(gamma, i, x), fj = basis_fn(gamma, j, x);
    const double di = basis_fn_prime(gamma, i, x), dj = basis_fn_prime(gamma, j, x);
    return di * dj * x + gamma * gamma * fi * fj / x + (delta * x + x * x) * fi * fj * x;
  });
}

// Direct operator action on phi_j (analytic differentiation):
//   H phi_j = (gamma^2 - (gamma+j)^2) x^(gamma+j-2) e + 2(gamma+j+1) x^(gamma+j) e
//           + delta x^(gamma+j+1) e
double h_direct_action(double gamma, double delta, int i, int j) {
  const double gj = gamma + j;
  const double c = gamma * gamma - gj * gj;
  const double m = 2.0 * gamma + i + j;
  double v = 2.0 * (gj + 1.0) * gaussian_moment(m + 1) + delta * gaussian_moment(m + 2);
  if (c != 0.0) v += c * gaussian_moment(m - 1);
  return v;
}

}  // namespace

TEST_CASE("gaussian moments") {
  CHECK(gaussian_moment(1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(gaussian_moment(0.0) == doctest::Approx(kSqrtPi / 2.0).epsilon(1e-14));
  CHECK(gaussian_moment(3.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(gaussian_moment(-1.0), std::domain_error);
  CHECK_THROWS_AS(gaussian_moment(-2.0), std::domain_error);
  for (double m : {-0.5, 0.7, 2.0, 4.5, 7.0}) {
    // x = t^2 removes the endpoint singularity for m < 0
    const double byquad = testsupport::integrate(
        [m](double t) { return t == 0.0 ? 0.0 : 2.0 * std::pow(t, 2.0 * m + 1.0) * std::exp(-std::pow(t, 4.0)); },
        0.0, 3.6);
    CHECK(gaussian_moment(m) == doctest::Approx(byquad).epsilon(1e-11));
  }
}

TEST_CASE("overlap matrix") {
  CHECK(overlap_matrix(BasisSpec(0.0, 1))(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(overlap_matrix(BasisSpec(1.0, 1))(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  for (double gamma : {0.0, 0.5, 2.0}) {
    const Eigen::MatrixXd s = overlap_matrix(BasisSpec(gamma, 8));
    CHECK((s - s.transpose()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::LLT<Eigen::MatrixXd> llt(s);
    CHECK(llt.info() == Eigen::Success);  // Gram matrix of independent functions
    for (int i : {0, 3})
      for (int j : {1, 5}) {
        const double byquad = testsupport::integrate_halfline(
            [&](double x) { return basis_fn(gamma, i, x) * basis_fn(gamma, j, x) * x; });
        CHECK(s(i, j) == doctest::Approx(byquad).epsilon(1e-11));
      }
  }
}

TEST_CASE("hamiltonian matrix: exact oscillator corners and quadrature") {
  const double h00_g0 = hamiltonian_matrix(BasisSpec(0.0, 1), 0.0)(0, 0);
  CHECK(h00_g0 / overlap_matrix(BasisSpec(0.0, 1))(0, 0) == doctest::Approx(2.0).epsilon(1e-13));
  const double h00_g1 = hamiltonian_matrix(BasisSpec(1.0, 1), 0.0)(0, 0);
  CHECK(h00_g1 / overlap_matrix(BasisSpec(1.0, 1))(0, 0) == doctest::Approx(4.0).epsilon(1e-13));

  // delta = 1, gamma = 0: kinetic+quadratic part plus delta * G(2)
  const double h00_d1 = hamiltonian_matrix(BasisSpec(0.0, 1), 1.0)(0, 0);
  CHECK(h00_d1 == doctest::Approx(1.0 + kSqrtPi / 4.0).epsilon(1e-13));
  CHECK(h00_d1 == doctest::Approx(h_by_quadrature(0.0, 1.0, 0, 0)).epsilon(1e-12));

  for (double gamma : {0.0, 1.0}) {
    const Eigen::MatrixXd h = hamiltonian_matrix(BasisSpec(gamma, 6), -1.5);
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int i : {0, 2})
      for (int j : {1, 4})
        CHECK(h(i, j) == doctest::Approx(h_by_quadrature(gamma, -1.5, i, j)).epsilon(1e-11));
  }
}

TEST_CASE("property: weak form equals direct operator action") {
  for (double gamma : {0.0, 0.5, 1.0, 2.0}) {
    for (double delta : {-2.0, 1.0}) {
      const Eigen::MatrixXd h = hamiltonian_matrix(BasisSpec(gamma, 10), delta);
      for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
          const double direct = h_direct_action(gamma, delta, i, j);
          CHECK(h(i, j) == doctest::Approx(direct).epsilon(1e-11));
        }
    }
  }
}

TEST_CASE("solve_generalized: identity case and oscillator ladder") {
  const Eigen::MatrixXd s = overlap_matrix(BasisSpec(0.0, 6));
  GeneralizedSolution idsol = solve_generalized({s, s}, 6);
  for (int k = 0; k < 6; ++k) CHECK(idsol.values[k] == doctest::Approx(1.0).epsilon(1e-10));

  const BasisSpec basis(0.0, 10);
  GeneralizedSolution ladder =
      solve_generalized({hamiltonian_matrix(basis, 0.0), overlap_matrix(basis)}, 3);
  CHECK(ladder.values[0] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(ladder.values[1] == doctest::Approx(6.0).epsilon(1e-10));
  CHECK(ladder.values[2] == doctest::Approx(10.0).epsilon(1e-10));
  for (int k = 0; k < 3; ++k)
    CHECK(ladder.vectors.col(k).dot(overlap_matrix(basis) * ladder.vectors.col(k)) ==
          doctest::Approx(1.0).epsilon(1e-9));

  // hopeless conditioning in plain double -> ConditioningError
  const BasisSpec big(0.0, 40);
  CHECK_THROWS_AS(solve_generalized({hamiltonian_matrix(big, 0.0), overlap_matrix(big)}, 3),
                  ConditioningError);
}

TEST_CASE("spectrum: published reference tables at the n = 1 roots and delta = 1") {
  const double d0 = 2.0 * std::sqrt(6.0) / 3.0;

  const SpectrumResult plus = spectrum(DimensionlessModel(0.0, d0));
  const double ref_plus[5] = {10.0 / 3.0, 8.417789723, 13.16139523, 17.76476931, 22.28609551};
  for (int j = 0; j < 5; ++j) {
    CHECK(plus.levels[j].eigenvalue == doctest::Approx(ref_plus[j]).epsilon(1e-7));
    CHECK(plus.levels[j].converged);
  }

  const SpectrumResult minus = spectrum(DimensionlessModel(0.0, -d0));
  const double ref_minus[5] = {0.3822700980, 10.0 / 3.0, 6.589162760, 9.984807649, 13.46286362};
  for (int j = 0; j < 5; ++j)
    CHECK(minus.levels[j].eigenvalue == doctest::Approx(ref_minus[j]).epsilon(1e-7));
  // the truncation value sits at level index 1: first excited state
  CHECK(minus.levels[1].eigenvalue == doctest::Approx(10.0 / 3.0).epsilon(1e-10));

  const SpectrumResult one = spectrum(DimensionlessModel(0.0, 1.0));
  const double ref_one[5] = {2.840687067, 7.506478794, 11.96275335, 16.33275291, 20.65232861};
  for (int j = 0; j < 5; ++j)
    CHECK(one.levels[j].eigenvalue == doctest::Approx(ref_one[j]).epsilon(1e-7));
}

TEST_CASE("spectrum: oscillator ladders W = 2(2j + gamma + 1) and strict ordering") {
  for (double gamma : {0.0, 1.0, 2.5}) {
    const SpectrumResult res = spectrum(DimensionlessModel(gamma, 0.0), 4);
    for (int j = 0; j < 4; ++j)
      CHECK(res.levels[j].eigenvalue ==
            doctest::Approx(2.0 * (2.0 * j + gamma + 1.0)).epsilon(1e-11));
  }
  for (double delta : {-2.0, -0.3, 1.7}) {
    const SpectrumResult res = spectrum(DimensionlessModel(0.5, delta), 6);
    for (int j = 1; j < 6; ++j)
      CHECK(res.levels[j].eigenvalue > res.levels[j - 1].eigenvalue);
  }
}

TEST_CASE("spectrum: high-precision reference at a hard negative delta") {
  // n = 4 outer negative root for gamma = 0; long double alone cannot reach
  // tol here, so this exercises the binary128 escalation.
  const SpectrumResult res = spectrum(DimensionlessModel(0.0, -4.3702912624215219), 5, 1e-10);
  const double truth[5] = {-3.8598574404496, -1.8976891751157, 0.23432301067638,
                           2.6241140968926, 5.2251385704005};
  for (int j = 0; j < 5; ++j)
    CHECK(res.levels[j].eigenvalue == doctest::Approx(truth[j]).epsilon(3e-10));
  CHECK(res.stage_used == PrecisionStage::binary128);
  CHECK(res.fully_converged());
}

TEST_CASE("property: variational monotonicity in basis size") {
  for (double delta : {-2.0, 1.0}) {
    for (double gamma : {0.0, 1.0}) {
      Eigen::VectorXd prev;
      for (int n = 6; n <= 14; n += 2) {
        const BasisSpec basis(gamma, n);
        const GeneralizedSolution sol =
            solve_generalized({hamiltonian_matrix(basis, delta), overlap_matrix(basis)}, 5);
        if (prev.size() > 0)
          for (int j = 0; j < 5; ++j)
            CHECK(sol.values[j] <= prev[j] + 1e-12 * (1.0 + std::abs(prev[j])));
        prev = sol.values;
      }
    }
  }
}

TEST_CASE("property: exactness on truncation points, level index i-1") {
  for (double gamma : {0.0, 1.0}) {
    for (int n = 0; n <= 4; ++n) {
      for (const TruncationSolution& sol : all_solutions(n, gamma)) {
        const int level = sol.i - 1;
        const SpectrumResult res =
            spectrum(DimensionlessModel(gamma, sol.delta_root), std::max(5, level + 1), 1e-10);
        CHECK(std::abs(res.levels[level].eigenvalue - sol.eigenvalue) < 1e-8);
      }
    }
  }
}

TEST_CASE("expectation value of x") {
  // single basis function: <x> = G(2)/G(1) = sqrt(pi)/2
  const BasisSpec basis(0.0, 1);
  Eigen::VectorXd v(1);
  v[0] = 1.0 / std::sqrt(overlap_matrix(basis)(0, 0));
  CHECK(expectation_x(DimensionlessModel(0.0, 0.0), v, basis) ==
        doctest::Approx(kSqrtPi / 2.0).epsilon(1e-13));

  // converged states: positive, consistent with dW/d(delta) by finite differences
  const SpectrumSolution sol = spectrum_with_vectors(DimensionlessModel(0.0, 1.0), 3);
  for (int j = 0; j < 3; ++j) {
    const double xj = expectation_x(DimensionlessModel(0.0, 1.0), sol.vectors.col(j), sol.basis);
    CHECK(xj > 0.0);
    const double h = 1e-3;
    const double wp = spectrum(DimensionlessModel(0.0, 1.0 + h), 3, 1e-11).levels[j].eigenvalue;
    const double wm = spectrum(DimensionlessModel(0.0, 1.0 - h), 3, 1e-11).levels[j].eigenvalue;
    CHECK(std::abs((wp - wm) / (2.0 * h) - xj) < 1e-5);
  }
}

TEST_CASE("property: delta-monotonicity of every level") {
  for (double gamma : {0.0, 1.0}) {
    double prev0 = -1e300, prev2 = -1e300;
    for (double delta : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      const SpectrumResult res = spectrum(DimensionlessModel(gamma, delta), 3);
      CHECK(res.levels[0].eigenvalue > prev0);
      CHECK(res.levels[2].eigenvalue > prev2);
      prev0 = res.levels[0].eigenvalue;
      prev2 = res.levels[2].eigenvalue;
    }
  }
}

TEST_CASE("scalar-templated assembly: long double agrees with double") {
  const BasisSpec basis(1.0, 8);
  const Eigen::MatrixXd s64 = overlap_matrix_t<double>(basis);
  const MatrixX<long double> s80 = overlap_matrix_t<long double>(basis);
  const Eigen::MatrixXd h64 = hamiltonian_matrix_t<double>(basis, -1.0);
  const MatrixX<long double> h80 =
      hamiltonian_matrix_t<long double>(basis, static_cast<long double>(-1.0));
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      CHECK(s64(i, j) == doctest::Approx(static_cast<double>(s80(i, j))).epsilon(1e-14));
      CHECK(h64(i, j) == doctest::Approx(static_cast<double>(h80(i, j))).epsilon(1e-13));
    }
}
