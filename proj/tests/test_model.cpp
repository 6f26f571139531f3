#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qradial/model.hpp"

using namespace qradial;

TEST_CASE("nu from quantum numbers") {
  CHECK(nu_from_quantum_numbers(0, 1) == 0);
  CHECK(nu_from_quantum_numbers(1, -1) == 2);
  CHECK(nu_from_quantum_numbers(-2, 1) == -2);
  CHECK_THROWS_AS(nu_from_quantum_numbers(0, 0), std::domain_error);
  CHECK_THROWS_AS(nu_from_quantum_numbers(3, 2), std::domain_error);
}

TEST_CASE("omega from charge distribution") {
  PhysicalParameters p;
  p.q_abs = 1.0;
  p.rho = 0.5;
  p.m = 1.0;
  CHECK(omega_from_charge(p) == doctest::Approx(1.0).epsilon(1e-14));
  p.q_abs = 2.0;
  p.rho = 1.0;
  CHECK(omega_from_charge(p) == doctest::Approx(2.0).epsilon(1e-14));
  p.q_abs = 1.0;
  p.m = 2.0;
  CHECK(omega_from_charge(p) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("delta from physical parameters") {
  PhysicalParameters p;
  p.g = 1.0;
  p.b = 1.0;
  p.m = 1.0;
  p.q_abs = 1.0;
  CHECK(delta_from_physical(p, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
  p.g = 0.0;
  CHECK(delta_from_physical(p, 1.7) == 0.0);
  p.g = 1.0;
  CHECK(delta_from_physical(p, 8.0 / 9.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(delta_from_physical(p, 0.0), std::domain_error);
  CHECK_THROWS_AS(delta_from_physical(p, -1.0), std::domain_error);
}

TEST_CASE("energy from eigenvalue") {
  CHECK(energy_from_eigenvalue(10.0 / 3.0, 2.0, 0.0, 1.0) ==
        doctest::Approx(5.0 / 3.0).epsilon(1e-14));
  CHECK(energy_from_eigenvalue(0.0, 1.0, 2.0, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(energy_from_eigenvalue(4.0, 1.0, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("potential value") {
  CHECK(potential_value(3.7, 0.0) == 0.0);
  CHECK(potential_value(1.0, 1.0) == doctest::Approx(2.0));
  CHECK(potential_value(-2.0, 1.0) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(potential_value(1.0, -0.5), std::domain_error);
}

TEST_CASE("round trip delta <-> omega") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> pos(0.1, 5.0);
  std::uniform_real_distribution<double> sym(-4.0, 4.0);
  for (int it = 0; it < 200; ++it) {
    PhysicalParameters p;
    p.m = pos(rng);
    p.q_abs = pos(rng);
    p.b = pos(rng);
    p.rho = pos(rng);
    p.g = sym(rng);
    if (p.g == 0.0) continue;
    const double omega0 = pos(rng);
    const double delta0 = delta_from_physical(p, omega0);
    const double omega1 = omega_from_delta(delta0, p);
    CHECK(omega1 == doctest::Approx(omega0).epsilon(1e-12));
    CHECK(delta_from_physical(p, omega1) == doctest::Approx(delta0).epsilon(1e-12));
  }
}

TEST_CASE("energy map is affine in W with slope omega/4") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> pos(0.1, 5.0);
  std::uniform_real_distribution<double> sym(-10.0, 10.0);
  for (int it = 0; it < 200; ++it) {
    const double omega = pos(rng), m = pos(rng), k = sym(rng);
    const double w1 = sym(rng), w2 = sym(rng);
    const double e1 = energy_from_eigenvalue(w1, omega, k, m);
    const double e2 = energy_from_eigenvalue(w2, omega, k, m);
    if (w1 == w2) continue;
    CHECK((e2 - e1) / (w2 - w1) == doctest::Approx(omega / 4.0).epsilon(1e-10));
    CHECK(energy_from_eigenvalue(0.0, omega, k, m) == doctest::Approx(k * k / (2.0 * m)));
  }
}

TEST_CASE("nu is an integer and gamma a non-negative integer for all valid (l, s)") {
  for (int l = -6; l <= 6; ++l)
    for (int s : {-1, 1}) {
      const int nu = nu_from_quantum_numbers(l, s);
      CHECK(2 * nu == 2 * l + (1 - s));  // exact integer identity
      PhysicalParameters p;
      p.l = l;
      p.s = s;
      p.g = 1.0;
      const DimensionlessModel m = model_from_physical(p);
      CHECK(m.gamma == std::abs(nu));
      CHECK(m.gamma >= 0.0);
    }
}

TEST_CASE("type invariants") {
  CHECK_THROWS_AS(DimensionlessModel(-0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(DimensionlessModel(1.0, std::nan("")), std::domain_error);
  PhysicalParameters p;
  p.m = -1.0;
  CHECK_THROWS_AS(p.validate(), std::domain_error);
  p.m = 1.0;
  p.s = 3;
  CHECK_THROWS_AS(p.validate(), std::domain_error);
}
