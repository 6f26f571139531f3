#pragma once

#include <cmath>
#include <stdexcept>

// Dimensionless radial eigenproblem
//
//   u'' + u'/x - gamma^2/x^2 u - (delta*x + x^2) u + W u = 0,   0 < x < oo,
//   bound states normalizable under the weight x dx,
//
// together with the maps between the physical parameters
// (m, |q|, g, b, rho, k, l, s) and the dimensionless pair (gamma, delta)
// and between eigenvalues W and energies E.  Everything here is a pure
// value-semantics function; all computation elsewhere works in
// (gamma, delta, W) and touches physical units only through this header.

namespace qradial {

struct DimensionlessModel {
  double gamma = 0.0;  // |nu| >= 0
  double delta = 0.0;  // linear-coupling strength, any sign

  DimensionlessModel() = default;
  DimensionlessModel(double gamma_, double delta_) : gamma(gamma_), delta(delta_) {
    if (!(gamma >= 0.0)) throw std::domain_error("DimensionlessModel: gamma must be >= 0");
    if (!std::isfinite(delta)) throw std::domain_error("DimensionlessModel: delta must be finite");
  }
};

struct PhysicalParameters {
  double m = 1.0;      // mass, > 0
  double q_abs = 1.0;  // |q|, > 0
  double g = 0.0;      // coupling, any sign
  double b = 1.0;      // vector-field magnitude, > 0
  double rho = 1.0;    // charge density, > 0
  double k = 0.0;      // axial wavenumber (continuous direction)
  int l = 0;           // rotational quantum number
  int s = 1;           // +1 or -1

  void validate() const {
    if (!(m > 0.0)) throw std::domain_error("PhysicalParameters: m must be > 0");
    if (!(q_abs > 0.0)) throw std::domain_error("PhysicalParameters: |q| must be > 0");
    if (!(b > 0.0)) throw std::domain_error("PhysicalParameters: b must be > 0");
    if (!(rho > 0.0)) throw std::domain_error("PhysicalParameters: rho must be > 0");
    if (s != 1 && s != -1) throw std::domain_error("PhysicalParameters: s must be +1 or -1");
  }
};

// nu = l + (1 - s)/2; integer for s = +/-1.
inline int nu_from_quantum_numbers(int l, int s) {
  if (s != 1 && s != -1) throw std::domain_error("nu_from_quantum_numbers: s must be +1 or -1");
  return l + (1 - s) / 2;
}

// omega = sqrt(2 |q| rho / m)
inline double omega_from_charge(const PhysicalParameters& p) {
  p.validate();
  return std::sqrt(2.0 * p.q_abs * p.rho / p.m);
}

// delta = g b sqrt(2 m omega) / |q|; sign follows g.
inline double delta_from_physical(const PhysicalParameters& p, double omega) {
  p.validate();
  if (!(omega > 0.0)) throw std::domain_error("delta_from_physical: omega must be > 0");
  return p.g * p.b * std::sqrt(2.0 * p.m * omega) / p.q_abs;
}

// Inverse map: omega = delta^2 q^2 / (2 m (b g)^2).
inline double omega_from_delta(double delta, const PhysicalParameters& p) {
  p.validate();
  if (p.g == 0.0) throw std::domain_error("omega_from_delta: g must be nonzero");
  const double bg = p.b * p.g;
  return delta * delta * p.q_abs * p.q_abs / (2.0 * p.m * bg * bg);
}

// E = W omega / 4 + k^2 / (2 m)
inline double energy_from_eigenvalue(double w, double omega, double k, double m) {
  if (!(omega > 0.0)) throw std::domain_error("energy_from_eigenvalue: omega must be > 0");
  if (!(m > 0.0)) throw std::domain_error("energy_from_eigenvalue: m must be > 0");
  return w * omega / 4.0 + k * k / (2.0 * m);
}

// V(delta, x) = delta x + x^2
inline double potential_value(double delta, double x) {
  if (x < 0.0) throw std::domain_error("potential_value: x must be >= 0");
  return delta * x + x * x;
}

inline DimensionlessModel model_from_physical(const PhysicalParameters& p) {
  p.validate();
  const int nu = nu_from_quantum_numbers(p.l, p.s);
  const double omega = omega_from_charge(p);
  return DimensionlessModel(std::abs(nu), delta_from_physical(p, omega));
}

}  // namespace qradial
