#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "qradial/frobenius.hpp"
#include "qradial/model.hpp"
#include "qradial/variational.hpp"

// Higher-level computations: delta sweeps with truncation points overlaid on
// the variational curves (the figure data), Hellmann-Feynman verification,
// and the "allowed frequency" tables that the truncation condition produces.

namespace qradial {

struct TruncationPoint {
  int n = 0;
  int i = 1;
  double delta_root = 0.0;
  double eigenvalue = 0.0;   // W from the truncation condition
  int matched_level = 0;     // node count = i - 1
  double residual = 0.0;     // |W - W_{matched_level}(delta_root)| from the variational solve
};

struct SweepTable {
  double gamma = 0.0;
  int n_levels = 0;
  std::vector<double> delta_grid;
  Eigen::MatrixXd levels;              // levels(j, g) = W_j at delta_grid[g]
  std::vector<char> grid_converged;    // per grid point
  std::vector<TruncationPoint> truncation_points;
};

// Variational spectrum over an even delta grid plus all truncation points
// with n <= n_trunc_max whose root lies inside [delta_min, delta_max].
// Grid points are independent; `jobs` threads share them (0 = hardware
// parallelism).  Output is index-ordered and deterministic.
SweepTable sweep(double gamma, double delta_min, double delta_max, int n_grid, int n_levels,
                 int n_trunc_max, int jobs = 0, double tol = 1e-9);

struct HellmannFeynmanResult {
  double lhs = 0.0;       // centered difference of W_j across delta +/- h
  double rhs = 0.0;       // <x> on the eigenvector at delta
  double abs_diff = 0.0;
};

// Both sides of dW/d(delta) = <x>.  Throws LevelCrossingError when the
// eigenvectors at the window ends have S-overlap below 0.9 (curve tracking
// across the window is then unreliable).
HellmannFeynmanResult hellmann_feynman_check(double gamma, double delta, int j, double h);

struct FrequencyRow {
  int i = 1;
  double delta_root = 0.0;
  double omega = 0.0;       // [delta_root]^2 q^2 / (2 m (b g)^2)
  double energy = 0.0;      // omega (n+gamma+1)/2 - m (b g)^2 omega^2 / (8 q^2) + k^2/(2m)
  bool excluded_zero = false;  // delta_root = 0 row (omega = 0)
};

struct FrequencyTable {
  int n = 1;
  double gamma = 0.0;
  PhysicalParameters physical;
  std::vector<FrequencyRow> rows;      // sorted by i
  int distinct_count = 0;              // computed distinct omega values
  int half_formula_count = 0;         // (n-1)/2 for odd n, n/2 for even
  std::string annotation;
};

// The per-(n, i) frequency/energy table the truncation condition induces.
// Each row belongs to a different potential; the annotation records that the
// discreteness is an artifact of demanding polynomial solutions.
FrequencyTable allowed_frequencies_table(int n, double gamma, const PhysicalParameters& p);

// Closed form for the n = 1 frequency: 4 q^2 / (m (b g)^2 (2 |nu| + 3)).
double omega_first_mode_closed_form(int nu, const PhysicalParameters& p);

// Number of distinct delta^2 among the nonzero truncation roots (equals the
// number of distinct omega values).
int distinct_energy_count(int n, double gamma);

// Alternative count (n-1)/2 for odd n, n/2 for even; kept for side-by-side reporting.
int energy_count_half_formula(int n);

}  // namespace qradial
