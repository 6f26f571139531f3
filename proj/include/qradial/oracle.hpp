#pragma once

#include <vector>

#include "qradial/errors.hpp"
#include "qradial/model.hpp"

// Independent finite-difference cross-check for the variational spectrum.
//
// The radial operator -u'' - u'/x + gamma^2/x^2 u + (delta x + x^2) u is
// discretized in conservative (flux) form on the half-offset grid
// x_i = (i - 1/2) h.  The flux through the origin carries a factor
// x_{1/2} = 0, so no boundary value at x = 0 is ever referenced and the
// scheme selects the regular solution for every gamma >= 0.  The resulting
// tridiagonal matrix is similar to a symmetric one (off-diagonal products are
// positive), and its lowest eigenvalues are extracted by Sturm-count
// bisection; nothing here shares machinery with the Rayleigh-Ritz path.

namespace qradial {

struct FdGrid {
  double x_max = 10.0;
  int n_points = 4000;

  FdGrid() = default;
  FdGrid(double x_max_, int n_points_) : x_max(x_max_), n_points(n_points_) {
    if (!(x_max > 0.0)) throw std::domain_error("FdGrid: x_max must be > 0");
    if (n_points < 100) throw std::domain_error("FdGrid: n_points must be >= 100");
  }

  double spacing() const { return x_max / (n_points + 0.5); }
};

// Lowest n_levels eigenvalues on one grid.
std::vector<double> fd_spectrum(const DimensionlessModel& model, const FdGrid& grid, int n_levels);

// Two-grid Richardson extrapolation (n and 2n points), second order.
std::vector<double> fd_spectrum_richardson(const DimensionlessModel& model, const FdGrid& grid,
                                           int n_levels);

// Observed convergence order of level `level` from grids n, 2n, 4n.
double fd_observed_order(const DimensionlessModel& model, const FdGrid& grid, int level);

}  // namespace qradial
