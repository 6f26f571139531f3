#include "qradial/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qradial {

namespace {

struct Tridiag {
  std::vector<double> diag;
  std::vector<double> off;  // |off| of the symmetrized matrix, size n-1
};

Tridiag assemble(const DimensionlessModel& model, const FdGrid& grid) {
  const int n = grid.n_points;
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  Tridiag t;
  t.diag.resize(n);
  t.off.resize(n - 1);
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = (i + 0.5) * h;
  const double g2 = model.gamma * model.gamma;
  for (int i = 0; i < n; ++i)
    t.diag[i] = 2.0 * inv_h2 + g2 / (x[i] * x[i]) + model.delta * x[i] + x[i] * x[i];
  // Row i couples to i+1 with -(1/h^2)(1 + h/(2 x_i)) and row i+1 back with
  // -(1/h^2)(1 - h/(2 x_{i+1})); the product is positive, so the similarity
  // transform replaces both with -sqrt of it.
  for (int i = 0; i + 1 < n; ++i) {
    const double sup = inv_h2 * (1.0 + h / (2.0 * x[i]));
    const double sub = inv_h2 * (1.0 - h / (2.0 * x[i + 1]));
    t.off[i] = std::sqrt(sup * sub);
  }
  return t;
}

// Number of eigenvalues strictly below lambda (Sturm count via the LDL^T
// pivot recurrence).
int count_below(const Tridiag& t, double lambda) {
  const double pivmin = 1e-300;
  int count = 0;
  double q = t.diag[0] - lambda;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < t.diag.size(); ++i) {
    if (std::abs(q) < pivmin) q = -pivmin;
    q = (t.diag[i] - lambda) - t.off[i - 1] * t.off[i - 1] / q;
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<double> lowest_eigenvalues(const Tridiag& t, int n_levels) {
  double off_max = 0.0;
  for (double e : t.off) off_max = std::max(off_max, std::abs(e));
  double lo0 = std::numeric_limits<double>::infinity();
  double hi0 = -std::numeric_limits<double>::infinity();
  for (double d : t.diag) {
    lo0 = std::min(lo0, d);
    hi0 = std::max(hi0, d);
  }
  lo0 -= 2.0 * off_max;
  hi0 += 2.0 * off_max;

  std::vector<double> out(n_levels);
  for (int k = 0; k < n_levels; ++k) {
    double lo = lo0, hi = hi0;
    // invariant: count(lo) <= k < count(hi)
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (count_below(t, mid) > k)
        hi = mid;
      else
        lo = mid;
      if (hi - lo <= 1e-14 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)))) break;
    }
    out[k] = 0.5 * (lo + hi);
  }
  return out;
}

}  // namespace

std::vector<double> fd_spectrum(const DimensionlessModel& model, const FdGrid& grid, int n_levels) {
  if (n_levels < 1) throw std::domain_error("fd_spectrum: n_levels must be >= 1");
  if (n_levels > grid.n_points)
    throw std::domain_error("fd_spectrum: n_levels exceeds the number of grid points");
  return lowest_eigenvalues(assemble(model, grid), n_levels);
}

std::vector<double> fd_spectrum_richardson(const DimensionlessModel& model, const FdGrid& grid,
                                           int n_levels) {
  const FdGrid fine(grid.x_max, 2 * grid.n_points);
  const std::vector<double> coarse_w = fd_spectrum(model, grid, n_levels);
  const std::vector<double> fine_w = fd_spectrum(model, fine, n_levels);
  const double r = grid.spacing() / fine.spacing();
  const double r2 = r * r;
  std::vector<double> out(n_levels);
  for (int k = 0; k < n_levels; ++k) out[k] = (r2 * fine_w[k] - coarse_w[k]) / (r2 - 1.0);
  return out;
}

double fd_observed_order(const DimensionlessModel& model, const FdGrid& grid, int level) {
  const FdGrid g2(grid.x_max, 2 * grid.n_points);
  const FdGrid g4(grid.x_max, 4 * grid.n_points);
  const double w1 = fd_spectrum(model, grid, level + 1)[level];
  const double w2 = fd_spectrum(model, g2, level + 1)[level];
  const double w4 = fd_spectrum(model, g4, level + 1)[level];
  const double r = grid.spacing() / g2.spacing();
  const double num = std::abs(w1 - w2);
  const double den = std::abs(w2 - w4);
  if (den == 0.0) throw NumericError("fd_observed_order: differences vanished; grid too fine");
  return std::log(num / den) / std::log(r);
}

}  // namespace qradial
