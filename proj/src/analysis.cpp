#include "qradial/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

namespace qradial {

namespace {

void run_parallel(std::size_t n_tasks, int jobs, const std::function<void(std::size_t)>& body) {
  unsigned n_threads = jobs > 0 ? static_cast<unsigned>(jobs) : std::thread::hardware_concurrency();
  n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(n_tasks)));
  if (n_threads == 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) body(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned w = 0; w < n_threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t t = next.fetch_add(1); t < n_tasks; t = next.fetch_add(1)) body(t);
    });
  for (auto& th : pool) th.join();
}

double overlap_inner(const Eigen::MatrixXd& s, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.dot(s * b);
}

}  // namespace

SweepTable sweep(double gamma, double delta_min, double delta_max, int n_grid, int n_levels,
                 int n_trunc_max, int jobs, double tol) {
  if (!(delta_min < delta_max)) throw std::domain_error("sweep: delta_min must be < delta_max");
  if (n_grid < 2) throw std::domain_error("sweep: n_grid must be >= 2");
  if (n_levels < 1) throw std::domain_error("sweep: n_levels must be >= 1");
  if (n_trunc_max < 0) throw std::domain_error("sweep: n_trunc_max must be >= 0");

  SweepTable table;
  table.gamma = gamma;
  table.n_levels = n_levels;
  table.delta_grid.resize(n_grid);
  for (int g = 0; g < n_grid; ++g)
    table.delta_grid[g] = delta_min + (delta_max - delta_min) * g / (n_grid - 1);

  // Truncation points inside the window, with their exact solutions.
  struct PendingPoint {
    TruncationPoint pt;
    double w_needed = 0.0;
  };
  std::vector<PendingPoint> pending;
  for (int n = 0; n <= n_trunc_max; ++n) {
    for (const TruncationSolution& sol : all_solutions(n, gamma)) {
      if (sol.delta_root < delta_min || sol.delta_root > delta_max) continue;
      PendingPoint pp;
      pp.pt.n = sol.n;
      pp.pt.i = sol.i;
      pp.pt.delta_root = sol.delta_root;
      pp.pt.eigenvalue = sol.eigenvalue;
      pp.pt.matched_level = count_nodes(sol);  // = i - 1 by the node law
      pending.push_back(pp);
    }
  }

  table.levels.resize(n_levels, n_grid);
  table.levels.setConstant(std::numeric_limits<double>::quiet_NaN());
  table.grid_converged.assign(static_cast<std::size_t>(n_grid), 0);
  table.truncation_points.resize(pending.size());

  const std::size_t n_tasks = static_cast<std::size_t>(n_grid) + pending.size();
  run_parallel(n_tasks, jobs, [&](std::size_t t) {
    if (t < static_cast<std::size_t>(n_grid)) {
      const int g = static_cast<int>(t);
      try {
        const SpectrumResult res =
            spectrum(DimensionlessModel(gamma, table.delta_grid[g]), n_levels, tol);
        for (int j = 0; j < n_levels; ++j) table.levels(j, g) = res.levels[j].eigenvalue;
        table.grid_converged[t] = res.fully_converged() ? 1 : 0;
      } catch (const NumericError&) {
        table.grid_converged[t] = 0;  // recorded, not fatal
      }
    } else {
      PendingPoint& pp = pending[t - static_cast<std::size_t>(n_grid)];
      const int want = std::max(n_levels, pp.pt.matched_level + 1);
      try {
        const SpectrumResult res =
            spectrum(DimensionlessModel(gamma, pp.pt.delta_root), want, tol);
        pp.pt.residual = std::abs(
            pp.pt.eigenvalue - res.levels[static_cast<std::size_t>(pp.pt.matched_level)].eigenvalue);
      } catch (const NumericError&) {
        pp.pt.residual = std::numeric_limits<double>::quiet_NaN();
      }
      table.truncation_points[t - static_cast<std::size_t>(n_grid)] = pp.pt;
    }
  });

  return table;
}

HellmannFeynmanResult hellmann_feynman_check(double gamma, double delta, int j, double h) {
  if (!(h > 0.0)) throw std::domain_error("hellmann_feynman_check: h must be > 0");
  if (j < 0) throw std::domain_error("hellmann_feynman_check: level index must be >= 0");

  const int n_levels = j + 1;
  const SpectrumSolution center =
      spectrum_with_vectors(DimensionlessModel(gamma, delta), n_levels);
  const int basis_n = center.result.basis_size_used;
  const PrecisionStage stage = center.result.stage_used;

  const SpectrumSolution minus =
      solve_at_basis(DimensionlessModel(gamma, delta - h), basis_n, n_levels, stage);
  const SpectrumSolution plus =
      solve_at_basis(DimensionlessModel(gamma, delta + h), basis_n, n_levels, stage);

  // Same level on both window ends, judged by S-overlap of the eigenvectors.
  const Eigen::MatrixXd s = overlap_matrix(center.basis);
  const double ov = std::abs(overlap_inner(s, minus.vectors.col(j), plus.vectors.col(j)));
  if (ov < 0.9)
    throw LevelCrossingError("hellmann_feynman_check: eigenvector overlap " + std::to_string(ov) +
                             " < 0.9 across [delta-h, delta+h]; shrink h");

  HellmannFeynmanResult out;
  out.lhs = (plus.result.levels[static_cast<std::size_t>(j)].eigenvalue -
             minus.result.levels[static_cast<std::size_t>(j)].eigenvalue) /
            (2.0 * h);
  out.rhs = expectation_x(DimensionlessModel(gamma, delta), center.vectors.col(j), center.basis);
  out.abs_diff = std::abs(out.lhs - out.rhs);
  return out;
}

FrequencyTable allowed_frequencies_table(int n, double gamma, const PhysicalParameters& p) {
  if (n < 1) throw std::domain_error("allowed_frequencies_table: n must be >= 1");
  p.validate();
  if (p.g == 0.0)
    throw std::domain_error("allowed_frequencies_table: g must be nonzero (omega map undefined)");

  FrequencyTable table;
  table.n = n;
  table.gamma = gamma;
  table.physical = p;
  table.annotation =
      "artifact of the truncation condition: each row belongs to a different potential; "
      "the radial problem has bound states for every omega";

  const double bg = p.b * p.g;
  const std::vector<double> roots = truncation_roots(n, gamma);
  for (std::size_t idx = 0; idx < roots.size(); ++idx) {
    FrequencyRow row;
    row.i = static_cast<int>(idx) + 1;
    row.delta_root = roots[idx];
    row.excluded_zero = roots[idx] == 0.0;
    row.omega = roots[idx] * roots[idx] * p.q_abs * p.q_abs / (2.0 * p.m * bg * bg);
    row.energy = row.omega * (n + gamma + 1.0) / 2.0 -
                 p.m * bg * bg * row.omega * row.omega / (8.0 * p.q_abs * p.q_abs) +
                 p.k * p.k / (2.0 * p.m);
    table.rows.push_back(row);
  }
  table.distinct_count = distinct_energy_count(n, gamma);
  table.half_formula_count = energy_count_half_formula(n);
  return table;
}

double omega_first_mode_closed_form(int nu, const PhysicalParameters& p) {
  p.validate();
  if (p.g == 0.0) throw std::domain_error("omega_first_mode_closed_form: g must be nonzero");
  const double bg = p.b * p.g;
  return 4.0 * p.q_abs * p.q_abs / (p.m * bg * bg * (2.0 * std::abs(nu) + 3.0));
}

int distinct_energy_count(int n, double gamma) {
  if (n < 1) throw std::domain_error("distinct_energy_count: n must be >= 1");
  std::vector<double> squares;
  for (double r : truncation_roots(n, gamma))
    if (r != 0.0) squares.push_back(r * r);
  std::sort(squares.begin(), squares.end());
  int count = 0;
  for (std::size_t k = 0; k < squares.size(); ++k)
    if (k == 0 || squares[k] - squares[k - 1] > 1e-9 * squares[k]) ++count;
  return count;
}

int energy_count_half_formula(int n) { return (n % 2 == 1) ? (n - 1) / 2 : n / 2; }

}  // namespace qradial
