#include "qradial/frobenius.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace qradial {

namespace {

using rational = boost::multiprecision::cpp_rational;

// Degeneracy tolerance for root separation: roots closer than this are
// flagged as suspect rather than silently merged.
constexpr double kDegenerateGap = 1e-9;

double poly_eval(const Eigen::VectorXd& c, double x) {
  double v = 0.0;
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) v = v * x + c[k];
  return v;
}

// Magnitude scale of the polynomial at x, used for relative zero tests.
double poly_scale(const Eigen::VectorXd& c, double x) {
  double s = 0.0, p = 1.0;
  const double ax = std::abs(x);
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    s += std::abs(c[k]) * p;
    p *= ax;
  }
  return std::max(s, std::numeric_limits<double>::min());
}

Eigen::VectorXd poly_derivative(const Eigen::VectorXd& c) {
  if (c.size() <= 1) return Eigen::VectorXd::Zero(1);
  Eigen::VectorXd d(c.size() - 1);
  for (Eigen::Index k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
  return d;
}

Eigen::Index effective_degree(const Eigen::VectorXd& c) {
  const double cap = c.cwiseAbs().maxCoeff();
  if (cap == 0.0) return 0;
  Eigen::Index d = c.size() - 1;
  while (d > 0 && std::abs(c[d]) <= 1e-300 * cap) --d;
  return d;
}

double bisect_root(const Eigen::VectorXd& c, double a, double b, double fa) {
  for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    const double m = 0.5 * (a + b);
    const double fm = poly_eval(c, m);
    if (fm == 0.0) return m;
    if ((fa < 0.0) != (fm < 0.0)) {
      b = m;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

// Newton refinement with a step cap; falls back to the input if no improvement.
double newton_polish(const Eigen::VectorXd& c, const Eigen::VectorXd& dc, double x0, double cap) {
  double x = x0;
  double best = x0;
  double best_abs = std::abs(poly_eval(c, x0));
  for (int it = 0; it < 60; ++it) {
    const double f = poly_eval(c, x);
    const double fp = poly_eval(dc, x);
    if (fp == 0.0) break;
    double step = f / fp;
    if (std::abs(step) > cap) step = (step > 0 ? cap : -cap);
    x -= step;
    const double fa = std::abs(poly_eval(c, x));
    if (fa < best_abs) {
      best_abs = fa;
      best = x;
    }
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(x))) break;
  }
  return best;
}

}  // namespace

CoefficientSequence coefficients(double gamma, double delta, double w, int j_max) {
  if (!(gamma >= 0.0)) throw std::domain_error("coefficients: gamma must be >= 0");
  if (j_max < 0) throw std::domain_error("coefficients: j_max must be >= 0");
  CoefficientSequence seq;
  seq.gamma = gamma;
  seq.delta = delta;
  seq.eigenvalue = w;
  seq.a.resize(j_max + 1);
  seq.a[0] = 1.0;
  const double theta = seq.theta();
  double prev = 0.0;  // a_{-1}
  double cur = 1.0;   // a_0
  for (int j = -1; j + 2 <= j_max; ++j) {
    const double den = (j + 2.0) * (j + 2.0 * (gamma + 1.0));
    const double nxt = delta * (2.0 * j + 2.0 * gamma + 3.0) / (2.0 * den) * cur +
                       (2.0 * j - theta) / den * prev;
    seq.a[j + 2] = nxt;
    prev = cur;
    cur = nxt;
  }
  return seq;
}

Eigen::VectorXd truncation_polynomial(int n, double gamma) {
  if (n < 0) throw std::domain_error("truncation_polynomial: n must be >= 0");
  if (!(gamma >= 0.0)) throw std::domain_error("truncation_polynomial: gamma must be >= 0");

  const rational g(gamma);  // exact value of the double
  // a_j as polynomials in delta (ascending powers, exact rationals)
  std::vector<rational> prev = {rational(0)};  // a_{-1}
  std::vector<rational> cur = {rational(1)};   // a_0
  for (int j = -1; j <= n - 1; ++j) {
    const rational den = rational(2 * (j + 2)) * (rational(j) + 2 * (g + 1));
    const rational acoef = (rational(2 * j + 3) + 2 * g) / den;            // multiplies delta * a_{j+1}
    const rational bcoef = rational(2 * (2 * j - 2 * n)) / den;            // multiplies a_j
    std::vector<rational> nxt(cur.size() + 1, rational(0));
    for (std::size_t k = 0; k < cur.size(); ++k) nxt[k + 1] += acoef * cur[k];
    for (std::size_t k = 0; k < prev.size(); ++k) nxt[k] += bcoef * prev[k];
    prev = std::move(cur);
    cur = std::move(nxt);
  }
  Eigen::VectorXd out(cur.size());
  for (std::size_t k = 0; k < cur.size(); ++k) out[k] = static_cast<double>(cur[k]);
  return out;
}

std::vector<double> truncation_roots(int n, double gamma, RootDiagnostics* diag) {
  const Eigen::VectorXd poly = truncation_polynomial(n, gamma);
  RootDiagnostics local;

  // The recurrence preserves parity exactly, so zero roots show up as exact
  // zero low-order coefficients.
  Eigen::Index zero_count = 0;
  while (zero_count < poly.size() - 1 && poly[zero_count] == 0.0) ++zero_count;

  const Eigen::Index deg = poly.size() - 1 - zero_count;
  std::vector<double> roots(static_cast<std::size_t>(zero_count), 0.0);

  if (deg > 0) {
    Eigen::VectorXd reduced = poly.tail(deg + 1);
    const double lead = reduced[deg];
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (Eigen::Index r = 1; r < deg; ++r) companion(r, r - 1) = 1.0;
    for (Eigen::Index r = 0; r < deg; ++r) companion(r, deg - 1) = -reduced[r] / lead;

    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
      throw NumericError("truncation_roots: companion-matrix eigensolver failed (n=" +
                         std::to_string(n) + ", gamma=" + std::to_string(gamma) + ")");

    const Eigen::VectorXd dpoly = poly_derivative(reduced);
    double scale = 0.0;
    for (Eigen::Index r = 0; r < deg; ++r) scale = std::max(scale, std::abs(es.eigenvalues()[r]));
    const double cap = 0.5 * std::max(scale, 1.0);
    for (Eigen::Index r = 0; r < deg; ++r) {
      const auto ev = es.eigenvalues()[r];
      local.max_imag_residual = std::max(local.max_imag_residual, std::abs(ev.imag()));
      roots.push_back(newton_polish(reduced, dpoly, ev.real(), cap));
    }
    if (local.max_imag_residual > 1e-6 * std::max(scale, 1.0))
      throw NumericError("truncation_roots: non-real companion output, |Im| = " +
                         std::to_string(local.max_imag_residual));
  }

  std::sort(roots.begin(), roots.end(), std::greater<double>());
  for (std::size_t r = 1; r < roots.size(); ++r) {
    if (roots[r - 1] - roots[r] < kDegenerateGap * std::max(1.0, std::abs(roots[r])))
      local.suspect_degenerate = true;
  }
  if (diag) *diag = local;
  return roots;
}

double exact_eigenvalue(int n, double gamma, double delta_root) {
  return 2.0 * (n + gamma + 1.0) - delta_root * delta_root / 4.0;
}

TruncationSolution polynomial_solution(int n, int i, double gamma) {
  const std::vector<double> roots = truncation_roots(n, gamma);
  if (i < 1 || i > static_cast<int>(roots.size()))
    throw std::domain_error("polynomial_solution: root index i out of range 1..n+1");
  TruncationSolution sol;
  sol.n = n;
  sol.i = i;
  sol.gamma = gamma;
  sol.delta_root = roots[static_cast<std::size_t>(i - 1)];
  sol.eigenvalue = exact_eigenvalue(n, gamma, sol.delta_root);
  sol.coeffs = coefficients(gamma, sol.delta_root, sol.eigenvalue, n).a;
  return sol;
}

std::vector<TruncationSolution> all_solutions(int n, double gamma) {
  const std::vector<double> roots = truncation_roots(n, gamma);
  std::vector<TruncationSolution> sols;
  sols.reserve(roots.size());
  for (std::size_t idx = 0; idx < roots.size(); ++idx) {
    TruncationSolution sol;
    sol.n = n;
    sol.i = static_cast<int>(idx) + 1;
    sol.gamma = gamma;
    sol.delta_root = roots[idx];
    sol.eigenvalue = exact_eigenvalue(n, gamma, sol.delta_root);
    sol.coeffs = coefficients(gamma, sol.delta_root, sol.eigenvalue, n).a;
    sols.push_back(std::move(sol));
  }
  return sols;
}

std::vector<double> real_roots_in_interval(const Eigen::VectorXd& ascending_coeffs,
                                           double lo, double hi, bool* degenerate_warning) {
  std::vector<double> roots;
  const Eigen::Index deg = effective_degree(ascending_coeffs);
  if (deg == 0 || lo >= hi) return roots;
  const Eigen::VectorXd c = ascending_coeffs.head(deg + 1);

  if (deg == 1) {
    const double r = -c[0] / c[1];
    if (r > lo && r < hi) roots.push_back(r);
    return roots;
  }

  // f is monotone between consecutive critical points, so sign changes on the
  // breakpoint list isolate every simple root; a near-zero value at a critical
  // point is a touching (multiple) root, counted once.
  std::vector<double> breaks = real_roots_in_interval(poly_derivative(c), lo, hi, nullptr);
  breaks.insert(breaks.begin(), lo);
  breaks.push_back(hi);
  std::sort(breaks.begin(), breaks.end());

  auto is_zero_at = [&](double x) { return std::abs(poly_eval(c, x)) <= 1e-12 * poly_scale(c, x); };

  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k], b = breaks[k + 1];
    if (!(b > a)) continue;
    const double fa = poly_eval(c, a), fb = poly_eval(c, b);
    if (k > 0 && is_zero_at(a)) {  // critical point sitting on the axis
      roots.push_back(a);
      if (degenerate_warning) *degenerate_warning = true;
      continue;
    }
    if ((fa < 0.0) != (fb < 0.0) && !is_zero_at(b)) {
      const double r0 = bisect_root(c, a, b, fa);
      roots.push_back(newton_polish(c, poly_derivative(c), r0, 0.25 * (b - a) + 1e-30));
    }
  }
  // interval endpoint b == hi that is an exact zero belongs to the caller's
  // convention (open interval): skip, matching the loop above.
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double x, double y) {
                            return std::abs(x - y) <= 1e-10 * (1.0 + std::abs(x));
                          }),
              roots.end());
  return roots;
}

int count_nodes(const TruncationSolution& sol, bool* degenerate_warning) {
  if (degenerate_warning) *degenerate_warning = false;
  const Eigen::Index deg = effective_degree(sol.coeffs);
  if (deg == 0) return 0;
  const Eigen::VectorXd& c = sol.coeffs;
  double bound = 0.0;
  for (Eigen::Index k = 0; k < deg; ++k) bound = std::max(bound, std::abs(c[k] / c[deg]));
  const double hi = 1.0 + bound;
  const auto roots = real_roots_in_interval(c, 0.0, hi + 1.0, degenerate_warning);
  int count = 0;
  for (double r : roots)
    if (r > 0.0) ++count;
  return count;
}

}  // namespace qradial
