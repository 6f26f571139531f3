#include <boost/multiprecision/cpp_bin_float.hpp>

#include <Eigen/Core>

namespace qradial {
using quad = boost::multiprecision::cpp_bin_float_quad;
}

// Eigen 3.4 needs infinity()/quiet_NaN() in NumTraits, which the Boost 1.74
// interop header predates; a minimal specialization is enough since all
// arithmetic here stays homogeneous in the scalar type.
namespace Eigen {
template <>
struct NumTraits<qradial::quad> : GenericNumTraits<qradial::quad> {
  typedef qradial::quad Real;
  typedef qradial::quad NonInteger;
  typedef qradial::quad Nested;
  typedef qradial::quad Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 20,
    MulCost = 30
  };
  static inline Real epsilon() { return std::numeric_limits<qradial::quad>::epsilon(); }
  static inline Real dummy_precision() { return epsilon() * 1000; }
  static inline Real highest() { return (std::numeric_limits<qradial::quad>::max)(); }
  static inline Real lowest() { return std::numeric_limits<qradial::quad>::lowest(); }
  static inline int digits10() { return std::numeric_limits<qradial::quad>::digits10; }
  static inline Real infinity() { return std::numeric_limits<qradial::quad>::infinity(); }
  static inline Real quiet_NaN() { return std::numeric_limits<qradial::quad>::quiet_NaN(); }
};
}  // namespace Eigen

#include "qradial/variational.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace qradial {

template <>
quad tgamma_scalar<quad>(quad x) {
  return boost::math::tgamma(x);
}

namespace {

template <typename Scalar>
struct StageSolve {
  bool ok = false;
  double pivot_ratio = 0.0;
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // raw-basis coordinates, S-normalized
};

// Pivot guard threshold.  1000 eps(double) ~ 2e-13 reproduces the intended
// double-precision cutoff; the same rule scales to wider scalars.
template <typename Scalar>
double pivot_guard_threshold() {
  return 1000.0 * static_cast<double>(std::numeric_limits<Scalar>::epsilon());
}

template <typename Scalar>
StageSolve<Scalar> solve_stage(const MatrixX<Scalar>& h_raw, const MatrixX<Scalar>& s_raw,
                               int count, bool want_vectors) {
  using Mat = MatrixX<Scalar>;
  using Vec = VectorX<Scalar>;
  using std::sqrt;

  StageSolve<Scalar> out;
  const Eigen::Index n = s_raw.rows();

  // Unit-diagonal congruence: same generalized eigenvalues, pivots now
  // measure conditioning instead of Gamma-function growth.
  Vec d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(s_raw(i, i) > Scalar(0))) return out;
    d[i] = Scalar(1) / sqrt(s_raw(i, i));
  }
  Mat sb = d.asDiagonal() * s_raw * d.asDiagonal();
  Mat hb = d.asDiagonal() * h_raw * d.asDiagonal();

  Eigen::LLT<Mat> llt(sb);
  if (llt.info() != Eigen::Success) return out;
  Mat lower = llt.matrixL();

  Scalar piv_min = lower(0, 0) * lower(0, 0);
  Scalar piv_max = piv_min;
  for (Eigen::Index i = 1; i < n; ++i) {
    const Scalar p = lower(i, i) * lower(i, i);
    piv_min = std::min(piv_min, p);
    piv_max = std::max(piv_max, p);
  }
  out.pivot_ratio = static_cast<double>(piv_min / piv_max);
  if (out.pivot_ratio < pivot_guard_threshold<Scalar>()) return out;

  Mat a = lower.template triangularView<Eigen::Lower>().solve(hb);
  a = lower.template triangularView<Eigen::Lower>().solve(Mat(a.transpose()));
  Mat asym = (a + a.transpose()) / 2;

  Eigen::SelfAdjointEigenSolver<Mat> es(asym, want_vectors ? Eigen::ComputeEigenvectors
                                                           : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return out;

  const int m = std::min<int>(count, static_cast<int>(n));
  out.values.resize(m);
  for (int j = 0; j < m; ++j) out.values[j] = static_cast<double>(es.eigenvalues()[j]);
  if (want_vectors) {
    // y -> v_bar = L^-T y -> v = D v_bar; then v^T S v = y^T y = 1.
    Mat vbar = lower.transpose().template triangularView<Eigen::Upper>().solve(
        Mat(es.eigenvectors().leftCols(m)));
    out.vectors.resize(n, m);
    for (Eigen::Index i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) out.vectors(i, j) = static_cast<double>(d[i] * vbar(i, j));
  }
  out.ok = true;
  return out;
}

template <typename Scalar>
StageSolve<Scalar> assemble_and_solve(const DimensionlessModel& model, int basis_size, int count,
                                      bool want_vectors) {
  const BasisSpec basis(model.gamma, basis_size);
  const MatrixX<Scalar> s = overlap_matrix_t<Scalar>(basis);
  const MatrixX<Scalar> h = hamiltonian_matrix_t<Scalar>(basis, Scalar(model.delta));
  return solve_stage<Scalar>(h, s, count, want_vectors);
}

struct LadderState {
  std::optional<Eigen::VectorXd> values;
  Eigen::MatrixXd vectors;
  Eigen::VectorXd drift;
  int basis_size = 0;
  PrecisionStage stage = PrecisionStage::long_double;
  bool tol_met = false;
};

// One precision stage of the basis-growth ladder.  Returns false when the
// conditioning wall was hit before the tolerance, signalling escalation.
template <typename Scalar>
bool run_stage(const DimensionlessModel& model, int n_levels, double tol, int max_basis,
               bool want_vectors, PrecisionStage tag, int start_basis, LadderState& st) {
  for (int n = start_basis; n <= max_basis; n += 2) {
    auto sol = assemble_and_solve<Scalar>(model, n, n_levels, want_vectors);
    if (!sol.ok) return false;  // wall: Cholesky or pivot guard

    if (st.values) {
      // A level rising beyond rounding slack means roundoff has taken over.
      bool noise = false;
      for (int j = 0; j < n_levels; ++j)
        if (sol.values[j] > (*st.values)[j] + 1e-10 * (1.0 + std::abs((*st.values)[j]))) noise = true;
      if (noise) return false;

      Eigen::VectorXd drift(n_levels);
      for (int j = 0; j < n_levels; ++j) drift[j] = std::abs(sol.values[j] - (*st.values)[j]);
      st.drift = drift;
      st.values = sol.values;
      st.vectors = sol.vectors;
      st.basis_size = n;
      st.stage = tag;
      if (drift.maxCoeff() < tol) {
        st.tol_met = true;
        return true;
      }
    } else {
      st.values = sol.values;
      st.vectors = sol.vectors;
      st.basis_size = n;
      st.stage = tag;
    }
  }
  return true;  // max_basis reached; not a precision wall
}

SpectrumResult finalize(const DimensionlessModel& model, int n_levels, double tol,
                        const LadderState& st) {
  SpectrumResult res;
  res.model = model;
  res.basis_size_used = st.basis_size;
  res.stage_used = st.stage;
  if (!st.values)
    throw ConditioningError("spectrum: no usable basis size (overlap not positive definite)");
  const bool have_drift = st.drift.size() == n_levels;
  for (int j = 0; j < n_levels; ++j) {
    LevelResult lvl;
    lvl.index = j;
    lvl.eigenvalue = (*st.values)[j];
    lvl.est_error = have_drift ? st.drift[j] : std::numeric_limits<double>::quiet_NaN();
    lvl.converged = have_drift && st.drift[j] < tol;
    res.levels.push_back(lvl);
  }
  return res;
}

SpectrumSolution spectrum_impl(const DimensionlessModel& model, int n_levels, double tol,
                               int max_basis, bool want_vectors) {
  if (n_levels < 1) throw std::domain_error("spectrum: n_levels must be >= 1");
  if (!(tol > 0.0)) throw std::domain_error("spectrum: tol must be > 0");

  const int start = std::max(6, n_levels + 1);
  LadderState st;
  bool done = run_stage<long double>(model, n_levels, tol, max_basis, want_vectors,
                                     PrecisionStage::long_double, start, st);
  if (!done || !st.tol_met) {
    const int resume = st.basis_size > 0 ? st.basis_size + 2 : start;
    if (resume <= max_basis)
      run_stage<quad>(model, n_levels, tol, max_basis, want_vectors, PrecisionStage::binary128,
                      resume, st);
  }

  SpectrumSolution out;
  out.result = finalize(model, n_levels, tol, st);
  out.basis = BasisSpec(model.gamma, std::max(1, st.basis_size));
  out.vectors = st.vectors;
  return out;
}

}  // namespace

GeneralizedSolution solve_generalized(const GeneralizedEigenProblem& prob, int count) {
  if (prob.hamiltonian.rows() != prob.overlap.rows() ||
      prob.hamiltonian.cols() != prob.overlap.cols() ||
      prob.hamiltonian.rows() != prob.hamiltonian.cols())
    throw std::domain_error("solve_generalized: H and S must be square and of equal size");
  if (count < 1) throw std::domain_error("solve_generalized: count must be >= 1");

  auto sol = solve_stage<double>(prob.hamiltonian, prob.overlap, count, /*want_vectors=*/true);
  if (!sol.ok)
    throw ConditioningError(
        "solve_generalized: overlap matrix is numerically singular (pivot ratio " +
        std::to_string(sol.pivot_ratio) + "); reduce the basis size");
  GeneralizedSolution out;
  out.values = sol.values;
  out.vectors = sol.vectors;
  out.pivot_ratio = sol.pivot_ratio;
  return out;
}

SpectrumResult spectrum(const DimensionlessModel& model, int n_levels, double tol, int max_basis) {
  return spectrum_impl(model, n_levels, tol, max_basis, /*want_vectors=*/false).result;
}

SpectrumSolution spectrum_with_vectors(const DimensionlessModel& model, int n_levels, double tol,
                                       int max_basis) {
  return spectrum_impl(model, n_levels, tol, max_basis, /*want_vectors=*/true);
}

SpectrumSolution solve_at_basis(const DimensionlessModel& model, int basis_size, int n_levels,
                                PrecisionStage stage) {
  if (basis_size < n_levels)
    throw std::domain_error("solve_at_basis: basis_size must be >= n_levels");
  StageSolve<double> dummy;
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  if (stage == PrecisionStage::long_double) {
    auto sol = assemble_and_solve<long double>(model, basis_size, n_levels, true);
    if (!sol.ok) throw ConditioningError("solve_at_basis: basis too large for long double stage");
    values = sol.values;
    vectors = sol.vectors;
  } else {
    auto sol = assemble_and_solve<quad>(model, basis_size, n_levels, true);
    if (!sol.ok) throw ConditioningError("solve_at_basis: basis too large for binary128 stage");
    values = sol.values;
    vectors = sol.vectors;
  }
  SpectrumSolution out;
  out.basis = BasisSpec(model.gamma, basis_size);
  out.vectors = vectors;
  out.result.model = model;
  out.result.basis_size_used = basis_size;
  out.result.stage_used = stage;
  for (int j = 0; j < values.size(); ++j) {
    LevelResult lvl;
    lvl.index = j;
    lvl.eigenvalue = values[j];
    lvl.converged = true;
    lvl.est_error = std::numeric_limits<double>::quiet_NaN();
    out.result.levels.push_back(lvl);
  }
  return out;
}

double expectation_x(const DimensionlessModel& model, const Eigen::VectorXd& eigvec,
                     const BasisSpec& basis) {
  if (eigvec.size() != basis.size)
    throw std::domain_error("expectation_x: eigenvector length must match basis size");
  // Work in the unit-diagonal-normalized basis for scale balance.
  const Eigen::MatrixXd s = overlap_matrix(basis);
  const Eigen::MatrixXd x = x_matrix_t<double>(basis);
  Eigen::VectorXd vbar(eigvec.size());
  Eigen::VectorXd dinv(eigvec.size());
  for (Eigen::Index i = 0; i < eigvec.size(); ++i) {
    const double sd = std::sqrt(s(i, i));
    vbar[i] = eigvec[i] * sd;
    dinv[i] = 1.0 / sd;
  }
  const Eigen::MatrixXd xbar = dinv.asDiagonal() * x * dinv.asDiagonal();
  return vbar.dot(xbar * vbar);
}

}  // namespace qradial
