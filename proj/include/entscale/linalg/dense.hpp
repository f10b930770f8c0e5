#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "entscale/linalg/types.hpp"

namespace entscale::linalg {

inline EigenSystem hermitian_eigensystem(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw NumericalFailure("hermitian_eigensystem: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline RVector hermitian_eigenvalues(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalFailure("hermitian_eigenvalues: eigensolver did not converge");
  return solver.eigenvalues();
}

inline RVector symmetric_eigenvalues(const RMatrix& a) {
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalFailure("symmetric_eigenvalues: eigensolver did not converge");
  return solver.eigenvalues();
}

/// Nonincreasing singular values, min(rows, cols) of them.
template <class Derived>
RVector singular_values(const Eigen::MatrixBase<Derived>& c) {
  using Plain = typename Derived::PlainObject;
  if (!c.allFinite()) throw PreconditionError("singular_values: non-finite entry");
  if (c.size() == 0) return RVector();
  Eigen::BDCSVD<Plain> svd(c.eval());
  if (svd.info() != Eigen::Success) throw NumericalFailure("singular_values: SVD did not converge");
  return svd.singularValues();
}

/// Largest singular value. Hermitian and anti-Hermitian inputs go through a
/// Hermitian eigensolve, which is several times cheaper than an SVD.
template <class Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0.0;
  if (!a.allFinite()) throw PreconditionError("operator_norm: non-finite entry");
  if (a.rows() == a.cols()) {
    const CMatrix m = a.template cast<cplx>();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-13 * scale) {
      const RVector ev = hermitian_eigenvalues(HermitianMatrix::symmetrized(m));
      return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    }
    if ((m + m.adjoint()).cwiseAbs().maxCoeff() <= 1e-13 * scale) {
      const RVector ev = hermitian_eigenvalues(HermitianMatrix::symmetrized(cplx(0, 1) * m));
      return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    }
  }
  return singular_values(a)(0);
}

struct LogDeterminant {
  double log_abs_det = 0.0;  // natural log; -inf when singular
  int sign = 1;              // -1, 0 or +1
  double min_pivot = 0.0;    // smallest |pivot| of the full-pivot LU
  double max_pivot = 0.0;
};

/// Pivot magnitude below which a matrix is declared singular.
inline constexpr double kSingularPivot = 1e-300;

/// log|det A| and sign(det A) from a fully pivoted LU factorization. Accepts
/// real symmetric and complex Hermitian input, whose determinants are real.
template <class Derived>
LogDeterminant log_abs_determinant(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using Plain = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (a.rows() != a.cols()) throw DimensionMismatch("log_abs_determinant: matrix must be square");
  if (!a.allFinite()) throw PreconditionError("log_abs_determinant: non-finite entry");
  LogDeterminant out;
  const Index n = a.rows();
  if (n == 0) return out;

  Eigen::FullPivLU<Plain> lu(a.eval());
  lu.setThreshold(0.0);
  const auto& packed = lu.matrixLU();
  out.min_pivot = std::numeric_limits<double>::infinity();
  Scalar phase = static_cast<Scalar>(lu.permutationP().determinant() * lu.permutationQ().determinant());
  for (Index i = 0; i < n; ++i) {
    const Scalar p = packed(i, i);
    const double mag = std::abs(p);
    out.min_pivot = std::min(out.min_pivot, mag);
    out.max_pivot = std::max(out.max_pivot, mag);
    if (mag < kSingularPivot) continue;
    out.log_abs_det += std::log(mag);
    phase *= p / static_cast<Scalar>(mag);
  }
  if (out.min_pivot < kSingularPivot) {
    out.sign = 0;
    out.log_abs_det = -std::numeric_limits<double>::infinity();
    return out;
  }
  out.sign = std::real(phase) >= 0.0 ? 1 : -1;
  return out;
}

struct WeylReport {
  double max_shift = 0.0;  // max_j |lambda_j(P+Q) - lambda_j(P)|
  double bound = 0.0;      // ||Q||
  bool holds = true;
};

inline WeylReport weyl_perturbation_check(const HermitianMatrix& p, const HermitianMatrix& q) {
  if (p.dim() != q.dim()) throw DimensionMismatch("weyl_perturbation_check: dimension mismatch");
  const RVector before = hermitian_eigenvalues(p);
  const RVector after = hermitian_eigenvalues(p + q);
  WeylReport r;
  r.max_shift = (after - before).cwiseAbs().maxCoeff();
  r.bound = operator_norm(q.matrix());
  r.holds = r.max_shift <= r.bound + 1e-10;
  return r;
}

/// kron(a, b) with a acting on the more significant factor.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace entscale::linalg
