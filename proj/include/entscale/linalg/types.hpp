#pragma once

#include <complex>
#include <limits>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "entscale/errors.hpp"

namespace entscale {

using cplx = std::complex<double>;
using Index = Eigen::Index;

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using SparseCMatrix = Eigen::SparseMatrix<cplx, Eigen::ColMajor, Index>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

namespace linalg {

/// Largest absolute entry of A - A^dagger.
template <class Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// Dense complex matrix whose entries equal their conjugate transpose within
/// an absolute tolerance, checked at construction.
class HermitianMatrix {
 public:
  static constexpr double kTolerance = 1e-12;

  HermitianMatrix() = default;

  explicit HermitianMatrix(CMatrix entries, double tolerance = kTolerance) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0)
      throw DimensionMismatch("HermitianMatrix: matrix must be square and non-empty");
    if (!m_.allFinite()) throw PreconditionError("HermitianMatrix: non-finite entry");
    if (hermiticity_defect(m_) > tolerance)
      throw PreconditionError("HermitianMatrix: entries are not Hermitian within tolerance");
  }

  /// (A + A^dagger) / 2, for products that are Hermitian only up to roundoff.
  static HermitianMatrix symmetrized(const CMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("HermitianMatrix: matrix must be square");
    CMatrix h = 0.5 * (a + a.adjoint());
    return HermitianMatrix(std::move(h));
  }

  static HermitianMatrix zero(Index dim) { return HermitianMatrix(CMatrix::Zero(dim, dim)); }
  static HermitianMatrix identity(Index dim) { return HermitianMatrix(CMatrix::Identity(dim, dim)); }

  Index dim() const noexcept { return m_.rows(); }
  const CMatrix& matrix() const noexcept { return m_; }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("HermitianMatrix: dimension mismatch in sum");
    return HermitianMatrix(CMatrix(a.m_ + b.m_));
  }
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("HermitianMatrix: dimension mismatch in difference");
    return HermitianMatrix(CMatrix(a.m_ - b.m_));
  }
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a) { return HermitianMatrix(CMatrix(s * a.m_)); }

 private:
  CMatrix m_;
};

/// Eigenvalues nondecreasing; eigenvectors are the orthonormal columns of `vectors`.
struct EigenSystem {
  RVector values;
  CMatrix vectors;
};

}  // namespace linalg
}  // namespace entscale
