#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "entscale/linalg/dense.hpp"

namespace entscale::linalg {

/// Dimensions above this use the Krylov path when the method is `automatic`.
inline constexpr Index kDenseEvolveMaxDim = Index{1} << 10;

enum class EvolveMethod { automatic, dense, krylov };

struct KrylovOptions {
  int subspace = 30;
  double step_tolerance = 1e-12;  // a-posteriori error estimate and norm drift, per step
  int max_steps = 100000;
};

/// e^{itH} for many t from a single eigendecomposition.
class DenseEvolver {
 public:
  explicit DenseEvolver(const HermitianMatrix& h) : eig_(hermitian_eigensystem(h)) {}

  Index dim() const noexcept { return eig_.values.size(); }
  const EigenSystem& eigensystem() const noexcept { return eig_; }

  CVector apply(double t, const CVector& v) const {
    if (v.size() != dim()) throw DimensionMismatch("evolve_action: dimension mismatch");
    if (t == 0.0) return v;
    CVector coeffs = eig_.vectors.adjoint() * v;
    for (Index k = 0; k < coeffs.size(); ++k) coeffs(k) *= std::polar(1.0, t * eig_.values(k));
    return eig_.vectors * coeffs;
  }

  CMatrix unitary(double t) const {
    if (t == 0.0) return CMatrix::Identity(dim(), dim());
    CMatrix scaled = eig_.vectors;
    for (Index k = 0; k < scaled.cols(); ++k) scaled.col(k) *= std::polar(1.0, t * eig_.values(k));
    return scaled * eig_.vectors.adjoint();
  }

 private:
  EigenSystem eig_;
};

namespace detail {

struct LanczosBasis {
  std::vector<CVector> q;
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[j] couples q[j] and q[j+1]; last entry is the residual norm
  bool invariant = false;    // happy breakdown: span(q) is H-invariant
};

template <class MatVec>
LanczosBasis lanczos(MatVec& apply, const CVector& start, int subspace) {
  LanczosBasis b;
  b.q.push_back(start);
  CVector w(start.size());
  for (int j = 0; j < subspace; ++j) {
    apply(b.q[j], w);
    const double a = std::real(b.q[j].dot(w));
    b.alpha.push_back(a);
    // full reorthogonalization, twice; the basis is at most a few dozen vectors
    for (int pass = 0; pass < 2; ++pass)
      for (const CVector& qk : b.q) w -= qk.dot(w) * qk;
    const double nrm = w.norm();
    b.beta.push_back(nrm);
    if (nrm <= 1e-14 * std::max(1.0, std::abs(a))) {
      b.invariant = true;
      break;
    }
    if (j + 1 < subspace) b.q.push_back(w / nrm);
  }
  return b;
}

}  // namespace detail

/// e^{itH} v using restarted Lanczos steps with an adaptive step size. `apply(x, y)`
/// must write H x into y.
template <class MatVec>
CVector krylov_evolve(MatVec&& apply, double t, const CVector& v, const KrylovOptions& opt = {}) {
  if (opt.subspace < 2) throw PreconditionError("krylov_evolve: subspace size must be at least 2");
  const double norm0 = v.norm();
  if (norm0 == 0.0 || t == 0.0) return v;

  CVector x = v / norm0;
  double done = 0.0;
  const double total = std::abs(t);
  const double dir = t > 0 ? 1.0 : -1.0;
  double tau = total;
  int steps = 0;

  while (done < total) {
    if (++steps > opt.max_steps) throw NumericalFailure("krylov_evolve: step budget exhausted");
    const detail::LanczosBasis basis = detail::lanczos(apply, x, opt.subspace);
    const Index k = static_cast<Index>(basis.alpha.size());
    RMatrix tri = RMatrix::Zero(k, k);
    for (Index i = 0; i < k; ++i) {
      tri(i, i) = basis.alpha[i];
      if (i + 1 < k) tri(i, i + 1) = tri(i + 1, i) = basis.beta[i];
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> es(tri);
    if (es.info() != Eigen::Success) throw NumericalFailure("krylov_evolve: tridiagonal eigensolve failed");

    auto propagate = [&](double dt) {
      CVector c(k);
      for (Index i = 0; i < k; ++i) c(i) = std::polar(1.0, dir * dt * es.eigenvalues()(i)) * es.eigenvectors()(0, i);
      return CVector(es.eigenvectors().cast<cplx>() * c);
    };

    tau = std::min(tau, total - done);
    CVector small;
    for (;;) {
      small = propagate(tau);
      const double residual = basis.invariant ? 0.0 : basis.beta.back() * std::abs(small(k - 1));
      if (residual <= opt.step_tolerance) break;
      tau *= 0.5;
      if (tau < 1e-14 * std::max(1.0, total))
        throw NumericalFailure("krylov_evolve: step size underflow, subspace too small for requested accuracy");
    }

    CVector next = CVector::Zero(x.size());
    for (Index i = 0; i < k; ++i) next += small(i) * basis.q[static_cast<std::size_t>(i)];
    const double drift = std::abs(next.norm() - 1.0);
    if (drift > opt.step_tolerance) throw NumericalFailure("krylov_evolve: norm drift exceeded tolerance");
    x = std::move(next);
    done += tau;
    if (basis.invariant) tau = total - done;
    else tau *= 1.5;  // grow again after a successful step
  }
  return norm0 * x;
}

/// Returns e^{itH} v. Both strategies satisfy the same contract; `automatic`
/// selects the dense eigendecomposition up to kDenseEvolveMaxDim.
inline CVector evolve_action(const HermitianMatrix& h, double t, const CVector& v,
                             EvolveMethod method = EvolveMethod::automatic, const KrylovOptions& opt = {}) {
  if (h.dim() != v.size()) throw DimensionMismatch("evolve_action: dimension mismatch");
  if (!std::isfinite(t)) throw PreconditionError("evolve_action: non-finite time");
  if (method == EvolveMethod::automatic)
    method = h.dim() <= kDenseEvolveMaxDim ? EvolveMethod::dense : EvolveMethod::krylov;
  if (method == EvolveMethod::dense) return DenseEvolver(h).apply(t, v);
  const CMatrix& m = h.matrix();
  return krylov_evolve([&m](const CVector& x, CVector& y) { y.noalias() = m * x; }, t, v, opt);
}

/// Sparse variant; the dense path densifies the operator.
inline CVector evolve_action(const SparseCMatrix& h, double t, const CVector& v,
                             EvolveMethod method = EvolveMethod::automatic, const KrylovOptions& opt = {}) {
  if (h.rows() != h.cols() || h.rows() != v.size()) throw DimensionMismatch("evolve_action: dimension mismatch");
  if (!std::isfinite(t)) throw PreconditionError("evolve_action: non-finite time");
  if (method == EvolveMethod::automatic)
    method = h.rows() <= kDenseEvolveMaxDim ? EvolveMethod::dense : EvolveMethod::krylov;
  if (method == EvolveMethod::dense) return DenseEvolver(HermitianMatrix(CMatrix(h))).apply(t, v);
  return krylov_evolve([&h](const CVector& x, CVector& y) { y.noalias() = h * x; }, t, v, opt);
}

}  // namespace entscale::linalg
