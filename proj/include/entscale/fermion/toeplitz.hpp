#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "entscale/fermion/symbol.hpp"
#include "entscale/fit.hpp"
#include "entscale/linalg/dense.hpp"
#include "entscale/parallel.hpp"

namespace entscale::fermion {

/// Hermitian Toeplitz matrix (T)_{jk} = t_{j-k}, t_{-l} = conj(t_l). Real symmetric
/// whenever every t_l is real, which holds for even symbols.
class CorrelationToeplitz {
 public:
  explicit CorrelationToeplitz(std::vector<cplx> first_column) : t_(std::move(first_column)) {
    if (t_.empty()) throw PreconditionError("CorrelationToeplitz: m must be positive");
    if (std::abs(t_[0].imag()) > kRealnessTolerance)
      throw NumericalFailure("CorrelationToeplitz: diagonal entry is not real");
    t_[0] = t_[0].real();
    real_ = std::all_of(t_.begin(), t_.end(), [](cplx c) { return std::abs(c.imag()) <= kRealnessTolerance; });
    if (real_)
      for (auto& c : t_) c = c.real();
  }

  long m() const noexcept { return static_cast<long>(t_.size()); }
  bool real() const noexcept { return real_; }
  const std::vector<cplx>& entries() const noexcept { return t_; }

  cplx t(long l) const {
    const cplx v = t_.at(static_cast<std::size_t>(l < 0 ? -l : l));
    return l < 0 ? std::conj(v) : v;
  }

  RMatrix real_matrix() const {
    if (!real_) throw PreconditionError("CorrelationToeplitz: complex entries, use matrix()");
    const Index n = m();
    RMatrix a(n, n);
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) a(j, k) = t_[static_cast<std::size_t>(j > k ? j - k : k - j)].real();
    return a;
  }

  CMatrix matrix() const {
    const Index n = m();
    CMatrix a(n, n);
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) a(j, k) = t(j - k);
    return a;
  }

  RVector eigenvalues() const {
    if (real_) return linalg::symmetric_eigenvalues(real_matrix());
    return linalg::hermitian_eigenvalues(linalg::HermitianMatrix(matrix()));
  }

 private:
  std::vector<cplx> t_;
  bool real_ = true;
};

/// t_l = (1/2pi) int e^{-ilx} sign(phi(x)) dx, l = 0..m-1.
inline CorrelationToeplitz build_correlation_matrix(const PiecewiseSymbol& phi, long m) {
  if (m < 1) throw PreconditionError("build_correlation_matrix: m must be positive");
  if (!phi.gapped()) throw PreconditionError("build_correlation_matrix: symbol vanishes on a piece");
  const PiecewiseSymbol s = phi.sign();
  const auto q = linalg::QuadratureSpec::for_symbol(s);
  std::vector<cplx> t(static_cast<std::size_t>(m));
  for (long l = 0; l < m; ++l) t[static_cast<std::size_t>(l)] = linalg::fourier_coefficient(s, l, q);
  return CorrelationToeplitz(std::move(t));
}

/// Width of the band outside [-1, 1] that is clamped rather than rejected.
inline constexpr double kContractionBand = 1e-6;

inline double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

/// sum_j H2((1 + nu_j) / 2) in bits over the eigenvalues nu_j of T.
inline double gaussian_block_entropy(const RVector& nu) {
  double s = 0.0;
  for (Index i = 0; i < nu.size(); ++i) {
    const double v = nu(i);
    if (!(std::abs(v) <= 1.0 + kContractionBand))
      throw NumericalFailure("gaussian_block_entropy: correlation eigenvalue " + std::to_string(v) + " outside [-1, 1]");
    s += binary_entropy(0.5 * (1.0 + std::clamp(v, -1.0, 1.0)));
  }
  return s;
}

inline double gaussian_block_entropy(const CorrelationToeplitz& t) { return gaussian_block_entropy(t.eigenvalues()); }

/// Pivots smaller than this fraction of the largest one mark a singular matrix.
inline constexpr double kRelativeSingularPivot = 1e-12;

struct DeterminantDiagnostic {
  double log_abs_det = 0.0;  // natural log
  double d_bits = 0.0;       // -log2|det T| / 2, +inf when singular
  bool singular = false;
  int sign = 1;
};

inline DeterminantDiagnostic determinant_diagnostic(const CorrelationToeplitz& t) {
  const linalg::LogDeterminant ld =
      t.real() ? linalg::log_abs_determinant(t.real_matrix()) : linalg::log_abs_determinant(t.matrix());
  DeterminantDiagnostic out;
  out.log_abs_det = ld.log_abs_det;
  out.sign = ld.sign;
  out.singular = ld.sign == 0 || ld.min_pivot < kRelativeSingularPivot * ld.max_pivot;
  out.d_bits = out.singular ? std::numeric_limits<double>::infinity() : -0.5 * ld.log_abs_det / std::log(2.0);
  return out;
}

struct ScalingRow {
  long m = 0;
  double s_exact = 0.0;
  double d_det = 0.0;
  double log_abs_det = 0.0;
  bool singular = false;
  bool bound_holds() const noexcept { return singular || s_exact >= d_det; }
};

struct ScalingReport {
  std::vector<ScalingRow> rows;  // ascending m
  double a = 0.0;  // S ~ a log2 m + b
  double b = 0.0;
  double r_squared_entropy = 0.0;
  double d = 0.0;  // ln|det T| ~ -d ln m + e, nonsingular rows only
  double e = 0.0;
  double r_squared_det = 0.0;
  int nonsingular_rows = 0;
  int bound_violations = 0;  // rows with m >= 2, nonsingular, S < D
};

inline ScalingRow scaling_row(const PiecewiseSymbol& phi, long m) {
  const CorrelationToeplitz t = build_correlation_matrix(phi, m);
  const DeterminantDiagnostic det = determinant_diagnostic(t);
  return {m, gaussian_block_entropy(t), det.d_bits, det.log_abs_det, det.singular};
}

inline ScalingReport fh_scaling_fit(const PiecewiseSymbol& phi, std::vector<long> m_list) {
  std::sort(m_list.begin(), m_list.end());
  m_list.erase(std::unique(m_list.begin(), m_list.end()), m_list.end());
  if (m_list.size() < 6) throw PreconditionError("fh_scaling_fit: need at least 6 distinct block sizes");
  if (m_list.front() < 1) throw PreconditionError("fh_scaling_fit: block sizes must be positive");

  ScalingReport rep;
  rep.rows = parallel_map(m_list.size(), [&](std::size_t i) { return scaling_row(phi, m_list[i]); });

  std::vector<double> lg, s, ln_m, ln_det;
  for (const auto& r : rep.rows) {
    lg.push_back(std::log2(static_cast<double>(r.m)));
    s.push_back(r.s_exact);
    if (r.singular) continue;
    ++rep.nonsingular_rows;
    ln_m.push_back(std::log(static_cast<double>(r.m)));
    ln_det.push_back(r.log_abs_det);
    if (r.m >= 2 && !r.bound_holds()) ++rep.bound_violations;
  }
  if (rep.nonsingular_rows < 3) throw NumericalFailure("fh_scaling_fit: fewer than 3 nonsingular Toeplitz matrices");
  const fit::Line fs = fit::line(lg, s);
  rep.a = fs.slope;
  rep.b = fs.intercept;
  rep.r_squared_entropy = fs.r_squared;
  const fit::Line fd = fit::line(ln_m, ln_det);
  rep.d = -fd.slope;
  rep.e = fd.intercept;
  rep.r_squared_det = fd.r_squared;
  return rep;
}

}  // namespace entscale::fermion
