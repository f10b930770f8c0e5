#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "entscale/linalg/fourier.hpp"

namespace entscale::fermion {

/// +1 on (0, pi/2] and (3pi/2, 2pi], -1 on (pi/2, 3pi/2].
inline PiecewiseSymbol paper_symbol() {
  return PiecewiseSymbol({0.0, kPi / 2, 3 * kPi / 2, kTwoPi}, {1.0, -1.0, 1.0});
}

/// Single jump pair: +1 on (0, pi], -1 on (pi, 2pi]. Not even, so its Fourier
/// coefficients are complex.
inline PiecewiseSymbol reference_symbol() { return PiecewiseSymbol({0.0, kPi, kTwoPi}, {1.0, -1.0}); }

inline std::vector<std::string> symbol_preset_names() { return {"paper", "reference", "constant"}; }

inline PiecewiseSymbol symbol_preset(const std::string& name) {
  if (name == "paper") return paper_symbol();
  if (name == "reference") return reference_symbol();
  if (name == "constant") return PiecewiseSymbol::constant(1.0);
  throw PreconditionError("unknown symbol preset '" + name + "'");
}

/// Imaginary residue tolerated before a Fourier coefficient is declared real.
inline constexpr double kRealnessTolerance = 1e-12;

/// M_k = (1/2pi) int phi(x) e^{-ixk} dx for k >= 0.
inline double coupling_from_symbol(const PiecewiseSymbol& phi, long k) {
  if (k < 0) throw PreconditionError("coupling_from_symbol: k must be nonnegative");
  const cplx c = linalg::fourier_coefficient(phi, k);
  if (std::abs(c.imag()) > kRealnessTolerance)
    throw NumericalFailure("coupling_from_symbol: coefficient " + std::to_string(k) +
                           " is not real (symbol is not even)");
  return c.real();
}

/// M_k = -i (e^{ik pi/2} - 1)^3 (1 + e^{i pi k/2}) / (2 e^{2 pi i k} k pi), evaluated as written.
inline double paper_coupling_closed_form(long k) {
  if (k < 1) throw PreconditionError("paper_coupling_closed_form: formula is singular at k = 0");
  const double kd = static_cast<double>(k);
  const cplx q = std::polar(1.0, kd * kPi / 2);
  const cplx num = cplx(0, -1) * std::pow(q - 1.0, 3) * (1.0 + q);
  const cplx den = 2.0 * std::polar(1.0, kTwoPi * kd) * kd * kPi;
  const cplx v = num / den;
  if (std::abs(v.imag()) > kRealnessTolerance)
    throw NumericalFailure("paper_coupling_closed_form: non-real value at k = " + std::to_string(k));
  return v.real();
}

/// Fourier coefficients of sign(phi) for the `paper` preset: 2 sin(pi l/2) / (pi l), and 0 at l = 0.
inline double paper_correlation_closed_form(long l) {
  if (l == 0) return 0.0;
  const double ld = static_cast<double>(l);
  // sin(pi l / 2) is exactly 0, +1 or -1 for integer l.
  const long r = ((l % 4) + 4) % 4;
  const double s = r == 1 ? 1.0 : (r == 3 ? -1.0 : 0.0);
  return 2.0 * s / (kPi * ld);
}

/// M_0..M_kMax of an even real symbol; M_{-k} = M_k.
class CouplingSequence {
 public:
  explicit CouplingSequence(std::vector<double> entries) : m_(std::move(entries)) {
    if (m_.empty()) throw PreconditionError("CouplingSequence: need at least M_0");
  }

  static CouplingSequence from_symbol(const PiecewiseSymbol& phi, long k_max) {
    if (k_max < 0) throw PreconditionError("CouplingSequence: kMax must be nonnegative");
    std::vector<double> m(static_cast<std::size_t>(k_max + 1));
    for (long k = 0; k <= k_max; ++k) m[static_cast<std::size_t>(k)] = coupling_from_symbol(phi, k);
    return CouplingSequence(std::move(m));
  }

  long k_max() const noexcept { return static_cast<long>(m_.size()) - 1; }
  const std::vector<double>& entries() const noexcept { return m_; }

  /// M_{|k|}, zero beyond kMax.
  double operator[](long k) const {
    const auto a = static_cast<std::size_t>(k < 0 ? -k : k);
    return a < m_.size() ? m_[a] : 0.0;
  }

  /// Smallest C with |M_k| <= C / k for 1 <= k <= kMax.
  double decay_constant() const {
    double c = 0.0;
    for (std::size_t k = 1; k < m_.size(); ++k) c = std::max(c, std::abs(m_[k]) * static_cast<double>(k));
    return c;
  }

 private:
  std::vector<double> m_;
};

}  // namespace entscale::fermion
