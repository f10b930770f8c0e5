#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "entscale/spin/state.hpp"

namespace entscale::spin {

/// Nonincreasing squared Schmidt coefficients across a cut.
struct SchmidtSpectrum {
  int cut = 0;
  std::vector<double> coefficients;

  double largest() const { return coefficients.empty() ? 0.0 : coefficients.front(); }
  /// Number of coefficients above 1e-12.
  int effective_rank() const {
    return static_cast<int>(std::count_if(coefficients.begin(), coefficients.end(), [](double s) { return s > 1e-12; }));
  }
  double sum() const {
    double s = 0.0;
    for (double c : coefficients) s += c;
    return s;
  }
};

/// Amplitudes reshaped to the 2^m x 2^(n-m) matrix C (row = A bits, column = B bits).
inline CMatrix amplitude_matrix(const CVector& amplitudes, int n, int m) {
  const Index rows = Index{1} << m, cols = Index{1} << (n - m);
  CMatrix c(rows, cols);
  // site 0 is the most significant bit, so x = row * 2^(n-m) + col
  for (Index r = 0; r < rows; ++r)
    for (Index k = 0; k < cols; ++k) c(r, k) = amplitudes(r * cols + k);
  return c;
}

inline SchmidtSpectrum schmidt_spectrum(const StateVector& psi, const CutPartition& cut) {
  if (cut.sites() != psi.sites()) throw DimensionMismatch("schmidt_spectrum: cut and state disagree on n");
  const RVector sv = linalg::singular_values(amplitude_matrix(psi.amplitudes(), psi.sites(), cut.block_size()));
  SchmidtSpectrum s;
  s.cut = cut.block_size();
  s.coefficients.resize(static_cast<std::size_t>(sv.size()));
  for (Index i = 0; i < sv.size(); ++i) s.coefficients[static_cast<std::size_t>(i)] = sv(i) * sv(i);
  const double total = s.sum();
  if (std::abs(total - 1.0) > 1e-10) throw NumericalFailure("schmidt_spectrum: coefficients do not sum to 1");
  return s;
}

/// Von Neumann (alpha = 1) or Renyi entropy in bits.
inline double block_entropy(const SchmidtSpectrum& s, double alpha = 1.0) {
  if (!(alpha > 0.0)) throw PreconditionError("block_entropy: entropy order must be positive");
  if (alpha == 1.0) {
    double h = 0.0;
    for (double c : s.coefficients)
      if (c > 0.0) h -= c * std::log2(c);
    return std::max(0.0, h);
  }
  double acc = 0.0;
  for (double c : s.coefficients)
    if (c > 0.0) acc += std::pow(c, alpha);
  return std::max(0.0, std::log2(acc) / (1.0 - alpha));
}

}  // namespace entscale::spin
