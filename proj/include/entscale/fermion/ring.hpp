#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "entscale/fermion/symbol.hpp"

namespace entscale::fermion {

/// |eps_k| below this counts as a zero mode.
inline constexpr double kZeroMode = 1e-12;

struct Dispersion {
  std::vector<double> eps;
  double max_imag = 0.0;  // largest discarded imaginary residue
  int zero_modes = 0;
  bool gapless() const noexcept { return zero_modes > 0; }
};

/// eps_k = sum_j e^{2 pi i jk/n} M_j on an n-site ring, with M_j wrapped as
/// M_{min(j, n-j)}. Gaplessness is reported, not thrown.
inline Dispersion dispersion(const CouplingSequence& m, long n) {
  if (n < 1) throw PreconditionError("dispersion: ring size must be positive");
  std::vector<double> ring(static_cast<std::size_t>(n));
  for (long j = 0; j < n; ++j) ring[static_cast<std::size_t>(j)] = m[std::min(j, n - j)];
  Dispersion d;
  d.eps.resize(static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k) {
    cplx s = 0.0;
    for (long j = 0; j < n; ++j) {
      const long phase = (j * k) % n;
      s += ring[static_cast<std::size_t>(j)] * std::polar(1.0, kTwoPi * static_cast<double>(phase) / static_cast<double>(n));
    }
    d.max_imag = std::max(d.max_imag, std::abs(s.imag()));
    d.eps[static_cast<std::size_t>(k)] = s.real();
    if (std::abs(s.real()) < kZeroMode) ++d.zero_modes;
  }
  if (d.max_imag > 1e-10) throw NumericalFailure("dispersion: eigenvalues of the ring coupling matrix are not real");
  return d;
}

/// t_l^{(n)} = (1/n) sum_k e^{-2 pi i lk/n} sign(eps_k), l = 0..m-1. Zero modes get
/// sign 0 (half filled).
inline std::vector<cplx> finite_ring_correlations(const Dispersion& d, long m) {
  const long n = static_cast<long>(d.eps.size());
  std::vector<cplx> t(static_cast<std::size_t>(m));
  for (long l = 0; l < m; ++l) {
    cplx s = 0.0;
    for (long k = 0; k < n; ++k) {
      const double e = d.eps[static_cast<std::size_t>(k)];
      const double sg = std::abs(e) < kZeroMode ? 0.0 : (e > 0 ? 1.0 : -1.0);
      if (sg == 0.0) continue;
      s += sg * std::polar(1.0, -kTwoPi * static_cast<double>((l * k) % n) / static_cast<double>(n));
    }
    t[static_cast<std::size_t>(l)] = s / static_cast<double>(n);
  }
  return t;
}

struct RingCheck {
  long n = 0;
  long m = 0;
  double max_deviation = 0.0;
  int zero_modes = 0;
};

/// max_{l<m} |t_l^{(n)} - t_l| for the ring built from the symbol's couplings.
inline RingCheck finite_ring_crosscheck(const PiecewiseSymbol& phi, long n, long m) {
  if (m < 1) throw PreconditionError("finite_ring_crosscheck: m must be positive");
  if (n < 4 * m) throw PreconditionError("finite_ring_crosscheck: need n >= 4m");
  const CouplingSequence couplings = CouplingSequence::from_symbol(phi, n / 2);
  const Dispersion d = dispersion(couplings, n);
  const auto finite = finite_ring_correlations(d, m);
  const PiecewiseSymbol s = phi.sign();
  RingCheck r{n, m, 0.0, d.zero_modes};
  for (long l = 0; l < m; ++l)
    r.max_deviation =
        std::max(r.max_deviation, std::abs(finite[static_cast<std::size_t>(l)] - linalg::fourier_coefficient(s, l)));
  return r;
}

}  // namespace entscale::fermion
