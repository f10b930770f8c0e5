#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "entscale/spin/hamiltonian.hpp"

namespace entscale::spin {

inline constexpr double kNormTolerance = 1e-10;

/// Normalized amplitudes over the 2^n computational basis (site 0 = MSB).
class StateVector {
 public:
  StateVector(int n, CVector amplitudes) : n_(n), amp_(std::move(amplitudes)) {
    if (n_ < 1 || n_ > 30) throw PreconditionError("StateVector: n out of range");
    if (amp_.size() != (Index{1} << n_)) throw DimensionMismatch("StateVector: expected 2^n amplitudes");
    if (std::abs(amp_.norm() - 1.0) > kNormTolerance)
      throw NumericalFailure("StateVector: norm deviates from 1 by more than 1e-10");
  }

  /// |0...0>, every spin up.
  static StateVector all_up(int n) {
    CVector v = CVector::Zero(Index{1} << n);
    v(0) = 1.0;
    return StateVector(n, std::move(v));
  }

  int sites() const noexcept { return n_; }
  Index dim() const noexcept { return amp_.size(); }
  const CVector& amplitudes() const noexcept { return amp_; }

 private:
  int n_;
  CVector amp_;
};

/// Block A = sites 0..m-1, block B = sites m..n-1.
class CutPartition {
 public:
  CutPartition(int n, int m) : n_(n), m_(m) {
    if (m < 1 || m >= n)
      throw PreconditionError("CutPartition: need 1 <= m < n (m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")");
  }

  int sites() const noexcept { return n_; }
  int block_size() const noexcept { return m_; }
  /// Index of the interaction term H_I = H_{m-1}.
  int interaction_term() const noexcept { return m_ - 1; }

  /// Sites within distance l of the cut, clipped to the chain. The two sites
  /// adjacent to the cut (m-1 and m) are at distance 1.
  SiteRange neighbourhood(int l) const noexcept { return {std::max(0, m_ - l), std::min(n_ - 1, m_ + l - 1)}; }
  /// Smallest l whose neighbourhood is the whole chain.
  int covering_distance() const noexcept { return std::max(m_, n_ - m_); }

 private:
  int n_;
  int m_;
};

}  // namespace entscale::spin
