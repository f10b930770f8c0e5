#pragma once

#include <algorithm>
#include <bit>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entscale/linalg.hpp"

namespace entscale::spin {

using Matrix4 = Eigen::Matrix4cd;

enum class Pauli { I, X, Y, Z };

inline Eigen::Matrix2cd pauli_matrix(Pauli p) {
  Eigen::Matrix2cd m;
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline char pauli_label(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

inline std::optional<Pauli> parse_pauli(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: return std::nullopt;
  }
}

/// coeff * P_left (site) (x) P_right (site + 1)
struct PauliTerm {
  double coeff = 0.0;
  Pauli left = Pauli::I;
  Pauli right = Pauli::I;
  int site = 0;

  friend bool operator==(const PauliTerm&, const PauliTerm&) = default;
};

inline Matrix4 two_site(Pauli left, Pauli right) {
  Matrix4 m;
  const Eigen::Matrix2cd a = pauli_matrix(left), b = pauli_matrix(right);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return m;
}

/// Inclusive range of chain sites [lo, hi].
struct SiteRange {
  int lo = 0;
  int hi = 0;

  int size() const noexcept { return hi - lo + 1; }
  bool contains(int s) const noexcept { return s >= lo && s <= hi; }
  friend bool operator==(const SiteRange&, const SiteRange&) = default;
};

inline constexpr int kMinSites = 2;
inline constexpr int kMaxSites = 16;

/// Open chain H = sum_j H_j, H_j acting on sites (j, j+1). Basis index bit
/// (n-1-s) carries site s, so site 0 is the most significant bit; bit value 0
/// is spin up (sigma^3 = +1).
class LocalHamiltonian {
 public:
  LocalHamiltonian(int n, std::vector<Matrix4> terms) : n_(n), terms_(std::move(terms)) {
    if (n_ < kMinSites || n_ > kMaxSites)
      throw PreconditionError("LocalHamiltonian: n must lie in [" + std::to_string(kMinSites) + ", " +
                              std::to_string(kMaxSites) + "]");
    if (static_cast<int>(terms_.size()) != n_ - 1)
      throw PreconditionError("LocalHamiltonian: expected n-1 two-site terms");
    for (std::size_t j = 0; j < terms_.size(); ++j) {
      if (!terms_[j].allFinite() || linalg::hermiticity_defect(terms_[j]) > linalg::HermitianMatrix::kTolerance)
        throw PreconditionError("LocalHamiltonian: term " + std::to_string(j) + " is not Hermitian");
      h_norm_ = std::max(h_norm_, linalg::operator_norm(terms_[j]));
    }
  }

  int sites() const noexcept { return n_; }
  Index dim() const noexcept { return Index{1} << n_; }
  const std::vector<Matrix4>& terms() const noexcept { return terms_; }
  const Matrix4& term(int j) const { return terms_.at(static_cast<std::size_t>(j)); }
  /// max_j ||H_j||
  double h_norm() const noexcept { return h_norm_; }
  SiteRange full_range() const noexcept { return {0, n_ - 1}; }

  /// Every term shifted by -lambda_min(H_j) so that it is positive semidefinite.
  LocalHamiltonian psd_shifted() const {
    std::vector<Matrix4> shifted = terms_;
    for (auto& t : shifted) {
      Eigen::SelfAdjointEigenSolver<Matrix4> es(t, Eigen::EigenvaluesOnly);
      t -= es.eigenvalues()(0) * Matrix4::Identity();
    }
    return LocalHamiltonian(n_, std::move(shifted));
  }

  /// Sum of the selected terms on the Hilbert space of `region` (2^|region|
  /// dimensional). Only terms with both sites inside `region` are admissible.
  template <class Select>
  SparseCMatrix sparse(SiteRange region, Select&& select) const {
    check_region(region);
    const int width = region.size();
    const Index d = Index{1} << width;
    std::vector<Eigen::Triplet<cplx, Index>> triplets;
    for (int j = region.lo; j < region.hi; ++j) {
      if (!select(j)) continue;
      const int shift = region.hi - (j + 1);  // bit position of site j+1 within region
      const Matrix4& h = terms_[static_cast<std::size_t>(j)];
      for (Index x = 0; x < d; ++x) {
        const Index a = (x >> shift) & 3;
        const Index base = x & ~(Index{3} << shift);
        for (Index b = 0; b < 4; ++b) {
          const cplx v = h(b, a);
          if (v != cplx(0.0)) triplets.emplace_back(base | (b << shift), x, v);
        }
      }
    }
    SparseCMatrix m(d, d);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
  }

  SparseCMatrix sparse(SiteRange region) const {
    return sparse(region, [](int) { return true; });
  }
  SparseCMatrix sparse() const { return sparse(full_range()); }

  template <class Select>
  linalg::HermitianMatrix dense(SiteRange region, Select&& select) const {
    return linalg::HermitianMatrix(CMatrix(sparse(region, std::forward<Select>(select))));
  }
  linalg::HermitianMatrix dense(SiteRange region) const {
    return dense(region, [](int) { return true; });
  }
  linalg::HermitianMatrix dense() const { return dense(full_range()); }

  /// Single term H_j embedded in `region`.
  linalg::HermitianMatrix term_operator(int j, SiteRange region) const {
    if (j < region.lo || j + 1 > region.hi) throw PreconditionError("term_operator: term outside region");
    return dense(region, [j](int k) { return k == j; });
  }

 private:
  void check_region(SiteRange r) const {
    if (r.lo < 0 || r.hi >= n_ || r.lo > r.hi) throw PreconditionError("LocalHamiltonian: invalid site range");
  }

  int n_;
  std::vector<Matrix4> terms_;
  double h_norm_ = 0.0;
};

inline LocalHamiltonian from_pauli_terms(int n, const std::vector<PauliTerm>& list) {
  if (n < kMinSites || n > kMaxSites) throw PreconditionError("build_hamiltonian: n out of range");
  std::vector<Matrix4> terms(static_cast<std::size_t>(n - 1), Matrix4::Zero());
  for (const PauliTerm& p : list) {
    if (p.site < 0 || p.site > n - 2)
      throw PreconditionError("build_hamiltonian: term site " + std::to_string(p.site) + " out of range");
    terms[static_cast<std::size_t>(p.site)] += p.coeff * two_site(p.left, p.right);
  }
  return LocalHamiltonian(n, std::move(terms));
}

/// Pauli-term expansion of a preset: xy_cross = sum X_j Y_{j+1}, xx = sum X_j X_{j+1},
/// zfield = -sum Z_j with site j's field on term j and the last site's on term n-2.
inline std::vector<PauliTerm> preset_terms(std::string_view name, int n) {
  std::vector<PauliTerm> list;
  if (n < kMinSites || n > kMaxSites) throw PreconditionError("build_hamiltonian: n out of range");
  if (name == "xy_cross") {
    for (int j = 0; j + 1 < n; ++j) list.push_back({1.0, Pauli::X, Pauli::Y, j});
  } else if (name == "xx") {
    for (int j = 0; j + 1 < n; ++j) list.push_back({1.0, Pauli::X, Pauli::X, j});
  } else if (name == "zfield") {
    for (int j = 0; j + 1 < n; ++j) list.push_back({-1.0, Pauli::Z, Pauli::I, j});
    list.push_back({-1.0, Pauli::I, Pauli::Z, n - 2});
  } else {
    throw PreconditionError("build_hamiltonian: unknown preset '" + std::string(name) + "'");
  }
  return list;
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"xy_cross", "xx", "zfield"};
  return names;
}

inline LocalHamiltonian build_hamiltonian(std::string_view preset, int n) {
  return from_pauli_terms(n, preset_terms(preset, n));
}

/// Z = -sum_j sigma^3_j on the full chain, as a diagonal.
inline RVector z_field_diagonal(int n) {
  const Index d = Index{1} << n;
  RVector z(d);
  for (Index x = 0; x < d; ++x) z(x) = -static_cast<double>(n - 2 * std::popcount(static_cast<unsigned long long>(x)));
  return z;
}

}  // namespace entscale::spin
