#pragma once

#include <cmath>
#include <vector>

#include "entscale/spin/schmidt.hpp"

namespace entscale::spin {

/// Largest chain handled by the dense operator routines in this header.
inline constexpr int kMaxDenseSites = 12;

inline void require_dense(const LocalHamiltonian& h, const char* who) {
  if (h.sites() > kMaxDenseSites)
    throw PreconditionError(std::string(who) + ": chain too long for dense operators (n <= 12)");
}

/// I_{2^lo} (x) local (x) I_{2^(n-1-hi)}.
inline CMatrix embed(const CMatrix& local, SiteRange region, int n) {
  if (local.rows() != (Index{1} << region.size())) throw DimensionMismatch("embed: operator/region size mismatch");
  const Index left = Index{1} << region.lo;
  const Index right = Index{1} << (n - 1 - region.hi);
  const Index d = local.rows();
  CMatrix out = CMatrix::Zero(left * d * right, left * d * right);
  for (Index a = 0; a < left; ++a)
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) {
        const cplx v = local(i, j);
        if (v == cplx(0.0)) continue;
        const Index row = (a * d + i) * right, col = (a * d + j) * right;
        for (Index b = 0; b < right; ++b) out(row + b, col + b) = v;
      }
  return out;
}

/// Same embedding for an operator defined on `inner`, placed inside the larger `outer` region.
inline CMatrix embed(const CMatrix& local, SiteRange inner, SiteRange outer) {
  if (inner.lo < outer.lo || inner.hi > outer.hi) throw PreconditionError("embed: inner region not contained in outer");
  return embed(local, {inner.lo - outer.lo, inner.hi - outer.lo}, outer.size());
}

struct InteractionSplit {
  SparseCMatrix h_a;  // sum_{j <= m-2} H_j
  SparseCMatrix h_b;  // sum_{j >= m} H_j
  SparseCMatrix h_i;  // H_{m-1}
};

inline InteractionSplit interaction_split(const LocalHamiltonian& h, const CutPartition& cut) {
  if (cut.sites() != h.sites()) throw DimensionMismatch("interaction_split: cut and hamiltonian disagree on n");
  const int m = cut.block_size();
  const SiteRange all = h.full_range();
  return {h.sparse(all, [m](int j) { return j <= m - 2; }), h.sparse(all, [m](int j) { return j >= m; }),
          h.sparse(all, [m](int j) { return j == m - 1; })};
}

/// e^{-it(H_R - H_I)} e^{it H_R} on the sites of `region`, where H_R collects the
/// terms inside `region`. The interaction term must lie inside the region.
inline CMatrix region_patch(const LocalHamiltonian& h, const CutPartition& cut, SiteRange region, double t) {
  const int interaction = cut.interaction_term();
  const linalg::HermitianMatrix hr = h.dense(region);
  const linalg::HermitianMatrix hi = h.term_operator(interaction, region);
  const linalg::DenseEvolver full(hr), decoupled(hr - hi);
  return decoupled.unitary(-t) * full.unitary(t);
}

/// V(t) = e^{-it(H - H_I)} e^{itH} on the full chain.
inline CMatrix patch_unitary(const LocalHamiltonian& h, const CutPartition& cut, double t) {
  require_dense(h, "patch_unitary");
  if (cut.sites() != h.sites()) throw DimensionMismatch("patch_unitary: cut and hamiltonian disagree on n");
  return region_patch(h, cut, h.full_range(), t);
}

/// V_{Lambda_l}(t) on the full chain: the patch built from the terms inside the
/// distance-l neighbourhood of the cut, with H_I unchanged.
inline CMatrix restricted_patch(const LocalHamiltonian& h, const CutPartition& cut, double t, int l) {
  require_dense(h, "restricted_patch");
  if (cut.sites() != h.sites()) throw DimensionMismatch("restricted_patch: cut and hamiltonian disagree on n");
  if (l < 1 || l > cut.covering_distance()) throw PreconditionError("restricted_patch: l out of range");
  const SiteRange region = cut.neighbourhood(l);
  const SiteRange all = h.full_range();
  const auto inside = [region](int j) { return j >= region.lo && j + 1 <= region.hi; };
  const linalg::HermitianMatrix hr = h.dense(all, inside);
  const linalg::HermitianMatrix hi = h.term_operator(cut.interaction_term(), all);
  const linalg::DenseEvolver full(hr), decoupled(hr - hi);
  return decoupled.unitary(-t) * full.unitary(t);
}

/// ||V - (V_R (x) I)|| where V_R is V's partial trace over the complement of
/// `region`, normalized by the complement dimension. Zero iff V acts only on `region`.
inline double support_defect(const CMatrix& v, SiteRange region, int n) {
  const Index left = Index{1} << region.lo, right = Index{1} << (n - 1 - region.hi);
  const Index d = Index{1} << region.size();
  CMatrix reduced = CMatrix::Zero(d, d);
  for (Index a = 0; a < left; ++a)
    for (Index b = 0; b < right; ++b)
      for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) reduced(i, j) += v((a * d + i) * right + b, (a * d + j) * right + b);
  reduced /= static_cast<double>(left * right);
  return linalg::operator_norm(CMatrix(v - embed(reduced, region, n)));
}

struct HierarchyRow {
  int l = 0;
  double w_deviation = 0.0;  // ||W_l(t) - I||
  double lr_bound = 0.0;     // delta_l |t|^{l+2} / (l+2)!
  bool within_bound() const { return w_deviation <= std::min(2.0, lr_bound); }
};

struct HierarchyReport {
  double t = 0.0;
  int sites = 0;
  int cut = 0;
  double commutator_norm = 0.0;      // ||M||, M = [H_{Lambda_k}, H_I] at k = lMax
  double commutator_norm_k2 = 0.0;   // same at k = 2 (differs only through boundary clipping)
  bool clipping_changes_m = false;
  double h_norm = 0.0;
  std::vector<HierarchyRow> rows;
  double reassembly_error = 0.0;     // ||V(t) - W_lMax ... W_1||, or against V_{Lambda_lMax} when it does not cover the chain
  bool reassembled_full_patch = false;
  int violations() const {
    int v = 0;
    for (const auto& r : rows) v += r.within_bound() ? 0 : 1;
    return v;
  }
};

/// The local unitaries V_{Lambda_l}(t), l = 1..lMax, each on its own neighbourhood.
class PatchLadder {
 public:
  PatchLadder(const LocalHamiltonian& h, const CutPartition& cut, double t, int l_max) : n_(h.sites()), t_(t) {
    require_dense(h, "w_hierarchy");
    if (cut.sites() != h.sites()) throw DimensionMismatch("w_hierarchy: cut and hamiltonian disagree on n");
    if (l_max < 1 || l_max > cut.covering_distance()) throw PreconditionError("w_hierarchy: lMax out of range");
    for (int l = 1; l <= l_max; ++l) {
      regions_.push_back(cut.neighbourhood(l));
      patches_.push_back(region_patch(h, cut, regions_.back(), t));
    }
  }

  int size() const noexcept { return static_cast<int>(patches_.size()); }
  double time() const noexcept { return t_; }
  SiteRange region(int l) const { return regions_.at(static_cast<std::size_t>(l - 1)); }
  const CMatrix& patch(int l) const { return patches_.at(static_cast<std::size_t>(l - 1)); }

  /// W_l on the sites of Lambda_l.
  CMatrix w(int l) const {
    if (l == 1) return patch(1);
    return patch(l) * embed(patch(l - 1), region(l - 1), region(l)).adjoint();
  }

  /// |psi_l> = V_{Lambda_l}|0> on the full chain.
  CVector state(int l) const {
    const SiteRange r = region(l);
    const Index shift = n_ - 1 - r.hi;
    CVector psi = CVector::Zero(Index{1} << n_);
    const CMatrix& v = patch(l);
    for (Index i = 0; i < v.rows(); ++i) psi(i << shift) = v(i, 0);
    return psi;
  }

 private:
  int n_;
  double t_;
  std::vector<SiteRange> regions_;
  std::vector<CMatrix> patches_;
};

inline double commutator_norm(const LocalHamiltonian& h, const CutPartition& cut, int k) {
  const SiteRange region = cut.neighbourhood(k);
  const CMatrix hk = h.dense(region).matrix();
  const CMatrix hi = h.term_operator(cut.interaction_term(), region).matrix();
  return linalg::operator_norm(CMatrix(hk * hi - hi * hk));
}

/// `ladder` must have been built from the same h and cut.
inline HierarchyReport w_hierarchy(const LocalHamiltonian& h, const CutPartition& cut, const PatchLadder& ladder) {
  const double t = ladder.time();
  const int l_max = ladder.size();
  HierarchyReport rep;
  rep.t = t;
  rep.sites = h.sites();
  rep.cut = cut.block_size();
  rep.h_norm = h.h_norm();
  rep.commutator_norm = commutator_norm(h, cut, l_max);
  rep.commutator_norm_k2 = commutator_norm(h, cut, std::min(2, cut.covering_distance()));
  rep.clipping_changes_m = std::abs(rep.commutator_norm - rep.commutator_norm_k2) > 1e-12;

  const SiteRange top = ladder.region(l_max);
  CMatrix product = CMatrix::Identity(Index{1} << top.size(), Index{1} << top.size());
  double factorial = 2.0;  // (l+2)! starting at l = 0
  for (int l = 1; l <= l_max; ++l) {
    factorial *= static_cast<double>(l + 2);
    const CMatrix w = ladder.w(l);
    HierarchyRow row;
    row.l = l;
    row.w_deviation = linalg::operator_norm(CMatrix(w - CMatrix::Identity(w.rows(), w.cols())));
    const double delta = rep.commutator_norm * std::pow(2.0 * rep.h_norm, l);
    row.lr_bound = delta * std::pow(std::abs(t), l + 2) / factorial;
    rep.rows.push_back(row);
    product = embed(w, ladder.region(l), top) * product;
  }

  if (top == h.full_range()) {
    rep.reassembled_full_patch = true;
    rep.reassembly_error = linalg::operator_norm(CMatrix(patch_unitary(h, cut, t) - product));
  } else {
    rep.reassembly_error = linalg::operator_norm(CMatrix(ladder.patch(l_max) - product));
  }
  return rep;
}

inline HierarchyReport w_hierarchy(const LocalHamiltonian& h, const CutPartition& cut, double t, int l_max) {
  return w_hierarchy(h, cut, PatchLadder(h, cut, t, l_max));
}

struct WeylStep {
  int l = 0;                // compares psi_l with psi_{l+1}
  double epsilon = 0.0;     // ||W_{l+1} - I||
  double d_norm = 0.0;      // ||D_l||, D_l = (C_{l+1} - C_l) / epsilon
  linalg::WeylReport weyl;  // P = C_l C_l^dagger, Q = C_{l+1}C_{l+1}^dagger - P
};

/// Schmidt-spectrum stability along the hierarchy states psi_l = W_l ... W_1 |0>.
inline std::vector<WeylStep> weyl_chain(const LocalHamiltonian& h, const CutPartition& cut, const PatchLadder& ladder) {
  const int n = h.sites(), m = cut.block_size(), l_max = ladder.size();
  std::vector<WeylStep> steps;
  for (int l = 1; l < l_max; ++l) {
    const CMatrix c0 = amplitude_matrix(ladder.state(l), n, m);
    const CMatrix c1 = amplitude_matrix(ladder.state(l + 1), n, m);
    const CMatrix w = ladder.w(l + 1);
    WeylStep s;
    s.l = l;
    s.epsilon = linalg::operator_norm(CMatrix(w - CMatrix::Identity(w.rows(), w.cols())));
    if (s.epsilon > 0.0) s.d_norm = linalg::operator_norm(CMatrix((c1 - c0) / s.epsilon));
    const CMatrix p = c0 * c0.adjoint();
    const CMatrix q = c1 * c1.adjoint() - p;
    s.weyl = linalg::weyl_perturbation_check(linalg::HermitianMatrix::symmetrized(p),
                                             linalg::HermitianMatrix::symmetrized(q));
    steps.push_back(s);
  }
  return steps;
}

inline std::vector<WeylStep> weyl_chain(const LocalHamiltonian& h, const CutPartition& cut, double t, int l_max) {
  return weyl_chain(h, cut, PatchLadder(h, cut, t, l_max));
}

}  // namespace entscale::spin
