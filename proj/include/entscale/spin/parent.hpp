#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include "entscale/spin/patch.hpp"

namespace entscale::spin {

struct KCheckReport {
  double t = 0.0;
  double spectrum_max_diff = 0.0;       // sorted spectra of K and Z
  double ground_fidelity = 0.0;         // |<gs(K)|psi(t)>|^2, or <psi|P_gs|psi> when degenerate
  double first_order_residual = 0.0;    // ||K - Z - it[H,Z]|| / t^2; 0 at t = 0
  double ground_gap = 0.0;
  bool degenerate_ground = false;
  CVector ground_state;                 // lowest eigenvector of K
};

/// Gap below which the ground space of K is treated as degenerate.
inline constexpr double kDegenerateGap = 1e-8;

/// Checks K = e^{itH} Z e^{-itH}, Z = -sum_j sigma^3_j, against its defining properties.
inline KCheckReport k_hamiltonian_check(const LocalHamiltonian& h, double t) {
  require_dense(h, "k_hamiltonian_check");
  const int n = h.sites();
  const RVector z = z_field_diagonal(n);
  const linalg::HermitianMatrix hd = h.dense();
  const CMatrix u = linalg::DenseEvolver(hd).unitary(t);
  const CMatrix k = u * z.cast<cplx>().asDiagonal() * u.adjoint();
  const linalg::EigenSystem es = linalg::hermitian_eigensystem(linalg::HermitianMatrix::symmetrized(k));

  KCheckReport rep;
  rep.t = t;
  RVector zs = z;
  std::sort(zs.data(), zs.data() + zs.size());
  rep.spectrum_max_diff = (es.values - zs).cwiseAbs().maxCoeff();

  const CVector psi = u.col(0);
  rep.ground_gap = es.values(1) - es.values(0);
  rep.degenerate_ground = rep.ground_gap < kDegenerateGap;
  double fid = 0.0;
  for (Index i = 0; i < es.values.size() && es.values(i) - es.values(0) < kDegenerateGap; ++i)
    fid += std::norm(es.vectors.col(i).dot(psi));
  rep.ground_fidelity = fid;
  rep.ground_state = es.vectors.col(0);

  if (t != 0.0) {
    const CMatrix hz = hd.matrix() * z.cast<cplx>().asDiagonal();
    const CMatrix comm = hz - hz.adjoint();  // [H, Z] for Hermitian H and real diagonal Z
    const CMatrix rem = k - CMatrix(z.cast<cplx>().asDiagonal()) - cplx(0, t) * comm;
    rep.first_order_residual = linalg::operator_norm(rem) / (t * t);
  }
  return rep;
}

/// Open-chain cluster state: |+>^n followed by controlled-Z on every edge (j, j+1).
inline CVector cluster_state(int n) {
  const Index d = Index{1} << n;
  CVector v(d);
  const double amp = std::pow(2.0, -0.5 * n);
  for (Index x = 0; x < d; ++x) {
    const Index edges = x & (x >> 1);  // adjacent pairs with both bits set
    v(x) = (std::popcount(static_cast<unsigned long long>(edges)) % 2 ? -amp : amp);
  }
  return v;
}

struct ClusterReport {
  KCheckReport k;
  double cluster_fidelity = 0.0;           // |<cluster|gs(K)>|^2
  double schmidt_profile_max_diff = 0.0;   // across every cut, vs. the cluster state
};

/// Ground state of K for the xx preset, compared against the cluster state.
/// The Schmidt profile comparison is invariant under local unitaries.
inline ClusterReport cluster_state_check(int n, double t) {
  ClusterReport rep;
  rep.k = k_hamiltonian_check(build_hamiltonian("xx", n), t);
  const CVector cluster = cluster_state(n);
  rep.cluster_fidelity = std::norm(cluster.dot(rep.k.ground_state));
  const StateVector gs(n, rep.k.ground_state.normalized()), cs(n, cluster);
  for (int m = 1; m < n; ++m) {
    const auto a = schmidt_spectrum(gs, CutPartition(n, m)).coefficients;
    const auto b = schmidt_spectrum(cs, CutPartition(n, m)).coefficients;
    for (std::size_t i = 0; i < a.size(); ++i)
      rep.schmidt_profile_max_diff = std::max(rep.schmidt_profile_max_diff, std::abs(a[i] - b[i]));
  }
  return rep;
}

}  // namespace entscale::spin
