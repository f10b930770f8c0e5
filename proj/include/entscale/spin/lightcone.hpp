#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "entscale/fit.hpp"
#include "entscale/spin/patch.hpp"

namespace entscale::spin {

/// P_site * m, with P a single-site Pauli on an n-site register.
inline CMatrix pauli_left(const CMatrix& m, int n, int site, Pauli p) {
  const Index bit = Index{1} << (n - 1 - site);
  const Index flip = (p == Pauli::X || p == Pauli::Y) ? bit : 0;
  CMatrix out(m.rows(), m.cols());
  for (Index x = 0; x < m.rows(); ++x) {
    const Index z = x ^ flip;
    const bool one = (z & bit) != 0;
    cplx c = 1.0;
    if (p == Pauli::Y) c = one ? cplx(0, -1) : cplx(0, 1);
    if (p == Pauli::Z) c = one ? -1.0 : 1.0;
    out.row(x) = c * m.row(z);
  }
  return out;
}

/// m * P_site.
inline CMatrix pauli_right(const CMatrix& m, int n, int site, Pauli p) {
  const Index bit = Index{1} << (n - 1 - site);
  const Index flip = (p == Pauli::X || p == Pauli::Y) ? bit : 0;
  CMatrix out(m.rows(), m.cols());
  for (Index y = 0; y < m.cols(); ++y) {
    const bool one = (y & bit) != 0;
    cplx c = 1.0;
    if (p == Pauli::Y) c = one ? cplx(0, -1) : cplx(0, 1);
    if (p == Pauli::Z) c = one ? -1.0 : 1.0;
    out.col(y) = c * m.col(y ^ flip);
  }
  return out;
}

inline CMatrix single_site(int n, int site, Pauli p) {
  return pauli_left(CMatrix::Identity(Index{1} << n, Index{1} << n), n, site, p);
}

/// tau_t^M(N) = e^{-itM} N e^{itM}, given u = e^{itM}.
inline CMatrix heisenberg(const CMatrix& u, const CMatrix& op) { return u.adjoint() * op * u; }

struct LightconeRow {
  double t = 0.0;
  int d = 0;
  double comm_norm = 0.0;  // max over sites at distance d
};

/// ||[tau_t^H(O_a), O'_b]|| for every distance d = |a - b|.
inline std::vector<LightconeRow> lightcone_probe(const LocalHamiltonian& h, int site_a, const std::vector<double>& t_grid,
                                                 Pauli observable = Pauli::Z, Pauli probe = Pauli::Z) {
  require_dense(h, "lightcone_probe");
  const int n = h.sites();
  if (site_a < 0 || site_a >= n) throw PreconditionError("lightcone_probe: invalid site");
  if (t_grid.empty()) throw PreconditionError("lightcone_probe: empty time grid");
  const linalg::DenseEvolver evolver(h.dense());
  const CMatrix op = single_site(n, site_a, observable);
  const int max_d = std::max(site_a, n - 1 - site_a);
  std::vector<LightconeRow> rows;
  for (double t : t_grid) {
    const CMatrix evolved = heisenberg(evolver.unitary(t), op);
    for (int d = 0; d <= max_d; ++d) {
      double worst = 0.0;
      for (int b : {site_a - d, site_a + d}) {
        if (b < 0 || b >= n || (d == 0 && b != site_a)) continue;
        const CMatrix comm = pauli_right(evolved, n, b, probe) - pauli_left(evolved, n, b, probe);
        worst = std::max(worst, linalg::operator_norm(comm));
        if (d == 0) break;
      }
      rows.push_back({t, d, worst});
    }
  }
  return rows;
}

struct QuasilocalRow {
  double t = 0.0;
  int k = 0;
  double trunc_norm = 0.0;  // ||tau_t^H(Z_j) - tau_t^{H_{Lambda_k(j)}}(Z_j)||
};

struct QuasilocalReport {
  std::vector<QuasilocalRow> rows;
  // ln truncNorm ~ ln c + kappa |t| - v k over rows with truncNorm > 1e-13 and t != 0
  double c = 0.0;
  double kappa = std::numeric_limits<double>::quiet_NaN();  // NaN unless two or more distinct |t|
  double v = 0.0;
  double r_squared = 0.0;
  int fitted_points = 0;
};

inline SiteRange ball(int j, int k, int n) { return {std::max(0, j - k), std::min(n - 1, j + k)}; }

inline QuasilocalReport quasilocality_decay(const LocalHamiltonian& h, int j, const std::vector<double>& t_grid,
                                            const std::vector<int>& k_list) {
  require_dense(h, "quasilocality_decay");
  const int n = h.sites();
  if (j < 0 || j >= n) throw PreconditionError("quasilocality_decay: invalid site");
  if (t_grid.empty() || k_list.empty()) throw PreconditionError("quasilocality_decay: empty grid");
  for (int k : k_list)
    if (k < 0) throw PreconditionError("quasilocality_decay: k must be nonnegative");

  const linalg::DenseEvolver full(h.dense());
  const CMatrix zj = single_site(n, j, Pauli::Z);
  std::map<int, linalg::DenseEvolver> local;
  for (int k : k_list) {
    const SiteRange r = ball(j, k, n);
    if (!local.contains(k)) local.emplace(k, linalg::DenseEvolver(h.dense(r)));
  }

  QuasilocalReport rep;
  for (double t : t_grid) {
    const CMatrix global = heisenberg(full.unitary(t), zj);
    for (int k : k_list) {
      const SiteRange r = ball(j, k, n);
      const CMatrix zl = single_site(r.size(), j - r.lo, Pauli::Z);
      const CMatrix truncated = embed(heisenberg(local.at(k).unitary(t), zl), r, n);
      rep.rows.push_back({t, k, linalg::operator_norm(CMatrix(global - truncated))});
    }
  }

  std::vector<const QuasilocalRow*> usable;
  std::vector<double> distinct_t;
  for (const auto& row : rep.rows) {
    if (row.t == 0.0 || !(row.trunc_norm > 1e-13)) continue;
    usable.push_back(&row);
    if (std::find(distinct_t.begin(), distinct_t.end(), std::abs(row.t)) == distinct_t.end())
      distinct_t.push_back(std::abs(row.t));
  }
  const bool with_kappa = distinct_t.size() >= 2;
  const Index params = with_kappa ? 3 : 2;
  rep.fitted_points = static_cast<int>(usable.size());
  if (static_cast<Index>(usable.size()) > params) {
    RMatrix a(static_cast<Index>(usable.size()), params);
    RVector y(static_cast<Index>(usable.size()));
    for (std::size_t i = 0; i < usable.size(); ++i) {
      const auto r = static_cast<Index>(i);
      a(r, 0) = 1.0;
      a(r, 1) = -static_cast<double>(usable[i]->k);
      if (with_kappa) a(r, 2) = std::abs(usable[i]->t);
      y(r) = std::log(usable[i]->trunc_norm);
    }
    const fit::LinearFit f = fit::least_squares(a, y);
    rep.c = std::exp(f.coefficients[0]);
    rep.v = f.coefficients[1];
    if (with_kappa) rep.kappa = f.coefficients[2];
    rep.r_squared = f.r_squared;
  }
  return rep;
}

}  // namespace entscale::spin
