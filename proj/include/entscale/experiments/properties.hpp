#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "entscale/fermion/toeplitz.hpp"
#include "entscale/linalg.hpp"
#include "entscale/spin/quench.hpp"

namespace entscale::experiments {

struct PropertyResult {
  std::string property;
  long trials = 0;
  long violations = 0;
  double worst = 0.0;  // largest observed value of the checked quantity
};

namespace props {

using Rng = std::mt19937_64;

inline CMatrix random_complex(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> g;
  CMatrix a(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) a(i, j) = cplx(g(rng), g(rng));
  return a;
}

inline linalg::HermitianMatrix random_hermitian(Rng& rng, Index dim) {
  const CMatrix g = random_complex(rng, dim, dim);
  return linalg::HermitianMatrix::symmetrized(CMatrix(0.5 * (g + g.adjoint())));
}

inline CVector random_state(Rng& rng, int n) {
  CVector v = random_complex(rng, Index{1} << n, 1);
  return v / v.norm();
}

inline spin::LocalHamiltonian random_local(Rng& rng, int n) {
  std::vector<spin::Matrix4> terms;
  for (int j = 0; j + 1 < n; ++j) terms.push_back(random_hermitian(rng, 4).matrix());
  return spin::LocalHamiltonian(n, std::move(terms));
}

inline PiecewiseSymbol random_sign_symbol(Rng& rng) {
  std::uniform_int_distribution<int> pieces(1, 6);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  std::vector<double> b{0.0};
  const int r = pieces(rng);
  std::vector<double> cuts;
  for (int i = 1; i < r; ++i) cuts.push_back(u(rng));
  std::sort(cuts.begin(), cuts.end());
  for (double c : cuts)
    if (c - b.back() > 1e-6) b.push_back(c);
  b.push_back(kTwoPi);
  std::vector<double> v;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) v.push_back(i % 2 ? -1.0 : 1.0);
  return PiecewiseSymbol(std::move(b), std::move(v));
}

/// State with the site order reversed.
inline CVector reversed_sites(const CVector& psi, int n) {
  CVector out(psi.size());
  for (Index x = 0; x < psi.size(); ++x) {
    Index y = 0;
    for (int b = 0; b < n; ++b)
      if (x & (Index{1} << b)) y |= Index{1} << (n - 1 - b);
    out(y) = psi(x);
  }
  return out;
}

/// Runs `check` for each trial with its own generator, seeded from (seed, property index, trial).
inline PropertyResult run(const std::string& name, std::uint64_t seed, int index, long trials, double threshold,
                          const std::function<double(Rng&)>& check) {
  PropertyResult r{name, trials, 0, 0.0};
  for (long i = 0; i < trials; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(i)};
    Rng rng(seq);
    const double v = check(rng);
    if (!(v <= threshold)) ++r.violations;
    r.worst = std::max(r.worst, v);
  }
  return r;
}

}  // namespace props

/// Randomized invariants of the numerical kernels. Each row reports the worst value
/// of a quantity that must stay at or below its tolerance.
inline std::vector<PropertyResult> property_suite(std::uint64_t seed, long trials) {
  using props::Rng;
  std::vector<PropertyResult> out;
  int index = 0;

  for (Index dim : {16, 64}) {
    // Weyl: max shift / ||Q||, at most 1 (plus roundoff).
    out.push_back(props::run("weyl_dim" + std::to_string(dim), seed, index++, trials, 1.0 + 1e-10, [dim](Rng& rng) {
      const auto p = props::random_hermitian(rng, dim);
      const auto q = props::random_hermitian(rng, dim);
      std::uniform_real_distribution<double> scale(1e-3, 1.0);
      const auto qs = linalg::HermitianMatrix::symmetrized(CMatrix(scale(rng) * q.matrix()));
      const auto w = linalg::weyl_perturbation_check(p, qs);
      const double ratio = w.bound > 0.0 ? w.max_shift / w.bound : 0.0;
      return w.holds ? std::min(ratio, 1.0) : std::max(ratio, 1.0 + 1e-9);
    }));
  }

  for (Index dim : {2, 16, 64}) {
    out.push_back(props::run("eigensystem_residual_dim" + std::to_string(dim), seed, index++, trials, 1e-10,
                             [dim](Rng& rng) {
                               const auto a = props::random_hermitian(rng, dim);
                               const auto es = linalg::hermitian_eigensystem(a);
                               const CMatrix& u = es.vectors;
                               const CMatrix rec = u * es.values.cast<cplx>().asDiagonal() * u.adjoint();
                               const double r1 = linalg::operator_norm(CMatrix(a.matrix() - rec)) /
                                                 linalg::operator_norm(a.matrix());
                               const double r2 = linalg::operator_norm(
                                   CMatrix(u.adjoint() * u - CMatrix::Identity(dim, dim)));
                               return std::max(r1, r2);
                             }));
  }

  out.push_back(props::run("schmidt_normalization", seed, index++, trials, 1e-10, [](Rng& rng) {
    std::uniform_int_distribution<int> nd(2, 10);
    const int n = nd(rng);
    std::uniform_int_distribution<int> md(1, n - 1);
    const spin::StateVector psi(n, props::random_state(rng, n));
    return std::abs(spin::schmidt_spectrum(psi, spin::CutPartition(n, md(rng))).sum() - 1.0);
  }));

  out.push_back(props::run("shift_invariance", seed, index++, trials, 1e-10, [](Rng& rng) {
    std::uniform_int_distribution<int> nd(3, 8);
    const int n = nd(rng);
    std::uniform_int_distribution<int> md(1, n - 1);
    std::uniform_real_distribution<double> td(-2.0, 2.0), ad(-3.0, 3.0);
    const spin::LocalHamiltonian h = props::random_local(rng, n);
    std::vector<spin::Matrix4> shifted = h.terms();
    for (auto& term : shifted) term += ad(rng) * spin::Matrix4::Identity();
    const spin::LocalHamiltonian hs(n, std::move(shifted));
    const double t = td(rng);
    const spin::CutPartition cut(n, md(rng));
    const auto a = spin::schmidt_spectrum(spin::evolve(h, t), cut).coefficients;
    const auto b = spin::schmidt_spectrum(spin::evolve(hs, t), cut).coefficients;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
  }));

  out.push_back(props::run("cut_symmetry", seed, index++, trials, 1e-10, [](Rng& rng) {
    std::uniform_int_distribution<int> nd(2, 10);
    const int n = nd(rng);
    std::uniform_int_distribution<int> md(1, n - 1);
    const int m = md(rng);
    const CVector psi = props::random_state(rng, n);
    const double s1 = spin::block_entropy(spin::schmidt_spectrum(spin::StateVector(n, psi), spin::CutPartition(n, m)));
    const double s2 = spin::block_entropy(
        spin::schmidt_spectrum(spin::StateVector(n, props::reversed_sites(psi, n)), spin::CutPartition(n, n - m)));
    return std::abs(s1 - s2);
  }));

  out.push_back(props::run("evolution_unitarity", seed, index++, trials, 1.0, [](Rng& rng) {
    std::uniform_int_distribution<int> nd(2, 8);
    std::uniform_real_distribution<double> td(-3.0, 3.0);
    std::bernoulli_distribution krylov(0.5);
    const int n = nd(rng);
    const auto h = props::random_hermitian(rng, Index{1} << n);
    const CVector v = props::random_state(rng, n);
    const double t = td(rng);
    const auto method = krylov(rng) ? linalg::EvolveMethod::krylov : linalg::EvolveMethod::dense;
    const CVector w = linalg::evolve_action(h, t, v, method);
    const CVector back = linalg::evolve_action(h, -t, w, method);
    // Normalized so that 1 is the tolerance of both checks.
    return std::max(std::abs(w.norm() - 1.0) / 1e-10, (back - v).cwiseAbs().maxCoeff() / 1e-8);
  }));

  out.push_back(props::run("fourier_conjugate_symmetry", seed, index++, trials, 0.0, [](Rng& rng) {
    std::uniform_int_distribution<long> ld(1, 500);
    const PiecewiseSymbol s = props::random_sign_symbol(rng);
    const long l = ld(rng);
    return std::abs(linalg::fourier_coefficient(s, -l) - std::conj(linalg::fourier_coefficient(s, l)));
  }));

  out.push_back(props::run("toeplitz_contraction", seed, index++, trials, 1e-10, [](Rng& rng) {
    std::uniform_int_distribution<long> md(1, 128);
    const auto t = fermion::build_correlation_matrix(props::random_sign_symbol(rng), md(rng));
    return std::max(0.0, t.eigenvalues().cwiseAbs().maxCoeff() - 1.0);
  }));

  out.push_back(props::run("log_det_oracle", seed, index++, trials, 1e-9, [](Rng& rng) {
    std::uniform_int_distribution<int> dd(1, 64);
    const Index dim = dd(rng);
    std::normal_distribution<double> g;
    RMatrix a(dim, dim);
    for (Index i = 0; i < dim; ++i)
      for (Index j = 0; j <= i; ++j) a(i, j) = a(j, i) = g(rng);
    const RVector ev = linalg::symmetric_eigenvalues(a);
    const double oracle = ev.array().abs().log().sum();
    // |log det - log oracle| is the relative error of |det|.
    return std::abs(linalg::log_abs_determinant(a).log_abs_det - oracle);
  }));

  return out;
}

}  // namespace entscale::experiments
