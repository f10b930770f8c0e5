#include <gtest/gtest.h>

#include <random>

#include "entscale/spin.hpp"
#include "../oracles.hpp"

using namespace entscale;
using namespace entscale::spin;

namespace {

CVector random_state(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  CVector v(Index{1} << n);
  for (Index i = 0; i < v.size(); ++i) v(i) = cplx(g(rng), g(rng));
  return v.normalized();
}

CVector basis(int n, Index x) {
  CVector v = CVector::Zero(Index{1} << n);
  v(x) = 1;
  return v;
}

double entropy_of(const CVector& psi, int n, int m) {
  return block_entropy(schmidt_spectrum(StateVector(n, psi), CutPartition(n, m)));
}

}  // namespace

// ---- hamiltonian ---------------------------------------------------------

TEST(Hamiltonian, XxTwoSites) {
  const auto h = build_hamiltonian("xx", 2);
  ASSERT_EQ(h.terms().size(), 1u);
  EXPECT_NEAR((h.term(0) - two_site(Pauli::X, Pauli::X)).norm(), 0.0, 1e-15);
  EXPECT_NEAR(h.h_norm(), 1.0, 1e-14);
}

TEST(Hamiltonian, MatchesKroneckerOracle) {
  for (const auto& preset : preset_names())
    for (int n : {3, 5, 7}) {
      const auto h = build_hamiltonian(preset, n);
      const CMatrix oracle_h = oracle::kron_hamiltonian(h);
      EXPECT_LE((h.dense().matrix() - oracle_h).cwiseAbs().maxCoeff(), 1e-14) << preset << " n=" << n;
      EXPECT_LE((CMatrix(h.sparse()) - oracle_h).cwiseAbs().maxCoeff(), 1e-14) << preset << " n=" << n;
    }
}

TEST(Hamiltonian, ZFieldIsMinusSumOfSigmaZ) {
  for (int n : {2, 3, 6}) {
    const auto h = build_hamiltonian("zfield", n);
    const CMatrix d = h.dense().matrix();
    const RVector z = z_field_diagonal(n);
    EXPECT_LE((d - CMatrix(z.cast<cplx>().asDiagonal())).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_EQ(z(0), -n);  // all up
  }
  EXPECT_NEAR(build_hamiltonian("zfield", 6).h_norm(), 2.0, 1e-14);
}

TEST(Hamiltonian, RejectsBadInput) {
  EXPECT_THROW(build_hamiltonian("xx", 1), PreconditionError);
  EXPECT_THROW(build_hamiltonian("xx", 17), PreconditionError);
  EXPECT_THROW(build_hamiltonian("heisenberg", 4), PreconditionError);
  Matrix4 bad = Matrix4::Zero();
  bad(0, 1) = 1.0;
  EXPECT_THROW(LocalHamiltonian(3, {bad, bad}), PreconditionError);
  EXPECT_THROW(from_pauli_terms(4, {{1.0, Pauli::X, Pauli::X, 3}}), PreconditionError);
}

TEST(Hamiltonian, RegionRestriction) {
  const auto h = build_hamiltonian("xy_cross", 6);
  const SiteRange r{2, 4};
  const CMatrix local = h.dense(r).matrix();
  // terms 2 and 3 live inside sites 2..4
  const CMatrix expect = linalg::kron(CMatrix(h.term(2)), oracle::identity(1)) +
                         linalg::kron(oracle::identity(1), CMatrix(h.term(3)));
  EXPECT_LE((local - expect).cwiseAbs().maxCoeff(), 1e-15);
}

// ---- states and Schmidt data --------------------------------------------

TEST(StateVector, NormAndShape) {
  EXPECT_NO_THROW(StateVector::all_up(4));
  EXPECT_THROW(StateVector(3, CVector::Zero(8)), NumericalFailure);
  EXPECT_THROW(StateVector(3, basis(2, 0)), DimensionMismatch);
  EXPECT_THROW(CutPartition(4, 0), PreconditionError);
  EXPECT_THROW(CutPartition(4, 4), PreconditionError);
}

TEST(CutPartition, Neighbourhoods) {
  const CutPartition cut(10, 5);
  EXPECT_EQ(cut.interaction_term(), 4);
  EXPECT_EQ(cut.neighbourhood(1), (SiteRange{4, 5}));
  EXPECT_EQ(cut.neighbourhood(3), (SiteRange{2, 7}));
  EXPECT_EQ(cut.neighbourhood(5), (SiteRange{0, 9}));
  EXPECT_EQ(cut.covering_distance(), 5);
  const CutPartition edge(6, 1);
  EXPECT_EQ(edge.neighbourhood(2), (SiteRange{0, 2}));
  EXPECT_EQ(edge.covering_distance(), 5);
  EXPECT_EQ(edge.neighbourhood(5), (SiteRange{0, 5}));
}

TEST(Schmidt, ProductAndBellStates) {
  const auto s = schmidt_spectrum(StateVector::all_up(4), CutPartition(4, 2));
  EXPECT_NEAR(s.coefficients[0], 1.0, 1e-15);
  for (std::size_t i = 1; i < s.coefficients.size(); ++i) EXPECT_NEAR(s.coefficients[i], 0.0, 1e-15);
  EXPECT_EQ(s.effective_rank(), 1);
  EXPECT_NEAR(block_entropy(s), 0.0, 1e-15);

  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1 / std::sqrt(2.0);
  const auto b = schmidt_spectrum(StateVector(2, bell), CutPartition(2, 1));
  EXPECT_NEAR(b.coefficients[0], 0.5, 1e-15);
  EXPECT_NEAR(b.coefficients[1], 0.5, 1e-15);
  EXPECT_NEAR(block_entropy(b), 1.0, 1e-14);
}

TEST(Schmidt, RandomStateAgainstReducedDensityOracle) {
  std::mt19937_64 rng(41);
  const CVector psi = random_state(rng, 10);
  const auto s = schmidt_spectrum(StateVector(10, psi), CutPartition(10, 3));
  // row index = the 3 block bits (most significant), column = remaining 7
  CMatrix c(8, 128);
  for (Index x = 0; x < 1024; ++x) c(x >> 7, x & 127) = psi(x);
  const RVector ev = linalg::hermitian_eigenvalues(linalg::HermitianMatrix::symmetrized(CMatrix(c * c.adjoint())));
  ASSERT_EQ(s.coefficients.size(), 8u);
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(s.coefficients[static_cast<std::size_t>(i)], ev(7 - i), 1e-10);
  EXPECT_NEAR(s.sum(), 1.0, 1e-10);
}

TEST(BlockEntropy, ClosedFormsAndRenyi) {
  SchmidtSpectrum uniform{3, std::vector<double>(8, 0.125)};
  EXPECT_NEAR(block_entropy(uniform), 3.0, 1e-14);
  EXPECT_NEAR(block_entropy(uniform, 2.0), 3.0, 1e-14);
  EXPECT_NEAR(block_entropy(uniform, 0.5), 3.0, 1e-14);
  SchmidtSpectrum skew{1, {0.75, 0.25}};
  EXPECT_NEAR(block_entropy(skew, 2.0), -std::log2(0.625), 1e-14);
  EXPECT_THROW(block_entropy(skew, 0.0), PreconditionError);
  EXPECT_THROW(block_entropy(skew, -1.0), PreconditionError);
}

TEST(Schmidt, CutSymmetryUnderReflection) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 8;
    const CVector psi = random_state(rng, n);
    CVector rev(psi.size());
    for (Index x = 0; x < psi.size(); ++x) {
      Index y = 0;
      for (int b = 0; b < n; ++b)
        if (x & (Index{1} << b)) y |= Index{1} << (n - 1 - b);
      rev(y) = psi(x);
    }
    for (int m = 1; m < n; ++m) EXPECT_NEAR(entropy_of(psi, n, m), entropy_of(rev, n, n - m), 1e-10);
  }
}

// ---- evolution -----------------------------------------------------------

TEST(Quench, TimeZeroAndEigenstate) {
  const auto h = build_hamiltonian("xy_cross", 6);
  EXPECT_EQ(evolve(h, 0.0).amplitudes(), StateVector::all_up(6).amplitudes());
  const auto z = build_hamiltonian("zfield", 6);
  for (double t : {0.5, 3.0, -7.0}) {
    const auto s = schmidt_spectrum(evolve(z, t), CutPartition(6, 3));
    EXPECT_NEAR(s.coefficients[0], 1.0, 1e-12);
  }
}

TEST(Quench, DenseMatchesPadeOracle) {
  const auto h = build_hamiltonian("xy_cross", 8);
  const StateVector psi = evolve(h, 1.0);
  const CVector oracle_psi = oracle::expm_i(oracle::kron_hamiltonian(h), 1.0).col(0);
  EXPECT_LE((psi.amplitudes() - oracle_psi).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(psi.amplitudes().norm(), 1.0, 1e-10);
  EXPECT_GT(block_entropy(schmidt_spectrum(psi, CutPartition(8, 4))), 0.0);
}

TEST(Quench, KrylovMatchesDense) {
  const auto h = build_hamiltonian("xy_cross", 10);
  for (double t : {0.4, 2.0}) {
    const CVector d = evolve(h, t, linalg::EvolveMethod::dense).amplitudes();
    const CVector k = evolve(h, t, linalg::EvolveMethod::krylov).amplitudes();
    EXPECT_LE((d - k).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(EntropyProfile, ZeroTimeAndOrdering) {
  const auto h = build_hamiltonian("xy_cross", 6);
  const auto c0 = entropy_profile(h, {0.0}, {1, 2, 3});
  for (const auto& r : c0.rows) EXPECT_EQ(r.entropy, 0.0);
  const auto c = entropy_profile(h, {1.0, 0.5}, {3, 1});
  ASSERT_EQ(c.rows.size(), 4u);
  EXPECT_EQ(c.rows[0].t, 0.5);
  EXPECT_EQ(c.rows[0].m, 1);
  EXPECT_EQ(c.rows[3].t, 1.0);
  EXPECT_EQ(c.rows[3].m, 3);
  EXPECT_THROW(entropy_profile(h, {}, {1}), PreconditionError);
}

TEST(EntropyProfile, XxFourSitesAgainstOracle) {
  const auto h = build_hamiltonian("xx", 4);
  const auto curve = entropy_profile(h, {0.3}, {1, 2, 3});
  const CVector psi = oracle::expm_i(oracle::kron_hamiltonian(h), 0.3).col(0);
  for (const auto& r : curve.rows) EXPECT_NEAR(r.entropy, entropy_of(psi, 4, r.m), 1e-12);
}

TEST(EntropyProfile, SaturatesInBlockSize) {
  const auto curve = entropy_profile(build_hamiltonian("xy_cross", 12), {1.0}, {1, 2, 3, 4, 5, 6});
  const double frozen[] = {0.9992, 1.3916, 1.3583, 1.3614, 1.3613, 1.3613};
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(curve.rows[i].entropy, frozen[i], 5e-4) << "m = " << i + 1;
}

TEST(ShiftInvariance, IdentityShiftsLeaveSpectraUnchanged) {
  const auto h = build_hamiltonian("xy_cross", 7);
  std::vector<Matrix4> shifted = h.terms();
  for (std::size_t j = 0; j < shifted.size(); ++j) shifted[j] += (0.3 + 0.7 * static_cast<double>(j)) * Matrix4::Identity();
  const LocalHamiltonian hs(7, shifted);
  for (int m = 1; m < 7; ++m) {
    const auto a = schmidt_spectrum(evolve(h, 1.3), CutPartition(7, m)).coefficients;
    const auto b = schmidt_spectrum(evolve(hs, 1.3), CutPartition(7, m)).coefficients;
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-10);
  }
}

// ---- patch unitary and hierarchy ------------------------------------------

TEST(InteractionSplit, SumsToHamiltonian) {
  const auto h = build_hamiltonian("xy_cross", 6);
  const auto s = interaction_split(h, CutPartition(6, 3));
  EXPECT_LE((CMatrix(s.h_a + s.h_b + s.h_i) - h.dense().matrix()).cwiseAbs().maxCoeff(), 0.0);
  const auto two = interaction_split(build_hamiltonian("xx", 2), CutPartition(2, 1));
  EXPECT_EQ(CMatrix(two.h_a).norm(), 0.0);
  EXPECT_EQ(CMatrix(two.h_b).norm(), 0.0);
  EXPECT_NEAR((CMatrix(two.h_i) - CMatrix(two_site(Pauli::X, Pauli::X))).norm(), 0.0, 1e-15);
}

TEST(PatchUnitary, IdentityAtZeroAndIntegralOracle) {
  const auto h = build_hamiltonian("xy_cross", 6);
  const CutPartition cut(6, 3);
  EXPECT_LE((patch_unitary(h, cut, 0.0) - oracle::identity(6)).cwiseAbs().maxCoeff(), 1e-12);
  const CMatrix full = h.dense().matrix();
  const CMatrix hi = h.term_operator(cut.interaction_term(), h.full_range()).matrix();
  const CMatrix integrated = oracle::patch_by_integration(full, hi, 0.5, 200);
  EXPECT_LE(linalg::operator_norm(CMatrix(patch_unitary(h, cut, 0.5) - integrated)), 1e-8);
}

TEST(PatchUnitary, DecomposesFullEvolution) {
  // e^{itH} = e^{it(H - H_I)} V(t), and e^{it(H - H_I)} factorizes across the cut.
  const auto h = build_hamiltonian("xy_cross", 6);
  const CutPartition cut(6, 3);
  const CMatrix v = patch_unitary(h, cut, 0.8);
  const CMatrix u = oracle::expm_i(h.dense().matrix(), 0.8);
  const CMatrix decoupled = u * v.adjoint();
  const CMatrix ua = oracle::expm_i(h.dense({0, 2}).matrix(), 0.8);
  const CMatrix ub = oracle::expm_i(h.dense({3, 5}).matrix(), 0.8);
  EXPECT_LE(linalg::operator_norm(CMatrix(decoupled - linalg::kron(ua, ub))), 1e-10);
}

TEST(PatchLadder, LocalPatchesMatchFullSpaceConstruction) {
  const auto h = build_hamiltonian("xy_cross", 8);
  const CutPartition cut(8, 4);
  const PatchLadder ladder(h, cut, 0.5, 4);
  for (int l = 1; l <= 4; ++l) {
    const CMatrix full = restricted_patch(h, cut, 0.5, l);
    EXPECT_LE(linalg::operator_norm(CMatrix(embed(ladder.patch(l), ladder.region(l), 8) - full)), 1e-10) << l;
    EXPECT_LE(support_defect(full, ladder.region(l), 8), 1e-10) << l;
    const CVector state = full.col(0);
    EXPECT_LE((ladder.state(l) - state).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_LE(linalg::operator_norm(CMatrix(restricted_patch(h, cut, 0.5, 4) - patch_unitary(h, cut, 0.5))), 1e-10);
  EXPECT_GT(support_defect(patch_unitary(h, cut, 0.5), cut.neighbourhood(1), 8), 1e-3);
}

TEST(WHierarchy, ReassemblesAndMeasuresCommutator) {
  const auto h = build_hamiltonian("xy_cross", 10);
  const auto rep = w_hierarchy(h, CutPartition(10, 5), 0.5, 5);
  EXPECT_TRUE(rep.reassembled_full_patch);
  EXPECT_LE(rep.reassembly_error, 1e-8);
  EXPECT_NEAR(rep.commutator_norm, 4.0, 1e-10);
  EXPECT_FALSE(rep.clipping_changes_m);
  EXPECT_NEAR(rep.h_norm, 1.0, 1e-14);
  ASSERT_EQ(rep.rows.size(), 5u);
  // Deviations fall off with l, roughly like |t|^l.
  for (std::size_t i = 1; i < rep.rows.size(); ++i) EXPECT_LT(rep.rows[i].w_deviation, rep.rows[i - 1].w_deviation);
}

TEST(WHierarchy, FrozenDeviationsAtQuarterTime) {
  // ||W_1 - I|| is of order |t| ||H_I||, far above M|t|^3/3!; the hierarchy
  // bound does not hold for this model.
  const auto rep = w_hierarchy(build_hamiltonian("xy_cross", 10), CutPartition(10, 5), 0.25, 5);
  const double dev[] = {0.2493, 0.1207, 0.0203, 0.00254, 2.54e-4};
  double factorial = 2.0;
  for (std::size_t i = 0; i < 5; ++i) {
    const int l = static_cast<int>(i) + 1;
    factorial *= l + 2;
    const double bound = 4.0 * std::pow(2.0, l) * std::pow(0.25, l + 2) / factorial;  // ||M|| = 4, hNorm = 1
    EXPECT_NEAR(rep.rows[i].w_deviation / dev[i], 1.0, 2e-3) << "l = " << l;
    EXPECT_NEAR(rep.rows[i].lr_bound / bound, 1.0, 1e-12) << "l = " << l;
    EXPECT_FALSE(rep.rows[i].within_bound());
  }
  EXPECT_EQ(rep.violations(), 5);
}

TEST(WHierarchy, IdentityAtTimeZeroAndClippedTopRegion) {
  const auto h = build_hamiltonian("xx", 8);
  const auto zero = w_hierarchy(h, CutPartition(8, 3), 0.0, 3);
  for (const auto& r : zero.rows) EXPECT_LE(r.w_deviation, 1e-12);
  const auto part = w_hierarchy(h, CutPartition(8, 3), 0.4, 3);
  EXPECT_FALSE(part.reassembled_full_patch);
  EXPECT_LE(part.reassembly_error, 1e-10);
  EXPECT_THROW(w_hierarchy(h, CutPartition(8, 3), 0.4, 6), PreconditionError);
}

TEST(WeylChain, SchmidtShiftsBoundedByPerturbation) {
  const auto steps = weyl_chain(build_hamiltonian("xy_cross", 8), CutPartition(8, 4), 0.7, 4);
  ASSERT_EQ(steps.size(), 3u);
  for (const auto& s : steps) {
    EXPECT_TRUE(s.weyl.holds);
    EXPECT_GT(s.epsilon, 0.0);
  }
}

// ---- light cone and quasi-locality -----------------------------------------

TEST(Lightcone, ZeroAtTimeZeroAndSpreads) {
  const auto h = build_hamiltonian("xy_cross", 8);
  const auto rows = lightcone_probe(h, 3, {0.0, 0.5, 2.0});
  for (const auto& r : rows)
    if (r.t == 0.0) EXPECT_LE(r.comm_norm, 1e-12);
  double near = 0, far = 0;
  for (const auto& r : rows) {
    if (r.t != 0.5) continue;
    if (r.d == 1) near = r.comm_norm;
    if (r.d == 4) far = r.comm_norm;
  }
  EXPECT_GT(near, far);
  EXPECT_THROW(lightcone_probe(h, 8, {0.1}), PreconditionError);
}

TEST(Lightcone, PauliHelpersMatchKronecker) {
  const CMatrix y2 = single_site(3, 1, Pauli::Y);
  const CMatrix expect = linalg::kron(linalg::kron(oracle::identity(1), CMatrix(pauli_matrix(Pauli::Y))), oracle::identity(1));
  EXPECT_LE((y2 - expect).cwiseAbs().maxCoeff(), 0.0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  CMatrix m(8, 8);
  for (Index i = 0; i < 8; ++i)
    for (Index j = 0; j < 8; ++j) m(i, j) = cplx(g(rng), g(rng));
  for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z})
    for (int s = 0; s < 3; ++s) {
      const CMatrix op = single_site(3, s, p);
      EXPECT_LE((pauli_left(m, 3, s, p) - op * m).cwiseAbs().maxCoeff(), 1e-14);
      EXPECT_LE((pauli_right(m, 3, s, p) - m * op).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(Quasilocal, DecayInBallRadius) {
  const auto rep = quasilocality_decay(build_hamiltonian("xy_cross", 10), 5, {0.5}, {1, 2, 3, 4});
  ASSERT_EQ(rep.rows.size(), 4u);
  const double frozen[] = {0.5647, 0.1951, 0.0505, 0.00732};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(rep.rows[i].trunc_norm / frozen[i], 1.0, 2e-3);
  EXPECT_NEAR(rep.v, 1.44, 0.02);
  EXPECT_GT(rep.r_squared, 0.9);
  EXPECT_TRUE(std::isnan(rep.kappa));
}

TEST(Quasilocal, FullBallIsExact) {
  const auto rep = quasilocality_decay(build_hamiltonian("xx", 6), 2, {0.3, 1.0}, {6});
  for (const auto& r : rep.rows) EXPECT_LE(r.trunc_norm, 1e-12);
}

// ---- parent hamiltonian ------------------------------------------------------

TEST(KCheck, SpectrumAndGroundState) {
  for (const char* preset : {"xy_cross", "xx"})
    for (double t : {0.0, 0.3, 1.1, -2.0}) {
      const auto k = k_hamiltonian_check(build_hamiltonian(preset, 6), t);
      EXPECT_LE(k.spectrum_max_diff, 1e-9);
      EXPECT_GE(k.ground_fidelity, 1 - 1e-9);
      EXPECT_FALSE(k.degenerate_ground);
      EXPECT_NEAR(k.ground_gap, 2.0, 1e-9);
    }
}

TEST(KCheck, FirstOrderTermIsCommutator) {
  const auto h = build_hamiltonian("xy_cross", 5);
  const double r1 = k_hamiltonian_check(h, 1e-2).first_order_residual;
  const double r2 = k_hamiltonian_check(h, 5e-3).first_order_residual;
  EXPECT_GT(r1, 0.0);
  EXPECT_NEAR(r1 / r2, 1.0, 0.05);  // remainder is O(t^2)
  EXPECT_EQ(k_hamiltonian_check(h, 0.0).first_order_residual, 0.0);
}

TEST(ClusterState, StabilizersOfOracle) {
  const int n = 6;
  const CVector c = cluster_state(n);
  EXPECT_NEAR(c.norm(), 1.0, 1e-14);
  for (int j = 0; j < n; ++j) {
    CMatrix g = single_site(n, j, Pauli::X);
    if (j > 0) g = pauli_left(g, n, j - 1, Pauli::Z);
    if (j + 1 < n) g = pauli_left(g, n, j + 1, Pauli::Z);
    EXPECT_NEAR(std::abs(c.dot(g * c) - 1.0), 0.0, 1e-12) << "K_" << j;
  }
}

TEST(ClusterState, XxAtHalfPiGivesProductState) {
  // e^{i pi/2 sum X_j X_{j+1}} = i^{n-1} X_0 X_{n-1}: the ground state of K is |1 0 0 0 0 1>.
  const auto rep = cluster_state_check(6, kPi / 2);
  EXPECT_GE(std::norm(basis(6, 0b100001).dot(rep.k.ground_state)), 1 - 1e-9);
  EXPECT_NEAR(rep.cluster_fidelity, 1.0 / 64, 1e-9);
}

TEST(ClusterState, XxAtQuarterPiIsLocallyCliffordEquivalent) {
  const auto rep = cluster_state_check(6, kPi / 4);
  const CVector mapped = oracle::cluster_frame(6) * rep.k.ground_state;
  EXPECT_GE(std::norm(cluster_state(6).dot(mapped)), 1 - 1e-9);
  EXPECT_LE(rep.schmidt_profile_max_diff, 1e-9);
}

// ---- fits -------------------------------------------------------------------

TEST(EnvelopeFit, SyntheticCurves) {
  EntropyCurve lin{12, {}};
  for (int i = 0; i <= 6; ++i) lin.rows.push_back({0.5 * i, 6, 1.0 + 2.0 * 0.5 * i, 0, 1});
  const auto f = entropy_envelope_fit(lin, 6, 1.0);
  EXPECT_NEAR(f.c0, 1.0, 1e-12);
  EXPECT_NEAR(f.c1, 2.0, 1e-12);
  EXPECT_NEAR(f.max_excess, 0.0, 1e-12);

  EntropyCurve flat{12, {}};
  for (int i = 0; i < 5; ++i) flat.rows.push_back({0.5 * i, 6, 0.0, 1, 1});
  const auto z = entropy_envelope_fit(flat, 6, 1.0);
  EXPECT_NEAR(z.c0, 0.0, 1e-15);
  EXPECT_NEAR(z.c1, 0.0, 1e-15);

  EXPECT_THROW(entropy_envelope_fit(EntropyCurve{12, {flat.rows.begin(), flat.rows.begin() + 4}}, 6, 1.0),
               PreconditionError);
  EntropyCurve late = flat;
  late.rows.back().t = 3.5;  // beyond n / 4
  EXPECT_THROW(entropy_envelope_fit(late, 6, 1.0), PreconditionError);
}

TEST(SchmidtTailFit, SyntheticExponentialTail) {
  std::vector<std::pair<double, SchmidtSpectrum>> spectra;
  for (double t : {0.5, 1.0, 1.5}) {
    std::vector<double> s(16);
    for (int j = 0; j < 16; ++j) s[static_cast<std::size_t>(j)] = std::pow(2.0, 1.2 * t - 0.8 * j);
    spectra.emplace_back(t, SchmidtSpectrum{4, s});
  }
  const auto rep = schmidt_tail_fit(spectra);
  ASSERT_TRUE(rep.pooled_valid);
  EXPECT_NEAR(rep.v, 0.8, 1e-10);
  EXPECT_NEAR(rep.kappa, 1.2, 1e-10);
  for (const auto& f : rep.per_time) EXPECT_NEAR(f.v, 0.8, 1e-10);
}

TEST(SchmidtTailFit, ProductStatesAreFlagged) {
  std::vector<std::pair<double, SchmidtSpectrum>> spectra;
  for (double t : {0.0, 1.0, 2.0}) {
    std::vector<double> s(8, 0.0);
    s[0] = 1.0;
    spectra.emplace_back(t, SchmidtSpectrum{3, s});
  }
  const auto rep = schmidt_tail_fit(spectra);
  EXPECT_FALSE(rep.pooled_valid);
  for (const auto& f : rep.per_time) EXPECT_FALSE(f.valid);
}
