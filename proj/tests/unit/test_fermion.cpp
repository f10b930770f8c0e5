#include <gtest/gtest.h>

#include <cmath>

#include "entscale/fermion.hpp"
#include "../oracles.hpp"

using namespace entscale;
using namespace entscale::fermion;

namespace {

std::vector<long> doubling(long from, long to) {
  std::vector<long> m;
  for (long x = from; x <= to; x *= 2) m.push_back(x);
  return m;
}

}  // namespace

// ---- symbols and couplings ---------------------------------------------------

TEST(Couplings, PaperSymbolMatchesClosedForm) {
  for (long k = 1; k <= 200; ++k)
    EXPECT_NEAR(coupling_from_symbol(paper_symbol(), k), paper_coupling_closed_form(k), 1e-13) << "k = " << k;
  EXPECT_NEAR(coupling_from_symbol(paper_symbol(), 0), 0.0, 1e-15);
  EXPECT_THROW(paper_coupling_closed_form(0), PreconditionError);
}

TEST(Couplings, DecayLikeOneOverK) {
  const auto m = CouplingSequence::from_symbol(paper_symbol(), 400);
  EXPECT_EQ(m.k_max(), 400);
  EXPECT_NEAR(m.decay_constant(), 2.0 / kPi, 1e-12);
  EXPECT_EQ(m[-3], m[3]);
  EXPECT_EQ(m[401], 0.0);
}

TEST(Couplings, OddSymbolIsRejected) {
  EXPECT_THROW(coupling_from_symbol(reference_symbol(), 1), NumericalFailure);
  EXPECT_NEAR(coupling_from_symbol(reference_symbol(), 2), 0.0, 1e-15);
  EXPECT_THROW(CouplingSequence::from_symbol(reference_symbol(), 4), NumericalFailure);
  EXPECT_THROW(CouplingSequence({}), PreconditionError);
}

TEST(Symbols, Presets) {
  for (const auto& name : symbol_preset_names()) EXPECT_NO_THROW(symbol_preset(name));
  EXPECT_THROW(symbol_preset("sawtooth"), PreconditionError);
  EXPECT_EQ(symbol_preset("constant"), PiecewiseSymbol::constant(1.0));
  EXPECT_EQ(paper_symbol()(kPi), -1.0);
  EXPECT_EQ(paper_symbol()(0.1), 1.0);
  EXPECT_EQ(paper_symbol()(6.0), 1.0);
}

// ---- ring dispersion ------------------------------------------------------------

TEST(Dispersion, NearestNeighbourRing) {
  const CouplingSequence hop({0.0, 1.0});
  const auto d = dispersion(hop, 8);
  for (long k = 0; k < 8; ++k) EXPECT_NEAR(d.eps[static_cast<std::size_t>(k)], 2 * std::cos(kTwoPi * k / 8), 1e-14);
  EXPECT_EQ(d.zero_modes, 2);
  EXPECT_TRUE(d.gapless());
  const auto odd = dispersion(hop, 7);
  EXPECT_EQ(odd.zero_modes, 0);
}

TEST(Dispersion, ConstantAndErrors) {
  const auto d = dispersion(CouplingSequence({1.5}), 5);
  for (double e : d.eps) EXPECT_NEAR(e, 1.5, 1e-15);
  EXPECT_FALSE(d.gapless());
  EXPECT_THROW(dispersion(CouplingSequence({1.0}), 0), PreconditionError);
}

TEST(Dispersion, PaperSymbolHasZeroModesAtJumpsOnly) {
  const auto m = CouplingSequence::from_symbol(paper_symbol(), 128);
  EXPECT_EQ(dispersion(m, 256).zero_modes, 2);  // k = n/4 and 3n/4 sit on the jumps
  EXPECT_EQ(dispersion(CouplingSequence::from_symbol(paper_symbol(), 5), 10).zero_modes, 0);
}

// ---- correlations ---------------------------------------------------------------

TEST(Correlations, PaperSymbolClosedForm) {
  const auto t = build_correlation_matrix(paper_symbol(), 65);
  EXPECT_TRUE(t.real());
  for (long l = 0; l <= 64; ++l) EXPECT_NEAR(t.t(l).real(), paper_correlation_closed_form(l), 1e-14) << "l = " << l;
  EXPECT_NEAR(t.t(-5).real(), t.t(5).real(), 0.0);
}

TEST(Correlations, ReferenceSymbolIsHermitianComplex) {
  const auto t = build_correlation_matrix(reference_symbol(), 8);
  EXPECT_FALSE(t.real());
  EXPECT_NEAR(t.t(0).real(), 0.0, 1e-15);
  // (1/2pi)(int_0^pi - int_pi^2pi) e^{-ilx} dx = 2/(i pi l) for odd l.
  EXPECT_NEAR(std::abs(t.t(1) - cplx(0, -2 / kPi)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(t.t(2)), 0.0, 1e-14);
  const CMatrix a = t.matrix();
  EXPECT_LE((a - a.adjoint()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(t.real_matrix(), PreconditionError);
}

TEST(Correlations, BuildRejectsBadInput) {
  EXPECT_THROW(build_correlation_matrix(paper_symbol(), 0), PreconditionError);
  EXPECT_THROW(build_correlation_matrix(PiecewiseSymbol({0.0, 1.0, kTwoPi}, {1.0, 0.0}), 4), PreconditionError);
}

// ---- entropy -------------------------------------------------------------------

TEST(GaussianEntropy, SmallBlocks) {
  EXPECT_NEAR(gaussian_block_entropy(build_correlation_matrix(paper_symbol(), 1)), 1.0, 1e-15);
  // T_2 has eigenvalues +-2/pi.
  const double p = 0.5 * (1 + 2 / kPi);
  const double s2 = 2 * (-p * std::log2(p) - (1 - p) * std::log2(1 - p));
  EXPECT_NEAR(s2, 1.3675209162674773, 1e-14);
  EXPECT_NEAR(gaussian_block_entropy(build_correlation_matrix(paper_symbol(), 2)), s2, 1e-14);
  const double frozen[] = {1.5714, 1.7122, 1.8204};
  for (long m = 3; m <= 5; ++m)
    EXPECT_NEAR(gaussian_block_entropy(build_correlation_matrix(paper_symbol(), m)), frozen[m - 3], 1e-4);
  EXPECT_NEAR(gaussian_block_entropy(build_correlation_matrix(PiecewiseSymbol::constant(2.0), 16)), 0.0, 1e-12);
}

TEST(GaussianEntropy, BinaryEntropyAndBand) {
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_EQ(binary_entropy(0.5), 1.0);
  RVector nu(2);
  nu << 1.0 + 1e-9, -1.0;
  EXPECT_NEAR(gaussian_block_entropy(nu), 0.0, 1e-15);
  nu << 1.01, 0.0;
  EXPECT_THROW(gaussian_block_entropy(nu), NumericalFailure);
}

TEST(GaussianEntropy, MatchesSlaterDeterminantOracle) {
  const long n = 10;
  const auto d = dispersion(CouplingSequence::from_symbol(paper_symbol(), n / 2), n);
  ASSERT_EQ(d.zero_modes, 0);
  for (int block = 1; block <= 5; ++block) {
    const CorrelationToeplitz t(finite_ring_correlations(d, block));
    EXPECT_NEAR(gaussian_block_entropy(t), oracle::slater_block_entropy(d.eps, block), 1e-10) << block;
  }
}

TEST(GaussianEntropy, ContractionUpToLargeBlocks) {
  for (const auto& phi : {paper_symbol(), reference_symbol()}) {
    const auto t = build_correlation_matrix(phi, 1024);
    EXPECT_LE(t.eigenvalues().cwiseAbs().maxCoeff(), 1.0 + 1e-10);
  }
}

// ---- determinant -------------------------------------------------------------------

TEST(Determinant, TwoByTwoClosedForm) {
  const auto det = determinant_diagnostic(build_correlation_matrix(paper_symbol(), 2));
  EXPECT_FALSE(det.singular);
  EXPECT_EQ(det.sign, -1);
  EXPECT_NEAR(det.d_bits, -0.5 * std::log2(4 / (kPi * kPi)), 1e-14);
  EXPECT_NEAR(det.d_bits, 0.6515, 1e-4);
}

TEST(Determinant, OddBlocksOfPaperSymbolAreSingular) {
  // Odd l couplings only: T_m is a bipartite matrix, singular for odd m.
  for (long m : {1L, 3L, 5L, 63L}) {
    const auto det = determinant_diagnostic(build_correlation_matrix(paper_symbol(), m));
    EXPECT_TRUE(det.singular) << m;
    EXPECT_TRUE(std::isinf(det.d_bits));
  }
  for (long m : {2L, 4L, 64L}) EXPECT_FALSE(determinant_diagnostic(build_correlation_matrix(paper_symbol(), m)).singular);
}

TEST(Determinant, ConstantSymbol) {
  const auto det = determinant_diagnostic(build_correlation_matrix(PiecewiseSymbol::constant(1.0), 8));
  EXPECT_NEAR(det.log_abs_det, 0.0, 1e-14);
  EXPECT_NEAR(det.d_bits, 0.0, 1e-14);
}

// ---- scaling fits ------------------------------------------------------------------

TEST(ScalingFit, ConstantSymbolIsFlat) {
  const auto rep = fh_scaling_fit(PiecewiseSymbol::constant(1.0), doubling(8, 256));
  EXPECT_NEAR(rep.a, 0.0, 1e-12);
  EXPECT_NEAR(rep.d, 0.0, 1e-12);
  EXPECT_EQ(rep.nonsingular_rows, 6);
}

TEST(ScalingFit, PaperSymbolEvenBlocks) {
  const auto rep = fh_scaling_fit(paper_symbol(), doubling(8, 512));
  ASSERT_EQ(rep.rows.size(), 7u);
  EXPECT_NEAR(rep.a, 1.0 / 3.0, 0.01);
  EXPECT_NEAR(rep.d, 0.5, 0.01);
  EXPECT_GT(rep.r_squared_entropy, 0.999);
  EXPECT_EQ(rep.bound_violations, 0);
  for (const auto& r : rep.rows) EXPECT_GE(r.s_exact, r.d_det) << r.m;
  EXPECT_NEAR(rep.rows.back().s_exact - rep.rows[3].s_exact, 1.0, 0.02);  // S(512) - S(64)
}

TEST(ScalingFit, ReferenceSymbol) {
  const auto rep = fh_scaling_fit(reference_symbol(), doubling(8, 512));
  EXPECT_NEAR(rep.a, 1.0 / 3.0, 0.02);
  EXPECT_EQ(rep.bound_violations, 0);
}

TEST(ScalingFit, EntropyIsMonotoneInBlockSize) {
  double prev = 0.0;
  for (long m = 1; m <= 40; ++m) {
    const double s = gaussian_block_entropy(build_correlation_matrix(paper_symbol(), m));
    EXPECT_GT(s, prev) << m;
    prev = s;
  }
}

TEST(ScalingFit, GuardsAndSingularRows) {
  EXPECT_THROW(fh_scaling_fit(paper_symbol(), {8, 16, 32, 64, 128}), PreconditionError);
  EXPECT_THROW(fh_scaling_fit(paper_symbol(), {8, 8, 16, 32, 64, 128}), PreconditionError);
  EXPECT_THROW(fh_scaling_fit(paper_symbol(), {1, 3, 5, 7, 9, 11}), NumericalFailure);
  const auto mixed = fh_scaling_fit(paper_symbol(), {3, 5, 8, 16, 32, 64});
  EXPECT_EQ(mixed.nonsingular_rows, 4);
  EXPECT_TRUE(mixed.rows[0].singular);
  EXPECT_TRUE(mixed.rows[0].bound_holds());
}

// ---- finite ring cross-check --------------------------------------------------------

TEST(RingCheck, ConvergesWithRingSize) {
  double prev = 1.0;
  for (long n : {256L, 1024L, 4096L}) {
    const auto r = finite_ring_crosscheck(paper_symbol(), n, 16);
    EXPECT_EQ(r.zero_modes, 2);
    EXPECT_LT(r.max_deviation, prev) << n;
    prev = r.max_deviation;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(RingCheck, Guards) {
  EXPECT_THROW(finite_ring_crosscheck(paper_symbol(), 60, 16), PreconditionError);
  EXPECT_THROW(finite_ring_crosscheck(paper_symbol(), 64, 0), PreconditionError);
  EXPECT_THROW(finite_ring_crosscheck(reference_symbol(), 64, 4), NumericalFailure);
}
