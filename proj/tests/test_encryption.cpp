#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qcomp/core/random.hpp"
#include "qcomp/encryption.hpp"

using namespace qcomp;

namespace {

MeasurementAssemblage trivial_pair() {
  const HermitianOperator half = HermitianOperator::identity(2) * 0.5;
  return MeasurementAssemblage({{half, half}, {half, half}});
}

}  // namespace

TEST(Encryption, ComplementaryPairIsErrorFreeAtEtaMin) {
  const double eta_min = 2.0 * (std::numbers::sqrt2 - 1.0);
  const MeasurementAssemblage zx = pauli_zx();
  for (const auto& pi : {PermutationSet::identity(2, 2), PermutationSet({{0, 1}, {1, 0}})}) {
    const EncryptionResult r = p_error_encrypt_given_pi({zx, eta_min}, pi);
    EXPECT_NEAR(r.error, 0.0, 1e-8);
    EXPECT_LE(r.decoders.validate(eta_min).worst(), 1e-7);
    EXPECT_NEAR(r.error + r.success + r.waive, 1.0, 1e-8);
  }
  EXPECT_NEAR(p_error_encrypt({zx, eta_min}).error, 0.0, 1e-8);
}

TEST(Encryption, TrivialPairGivesHalfTheConclusiveWeight) {
  for (double eta : {0.0, 0.3, 0.9}) EXPECT_NEAR(p_error_encrypt({trivial_pair(), eta}).error, (1.0 - eta) / 2.0, 1e-8);
}

TEST(Encryption, ErrorVanishesAsEtaApproachesOne) {
  Rng rng(1);
  for (int k = 0; k < 5; ++k) {
    const MeasurementAssemblage e = random_povm_assemblage(2, 2, 2, rng);
    EXPECT_LE(p_error_encrypt({e, 0.999}).error, (1.0 - 0.999) / 2.0 + 1e-8);
  }
}

TEST(Encryption, RandomProjectivePairsErrAtEtaZero) {
  Rng rng(2);
  for (int k = 0; k < 5; ++k) {
    const MeasurementAssemblage e = random_projective_pair(2, rng);
    EXPECT_GT(p_error_encrypt({e, 0.0}).error, 1e-6);
    EXPECT_TRUE(nogo_encrypt_check(e, 1e-6).pass());
  }
}

TEST(Encryption, RejectsInvalidInstances) {
  Rng rng(3);
  EXPECT_THROW(p_error_encrypt({random_povm_assemblage(2, 3, 2, rng), 0.5}), Error);
  EXPECT_THROW(p_error_encrypt({pauli_zx(), 1.0}), Error);
  EXPECT_THROW(nogo_encrypt_check(MeasurementAssemblage({{ops::ket0(), ops::ket1()}, {HermitianOperator::identity(2)}}), 1e-6),
               Error);
}

TEST(Encryption, DiagonalPairsMatchOracle) {
  Rng rng(4);
  for (int k = 0; k < 5; ++k) {
    const std::size_t w = 2 + static_cast<std::size_t>(k % 2);
    std::vector<std::vector<oracle::Diag>> diags(2);
    std::vector<std::vector<HermitianOperator>> table(2);
    for (std::size_t x = 0; x < 2; ++x) {
      std::vector<oracle::Diag> cols(w, oracle::Diag(3));
      for (std::size_t i = 0; i < 3; ++i) {
        double total = 0.0;
        for (std::size_t a = 0; a < w; ++a) total += (cols[a][i] = rng.uniform());
        for (std::size_t a = 0; a < w; ++a) cols[a][i] /= total;
      }
      diags[x] = cols;
      for (const auto& c : cols) table[x].push_back(HermitianOperator::diagonal({c[0], c[1], c[2]}));
    }
    const double eta = 0.25;
    const double expected = oracle::brute_sweep(2, w, [&](const std::vector<std::size_t>& t) {
      oracle::Diag a = diags[0][t[0]], b = diags[1][t[1]];
      for (auto& v : a) v /= 6.0;
      for (auto& v : b) v /= 6.0;
      return oracle::diag_deta({a, b}, eta);
    });
    EXPECT_NEAR(p_error_encrypt({MeasurementAssemblage(table), eta}).error, expected, 1e-7);
  }
}

TEST(EncryptionFormula, HoldsAboveEtaStar) {
  EXPECT_TRUE(theorem4_check(pauli_zx(), {}, 1e-6).pass());
  EXPECT_TRUE(theorem4_check(trivial_pair(), {0.0, 0.5}, 1e-6).pass());
  Rng rng(5);
  for (int k = 0; k < 3; ++k) EXPECT_TRUE(theorem4_check(random_povm_assemblage(2, 2, 2, rng), {}, 1e-6).pass());
  EXPECT_THROW(theorem4_check(random_povm_assemblage(2, 3, 2, rng), {}, 1e-6), Error);
}

TEST(PauliExample, PublishedValues) {
  const PauliExampleReport ex = pauli_example();
  const double alpha = 2.0 / (2.0 + std::numbers::sqrt2);
  EXPECT_NEAR(ex.alpha_max, alpha, 1e-12);
  EXPECT_NEAR(ex.eta_min, 0.8284271247, 1e-6);
  EXPECT_NEAR(ex.success, 0.2928932188, 1e-6);
  EXPECT_NEAR(ex.success, alpha / 2.0, 1e-12);
  EXPECT_NEAR(ex.eta_star, ex.eta_min, 1e-6);
  ASSERT_EQ(ex.cases.size(), 4u);
  for (const auto& c : ex.cases) {
    EXPECT_LE(c.optimal_error, 1e-8);
    EXPECT_LE(c.closed_form.error, 1e-12);
    EXPECT_LE(c.validation.worst(), 1e-8);
  }
}
