#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qcomp/core/json_io.hpp"
#include "qcomp/core/random.hpp"

using namespace qcomp;

TEST(HermitianOperator, StoresSymmetrisedMatrix) {
  CMatrix m(2, 2);
  m << 1.0, Complex(2.0, 1.0), Complex(0.0, 3.0), 4.0;
  const HermitianOperator h(m);
  const CMatrix expected = (m + m.adjoint()) / 2.0;
  EXPECT_LT((h.matrix() - expected).norm(), 1e-15);
}

TEST(HermitianOperator, MinEigenvalueOfDiagonal) {
  EXPECT_NEAR(min_eigenvalue(HermitianOperator::diagonal({0.3, 0.7})), 0.3, 1e-15);
}

TEST(HermitianOperator, TransposeOfPauliYFlipsSign) {
  const HermitianOperator y = ops::pauli_y();
  EXPECT_LT(frobenius_distance(transpose_map(y), -y), 1e-15);
  Rng rng(3);
  const HermitianOperator r = random_density(3, rng).op();
  EXPECT_EQ(transpose_map(transpose_map(r)), r);
}

TEST(HermitianOperator, TensorProductOfPureStates) {
  const HermitianOperator t = tensor_product(ops::ket0(), ops::plus());
  CVector psi = CVector::Zero(4);
  psi(0) = psi(1) = 1.0 / std::sqrt(2.0);
  EXPECT_LT(frobenius_distance(t, HermitianOperator::projector(psi)), 1e-15);
  EXPECT_NEAR(t.max_eigenvalue(), 1.0, 1e-12);
  EXPECT_NEAR(t.trace(), 1.0, 1e-12);
}

TEST(PartialTrace, MaximallyEntangledMarginals) {
  const BipartiteState phi = maximally_entangled(2);
  EXPECT_LT(frobenius_distance(phi.marginal_a(), HermitianOperator::identity(2) / 2.0), 1e-15);
  EXPECT_NEAR(phi.op()(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(phi.op()(0, 3).real(), 0.5, 1e-15);
  EXPECT_NEAR(phi.op()(3, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(phi.op()(3, 3).real(), 0.5, 1e-15);
  const BipartiteState phi3 = maximally_entangled(3);
  EXPECT_NEAR(phi3.marginal_a().min_eigenvalue(), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR((phi3.op().matrix() * phi3.op().matrix()).trace().real(), 1.0, 1e-12);
  EXPECT_THROW(maximally_entangled(1), Error);
}

TEST(PartialTrace, ProductState) {
  Rng rng(11);
  const HermitianOperator ra = random_density(2, rng).op();
  const HermitianOperator rb = random_density(3, rng).op();
  const HermitianOperator prod = tensor_product(ra, rb);
  EXPECT_LT(frobenius_distance(partial_trace(prod, 2, 3, Subsystem::A), rb), 1e-14);
  EXPECT_LT(frobenius_distance(partial_trace(prod, 2, 3, Subsystem::B), ra), 1e-14);
}

TEST(PartialTrace, MatchesIndependentContraction) {
  Rng rng(12);
  for (int k = 0; k < 20; ++k) {
    const BipartiteState rho = random_mixed_bipartite(2, 3, rng);
    const HermitianOperator tb = partial_trace(rho, Subsystem::B);
    const HermitianOperator ta = partial_trace(rho, Subsystem::A);
    EXPECT_LT((tb.matrix() - oracle::trace_out_b(rho.op().matrix(), 2, 3)).norm(), 1e-13);
    EXPECT_LT((ta.matrix() - oracle::trace_out_a(rho.op().matrix(), 2, 3)).norm(), 1e-13);
    EXPECT_NEAR(tb.trace(), 1.0, 1e-10);
  }
}

TEST(PartialTrace, Linear) {
  Rng rng(13);
  const HermitianOperator x = random_mixed_bipartite(2, 2, rng).op();
  const HermitianOperator y = random_mixed_bipartite(2, 2, rng).op();
  const HermitianOperator lhs = partial_trace(x * 0.3 + y * 1.7, 2, 2, Subsystem::B);
  const HermitianOperator rhs = partial_trace(x, 2, 2, Subsystem::B) * 0.3 + partial_trace(y, 2, 2, Subsystem::B) * 1.7;
  EXPECT_LT(frobenius_distance(lhs, rhs), 1e-12);
  EXPECT_THROW(partial_trace(x, 3, 2, Subsystem::B), Error);
}

TEST(InducedAssemblage, MaximallyEntangledGivesScaledTranspose) {
  Rng rng(21);
  const MeasurementAssemblage e = random_povm_assemblage(3, 2, 3, rng);
  const StateAssemblage s = induced_assemblage(e, maximally_entangled(3));
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t a = 0; a < 3; ++a)
      EXPECT_LT(frobenius_distance(s.element(a, x), transpose_map(e.element(a, x)) / 3.0), 1e-13);
}

TEST(InducedAssemblage, TrivialMeasurementGivesScaledMarginal) {
  Rng rng(22);
  const HermitianOperator half = HermitianOperator::identity(2) / 2.0;
  const MeasurementAssemblage e({{half, half}, {half, half}});
  const BipartiteState rho = random_mixed_bipartite(2, 2, rng);
  const StateAssemblage s = induced_assemblage(e, rho);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t a = 0; a < 2; ++a) EXPECT_LT(frobenius_distance(s.element(a, x), rho.marginal_b() / 2.0), 1e-13);
}

TEST(InducedAssemblage, AlwaysNonSignalling) {
  Rng rng(23);
  for (int k = 0; k < 100; ++k) {
    const Index d = 2 + static_cast<Index>(k % 2);
    const MeasurementAssemblage e = random_povm_assemblage(d, 2, 2, rng);
    const BipartiteState rho = random_mixed_bipartite(d, 2, rng);
    const StateAssemblage s = induced_assemblage(e, rho);
    EXPECT_LE(s.signalling_residual(), 1e-9);
    // Each reduced state is the B marginal, contracted independently.
    const Eigen::MatrixXcd rb = oracle::trace_out_a(rho.op().matrix(), static_cast<int>(d), 2);
    for (std::size_t x = 0; x < 2; ++x) EXPECT_LT((s.reduced(x).matrix() - rb).norm(), 1e-9);
  }
}

TEST(Random, PovmPairIsDeterministic) {
  const auto a = random_povm_pair(7, 2, 2);
  const auto b = random_povm_pair(7, 2, 2);
  EXPECT_EQ(io::encode(a).dump(), io::encode(b).dump());
  EXPECT_NE(io::encode(a).dump(), io::encode(random_povm_pair(8, 2, 2)).dump());
}

TEST(Random, GeneratorsSatisfyInvariants) {
  Rng rng(31);
  for (int k = 0; k < 20; ++k) {
    const Povm p = random_povm(3, 4, rng);
    HermitianOperator total = HermitianOperator::zero(3);
    for (const auto& el : p.elements()) {
      EXPECT_GE(el.min_eigenvalue(), -1e-12);
      total = total + el;
    }
    EXPECT_LT(frobenius_distance(total, HermitianOperator::identity(3)), 1e-10);
    const auto kraus = random_channel_kraus(2, 3, 2, rng);
    CMatrix tp = CMatrix::Zero(2, 2);
    for (const auto& k2 : kraus) tp += k2.adjoint() * k2;
    EXPECT_LT((tp - CMatrix::Identity(2, 2)).norm(), 1e-10);
    const PriorDistribution prior = random_prior(4, rng);
    EXPECT_GE(prior.min(), 1e-3 - 1e-15);
  }
}

TEST(Objects, RejectInvalidInput) {
  EXPECT_THROW(DensityOperator(HermitianOperator::diagonal({0.5, 0.6})), Error);
  EXPECT_THROW(DensityOperator(HermitianOperator::diagonal({1.2, -0.2})), Error);
  EXPECT_THROW(Povm({ops::ket0()}), Error);
  EXPECT_THROW(PriorDistribution({0.5, 0.0, 0.5}), Error);
  EXPECT_THROW(PriorDistribution({0.5, 0.6}), Error);
  const HermitianOperator half = HermitianOperator::identity(2) / 2.0;
  EXPECT_THROW(StateAssemblage({{half, half}}), Error);
}

TEST(Objects, UnevenOutcomeCountsArePadded) {
  const MeasurementAssemblage e({{ops::ket0(), ops::ket1()}, {HermitianOperator::identity(2)}});
  EXPECT_EQ(e.outcomes(), 2u);
  EXPECT_EQ(e.element(1, 1), HermitianOperator::zero(2));
}

TEST(JsonIo, AssemblageRoundTripIsBitExact) {
  Rng rng(41);
  const MeasurementAssemblage e = random_povm_assemblage(3, 2, 3, rng);
  const std::string text = io::encode(e).dump();
  const MeasurementAssemblage back = io::decode_measurement_assemblage(nlohmann::json::parse(text));
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t a = 0; a < 3; ++a) EXPECT_EQ(back.element(a, x).matrix(), e.element(a, x).matrix());
  EXPECT_EQ(io::encode(back).dump(), text);
}

TEST(JsonIo, RejectsMalformedInput) {
  using nlohmann::json;
  EXPECT_THROW(io::decode_matrix(json::parse("[[1, 2], [3]]")), Error);
  EXPECT_THROW(io::decode_hermitian(json::parse("[[[1,0],[2,0]],[[3,0],[4,0]]]")), Error);
  EXPECT_THROW(io::decode_table(json::parse(R"({"dim":2,"n":1,"w":1,"elements":[{"x":1,"a":0,"matrix":[[1,0],[0,1]]}]})")),
               Error);
  EXPECT_THROW(io::decode_operator_set(json::parse(R"({"operators":[]})")), Error);
}
