#include <algorithm>

#include <gtest/gtest.h>

#include "qcomp/core/random.hpp"
#include "qcomp/exclusion.hpp"
#include "qcomp/sdp/certificate.hpp"
#include "qcomp/sdp/dump.hpp"
#include "qcomp/sdp/embedding.hpp"
#include "qcomp/sdp/solver.hpp"

using namespace qcomp;
using namespace qcomp::sdp;

namespace {

/// max tr P subject to 0 <= P <= cap_k for every cap.
SdpProblem cap_problem(const std::vector<HermitianOperator>& caps) {
  ProblemBuilder pb;
  const Index d = caps.front().dim();
  const auto p = pb.hermitian("P", d);
  pb.psd("P", p.expr());
  for (std::size_t k = 0; k < caps.size(); ++k)
    pb.psd("cap " + std::to_string(k), AffineMatrix(caps[k].matrix()) - p.expr());
  pb.maximize(p.expr().trace());
  return pb.build();
}

RVector sorted(RVector v) {
  std::sort(v.data(), v.data() + v.size());
  return v;
}

}  // namespace

TEST(Embedding, PauliYSpectrum) {
  const RMatrix e = hermitian_embedding(ops::pauli_y());
  EXPECT_EQ(e.rows(), 4);
  EXPECT_LT((e - e.transpose()).norm(), 1e-15);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(e);
  RVector expected(4);
  expected << -1, -1, 1, 1;
  EXPECT_LT((es.eigenvalues() - expected).norm(), 1e-12);
}

TEST(Embedding, RealMatrixIsDuplicatedOnTheDiagonal) {
  const HermitianOperator a = HermitianOperator::diagonal({0.2, 0.5, 0.3});
  const RMatrix e = hermitian_embedding(a);
  EXPECT_LT((e.topLeftCorner(3, 3) - a.matrix().real()).norm(), 1e-15);
  EXPECT_LT((e.bottomRightCorner(3, 3) - a.matrix().real()).norm(), 1e-15);
  EXPECT_LT(e.topRightCorner(3, 3).norm(), 1e-15);
  EXPECT_NEAR(e.trace(), 2.0 * a.trace(), 1e-15);
}

TEST(Embedding, SpectrumIsDuplicated) {
  Rng rng(5);
  for (int k = 0; k < 20; ++k) {
    const HermitianOperator a(ginibre(4, 4, rng));
    Eigen::SelfAdjointEigenSolver<CMatrix> complex_es(a.matrix());
    RVector doubled(8);
    doubled << complex_es.eigenvalues(), complex_es.eigenvalues();
    Eigen::SelfAdjointEigenSolver<RMatrix> real_es(hermitian_embedding(a));
    EXPECT_LT((sorted(real_es.eigenvalues()) - sorted(doubled)).norm(), 1e-10);
    EXPECT_LT((deembed(hermitian_embedding(a) / 2.0) - a.matrix()).norm(), 1e-14);
  }
}

TEST(Solver, SingleCapSaturates) {
  const SdpProblem p = cap_problem({HermitianOperator::diagonal({1.0, 2.0})});
  const SdpSolution s = solve(p);
  ASSERT_TRUE(s.optimal()) << s.message;
  EXPECT_NEAR(s.primal_value, 3.0, 1e-7);
  EXPECT_LE(s.gap, 1e-8);
  EXPECT_LT((s.primal_blocks[0] - HermitianOperator::diagonal({1.0, 2.0}).matrix()).norm(), 1e-6);
  const CertificateReport rep = verify_certificate(p, s);
  EXPECT_TRUE(rep.pass) << rep.worst();
  EXPECT_LT(rep.max_primal_residual, 1e-10);
}

TEST(Solver, NonparallelRankOneCapsForceZero) {
  const SdpSolution s = solve(cap_problem({ops::ket0(), ops::plus()}));
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.primal_value, 0.0, 1e-8);
}

TEST(Solver, PerturbedMultiplierFailsVerification) {
  const SdpProblem p = cap_problem({HermitianOperator::diagonal({1.0, 2.0})});
  SdpSolution s = solve(p);
  ASSERT_TRUE(s.optimal());
  s.dual_multipliers[1](0, 0) += 1e-3;
  const CertificateReport rep = verify_certificate(p, s);
  EXPECT_FALSE(rep.pass);
  EXPECT_FALSE(rep.worst().empty());
}

TEST(Solver, DetectsInfeasibleAndUnbounded) {
  {
    ProblemBuilder pb;
    const auto p = pb.hermitian("P", 2);
    pb.psd("P", p.expr());
    pb.psd("P <= -I", AffineMatrix::identity(2, -1.0) - p.expr());
    pb.maximize(p.expr().trace());
    EXPECT_EQ(solve(pb.build()).status, SolveStatus::infeasible);
  }
  {
    ProblemBuilder pb;
    const auto p = pb.hermitian("P", 2);
    pb.psd("P", p.expr());
    pb.maximize(p.expr().trace());
    EXPECT_EQ(solve(pb.build()).status, SolveStatus::unbounded);
  }
}

TEST(Solver, EqualityConstrainedProgram) {
  // min <C, X> over density matrices X is the smallest eigenvalue of C.
  Rng rng(9);
  for (int k = 0; k < 10; ++k) {
    const HermitianOperator c(ginibre(3, 3, rng));
    ProblemBuilder pb;
    const auto x = pb.hermitian("X", 3);
    pb.psd("X", x.expr());
    pb.equal("tr X = 1", x.expr().trace(), 1.0);
    pb.minimize(x.expr().trace_with(c.matrix()));
    const SdpProblem p = pb.build();
    const SdpSolution s = solve(p);
    ASSERT_TRUE(s.optimal()) << s.message;
    EXPECT_NEAR(s.primal_value, c.min_eigenvalue(), 1e-7);
    EXPECT_TRUE(verify_certificate(p, s).pass);
  }
}

TEST(Solver, RandomInstancesCertifyAndIgnoreConstraintOrder) {
  Rng rng(101);
  for (int k = 0; k < 100; ++k) {
    const Index d = 2 + static_cast<Index>(k % 2);
    std::vector<HermitianOperator> caps;
    for (std::size_t x = 0; x < 2 + static_cast<std::size_t>(k % 2); ++x) caps.push_back(random_density(d, rng).op());
    SdpProblem p = cap_problem(caps);
    const SdpSolution s = solve(p);
    ASSERT_TRUE(s.optimal()) << s.message;
    EXPECT_LE(s.gap, 1e-8);
    EXPECT_TRUE(verify_certificate(p, s).pass);

    SdpProblem reversed = p;
    std::reverse(reversed.blocks.begin(), reversed.blocks.end());
    const SdpSolution r = solve(reversed);
    ASSERT_TRUE(r.optimal());
    EXPECT_TRUE(verify_certificate(reversed, r).pass);
    EXPECT_NEAR(r.primal_value, s.primal_value, 1e-8);
  }
}

TEST(Solver, ValueInvariantUnderUnitaryConjugation) {
  Rng rng(77);
  for (int k = 0; k < 10; ++k) {
    std::vector<HermitianOperator> caps{random_density(3, rng).op(), random_density(3, rng).op()};
    const CMatrix u = random_unitary(3, rng);
    std::vector<HermitianOperator> rotated;
    for (const auto& c : caps) rotated.emplace_back(CMatrix(u * c.matrix() * u.adjoint()));
    EXPECT_NEAR(solve(cap_problem(caps)).primal_value, solve(cap_problem(rotated)).primal_value, 1e-8);
  }
}

TEST(Solver, IsDeterministic) {
  Rng rng(3);
  const SdpProblem p = cap_problem({random_density(3, rng).op(), random_density(3, rng).op()});
  const SdpSolution a = solve(p);
  const SdpSolution b = solve(p);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.primal_value, b.primal_value);
}

TEST(Dump, ProblemAndSolutionSerialise) {
  const SdpProblem p = cap_problem({HermitianOperator::diagonal({1.0, 2.0})});
  const auto jp = to_json(p);
  EXPECT_EQ(jp["sense"], "maximize");
  EXPECT_EQ(jp["blocks"].size(), 2u);
  EXPECT_EQ(jp["blocks"][1]["name"], "cap 0");
  const auto js = to_json(solve(p));
  EXPECT_EQ(js["status"], "optimal");
  EXPECT_EQ(js["primal_blocks"].size(), 2u);
}
