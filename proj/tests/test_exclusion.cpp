#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qcomp/core/random.hpp"
#include "qcomp/exclusion.hpp"

using namespace qcomp;

namespace {

using Ops = std::vector<HermitianOperator>;

double qexc(const Ops& ops) { return q_exc(std::span<const HermitianOperator>(ops)).value; }
double deta(const Ops& ops, double eta) { return d_eta(std::span<const HermitianOperator>(ops), eta).value; }
double etastar(const Ops& ops, bool minimize) { return eta_star(std::span<const HermitianOperator>(ops), minimize).value; }

HermitianOperator diag(const oracle::Diag& v) {
  CMatrix m = CMatrix::Zero(static_cast<Index>(v.size()), static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) m(static_cast<Index>(i), static_cast<Index>(i)) = v[i];
  return HermitianOperator(m);
}

oracle::Diag random_diag(std::size_t d, Rng& rng) {
  oracle::Diag v(d);
  for (auto& e : v) e = rng.uniform();
  return v;
}

const double kEtaZX = 2.0 * (std::numbers::sqrt2 - 1.0);

}  // namespace

TEST(Qexc, IdenticalStatesGiveTraceOne) {
  Rng rng(1);
  const HermitianOperator rho = random_density(3, rng).op();
  const QexcSolution s = q_exc(std::span<const HermitianOperator>(Ops{rho, rho}));
  EXPECT_NEAR(s.value, 1.0, 1e-8);
  EXPECT_LT(frobenius_distance(s.witness_P, rho), 1e-6);
}

TEST(Qexc, CommutingDiagonalExample) {
  const Ops ops{HermitianOperator::diagonal({0.6, 0.4}), HermitianOperator::diagonal({0.3, 0.7})};
  const QexcSolution s = q_exc(std::span<const HermitianOperator>(ops));
  EXPECT_NEAR(s.value, 0.7, 1e-8);
  EXPECT_NEAR(s.value, oracle::diag_qexc({{0.6, 0.4}, {0.3, 0.7}}), 1e-8);
  ASSERT_EQ(s.dual_Q.size(), 2u);
  EXPECT_LT(frobenius_distance(s.dual_Q[0], HermitianOperator::diagonal({0.0, 1.0})), 1e-6);
  EXPECT_LT(frobenius_distance(s.dual_Q[1], HermitianOperator::diagonal({1.0, 0.0})), 1e-6);
  double dual = 0.0;
  for (std::size_t x = 0; x < 2; ++x) dual += hs_inner(s.dual_Q[x], ops[x]);
  EXPECT_NEAR(dual, s.value, 1e-8);
  EXPECT_LE(s.gap, 1e-8);
}

TEST(Qexc, NonparallelPureStatesGiveZero) { EXPECT_NEAR(qexc({ops::ket0(), ops::plus()}), 0.0, 1e-8); }

TEST(Qexc, MatchesElementwiseMinimumOnDiagonalInstances) {
  Rng rng(2);
  for (int k = 0; k < 30; ++k) {
    const std::size_t d = 2 + static_cast<std::size_t>(k % 3);
    const std::size_t n = 2 + static_cast<std::size_t>(k % 2);
    std::vector<oracle::Diag> diags;
    Ops ops;
    for (std::size_t x = 0; x < n; ++x) {
      diags.push_back(random_diag(d, rng));
      ops.push_back(diag(diags.back()));
    }
    EXPECT_NEAR(qexc(ops), oracle::diag_qexc(diags), 1e-7);
  }
}

TEST(Qexc, CertificateInvariants) {
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const Ops ops = operators_of(random_states(2 + k % 2, 3, rng));
    const QexcSolution s = q_exc(std::span<const HermitianOperator>(ops));
    double min_trace = 1e300;
    for (const auto& op : ops) {
      EXPECT_GE((op - s.witness_P).min_eigenvalue(), -1e-7);
      min_trace = std::min(min_trace, op.trace());
    }
    EXPECT_GE(s.witness_P.min_eigenvalue(), -1e-7);
    EXPECT_GE(s.value, -1e-9);
    EXPECT_LE(s.value, min_trace + 1e-9);
    EXPECT_NEAR(s.witness_P.trace(), s.value, 1e-7);
    if (!s.dual_on_face) EXPECT_GE(sum(std::span<const HermitianOperator>(s.dual_Q)).min_eigenvalue(), 1.0 - 1e-7);
  }
}

TEST(Qexc, RejectsInvalidOperators) {
  EXPECT_THROW(qexc({HermitianOperator::diagonal({1.0, -0.1}), ops::ket0()}), Error);
  EXPECT_THROW(qexc({ops::ket0(), HermitianOperator::identity(3)}), Error);
}

TEST(Iexc, Examples) {
  const std::vector<DensityOperator> same{DensityOperator(ops::plus()), DensityOperator(ops::plus())};
  EXPECT_NEAR(i_exc(std::span<const DensityOperator>(same)), 0.0, 1e-8);
  const std::vector<DensityOperator> caps{DensityOperator(ops::ket0()), DensityOperator(ops::plus())};
  EXPECT_TRUE(std::isinf(i_exc(std::span<const DensityOperator>(caps))));
  const std::vector<DensityOperator> diag_states{DensityOperator(HermitianOperator::diagonal({0.6, 0.4})),
                                                 DensityOperator(HermitianOperator::diagonal({0.3, 0.7}))};
  EXPECT_NEAR(i_exc(std::span<const DensityOperator>(diag_states)), -std::log2(0.7), 1e-7);
}

TEST(Deta, SingleOperator) {
  Rng rng(4);
  const HermitianOperator rho = random_density(2, rng).op();
  for (double eta : {0.0, 0.3, 0.9}) EXPECT_NEAR(deta({rho}, eta), 1.0 - eta, 1e-8);
}

TEST(Deta, NonparallelPureStatesAboveThreshold) { EXPECT_NEAR(deta({ops::ket0(), ops::plus()}, 0.9), 0.0, 1e-8); }

TEST(Deta, MonotoneInEta) {
  Rng rng(5);
  for (int k = 0; k < 10; ++k) {
    const Ops ops = operators_of(random_states(2, 3, rng));
    double prev = deta(ops, 0.0);
    for (double eta : {0.2, 0.5, 0.8, 0.95}) {
      const double v = deta(ops, eta);
      EXPECT_LE(v, prev + 1e-8);
      prev = v;
    }
  }
}

TEST(Deta, MatchesDiagonalOracle) {
  Rng rng(6);
  for (int k = 0; k < 20; ++k) {
    std::vector<oracle::Diag> diags{random_diag(3, rng), random_diag(3, rng)};
    const double eta = 0.1 * static_cast<double>(k % 10);
    EXPECT_NEAR(deta({diag(diags[0]), diag(diags[1])}, eta), oracle::diag_deta(diags, eta), 1e-7);
  }
}

TEST(Deta, LinearAboveEtaStar) {
  Rng rng(7);
  for (int k = 0; k < 10; ++k) {
    const Ops ops = operators_of(random_states(2 + k % 2, 2 + k % 2, rng));
    const double q = qexc(ops);
    const double es = etastar(ops, true);
    for (double eta : {es, 0.5 * (es + 1.0), 0.99}) EXPECT_NEAR(deta(ops, eta), (1.0 - eta) * q, 1e-6);
  }
}

TEST(EtaStar, Examples) {
  Rng rng(8);
  const HermitianOperator rho = random_density(2, rng).op();
  EXPECT_NEAR(etastar({rho, rho}, true), 0.0, 1e-6);
  EXPECT_NEAR(etastar({ops::ket0(), ops::plus()}, true), kEtaZX, 1e-6);
  // The analytic dual Q = alpha{|1><1|, |-><-|} with alpha = 2 + sqrt2 reaches the same norm.
  const double alpha = 2.0 + std::numbers::sqrt2;
  const HermitianOperator total = (ops::ket1() + ops::minus()) * alpha;
  EXPECT_NEAR(total.max_eigenvalue(), 3.0 + 2.0 * std::numbers::sqrt2, 1e-12);
  EXPECT_NEAR(1.0 - 1.0 / total.max_eigenvalue(), kEtaZX, 1e-12);
}

TEST(EtaStar, MinimisedNeverExceedsSolverDual) {
  Rng rng(9);
  for (int k = 0; k < 15; ++k) {
    const Ops ops = operators_of(random_states(2, 2 + k % 2, rng));
    EXPECT_GE(etastar(ops, false), etastar(ops, true) - 1e-9);
  }
}

TEST(StateExclusion, Examples) {
  Rng rng(10);
  const DensityOperator rho = random_density(2, rng);
  const std::vector<DensityOperator> same{rho, rho, rho};
  const auto uniform3 = PriorDistribution::uniform(3);
  for (double eta : {0.0, 0.4})
    EXPECT_NEAR(p_error_state_exclusion(std::span<const DensityOperator>(same), uniform3, eta).value, (1.0 - eta) / 3.0, 1e-8);

  const std::vector<DensityOperator> orth{DensityOperator(ops::ket0()), DensityOperator(ops::ket1())};
  const auto r = p_error_state_exclusion(std::span<const DensityOperator>(orth), PriorDistribution::uniform(2), 0.0);
  EXPECT_NEAR(r.value, 0.0, 1e-8);
  EXPECT_LT(frobenius_distance(r.Q[0], ops::ket1()), 1e-6);
  EXPECT_LT(frobenius_distance(r.Q[1], ops::ket0()), 1e-6);

  const std::vector<DensityOperator> caps{DensityOperator(ops::ket0()), DensityOperator(ops::plus())};
  EXPECT_NEAR(p_error_state_exclusion(std::span<const DensityOperator>(caps), PriorDistribution::uniform(2), 0.9).value, 0.0,
              1e-8);
}

TEST(StateExclusion, TwoStatesMatchHelstrom) {
  Rng rng(11);
  for (int k = 0; k < 20; ++k) {
    const auto states = random_states(2, 2, rng);
    const PriorDistribution prior = random_prior(2, rng);
    const double expected = oracle::helstrom_error(states[0].op().matrix() * prior[0], states[1].op().matrix() * prior[1]);
    EXPECT_NEAR(p_error_state_exclusion(std::span<const DensityOperator>(states), prior, 0.0).value, expected, 1e-7);
  }
}

TEST(StateExclusion, InconclusiveStaysWithinBudget) {
  Rng rng(12);
  const auto states = random_states(3, 3, rng);
  const auto r = p_error_state_exclusion(std::span<const DensityOperator>(states), PriorDistribution::uniform(3), 0.3);
  EXPECT_GE(r.inconclusive.min_eigenvalue(), -1e-7);
  EXPECT_LE(r.inconclusive.max_eigenvalue(), 0.3 + 1e-7);
}

TEST(Classical, Examples) {
  EXPECT_NEAR(p_error_classical(PriorDistribution({1.0 / 3, 1.0 / 3, 1.0 / 3}), 0.9).value, 0.1 / 3.0, 1e-15);
  EXPECT_NEAR(p_error_classical(PriorDistribution({0.5, 0.3, 0.2}), 0.5).value, 0.1, 1e-15);
  const auto c = p_error_classical(PriorDistribution({0.5, 0.3, 0.2}), 0.0);
  EXPECT_NEAR(c.value, 0.2, 1e-15);
  EXPECT_EQ(c.argmin, 2u);
  EXPECT_THROW(p_error_classical(PriorDistribution({0.5, 0.5}), 1.0), Error);
}

TEST(AdvantageRatio, Examples) {
  const std::vector<DensityOperator> caps{DensityOperator(ops::ket0()), DensityOperator(ops::plus())};
  EXPECT_NEAR(advantage_ratio_state(std::span<const DensityOperator>(caps), PriorDistribution::uniform(2), 0.9), 0.0, 1e-6);
  const std::vector<DensityOperator> same{DensityOperator(ops::plus()), DensityOperator(ops::plus())};
  EXPECT_NEAR(advantage_ratio_state(std::span<const DensityOperator>(same), PriorDistribution::uniform(2), 0.5), 1.0, 1e-6);
}

TEST(AdvantageRatio, UniformPriorIsTheMinimum) {
  Rng rng(13);
  const auto states = random_states(2, 3, rng);
  const double eta = std::max(0.5, eta_star(std::span<const DensityOperator>(states), true).value);
  const double uniform = advantage_ratio_state(std::span<const DensityOperator>(states), PriorDistribution::uniform(3), eta);
  for (int k = 0; k < 20; ++k)
    EXPECT_GE(advantage_ratio_state(std::span<const DensityOperator>(states), random_prior(3, rng), eta), uniform - 1e-6);
  std::vector<PriorDistribution> priors;
  for (int k = 0; k < 5; ++k) priors.push_back(random_prior(3, rng));
  EXPECT_TRUE(theorem1_check(std::span<const DensityOperator>(states), eta, priors, 1e-6).pass());
}

TEST(Theta, DegenerateStrategies) {
  Rng rng(14);
  const auto states = random_states(2, 3, rng);
  const auto prior = random_prior(3, rng);
  const auto span = std::span<const DensityOperator>(states);
  EXPECT_NEAR(p_error_theta(span, prior, 0.2, ThetaStrategy::identity(2, 3)),
              p_error_state_exclusion(span, prior, 0.2).value, 1e-8);
  EXPECT_NEAR(p_error_theta(span, PriorDistribution::uniform(3), 0.2, ThetaStrategy::uniform_mixing(2, 3)),
              (1.0 - 0.2) / 3.0, 1e-8);
}

TEST(Theta, NeverHelpsAboveEtaStar) {
  Rng rng(15);
  for (int k = 0; k < 10; ++k) {
    const auto states = random_states(2, 2, rng);
    const auto span = std::span<const DensityOperator>(states);
    const auto prior = random_prior(2, rng);
    const double eta = std::max(eta_star(span, true).value, 0.5);
    const ThetaStrategy theta = random_theta(2, 2, 3, 2, rng);
    EXPECT_GE(p_error_theta(span, prior, eta, theta), p_error_state_exclusion(span, prior, eta).value - 1e-7);
  }
}

TEST(Theta, ValidationRejectsInconclusiveGeneratingPostprocessing) {
  ThetaStrategy t = ThetaStrategy::identity(2, 2);
  t.postprocessing[0](0, 0) = 0.5;
  EXPECT_THROW(t.validate(2, 2), Error);
}
