#pragma once

// Seeded property suites for every theorem-level relation, plus a solver-health
// check over every program the suites solved.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "qcomp/assertion.hpp"
#include "qcomp/complementarity.hpp"
#include "qcomp/encryption.hpp"
#include "qcomp/ensemble_exclusion.hpp"
#include "qcomp/exclusion.hpp"
#include "qcomp/incompatibility.hpp"

namespace qcomp::verify {

/// Independent stream per suite for a given user seed.
inline std::uint64_t suite_seed(std::uint64_t seed, std::uint64_t tag) { return seed * 0x9E3779B97F4A7C15ULL + tag; }

inline std::string idx(const char* what, std::size_t k) { return std::string(what) + " " + std::to_string(k) + ": "; }

/// Data processing and the identical-states value of q_exc.
inline CheckReport lemma1(std::uint64_t seed, const Settings& s) {
  CheckReport rep;
  rep.name = "q_exc properties";
  Rng rng(suite_seed(seed, 1));
  for (std::size_t k = 0; k < 50; ++k) {
    const Index d = 2 + static_cast<Index>(k % 2);
    const std::size_t n = 2 + (k / 2) % 2;
    const Index d_out = 2 + static_cast<Index>((k / 4) % 2);
    const auto states = random_states(d, n, rng);
    const auto kraus = random_channel_kraus(d, d_out, 2, rng);
    std::vector<HermitianOperator> mapped;
    for (const auto& r : states) mapped.push_back(apply_channel(kraus, r.op()));
    const double before = q_exc(states, s).value;
    const double after = q_exc(std::span<const HermitianOperator>(mapped), s).value;
    rep.check(idx("channel", k) + "q_exc does not decrease", after, Relation::greater_equal, before, 1e-7);
    rep.check(idx("channel", k) + "q_exc >= 0", before, Relation::greater_equal, 0.0, 1e-9);
    rep.check(idx("channel", k) + "q_exc <= 1", before, Relation::less_equal, 1.0, 1e-9);
  }
  for (std::size_t k = 0; k < 10; ++k) {
    const auto rho = random_density(2 + static_cast<Index>(k % 2), rng);
    const std::vector<DensityOperator> pair{rho, rho};
    rep.check(idx("state", k) + "q_exc({rho, rho}) = 1", q_exc(pair, s).value, Relation::equal, 1.0, 1e-8);
  }
  return rep;
}

/// D_eta = (1 - eta) q_exc above eta*.
inline CheckReport lemma2(std::uint64_t seed, const Settings& s) {
  CheckReport rep;
  rep.name = "D_eta linear above eta*";
  Rng rng(suite_seed(seed, 2));
  for (std::size_t k = 0; k < 100; ++k) {
    const Index d = 2 + static_cast<Index>(k % 2);
    const std::size_t n = 2 + (k / 2) % 2;
    const auto ops = operators_of(random_states(d, n, rng));
    const std::span<const HermitianOperator> view(ops);
    const EtaStarResult es = eta_star(view, true, s);
    if (es.fell_back) rep.note(idx("instance", k) + "norm minimisation fell back to the solver dual");
    const double q = q_exc(view, s).value;
    for (double eta : default_eta_grid(es.value)) {
      rep.check(idx("instance", k) + "eta " + std::to_string(eta), d_eta(view, eta, s).value, Relation::equal,
                (1.0 - eta) * q, 1e-6);
    }
  }
  return rep;
}

inline CheckReport theorem1(std::uint64_t seed, const Settings& s) {
  CheckReport rep;
  rep.name = "state exclusion advantage";
  Rng rng(suite_seed(seed, 3));
  for (std::size_t k = 0; k < 50; ++k) {
    const auto states = random_states(2, 2 + k % 2, rng);
    std::vector<PriorDistribution> priors;
    for (int i = 0; i < 20; ++i) priors.push_back(random_prior(states.size(), rng));
    const double eta = eta_star(states, true, s).value;
    rep.absorb(theorem1_check(states, eta, priors, 1e-6, s), idx("set", k));
  }
  return rep;
}

inline CheckReport theorem2(std::uint64_t seed, const Settings& s) {
  CheckReport rep;
  rep.name = "ensemble exclusion advantage";
  Rng rng(suite_seed(seed, 4));
  for (std::size_t k = 0; k < 30; ++k) {
    const auto e = random_povm_assemblage(2, 2, 2, rng);
    const auto rho = random_mixed_bipartite(2, 2, rng);
    const StateAssemblage sigma = induced_assemblage(e, rho, s.tol);
    std::vector<PriorDistribution> priors;
    for (int i = 0; i < 20; ++i) priors.push_back(random_prior(2, rng));
    const double eta = eta_star_assemblage(sigma, true, s);
    rep.absorb(theorem2_check(sigma, eta, priors, {}, s), idx("assemblage", k));
  }
  // Complementary ensembles are excluded without error.
  const StateAssemblage zx = induced_assemblage(pauli_zx(), maximally_entangled(2), s.tol);
  const double eta = eta_star_assemblage(zx, true, s);
  rep.check("Z/X with phi+: C_SE = 0", c_se(zx, s).value, Relation::equal, 0.0, s.tol.comp);
  rep.check("Z/X with phi+: zero ensemble exclusion error at eta*",
            p_error_ensemble({zx, PriorDistribution::uniform(2), eta}, s).value, Relation::equal, 0.0, s.tol.comp);
  return rep;
}

inline CheckReport theorem3(std::uint64_t seed, const Settings& s) {
  CheckReport rep;
  rep.name = "measurement and ensemble complementarity";
  Rng rng(suite_seed(seed, 5));
  for (std::size_t k = 0; k < 30; ++k) {
    const auto e = random_povm_assemblage(2, 2, 2, rng);
    BipartiteState rho = random_mixed_bipartite(2, 2, rng);
    while (!rho.has_full_rank_marginals(1e-6)) rho = random_mixed_bipartite(2, 2, rng);
    rep.absorb(theorem3_check(e, rho, 1e-6, s), idx("pair", k));
  }
  const BipartiteState phi = maximally_entangled(2);
  for (std::size_t k = 0; k < 30; ++k)
    rep.absorb(theorem3_check(random_povm_assemblage(2, 2, 2, rng), phi, 1e-6, s), idx("phi+ measurement", k));
  return rep;
}

inline CheckReport theorem4(std::uint64_t seed, const Settings& s) {
  CheckReport rep;
  rep.name = "encryption error";
  Rng rng(suite_seed(seed, 6));
  for (std::size_t k = 0; k < 30; ++k) rep.absorb(theorem4_check(random_povm_assemblage(2, 2, 2, rng), {}, 1e-6, s), idx("pair", k));
  rep.absorb(theorem4_check(pauli_zx(), {}, 1e-8, s), "Z/X: ");
  const HermitianOperator half = HermitianOperator::identity(2) * 0.5;
  const MeasurementAssemblage trivial({{half, half}, {half, half}});
  for (double eta : {0.0, 0.5, 0.9}) {
    rep.check("trivial pair: error at eta " + std::to_string(eta) + " = (1-eta)/2", p_error_encrypt({trivial, eta}, s).error,
              Relation::equal, (1.0 - eta) / 2.0, 1e-8);
  }
  return rep;
}

inline CheckReport nogo_encrypt(std::uint64_t seed, const Settings& s) {
  CheckReport rep;
  rep.name = "deterministic encryption no-go";
  Rng rng(suite_seed(seed, 7));
  for (std::size_t k = 0; k < 30; ++k) rep.absorb(nogo_encrypt_check(random_povm_assemblage(2, 2, 2, rng), 1e-6, s), idx("pair", k));
  return rep;
}

inline CheckReport nogo_theta(std::uint64_t seed, const Settings& s) {
  CheckReport rep;
  rep.name = "Theta strategies give no advantage";
  Rng rng(suite_seed(seed, 8));
  for (std::size_t k = 0; k < 50; ++k) {
    const std::size_t n = 2 + k % 2;
    const auto states = random_states(2, n, rng);
    const PriorDistribution prior = random_prior(n, rng);
    const double es = eta_star(states, true, s).value;
    const double eta = k % 2 == 0 ? es : 0.5 * (es + 1.0);
    const ThetaStrategy theta = random_theta(2, n, n, 1 + k % 3, rng);
    rep.check(idx("strategy", k) + "plain error <= error with Theta", p_error_state_exclusion(states, prior, eta, s).value,
              Relation::less_equal, p_error_theta(states, prior, eta, theta, s), 1e-7);
  }
  for (std::size_t k = 0; k < 10; ++k) {
    const StateAssemblage sigma =
        induced_assemblage(random_povm_assemblage(2, 2, 2, rng), random_mixed_bipartite(2, 2, rng), s.tol);
    const PriorDistribution prior = random_prior(2, rng);
    const double eta = eta_star_assemblage(sigma, true, s);
    const ThetaStrategy theta = random_theta(2, 2, 2, 2, rng);
    const EnsembleExclusionInstance inst{sigma, prior, eta};
    rep.check(idx("ensemble", k) + "plain error <= error with Theta", p_error_ensemble(inst, s).value, Relation::less_equal,
              p_error_ensemble_theta(inst, theta, s).value, 1e-7);
  }
  return rep;
}

inline CheckReport theorem5(std::uint64_t seed, const Settings& s) {
  CheckReport rep;
  rep.name = "incompatibility weight";
  Rng rng(suite_seed(seed, 9));
  for (std::size_t k = 0; k < 30; ++k) rep.absorb(theorem5_check(random_povm_assemblage(2, 2, 2, rng), 1e-6, s), idx("pair", k));
  rep.check("IW(Z/X) = 1", incompatibility_weight(pauli_zx(), s).weight, Relation::equal, 1.0, 1e-6);
  for (std::size_t k = 0; k < 5; ++k) {
    const auto e = random_compatible_assemblage(2, 2, 2, 3, rng);
    rep.check(idx("compatible pair", k) + "IW = 0", incompatibility_weight(e, s).weight, Relation::less_equal, 0.0, 1e-6);
  }
  // Rotated Z/X pairs are complementary, hence maximally incompatible.
  for (std::size_t k = 0; k < 5; ++k) {
    const CMatrix u = random_unitary(2, rng);
    auto table = pauli_zx().table();
    for (auto& row : table)
      for (auto& op : row) op = HermitianOperator(CMatrix(u * op.matrix() * u.adjoint()));
    const MeasurementAssemblage e(table);
    rep.check(idx("rotated Z/X", k) + "C_POVM = 0", c_povm(e, s).value, Relation::less_equal, 0.0, s.tol.comp);
    rep.check(idx("rotated Z/X", k) + "IW = 1", incompatibility_weight(e, s).weight, Relation::greater_equal, 1.0, 1e-6);
  }
  return rep;
}

inline CheckReport pauli(std::uint64_t, const Settings& s) {
  CheckReport rep;
  rep.name = "Z/X encryption example";
  const PauliExampleReport ex = pauli_example(s);
  const double sqrt2 = std::numbers::sqrt2;
  rep.check("alpha_max = sqrt2 / (1 + sqrt2)", ex.alpha_max, Relation::equal, sqrt2 / (1.0 + sqrt2), 1e-6);
  rep.check("eta_min = 2 / (1 + sqrt2)", ex.eta_min, Relation::equal, 2.0 / (1.0 + sqrt2), 1e-6);
  rep.check("success = alpha_max / 2", ex.success, Relation::equal, sqrt2 / (1.0 + sqrt2) / 2.0, 1e-6);
  rep.check("eta* from minimal-norm duals = eta_min", ex.eta_star, Relation::equal, ex.eta_min, 1e-6);
  for (const auto& c : ex.cases) {
    const std::string tag = "pi " + c.pi.to_string() + ": ";
    rep.check(tag + "optimal error at eta_min", c.optimal_error, Relation::less_equal, 0.0, 1e-8);
    rep.check(tag + "closed-form decoder error", c.closed_form.error, Relation::less_equal, 0.0, 1e-8);
    rep.check(tag + "decoder PSD", c.validation.psd_residual, Relation::less_equal, 0.0, 1e-8);
    rep.check(tag + "decoder completeness", c.validation.completeness_residual, Relation::less_equal, 0.0, 1e-8);
    rep.check(tag + "abstain <= eta_min I", c.validation.inconclusive_residual, Relation::less_equal, 0.0, 1e-8);
  }
  rep.note("aligned pi at eta = 0: optimal error " + std::to_string(ex.fixed_pi_error_eta0));
  return rep;
}

/// Every solve recorded so far certified optimal, re-verified and within the gap tolerance.
inline CheckReport solver_health(const sdp::SolveAudit& audit, double gap_tol = 1e-8) {
  CheckReport rep;
  rep.name = "solver health";
  rep.check("programs solved", static_cast<double>(audit.count()), Relation::greater, 0.0, 0.0);
  rep.check("largest relative duality gap", audit.max_gap(), Relation::less_equal, 0.0, gap_tol);
  const auto failures = audit.failures();
  rep.check("failed or unverified solves", static_cast<double>(failures.size()), Relation::equal, 0.0, 0.0);
  for (std::size_t i = 0; i < std::min<std::size_t>(failures.size(), 10); ++i)
    rep.note("failure '" + failures[i].label + "': " + failures[i].detail);
  return rep;
}

struct Suite {
  std::string name;
  int criterion = 0;
  std::string title;
  std::function<CheckReport(std::uint64_t, const Settings&)> run;
};

inline const std::vector<Suite>& suites() {
  static const std::vector<Suite> all{
      {"pauli", 1, "Z/X encryption example", pauli},
      {"lemma2", 2, "D_eta linear above eta*", lemma2},
      {"thm1", 3, "state exclusion advantage", theorem1},
      {"thm2", 4, "ensemble exclusion advantage", theorem2},
      {"thm3", 5, "measurement and ensemble complementarity", theorem3},
      {"thm4", 6, "encryption error", theorem4},
      {"nogo-encrypt", 7, "deterministic encryption no-go", nogo_encrypt},
      {"nogo-theta", 7, "Theta strategies give no advantage", nogo_theta},
      {"thm5", 8, "incompatibility weight", theorem5},
      {"lemma1", 9, "q_exc properties", lemma1},
  };
  return all;
}

inline const Suite* find_suite(const std::string& name) {
  for (const auto& s : suites())
    if (s.name == name) return &s;
  return nullptr;
}

}  // namespace qcomp::verify
