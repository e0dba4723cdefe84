#pragma once

// eta-unambiguous exclusion of state ensembles: the player receives message m
// and must name an x that was not announced, for the worst-case relabelling.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcomp/assertion.hpp"
#include "qcomp/complementarity.hpp"
#include "qcomp/exclusion.hpp"
#include "qcomp/permutations.hpp"

namespace qcomp {

struct EnsembleExclusionInstance {
  StateAssemblage sigma;
  PriorDistribution prior;
  double eta = 0.0;

  void validate() const {
    require(prior.size() == sigma.inputs(), ErrorKind::dimension_mismatch,
            "prior has " + std::to_string(prior.size()) + " entries for " + std::to_string(sigma.inputs()) + " inputs");
    require(eta >= 0.0 && eta < 1.0, ErrorKind::invalid_input, "eta must lie in [0, 1)");
  }
};

struct MessageBreakdown {
  std::size_t message = 0;
  /// p'_m = sum_x p_x P(pi_x^{-1}(m)|x).
  double probability = 0.0;
  /// p'_{x|m}; all zero for a skipped message.
  std::vector<double> conditional_prior;
  /// Optimal exclusion measurement for this message (empty when skipped).
  std::vector<HermitianOperator> Q;
  /// Conditional error; the message contributes probability * error.
  double error = 0.0;
  bool skipped = false;
};

struct EnsembleExclusionResult {
  double value = 0.0;
  PermutationSet pi;
  std::vector<MessageBreakdown> messages;
  bool lower_bound_only = false;
};

namespace detail {

/// Weighted effective ensemble {p'_{x|m} rho_{t_x|x}} for outcome tuple t. Inputs
/// whose outcome has zero probability contribute the zero operator, so their
/// measurement element stays in the program but costs nothing.
inline MessageBreakdown message_ensemble(const EnsembleExclusionInstance& inst, const std::vector<std::size_t>& t,
                                         std::vector<HermitianOperator>& weighted, const Tolerances& tol) {
  const std::size_t n = inst.sigma.inputs();
  const Index d = inst.sigma.dim();
  MessageBreakdown mb;
  mb.conditional_prior.assign(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) mb.probability += inst.prior[x] * inst.sigma.probability(t[x], x);
  weighted.assign(n, HermitianOperator::zero(d));
  if (mb.probability <= tol.zero) {
    mb.skipped = true;
    return mb;
  }
  for (std::size_t x = 0; x < n; ++x) {
    const double px = inst.sigma.probability(t[x], x);
    mb.conditional_prior[x] = inst.prior[x] * px / mb.probability;
    if (px > tol.zero) weighted[x] = inst.sigma.element(t[x], x) * (mb.conditional_prior[x] / px);
  }
  return mb;
}

inline MessageBreakdown message_term(const EnsembleExclusionInstance& inst, const std::vector<std::size_t>& t,
                                     const ThetaStrategy* theta, const Settings& settings) {
  std::vector<HermitianOperator> weighted;
  MessageBreakdown mb = message_ensemble(inst, t, weighted, settings.tol);
  if (mb.skipped) return mb;
  if (theta) weighted = theta_effective_operators(weighted, *theta);
  DetaSolution ds = d_eta(std::span<const HermitianOperator>(weighted), inst.eta, settings);
  mb.error = ds.value;
  mb.Q = std::move(ds.Q);
  return mb;
}

inline EnsembleExclusionResult ensemble_given_pi(const EnsembleExclusionInstance& inst, const PermutationSet& pi,
                                                 const ThetaStrategy* theta, const Settings& settings) {
  inst.validate();
  require(pi.inputs() == inst.sigma.inputs() && pi.outcomes() == inst.sigma.outcomes(), ErrorKind::dimension_mismatch,
          "permutation set shape does not match the assemblage");
  const PermutationSet inv = pi.inverse();
  EnsembleExclusionResult out;
  out.pi = pi;
  out.messages.resize(inst.sigma.outcomes());
  parallel_for(out.messages.size(), settings.threads, [&](std::size_t m) {
    out.messages[m] = message_term(inst, inv.tuple(m), theta, settings);
    out.messages[m].message = m;
  });
  for (const auto& mb : out.messages) out.value += mb.probability * mb.error;
  return out;
}

inline EnsembleExclusionResult ensemble_sweep(const EnsembleExclusionInstance& inst, const ThetaStrategy* theta,
                                              const Settings& settings) {
  inst.validate();
  if (theta) theta->validate(inst.sigma.dim(), inst.sigma.inputs(), settings.tol);
  SweepOptions opt;
  opt.report_inverse = true;
  const SweepResult sr = sweep_permutations(
      inst.sigma.inputs(), inst.sigma.outcomes(),
      [&](const std::vector<std::size_t>& t) {
        const MessageBreakdown mb = message_term(inst, t, theta, settings);
        return mb.probability * mb.error;
      },
      settings, opt);
  EnsembleExclusionResult out = ensemble_given_pi(inst, sr.maximizer, theta, settings);
  // Report the swept value itself so it matches the max exactly.
  out.value = sr.value;
  out.lower_bound_only = sr.lower_bound_only;
  return out;
}

}  // namespace detail

/// sum_m p'_m P_error(effective ensemble of m, conditional prior, eta) for a fixed pi.
inline EnsembleExclusionResult p_error_ensemble_given_pi(const EnsembleExclusionInstance& inst, const PermutationSet& pi,
                                                         const Settings& settings = {}) {
  return detail::ensemble_given_pi(inst, pi, nullptr, settings);
}

/// Worst case over relabellings pi.
inline EnsembleExclusionResult p_error_ensemble(const EnsembleExclusionInstance& inst, const Settings& settings = {}) {
  return detail::ensemble_sweep(inst, nullptr, settings);
}

/// The same task when the player first applies a Theta strategy to each message's ensemble.
inline EnsembleExclusionResult p_error_ensemble_theta(const EnsembleExclusionInstance& inst, const ThetaStrategy& theta,
                                                      const Settings& settings = {}) {
  return detail::ensemble_sweep(inst, &theta, settings);
}

/// max_pi sum_a D_eta({p_x sigma_{pi_x(a)|x}}_x), which needs no division by P(a|x).
inline SweepResult p_error_ensemble_via_deta(const StateAssemblage& sigma, const PriorDistribution& prior, double eta,
                                             const Settings& settings = {}) {
  require(prior.size() == sigma.inputs(), ErrorKind::dimension_mismatch, "prior size does not match the assemblage");
  auto table = sigma.table();
  for (std::size_t x = 0; x < table.size(); ++x)
    for (auto& op : table[x]) op = op * prior[x];
  return deta_sweep(table, eta, settings);
}

/// Average states rho^ave_x = sum_a sigma_{a|x}.
inline std::vector<DensityOperator> average_states(const StateAssemblage& sigma, const Tolerances& tol = {}) {
  std::vector<DensityOperator> out;
  for (std::size_t x = 0; x < sigma.inputs(); ++x) out.emplace_back(sigma.reduced(x), tol);
  return out;
}

struct Theorem2Tolerances {
  double ratio = 1e-6;
  double path = 1e-7;
  double average = 1e-7;
};

/// For non-signalling sigma and eta >= eta*: the average states give only the
/// classical error, the uniform-prior ratio equals C_SE, and no prior does better.
/// Both computation paths are compared at every prior.
inline CheckReport theorem2_check(const StateAssemblage& sigma, double eta, std::span<const PriorDistribution> trial_priors,
                                  const Theorem2Tolerances& tolerance = {}, const Settings& settings = {}) {
  require(sigma.is_non_signalling(settings.tol.eq), ErrorKind::invalid_input,
          "assemblage is signalling (residual " + std::to_string(sigma.signalling_residual()) + ")");
  CheckReport rep;
  rep.name = "ensemble exclusion advantage ratio";
  const double es = eta_star_assemblage(sigma, true, settings);
  const bool above = eta >= es;
  if (!above) rep.note("eta " + std::to_string(eta) + " lies below eta* = " + std::to_string(es) + "; ratios not asserted");
  const double cse = c_se(sigma, settings).value;
  const auto averages = average_states(sigma, settings.tol);

  std::vector<PriorDistribution> priors{PriorDistribution::uniform(sigma.inputs())};
  priors.insert(priors.end(), trial_priors.begin(), trial_priors.end());
  for (std::size_t k = 0; k < priors.size(); ++k) {
    const std::string tag = k == 0 ? "uniform prior" : "prior " + std::to_string(k - 1);
    const double classical = p_error_classical(priors[k], eta).value;
    rep.check(tag + ": average-state error = classical error",
              p_error_state_exclusion(averages, priors[k], eta, settings).value, Relation::equal, classical,
              tolerance.average);
    const EnsembleExclusionInstance inst{sigma, priors[k], eta};
    const double direct = p_error_ensemble(inst, settings).value;
    const double via = p_error_ensemble_via_deta(sigma, priors[k], eta, settings).value;
    rep.check(tag + ": per-message path = D_eta path", direct, Relation::equal, via, tolerance.path);
    if (!above) continue;
    if (k == 0)
      rep.check(tag + ": ratio = C_SE", direct / classical, Relation::equal, cse, tolerance.ratio);
    else
      rep.check(tag + ": ratio >= C_SE", direct / classical, Relation::greater_equal, cse, tolerance.ratio);
  }
  return rep;
}

}  // namespace qcomp
