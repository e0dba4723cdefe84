#pragma once

// Complementarity quantifiers C_POVM and C_SE, their relation through a shared
// entangled state, and the assemblage-level critical inconclusiveness.

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcomp/assertion.hpp"
#include "qcomp/exclusion.hpp"
#include "qcomp/permutations.hpp"

namespace qcomp {

struct ComplementarityReport {
  double value = 0.0;
  PermutationSet maximizing_pi;
  /// q_exc({X_{pi_x(a)|x}}_x) of the maximiser, indexed by a.
  std::vector<double> per_term;
  bool is_complementary = false;
  /// max of eta* over every swept tuple; filled only on request.
  std::optional<double> eta_star_overall;
  bool lower_bound_only = false;
  std::size_t swept = 0;
};

namespace detail {

using OperatorTable = std::vector<std::vector<HermitianOperator>>;

/// {table[x][t_x]}_x.
inline std::vector<HermitianOperator> select(const OperatorTable& table, const std::vector<std::size_t>& tuple) {
  std::vector<HermitianOperator> ops;
  ops.reserve(tuple.size());
  for (std::size_t x = 0; x < tuple.size(); ++x) ops.push_back(table[x][tuple[x]]);
  return ops;
}

inline double eta_star_over(const OperatorTable& table, std::span<const std::size_t> codes, bool minimize_norm,
                            const Settings& settings) {
  const TupleCodec codec{table.size(), table.front().size()};
  std::vector<double> etas(codes.size());
  parallel_for(codes.size(), settings.threads, [&](std::size_t i) {
    const auto ops = select(table, codec.decode(codes[i]));
    etas[i] = eta_star(std::span<const HermitianOperator>(ops), minimize_norm, settings).value;
  });
  return etas.empty() ? 0.0 : *std::max_element(etas.begin(), etas.end());
}

inline ComplementarityReport complementarity(const OperatorTable& table, bool with_eta_star, const Settings& settings,
                                             SweepOptions options = {}) {
  const std::size_t n = table.size();
  const std::size_t w = table.front().size();
  const SweepResult sr = sweep_permutations(
      n, w,
      [&](const std::vector<std::size_t>& t) {
        const auto ops = select(table, t);
        return q_exc(std::span<const HermitianOperator>(ops), settings).value;
      },
      settings, options);
  ComplementarityReport rep;
  rep.value = sr.value;
  rep.maximizing_pi = sr.maximizer;
  rep.per_term = sr.per_term;
  rep.is_complementary = sr.value <= settings.tol.comp;
  rep.lower_bound_only = sr.lower_bound_only;
  rep.swept = sr.swept;
  if (with_eta_star) rep.eta_star_overall = eta_star_over(table, sr.tuple_codes, true, settings);
  return rep;
}

}  // namespace detail

/// C_POVM(E) = max_pi sum_a q_exc({E_{pi_x(a)|x}}_x).
inline ComplementarityReport c_povm(const MeasurementAssemblage& e, const Settings& settings = {},
                                    bool with_eta_star = false) {
  return detail::complementarity(e.table(), with_eta_star, settings);
}

/// C_SE(sigma) = max_pi sum_a q_exc({sigma_{pi_x(a)|x}}_x).
inline ComplementarityReport c_se(const StateAssemblage& sigma, const Settings& settings = {},
                                  bool with_eta_star = false) {
  return detail::complementarity(sigma.table(), with_eta_star, settings);
}

/// max over every swept outcome tuple of eta*({X_{t_x|x}}_x).
inline double eta_star_assemblage(const std::vector<std::vector<HermitianOperator>>& table, bool minimize_norm,
                                  const Settings& settings = {}) {
  require(!table.empty() && !table.front().empty(), ErrorKind::invalid_input, "empty assemblage");
  const TupleCodec codec{table.size(), table.front().size()};
  const auto total = permutation_set_count(codec.w, codec.n - 1);
  std::vector<std::size_t> codes;
  if (total && *total <= settings.max_perm_budget) {
    codes.resize(codec.count());
    std::iota(codes.begin(), codes.end(), std::size_t{0});
  } else {
    // Same sample the sweep would draw.
    codes = sweep_permutations(codec.n, codec.w, [](const std::vector<std::size_t>&) { return 0.0; }, settings)
                .tuple_codes;
  }
  return detail::eta_star_over(table, codes, minimize_norm, settings);
}

inline double eta_star_assemblage(const MeasurementAssemblage& e, bool minimize_norm, const Settings& settings = {}) {
  return eta_star_assemblage(e.table(), minimize_norm, settings);
}

inline double eta_star_assemblage(const StateAssemblage& sigma, bool minimize_norm, const Settings& settings = {}) {
  return eta_star_assemblage(sigma.table(), minimize_norm, settings);
}

/// max_pi sum_a D_eta({X_{pi_x(a)|x}}_x).
inline SweepResult deta_sweep(const std::vector<std::vector<HermitianOperator>>& table, double eta,
                              const Settings& settings = {}, SweepOptions options = {}) {
  return sweep_permutations(
      table.size(), table.front().size(),
      [&](const std::vector<std::size_t>& t) {
        const auto ops = detail::select(table, t);
        return d_eta(std::span<const HermitianOperator>(ops), eta, settings).value;
      },
      settings, options);
}

inline double min_marginal_eigenvalue(const BipartiteState& rho) { return rho.marginal_a().min_eigenvalue(); }

/// mu_min(rho_A) C_POVM(E) <= C_SE(sigma(E, rho_AB)); equality C_SE = C_POVM / d
/// when rho_AB is maximally entangled.
inline CheckReport theorem3_check(const MeasurementAssemblage& e, const BipartiteState& rho, double tolerance,
                                  const Settings& settings = {}) {
  require(rho.has_full_rank_marginals(settings.tol.psd), ErrorKind::invalid_input,
          "the shared state needs full-rank marginals");
  CheckReport rep;
  rep.name = "complementarity through a shared state";
  const double cp = c_povm(e, settings).value;
  const double cs = c_se(induced_assemblage(e, rho, settings.tol), settings).value;
  const double mu = min_marginal_eigenvalue(rho);
  rep.check("mu_min(rho_A) C_POVM <= C_SE", mu * cp, Relation::less_equal, cs, tolerance);
  if (e.dim() >= 2 && rho.dim_a() == rho.dim_b() &&
      frobenius_distance(rho.op(), maximally_entangled(e.dim()).op()) <= settings.tol.eq) {
    rep.check("C_SE = C_POVM / d for the maximally entangled state", cs, Relation::equal,
              cp / static_cast<double>(e.dim()), tolerance);
  }
  return rep;
}

}  // namespace qcomp
