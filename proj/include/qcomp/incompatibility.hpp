#pragma once

// Incompatibility weight: one minus the largest weight q of a jointly measurable
// part E_{a|x} >= q sum_i D(a|x,i) G_i, solved in the lifted variables K_i = q G_i.

#include <algorithm>
#include <string>
#include <vector>

#include "qcomp/assertion.hpp"
#include "qcomp/complementarity.hpp"
#include "qcomp/permutations.hpp"
#include "qcomp/settings.hpp"

namespace qcomp {

/// Deterministic response function x -> a.
struct DeterministicPostprocessing {
  std::vector<std::size_t> outcome;  // outcome[x]

  double operator()(std::size_t a, std::size_t x) const { return outcome.at(x) == a ? 1.0 : 0.0; }
};

/// All w^n response functions, index i giving outcome (i / w^{n-1-x}) mod w for input x.
inline std::vector<DeterministicPostprocessing> enumerate_deterministic(std::size_t n, std::size_t w,
                                                                        std::size_t budget = 4096) {
  require(n >= 1 && w >= 1, ErrorKind::invalid_input, "need n >= 1 and w >= 1");
  const TupleCodec codec{n, w};
  std::size_t count = 1;
  for (std::size_t x = 0; x < n; ++x) {
    require(count <= budget / w, ErrorKind::budget_exceeded,
            "w^n = " + std::to_string(w) + "^" + std::to_string(n) + " exceeds the deterministic budget of " +
                std::to_string(budget));
    count *= w;
  }
  std::vector<DeterministicPostprocessing> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back({codec.decode(i)});
  return out;
}

struct IncompatibilityResult {
  double weight = 0.0;
  /// Largest jointly measurable weight q = 1 - weight.
  double q = 0.0;
  /// K_i = q G_i.
  std::vector<HermitianOperator> K;
  /// Parent POVM G_i (empty when q is numerically zero).
  std::vector<HermitianOperator> parents;
  std::vector<DeterministicPostprocessing> responses;
  double gap = 0.0;
};

inline IncompatibilityResult incompatibility_weight(const MeasurementAssemblage& e, const Settings& settings = {}) {
  const std::size_t n = e.inputs();
  const std::size_t w = e.outcomes();
  const Index d = e.dim();
  IncompatibilityResult out;
  out.responses = enumerate_deterministic(n, w, settings.deterministic_budget);

  sdp::ProblemBuilder pb;
  const auto q = pb.scalar("q");
  std::vector<sdp::HermitianVariable> k;
  sdp::AffineMatrix total = -1.0 * q.times(CMatrix::Identity(d, d));
  for (std::size_t i = 0; i < out.responses.size(); ++i) {
    k.push_back(pb.hermitian("K" + std::to_string(i), d));
    pb.psd("K" + std::to_string(i), k.back().expr());
    total += k.back().expr();
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t a = 0; a < w; ++a) {
      sdp::AffineMatrix rest(e.element(a, x).matrix());
      for (std::size_t i = 0; i < out.responses.size(); ++i)
        if (out.responses[i](a, x) != 0.0) rest -= k[i].expr();
      pb.psd("E[" + std::to_string(a) + "|" + std::to_string(x) + "] - jointly measurable part", rest);
    }
  }
  pb.equal_zero("sum K = q I", total, true);
  pb.maximize(q.form());
  const auto sol = run_sdp(pb.build(), settings, "incompatibility weight");

  out.q = std::clamp(sol.primal_value, 0.0, 1.0);
  out.weight = 1.0 - out.q;
  out.gap = sol.gap;
  for (const auto& v : k) out.K.emplace_back(v.value(sol.y));
  if (out.q > settings.tol.zero)
    for (const auto& ki : out.K) out.parents.push_back(ki / out.q);
  return out;
}

/// 1 - IW(E) <= (w^n / d) C_POVM(E).
inline CheckReport theorem5_check(const MeasurementAssemblage& e, double tolerance, const Settings& settings = {}) {
  CheckReport rep;
  rep.name = "incompatibility weight against complementarity";
  const double iw = incompatibility_weight(e, settings).weight;
  const double cp = c_povm(e, settings).value;
  double wn = 1.0;
  for (std::size_t x = 0; x < e.inputs(); ++x) wn *= static_cast<double>(e.outcomes());
  rep.check("1 - IW <= (w^n / d) C_POVM", 1.0 - iw, Relation::less_equal, wn / static_cast<double>(e.dim()) * cp,
            tolerance);
  return rep;
}

}  // namespace qcomp
