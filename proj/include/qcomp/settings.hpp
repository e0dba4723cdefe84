#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "qcomp/core/types.hpp"
#include "qcomp/sdp/certificate.hpp"
#include "qcomp/sdp/solver.hpp"

namespace qcomp {

/// Knobs shared by every task-level computation.
struct Settings {
  Tolerances tol;
  sdp::SolverConfig solver;
  /// Canonical permutation sets swept exhaustively before falling back to sampling.
  std::size_t max_perm_budget = 1'000'000;
  /// Largest w^n accepted by deterministic enumeration (incompatibility weight).
  std::size_t deterministic_budget = 4096;
  /// When the permutation budget is exceeded: sample (true) or throw budget_exceeded.
  bool sample_over_budget = true;
  std::size_t sample_count = 20'000;
  std::uint64_t sampling_seed = 1;
  /// Worker threads for sweeps; 0 means hardware concurrency.
  unsigned threads = 0;
  /// Optional sink recording every solve with its independent re-verification.
  std::shared_ptr<sdp::SolveAudit> audit;
};

/// Solves, re-verifies the certificate, records both in the audit, and throws
/// solver_failure unless the solver reports an optimum. A caller holding a
/// fallback passes record_failure = false so only the final attempt is audited.
inline sdp::SdpSolution run_sdp(const sdp::SdpProblem& problem, const Settings& settings, const std::string& label,
                                bool record_failure = true) {
  sdp::SdpSolution sol = sdp::solve(problem, settings.solver);
  if (settings.audit && (sol.optimal() || record_failure)) {
    const sdp::CertificateTolerances ctol{settings.solver.tol_feas, settings.solver.tol_gap};
    const sdp::CertificateReport rep =
        sol.optimal() ? sdp::verify_certificate(problem, sol, ctol) : sdp::CertificateReport{};
    settings.audit->record(label, sol, rep);
  }
  require(sol.optimal(), ErrorKind::solver_failure,
          label + ": solver returned " + sdp::to_string(sol.status) + (sol.message.empty() ? "" : " (" + sol.message + ")"));
  return sol;
}

}  // namespace qcomp
