#pragma once

// Independent re-check of a returned primal/dual pair. Works directly on the
// complex problem data (no embedding, no solver state), so agreement with the
// solver is a genuine second opinion.

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>
#include <vector>

#include "qcomp/sdp/problem.hpp"

namespace qcomp::sdp {

struct CertificateTolerances {
  double feas = 1e-8;
  double gap = 1e-8;
};

struct Violation {
  std::string constraint;
  double residual = 0.0;
  double tolerance = 0.0;
};

struct CertificateReport {
  bool pass = false;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
  double max_primal_residual = 0.0;
  double max_dual_residual = 0.0;
  std::vector<Violation> violations;

  /// Name of the constraint with the largest residual-to-tolerance ratio, or empty.
  std::string worst() const {
    if (violations.empty()) return {};
    return std::max_element(violations.begin(), violations.end(),
                            [](const Violation& a, const Violation& b) {
                              return a.residual / a.tolerance < b.residual / b.tolerance;
                            })
        ->constraint;
  }
};

namespace detail {

inline double min_eig(const CMatrix& m) {
  const CMatrix h = (m + m.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Re tr(A B) by explicit summation.
inline double re_trace_product(const CMatrix& a, const CMatrix& b) {
  double acc = 0.0;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index k = 0; k < a.cols(); ++k) acc += (a(i, k) * b(k, i)).real();
  return acc;
}

}  // namespace detail

inline CertificateReport verify_certificate(const SdpProblem& p, const SdpSolution& s, const CertificateTolerances& tol = {}) {
  CertificateReport rep;
  auto check = [&](const std::string& name, double residual, double tolerance, double& running_max) {
    running_max = std::max(running_max, residual);
    if (!(residual <= tolerance)) rep.violations.push_back({name, residual, tolerance});
  };

  const auto nvar = static_cast<Index>(p.num_variables());
  if (s.y.size() != nvar || s.dual_multipliers.size() != p.blocks.size() ||
      static_cast<std::size_t>(s.equality_multipliers.size()) != p.equalities.size()) {
    rep.violations.push_back({"solution shape", 1.0, 0.0});
    return rep;
  }
  const double sign = p.sense == Sense::maximize ? 1.0 : -1.0;

  // Primal: every LMI and every scalar equality at y.
  for (std::size_t j = 0; j < p.blocks.size(); ++j) {
    const auto& blk = p.blocks[j];
    CMatrix f = blk.constant;
    for (const auto& t : blk.terms) f += s.y(static_cast<Index>(t.variable)) * t.coefficient;
    const double lmin = detail::min_eig(f);
    check("LMI '" + blk.name + "'", std::max(0.0, -lmin), tol.feas * (1.0 + f.norm()), rep.max_primal_residual);
  }
  for (const auto& eq : p.equalities) {
    double lhs = 0.0;
    for (const auto& [i, v] : eq.coefficients) lhs += v * s.y(static_cast<Index>(i));
    check("equality '" + eq.name + "'", std::abs(lhs - eq.rhs), tol.feas * (1.0 + std::abs(eq.rhs)), rep.max_primal_residual);
  }

  // Dual: multipliers PSD and stationarity per variable.
  RVector stationarity = sign * p.objective;
  double f0z = 0.0;
  for (std::size_t j = 0; j < p.blocks.size(); ++j) {
    const auto& blk = p.blocks[j];
    const CMatrix& z = s.dual_multipliers[j];
    if (z.rows() != blk.dim() || z.cols() != blk.dim()) {
      rep.violations.push_back({"multiplier shape for '" + blk.name + "'", 1.0, 0.0});
      continue;
    }
    const double zmin = detail::min_eig(z);
    check("multiplier of '" + blk.name + "'", std::max(0.0, -zmin), tol.feas * (1.0 + z.norm()), rep.max_dual_residual);
    f0z += detail::re_trace_product(blk.constant, z);
    for (const auto& t : blk.terms) stationarity(static_cast<Index>(t.variable)) += detail::re_trace_product(t.coefficient, z);
  }
  double beta_nu = 0.0;
  for (std::size_t r = 0; r < p.equalities.size(); ++r) {
    const double nu = s.equality_multipliers(static_cast<Index>(r));
    beta_nu += p.equalities[r].rhs * nu;
    for (const auto& [i, v] : p.equalities[r].coefficients) stationarity(static_cast<Index>(i)) -= v * nu;
  }
  const double stat_tol = tol.feas * (1.0 + p.objective.norm());
  for (Index i = 0; i < nvar; ++i)
    check("dual equality for variable '" + p.variables[static_cast<std::size_t>(i)] + "'", std::abs(stationarity(i)), stat_tol,
          rep.max_dual_residual);

  double primal = p.objective_offset;
  for (Index i = 0; i < nvar; ++i) primal += p.objective(i) * s.y(i);
  rep.primal_value = primal;
  rep.dual_value = sign * (f0z + beta_nu) + p.objective_offset;
  rep.gap = std::abs(rep.primal_value - rep.dual_value) / (1.0 + std::abs(rep.primal_value));
  if (!(rep.gap <= tol.gap)) rep.violations.push_back({"duality gap", rep.gap, tol.gap});

  rep.pass = rep.violations.empty();
  return rep;
}

/// Thread-safe record of every solve, used to certify solver health across a run.
class SolveAudit {
 public:
  struct Entry {
    std::string label;
    double gap = 0.0;
    bool verified = false;
    std::string detail;
  };

  void record(const std::string& label, const SdpSolution& s, const CertificateReport& rep) {
    std::lock_guard lock(mutex_);
    ++count_;
    max_gap_ = std::max(max_gap_, s.gap);
    max_verified_gap_ = std::max(max_verified_gap_, rep.gap);
    if (!s.optimal() || !rep.pass) {
      failures_.push_back({label, s.gap, rep.pass, s.optimal() ? rep.worst() : std::string(to_string(s.status)) + ": " + s.message});
    }
  }

  std::size_t count() const {
    std::lock_guard lock(mutex_);
    return count_;
  }
  double max_gap() const {
    std::lock_guard lock(mutex_);
    return std::max(max_gap_, max_verified_gap_);
  }
  std::vector<Entry> failures() const {
    std::lock_guard lock(mutex_);
    return failures_;
  }
  void reset() {
    std::lock_guard lock(mutex_);
    count_ = 0;
    max_gap_ = max_verified_gap_ = 0.0;
    failures_.clear();
  }

 private:
  mutable std::mutex mutex_;
  std::size_t count_ = 0;
  double max_gap_ = 0.0;
  double max_verified_gap_ = 0.0;
  std::vector<Entry> failures_;
};

}  // namespace qcomp::sdp
