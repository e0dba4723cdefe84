#pragma once

// Exclusion quantities: q_exc and its dual, I_exc, the eta-constrained program
// D_eta, the critical inconclusiveness eta*, state/classical exclusion errors,
// and pre-processing strategies (Theta) for the no-go results.

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcomp/assertion.hpp"
#include "qcomp/core/objects.hpp"
#include "qcomp/core/random.hpp"
#include "qcomp/settings.hpp"

namespace qcomp {

struct QexcSolution {
  double value = 0.0;
  HermitianOperator witness_P;
  /// Dual optimiser: Q_x >= 0 with sum_x Q_x >= I and sum_x tr(Q_x N_x) = value.
  std::vector<HermitianOperator> dual_Q;
  double gap = 0.0;
  /// The dual optimum is not attained on the full space; dual_Q then certifies the
  /// value only on the common support of the N_x.
  bool dual_on_face = false;
};

namespace detail {

inline void check_operator_set(std::span<const HermitianOperator> n, const Tolerances& tol, const char* what) {
  require(!n.empty(), ErrorKind::invalid_input, std::string(what) + ": operator list is empty");
  for (std::size_t x = 0; x < n.size(); ++x) {
    require(n[x].dim() == n.front().dim(), ErrorKind::dimension_mismatch, std::string(what) + ": operators differ in dimension");
    const double mu = n[x].min_eigenvalue();
    require(mu >= -tol.psd, ErrorKind::invalid_input,
            std::string(what) + ": operator " + std::to_string(x) + " is not PSD (min eigenvalue " + std::to_string(mu) + ")");
  }
}

inline double max_trace(std::span<const HermitianOperator> n) {
  double m = 0.0;
  for (const auto& op : n) m = std::max(m, op.trace());
  return m;
}

/// Smallest trace among operators that are not numerically zero (0 if all are).
inline double min_nonzero_trace(std::span<const HermitianOperator> n) {
  const double cut = 1e-12 * max_trace(n);
  double m = std::numeric_limits<double>::infinity();
  for (const auto& op : n)
    if (op.trace() > cut) m = std::min(m, op.trace());
  return std::isfinite(m) ? m : 0.0;
}

inline sdp::SdpProblem qexc_problem(std::span<const HermitianOperator> n, double scale) {
  sdp::ProblemBuilder pb;
  const auto p = pb.hermitian("P", n.front().dim());
  pb.psd("P", p.expr());
  for (std::size_t x = 0; x < n.size(); ++x)
    pb.psd("N" + std::to_string(x) + " - P", sdp::AffineMatrix(CMatrix(n[x].matrix() / scale)) - p.expr());
  pb.maximize(p.expr().trace());
  return pb.build();
}

/// q_exc restricted to the common support of the N_x. The primal optimum is the
/// same; the dual lives on compressed supports and always exists there.
inline QexcSolution qexc_on_face(std::span<const HermitianOperator> n, double scale, const Settings& settings) {
  const Index d = n.front().dim();
  const double thr = 1e-9 * std::max(1.0, max_trace(n));
  CMatrix kernel_sum = CMatrix::Zero(d, d);
  std::vector<CMatrix> supports;
  for (const auto& op : n) {
    const CMatrix ker = low_eigenspace(op, thr);
    kernel_sum += ker * ker.adjoint();
    supports.push_back(high_eigenspace(op, thr));
  }
  const CMatrix common = low_eigenspace(HermitianOperator(kernel_sum), 1e-9);

  QexcSolution out;
  out.dual_on_face = true;
  if (common.cols() == 0) {
    out.witness_P = HermitianOperator::zero(d);
    return out;
  }
  sdp::ProblemBuilder pb;
  const auto y = pb.hermitian("Y", common.cols());
  pb.psd("Y", y.expr());
  for (std::size_t x = 0; x < n.size(); ++x) {
    const CMatrix& w = supports[x];
    const CMatrix nx = w.adjoint() * n[x].matrix() * w / scale;
    pb.psd("N" + std::to_string(x) + " - P on support", sdp::AffineMatrix(nx) - y.expr().sandwich(w.adjoint() * common, common.adjoint() * w));
  }
  pb.maximize(y.expr().trace());
  const auto problem = pb.build();
  const auto sol = run_sdp(problem, settings, "q_exc (common support)");
  out.value = sol.primal_value * scale;
  out.witness_P = HermitianOperator(CMatrix(common * y.value(sol.y) * common.adjoint() * scale));
  for (std::size_t x = 0; x < n.size(); ++x)
    out.dual_Q.emplace_back(CMatrix(supports[x] * sol.dual_multipliers[x + 1] * supports[x].adjoint()));
  out.gap = sol.gap;
  return out;
}

}  // namespace detail

/// max tr(P) subject to 0 <= P <= N_x for every x.
inline QexcSolution q_exc(std::span<const HermitianOperator> n, const Settings& settings = {}) {
  detail::check_operator_set(n, settings.tol, "q_exc");
  const Index d = n.front().dim();
  QexcSolution out;

  // A zero operator forces P = 0; Q = I on that operator certifies it.
  const double cut = 1e-12 * std::max(1.0, detail::max_trace(n));
  for (std::size_t x = 0; x < n.size(); ++x) {
    if (n[x].trace() <= cut) {
      out.witness_P = HermitianOperator::zero(d);
      for (std::size_t k = 0; k < n.size(); ++k)
        out.dual_Q.push_back(k == x ? HermitianOperator::identity(d) : HermitianOperator::zero(d));
      return out;
    }
  }

  const double scale = detail::min_nonzero_trace(n);
  const auto problem = detail::qexc_problem(n, scale);
  try {
    const auto sol = run_sdp(problem, settings, "q_exc", false);
    out.value = sol.primal_value * scale;
    out.witness_P = HermitianOperator(CMatrix(CMatrix(sol.primal_blocks[0]) * scale));
    for (std::size_t x = 0; x < n.size(); ++x) out.dual_Q.emplace_back(sol.dual_multipliers[x + 1]);
    out.gap = sol.gap;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::solver_failure) throw;
    out = detail::qexc_on_face(n, scale, settings);
  }
  if (out.value < 0.0 && out.value > -settings.tol.zero) out.value = 0.0;
  return out;
}

inline QexcSolution q_exc(std::span<const DensityOperator> states, const Settings& settings = {}) {
  const auto ops = operators_of(states);
  return q_exc(std::span<const HermitianOperator>(ops), settings);
}

/// -log2 q_exc for a set of states; +infinity when q_exc <= tol.zero.
inline double i_exc(std::span<const DensityOperator> states, const Settings& settings = {}) {
  const double q = q_exc(states, settings).value;
  return q <= settings.tol.zero ? std::numeric_limits<double>::infinity() : -std::log2(q);
}

struct DetaSolution {
  double value = 0.0;
  std::vector<HermitianOperator> Q;
  double gap = 0.0;
};

/// min sum_x tr(Q_x N_x) subject to Q_x >= 0 and (1 - eta) I <= sum_x Q_x <= I.
inline DetaSolution d_eta(std::span<const HermitianOperator> n, double eta, const Settings& settings = {}) {
  detail::check_operator_set(n, settings.tol, "d_eta");
  require(eta >= 0.0 && eta < 1.0, ErrorKind::invalid_input, "eta must lie in [0, 1)");
  const Index d = n.front().dim();
  DetaSolution out;
  // Rescaling keeps the solver's relative accuracy meaningful when the value is small.
  const double scale = (1.0 - eta) * detail::min_nonzero_trace(n);
  if (scale <= 0.0) {
    for (std::size_t x = 0; x < n.size(); ++x)
      out.Q.push_back(HermitianOperator::identity(d) * (x == 0 ? 1.0 : 0.0));
    return out;
  }

  sdp::ProblemBuilder pb;
  std::vector<sdp::HermitianVariable> q;
  sdp::AffineMatrix total(d, d);
  sdp::LinearForm objective;
  for (std::size_t x = 0; x < n.size(); ++x) {
    q.push_back(pb.hermitian("Q" + std::to_string(x), d));
    pb.psd("Q" + std::to_string(x), q.back().expr());
    total += q.back().expr();
    objective += q.back().expr().trace_with(CMatrix(n[x].matrix() / scale));
  }
  if (eta == 0.0) {
    pb.equal_zero("sum Q = I", total - sdp::AffineMatrix::identity(d), true);
  } else {
    pb.psd("sum Q - (1-eta) I", total - sdp::AffineMatrix::identity(d, 1.0 - eta));
    pb.psd("I - sum Q", sdp::AffineMatrix::identity(d) - total);
  }
  pb.minimize(objective);
  const auto sol = run_sdp(pb.build(), settings, "d_eta");
  out.value = sol.primal_value * scale;
  for (const auto& v : q) out.Q.emplace_back(v.value(sol.y));
  out.gap = sol.gap;
  return out;
}

struct EtaStarResult {
  double value = 0.0;
  /// ||sum_x Q_x||_inf of the dual optimiser used.
  double norm = 1.0;
  std::vector<HermitianOperator> dual_Q;
  bool minimized = false;
  /// Norm minimisation was requested but its result failed validation; the
  /// solver's own dual was used instead.
  bool fell_back = false;
};

namespace detail {

inline double eta_from_norm(double norm) { return std::max(0.0, 1.0 - 1.0 / std::max(norm, 1.0)); }

/// Minimal-norm dual restricted by complementary slackness with the primal
/// witness P: each Q_x lives on the numerical kernel of N_x - P, and sum Q - I
/// may only be nonzero off the support of P (up to a small slack that keeps
/// the program strictly feasible). Exact when the kernels are resolved cleanly.
inline std::optional<std::vector<HermitianOperator>> min_norm_on_face(std::span<const HermitianOperator> n,
                                                                      const QexcSolution& qs,
                                                                      const Settings& settings) {
  const Index d = n.front().dim();
  const double scale = min_nonzero_trace(n);
  const double kernel_tol = 1e-6 * scale;
  sdp::ProblemBuilder pb;
  const auto t = pb.scalar("t");
  std::vector<CMatrix> supports;
  std::vector<std::optional<sdp::HermitianVariable>> s;
  sdp::AffineMatrix total(d, d);
  for (std::size_t x = 0; x < n.size(); ++x) {
    supports.push_back(low_eigenspace(n[x] - qs.witness_P, kernel_tol));
    s.emplace_back();
    if (supports.back().cols() == 0) continue;
    s.back() = pb.hermitian("S" + std::to_string(x), supports.back().cols());
    pb.psd("S" + std::to_string(x), s.back()->expr());
    total += s.back()->expr().congruence(supports.back().adjoint());
  }
  pb.psd("sum Q - I", total - sdp::AffineMatrix::identity(d));
  pb.psd("tI - sum Q", t.times(CMatrix::Identity(d, d)) - total);
  const double pnorm = qs.witness_P.max_eigenvalue();
  if (pnorm > kernel_tol) {
    const CMatrix p_hat = qs.witness_P.matrix() / pnorm;
    sdp::LinearForm slack = -1.0 * (total - sdp::AffineMatrix::identity(d)).trace_with(p_hat);
    slack.constant += 1e-8;
    pb.nonnegative("slackness on the support of P", slack);
  }
  pb.minimize(t.form());
  sdp::SdpSolution sol;
  try {
    sol = run_sdp(pb.build(), settings, "eta* norm minimisation on the optimal face", false);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::solver_failure) throw;
    return std::nullopt;
  }
  std::vector<HermitianOperator> out;
  double objective = 0.0;
  for (std::size_t x = 0; x < n.size(); ++x) {
    if (s[x])
      out.emplace_back(HermitianOperator(supports[x] * s[x]->value(sol.y).matrix() * supports[x].adjoint()));
    else
      out.push_back(HermitianOperator::zero(d));
    objective += hs_inner(out.back(), n[x]);
  }
  const HermitianOperator total_q = sum(std::span<const HermitianOperator>(out));
  const double norm = total_q.max_eigenvalue();
  if ((total_q - HermitianOperator::identity(d)).min_eigenvalue() < -1e-8 * norm) return std::nullopt;
  if (objective - qs.value > 1e-8 * norm * (scale + qs.value)) return std::nullopt;
  return out;
}

/// Smallest ||sum Q||_inf among optimal q_exc duals, found as the smallest eta
/// with D_eta(N) / (1 - eta) = q_exc. The ratio is non-increasing in eta and
/// reaches q_exc exactly once the feasible set contains an optimal dual, so a
/// bisection on eta needs only well-posed D_eta solves. `upper` must already
/// attain q_exc.
inline std::optional<std::vector<HermitianOperator>> min_norm_dual(std::span<const HermitianOperator> n,
                                                                   const QexcSolution& qs, double upper,
                                                                   const Settings& settings) {
  const double threshold = 2e-8 * (min_nonzero_trace(n) + qs.value);
  auto attains = [&](double eta, std::vector<HermitianOperator>* witness) {
    DetaSolution ds = d_eta(n, eta, settings);
    if (ds.value / (1.0 - eta) - qs.value > threshold) return false;
    if (witness) {
      witness->clear();
      for (const auto& q : ds.Q) witness->push_back(q * (1.0 / (1.0 - eta)));
    }
    return true;
  };
  std::vector<HermitianOperator> best;
  try {
    if (attains(0.0, &best)) return best;
    double lo = 0.0;
    double hi = upper;
    if (!attains(hi, &best)) return std::nullopt;
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      if (attains(mid, &best))
        hi = mid;
      else
        lo = mid;
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::solver_failure) throw;
    return std::nullopt;
  }
  const Index d = n.front().dim();
  if ((sum(std::span<const HermitianOperator>(best)) - HermitianOperator::identity(d)).min_eigenvalue() < -1e-7)
    return std::nullopt;
  return best;
}

}  // namespace detail

/// 1 - 1/||sum_x Q_x||_inf for an optimal q_exc dual. With minimize_norm the dual
/// of smallest norm on the optimal face is used, which gives the smallest eta*.
inline EtaStarResult eta_star(std::span<const HermitianOperator> n, bool minimize_norm, const Settings& settings = {}) {
  const QexcSolution qs = q_exc(n, settings);
  require(!qs.dual_on_face, ErrorKind::solver_failure,
          "eta*: the q_exc dual optimum is not attained on the full space, so no finite critical inconclusiveness exists");
  EtaStarResult out;
  out.dual_Q = qs.dual_Q;
  if (minimize_norm) {
    const double solver_norm = sum(std::span<const HermitianOperator>(qs.dual_Q)).max_eigenvalue();
    auto q = detail::min_norm_on_face(n, qs, settings);
    if (!q) q = detail::min_norm_dual(n, qs, detail::eta_from_norm(solver_norm), settings);
    if (q) {
      if (sum(std::span<const HermitianOperator>(*q)).max_eigenvalue() < solver_norm) out.dual_Q = std::move(*q);
      out.minimized = true;
    } else {
      out.fell_back = true;
    }
  }
  out.norm = sum(std::span<const HermitianOperator>(out.dual_Q)).max_eigenvalue();
  out.value = detail::eta_from_norm(out.norm);
  return out;
}

inline EtaStarResult eta_star(std::span<const DensityOperator> states, bool minimize_norm, const Settings& settings = {}) {
  const auto ops = operators_of(states);
  return eta_star(std::span<const HermitianOperator>(ops), minimize_norm, settings);
}

struct StateExclusionResult {
  double value = 0.0;
  std::vector<HermitianOperator> Q;
  /// Q_inconclusive = I - sum_x Q_x, bounded by eta I.
  HermitianOperator inconclusive;
  double gap = 0.0;
};

inline void check_prior(const PriorDistribution& p, std::size_t n) {
  require(p.size() == n, ErrorKind::dimension_mismatch,
          "prior has " + std::to_string(p.size()) + " entries for " + std::to_string(n) + " inputs");
}

/// Minimal error of eta-unambiguous state exclusion: D_eta({p_x rho_x}).
inline StateExclusionResult p_error_state_exclusion(std::span<const DensityOperator> states, const PriorDistribution& prior,
                                                    double eta, const Settings& settings = {}) {
  check_prior(prior, states.size());
  std::vector<HermitianOperator> weighted;
  for (std::size_t x = 0; x < states.size(); ++x) weighted.push_back(states[x].op() * prior[x]);
  DetaSolution ds = d_eta(weighted, eta, settings);
  StateExclusionResult out;
  out.value = ds.value;
  out.inconclusive = HermitianOperator::identity(states.front().dim()) - sum(std::span<const HermitianOperator>(ds.Q));
  out.Q = std::move(ds.Q);
  out.gap = ds.gap;
  return out;
}

struct ClassicalExclusion {
  double value = 0.0;
  std::size_t argmin = 0;
};

/// Without quantum side information: always name the least likely x and abstain
/// with probability eta, giving (1 - eta) min_x p_x.
inline ClassicalExclusion p_error_classical(const PriorDistribution& prior, double eta) {
  require(eta >= 0.0 && eta < 1.0, ErrorKind::invalid_input, "eta must lie in [0, 1)");
  return {(1.0 - eta) * prior.min(), prior.argmin()};
}

inline double advantage_ratio_state(std::span<const DensityOperator> states, const PriorDistribution& prior, double eta,
                                    const Settings& settings = {}) {
  return p_error_state_exclusion(states, prior, eta, settings).value / p_error_classical(prior, eta).value;
}

/// Ratio at the uniform prior equals q_exc, and no strictly positive prior gives a smaller ratio.
inline CheckReport theorem1_check(std::span<const DensityOperator> states, double eta,
                                  std::span<const PriorDistribution> trial_priors, double tolerance,
                                  const Settings& settings = {}) {
  CheckReport rep;
  rep.name = "state exclusion advantage ratio";
  const double q = q_exc(states, settings).value;
  const EtaStarResult es = eta_star(states, true, settings);
  const bool above = eta >= es.value;
  if (!above) rep.note("eta " + std::to_string(eta) + " lies below eta* = " + std::to_string(es.value) + "; equality not asserted");
  const double uniform = advantage_ratio_state(states, PriorDistribution::uniform(states.size()), eta, settings);
  if (above) rep.check("ratio at uniform prior = q_exc", uniform, Relation::equal, q, tolerance);
  for (std::size_t k = 0; k < trial_priors.size(); ++k) {
    const double r = advantage_ratio_state(states, trial_priors[k], eta, settings);
    if (above) rep.check("ratio at prior " + std::to_string(k) + " >= q_exc", r, Relation::greater_equal, q, tolerance);
  }
  return rep;
}

/// Pre-measurement channels with classical relabelling that never creates an
/// inconclusive outcome: choose lambda with weight q_lambda, apply channel
/// Lambda_lambda, measure {Q_y, Q_inconclusive}, output x with P~(x|y, lambda).
struct ThetaStrategy {
  std::vector<double> weights;
  std::vector<std::vector<CMatrix>> channels;  // Kraus operators, d_out x d_in
  std::vector<RMatrix> postprocessing;         // [lambda](x, y) = P~(x|y, lambda)

  Index input_dim() const { return channels.front().front().cols(); }
  Index output_dim() const { return channels.front().front().rows(); }
  std::size_t outputs() const { return static_cast<std::size_t>(postprocessing.front().cols()); }

  void validate(Index d_in, std::size_t n, const Tolerances& tol = {}) const {
    require(!weights.empty() && weights.size() == channels.size() && weights.size() == postprocessing.size(),
            ErrorKind::invalid_input, "Theta strategy: weights, channels and post-processings differ in count");
    double total = 0.0;
    for (double w : weights) {
      require(w >= 0.0, ErrorKind::invalid_input, "Theta strategy: negative weight");
      total += w;
    }
    require(std::abs(total - 1.0) <= tol.eq, ErrorKind::invalid_input, "Theta strategy: weights do not sum to 1");
    for (std::size_t l = 0; l < channels.size(); ++l) {
      require(!channels[l].empty(), ErrorKind::invalid_input, "Theta strategy: channel without Kraus operators");
      CMatrix completeness = CMatrix::Zero(d_in, d_in);
      for (const auto& k : channels[l]) {
        require(k.cols() == d_in && k.rows() == output_dim(), ErrorKind::dimension_mismatch, "Theta strategy: Kraus operator shape");
        completeness += k.adjoint() * k;
      }
      require((completeness - CMatrix::Identity(d_in, d_in)).norm() <= tol.eq, ErrorKind::invalid_input,
              "Theta strategy: channel " + std::to_string(l) + " is not trace preserving");
      const RMatrix& pp = postprocessing[l];
      require(pp.rows() == static_cast<Index>(n) && pp.cols() == postprocessing.front().cols(), ErrorKind::dimension_mismatch,
              "Theta strategy: post-processing shape");
      require(pp.minCoeff() >= 0.0, ErrorKind::invalid_input, "Theta strategy: negative post-processing entry");
      for (Index y = 0; y < pp.cols(); ++y)
        require(std::abs(pp.col(y).sum() - 1.0) <= tol.eq, ErrorKind::invalid_input,
                "Theta strategy: post-processing column does not sum to 1 (it would generate inconclusive outcomes)");
    }
  }

  static ThetaStrategy identity(Index d, std::size_t n) {
    return {{1.0}, {{CMatrix::Identity(d, d)}}, {RMatrix::Identity(static_cast<Index>(n), static_cast<Index>(n))}};
  }
  static ThetaStrategy uniform_mixing(Index d, std::size_t n) {
    const auto k = static_cast<Index>(n);
    return {{1.0}, {{CMatrix::Identity(d, d)}}, {RMatrix::Constant(k, k, 1.0 / static_cast<double>(n))}};
  }
};

/// Random Theta: `lambdas` random channels d -> d with random column-stochastic relabellings.
inline ThetaStrategy random_theta(Index d, std::size_t n, std::size_t outputs, std::size_t lambdas, Rng& rng) {
  ThetaStrategy t;
  double total = 0.0;
  for (std::size_t l = 0; l < lambdas; ++l) {
    const double w = -std::log(rng.uniform());
    t.weights.push_back(w);
    total += w;
    t.channels.push_back(random_channel_kraus(d, d, 2, rng));
    RMatrix pp(static_cast<Index>(n), static_cast<Index>(outputs));
    for (Index y = 0; y < pp.cols(); ++y) {
      double col = 0.0;
      for (Index x = 0; x < pp.rows(); ++x) col += (pp(x, y) = -std::log(rng.uniform()));
      pp.col(y) /= col;
    }
    t.postprocessing.push_back(pp);
  }
  for (auto& w : t.weights) w /= total;
  return t;
}

/// M_y = sum_x p_x sum_lambda q_lambda P~(x|y,lambda) Lambda_lambda(rho_x); the error of
/// the best measurement after Theta is D_eta({M_y}).
inline std::vector<HermitianOperator> theta_effective_operators(std::span<const HermitianOperator> weighted_states,
                                                                const ThetaStrategy& theta) {
  std::vector<HermitianOperator> m(theta.outputs(), HermitianOperator::zero(theta.output_dim()));
  for (std::size_t l = 0; l < theta.weights.size(); ++l) {
    for (std::size_t x = 0; x < weighted_states.size(); ++x) {
      const HermitianOperator out = apply_channel(theta.channels[l], weighted_states[x]);
      for (std::size_t y = 0; y < m.size(); ++y)
        m[y] = m[y] + out * (theta.weights[l] * theta.postprocessing[l](static_cast<Index>(x), static_cast<Index>(y)));
    }
  }
  return m;
}

inline double p_error_theta(std::span<const DensityOperator> states, const PriorDistribution& prior, double eta,
                            const ThetaStrategy& theta, const Settings& settings = {}) {
  check_prior(prior, states.size());
  theta.validate(states.front().dim(), states.size(), settings.tol);
  std::vector<HermitianOperator> weighted;
  for (std::size_t x = 0; x < states.size(); ++x) weighted.push_back(states[x].op() * prior[x]);
  const auto m = theta_effective_operators(weighted, theta);
  return d_eta(m, eta, settings).value;
}

}  // namespace qcomp
