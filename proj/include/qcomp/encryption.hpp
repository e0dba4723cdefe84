#pragma once

// Entanglement-assisted eta-encryption of one bit. Alice and Bob share phi+;
// Alice measures E_x on her half for the bit x, announces m = pi_x(a), and Bob
// decodes x from m and his half, abstaining with probability at most eta.
// With phi+ Bob's conditional states are E_{a|x}^T / d, so each message is a
// d-dimensional exclusion program on {E^T_{pi_x^{-1}(m)|x} / (2d)}.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "qcomp/assertion.hpp"
#include "qcomp/complementarity.hpp"
#include "qcomp/exclusion.hpp"
#include "qcomp/permutations.hpp"

namespace qcomp {

struct EncryptionInstance {
  MeasurementAssemblage E;
  double eta = 0.0;

  void validate() const {
    require(E.inputs() == 2, ErrorKind::invalid_input,
            "encryption is defined for a pair of measurements, got " + std::to_string(E.inputs()));
    require(eta >= 0.0 && eta < 1.0, ErrorKind::invalid_input, "eta must lie in [0, 1)");
  }
  Index dim() const { return E.dim(); }
};

/// Bob's measurement after message m: guess 0, guess 1, or abstain.
struct MessageDecoder {
  HermitianOperator guess0;
  HermitianOperator guess1;
  HermitianOperator abstain;
};

struct DecoderValidation {
  /// Largest negative eigenvalue magnitude over all elements.
  double psd_residual = 0.0;
  /// Largest Frobenius deviation of guess0 + guess1 + abstain from I.
  double completeness_residual = 0.0;
  /// Largest eigenvalue of abstain - eta I, clipped at 0.
  double inconclusive_residual = 0.0;

  double worst() const { return std::max({psd_residual, completeness_residual, inconclusive_residual}); }
};

struct DecodingStrategy {
  std::vector<MessageDecoder> messages;

  DecoderValidation validate(double eta) const {
    DecoderValidation v;
    for (const auto& m : messages) {
      for (const auto* op : {&m.guess0, &m.guess1, &m.abstain})
        v.psd_residual = std::max(v.psd_residual, -op->min_eigenvalue());
      const Index d = m.guess0.dim();
      v.completeness_residual = std::max(
          v.completeness_residual, frobenius_distance(m.guess0 + m.guess1 + m.abstain, HermitianOperator::identity(d)));
      v.inconclusive_residual = std::max(v.inconclusive_residual, m.abstain.max_eigenvalue() - eta);
    }
    return v;
  }
};

struct EncryptionResult {
  double error = 0.0;
  double success = 0.0;
  /// Probability that Bob abstains.
  double waive = 0.0;
  PermutationSet pi;
  DecodingStrategy decoders;
  bool lower_bound_only = false;
};

namespace detail {

/// {E^T_{t_x|x} / (2d)}_x.
inline std::vector<HermitianOperator> encryption_operators(const MeasurementAssemblage& e, const std::vector<std::size_t>& t) {
  const double norm = 2.0 * static_cast<double>(e.dim());
  std::vector<HermitianOperator> ops;
  for (std::size_t x = 0; x < t.size(); ++x) ops.push_back(transpose_map(e.element(t[x], x)) / norm);
  return ops;
}

/// Error, success and waive probabilities of a decoder against pi.
inline void score(const MeasurementAssemblage& e, const PermutationSet& pi, EncryptionResult& r) {
  const PermutationSet inv = pi.inverse();
  r.error = r.success = r.waive = 0.0;
  for (std::size_t m = 0; m < r.decoders.messages.size(); ++m) {
    const auto ops = encryption_operators(e, inv.tuple(m));
    const auto& dec = r.decoders.messages[m];
    r.success += hs_inner(ops[0], dec.guess0) + hs_inner(ops[1], dec.guess1);
    r.error += hs_inner(ops[0], dec.guess1) + hs_inner(ops[1], dec.guess0);
    r.waive += hs_inner(ops[0] + ops[1], dec.abstain);
  }
}

}  // namespace detail

/// Optimal decoders for a fixed pi. The per-message program minimises the error
/// weight sum_x tr(E^T_{pi_x^{-1}(m)|x} R_x) / (2d), where R_x collects the
/// outcomes that are wrong when the bit was x, i.e. R_0 = guess1 and R_1 = guess0.
inline EncryptionResult p_error_encrypt_given_pi(const EncryptionInstance& inst, const PermutationSet& pi,
                                                 const Settings& settings = {}) {
  inst.validate();
  require(pi.inputs() == 2 && pi.outcomes() == inst.E.outcomes(), ErrorKind::dimension_mismatch,
          "permutation set shape does not match the measurements");
  const PermutationSet inv = pi.inverse();
  const Index d = inst.dim();
  EncryptionResult out;
  out.pi = pi;
  out.decoders.messages.resize(inst.E.outcomes());
  parallel_for(out.decoders.messages.size(), settings.threads, [&](std::size_t m) {
    const auto ops = detail::encryption_operators(inst.E, inv.tuple(m));
    const DetaSolution ds = d_eta(std::span<const HermitianOperator>(ops), inst.eta, settings);
    auto& dec = out.decoders.messages[m];
    dec.guess0 = ds.Q[1];
    dec.guess1 = ds.Q[0];
    dec.abstain = HermitianOperator::identity(d) - ds.Q[0] - ds.Q[1];
  });
  detail::score(inst.E, pi, out);
  return out;
}

/// Worst case over the announcement relabellings pi.
inline EncryptionResult p_error_encrypt(const EncryptionInstance& inst, const Settings& settings = {}) {
  inst.validate();
  SweepOptions opt;
  opt.report_inverse = true;
  const SweepResult sr = sweep_permutations(
      2, inst.E.outcomes(),
      [&](const std::vector<std::size_t>& t) {
        const auto ops = detail::encryption_operators(inst.E, t);
        return d_eta(std::span<const HermitianOperator>(ops), inst.eta, settings).value;
      },
      settings, opt);
  EncryptionResult out = p_error_encrypt_given_pi(inst, sr.maximizer, settings);
  out.lower_bound_only = sr.lower_bound_only;
  return out;
}

/// Grid {eta*, (eta*+1)/2, 0.99}.
inline std::vector<double> default_eta_grid(double eta_star) { return {eta_star, 0.5 * (eta_star + 1.0), 0.99}; }

/// P_error^encrypt(E, eta) = (1 - eta) C_POVM(E) / (2d) for eta >= eta*(E).
inline CheckReport theorem4_check(const MeasurementAssemblage& e, std::vector<double> eta_grid, double tolerance,
                                  const Settings& settings = {}) {
  require(e.inputs() == 2, ErrorKind::invalid_input, "encryption needs a pair of measurements");
  CheckReport rep;
  rep.name = "encryption error against complementarity";
  const double es = eta_star_assemblage(e, true, settings);
  if (eta_grid.empty()) eta_grid = default_eta_grid(es);
  const double cp = c_povm(e, settings).value;
  const double d = static_cast<double>(e.dim());
  for (double eta : eta_grid) {
    if (eta < es) {
      rep.note("eta " + std::to_string(eta) + " lies below eta* = " + std::to_string(es) + "; skipped");
      continue;
    }
    const double err = p_error_encrypt({e, eta}, settings).error;
    rep.check("eta " + std::to_string(eta) + ": error = (1-eta) C_POVM / (2d)", err, Relation::equal,
              (1.0 - eta) * cp / (2.0 * d), tolerance);
  }
  return rep;
}

/// Without abstaining, unambiguous encryption is impossible when every element is nonzero.
inline CheckReport nogo_encrypt_check(const MeasurementAssemblage& e, double margin, const Settings& settings = {}) {
  CheckReport rep;
  rep.name = "deterministic encryption no-go";
  for (std::size_t x = 0; x < e.inputs(); ++x)
    for (std::size_t a = 0; a < e.outcomes(); ++a)
      require(e.element(a, x).trace() > settings.tol.zero, ErrorKind::invalid_input,
              "the no-go needs every measurement element to be nonzero");
  rep.check("error at eta = 0 is strictly positive", p_error_encrypt({e, 0.0}, settings).error, Relation::greater, 0.0,
            margin);
  return rep;
}

/// Z and X measurements on a qubit.
inline MeasurementAssemblage pauli_zx() {
  return MeasurementAssemblage({{ops::ket0(), ops::ket1()}, {ops::plus(), ops::minus()}});
}

struct PauliExampleCase {
  PermutationSet pi;
  /// Optimal error at eta_min from the per-message programs.
  double optimal_error = 0.0;
  /// Scores of the closed-form decoder family.
  EncryptionResult closed_form;
  DecoderValidation validation;
};

struct PauliExampleReport {
  double alpha_max = 0.0;
  double eta_min = 0.0;
  /// Assemblage-level eta* from minimal-norm exclusion duals, for comparison.
  double eta_star = 0.0;
  double success = 0.0;
  std::vector<PauliExampleCase> cases;
  /// Optimal error for the aligned pi at eta = 0 (reported only).
  double fixed_pi_error_eta0 = 0.0;
};

/// Decoder family guess0 = alpha (I - E_{pi_1^{-1}(m)|1})^T, guess1 = alpha (I - E_{pi_0^{-1}(m)|0})^T.
inline DecodingStrategy complement_decoders(const MeasurementAssemblage& e, const PermutationSet& pi, double alpha) {
  const PermutationSet inv = pi.inverse();
  const Index d = e.dim();
  const HermitianOperator id = HermitianOperator::identity(d);
  DecodingStrategy s;
  for (std::size_t m = 0; m < e.outcomes(); ++m) {
    MessageDecoder dec;
    dec.guess0 = transpose_map(id - e.element(inv(1, m), 1)) * alpha;
    dec.guess1 = transpose_map(id - e.element(inv(0, m), 0)) * alpha;
    dec.abstain = id - dec.guess0 - dec.guess1;
    s.messages.push_back(std::move(dec));
  }
  return s;
}

/// Largest alpha keeping the complement decoders a measurement, and the smallest
/// eta their abstain element then needs, over every message of every pi.
inline std::pair<double, double> complement_decoder_limits(const MeasurementAssemblage& e) {
  double norm = 0.0;
  double low = std::numeric_limits<double>::infinity();
  const HermitianOperator id = HermitianOperator::identity(e.dim());
  for (std::size_t a0 = 0; a0 < e.outcomes(); ++a0) {
    for (std::size_t a1 = 0; a1 < e.outcomes(); ++a1) {
      const HermitianOperator s = (id - e.element(a0, 0)) + (id - e.element(a1, 1));
      norm = std::max(norm, s.max_eigenvalue());
      low = std::min(low, s.min_eigenvalue());
    }
  }
  const double alpha = 1.0 / norm;
  return {alpha, 1.0 - alpha * low};
}

inline PauliExampleReport pauli_example(const Settings& settings = {}) {
  const MeasurementAssemblage e = pauli_zx();
  PauliExampleReport rep;
  std::tie(rep.alpha_max, rep.eta_min) = complement_decoder_limits(e);
  rep.eta_star = eta_star_assemblage(e, true, settings);
  const std::size_t w = e.outcomes();
  std::vector<std::vector<std::size_t>> map(2, std::vector<std::size_t>(w));
  for (auto& p : map) std::iota(p.begin(), p.end(), std::size_t{0});
  do {
    PauliExampleCase c;
    c.pi = PermutationSet(map);
    c.optimal_error = p_error_encrypt_given_pi({e, rep.eta_min}, c.pi, settings).error;
    c.closed_form.pi = c.pi;
    c.closed_form.decoders = complement_decoders(e, c.pi, rep.alpha_max);
    detail::score(e, c.pi, c.closed_form);
    c.validation = c.closed_form.decoders.validate(rep.eta_min);
    rep.cases.push_back(std::move(c));
  } while (detail::next_permutation_set(map, 0));
  rep.success = rep.cases.front().closed_form.success;
  rep.fixed_pi_error_eta0 = p_error_encrypt_given_pi({e, 0.0}, PermutationSet::identity(2, w), settings).error;
  return rep;
}

}  // namespace qcomp
