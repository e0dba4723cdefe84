#pragma once

#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "qcomp/core/hermitian.hpp"

namespace qcomp {

/// Positive semidefinite operator with unit trace, or trace in [0, 1] when sub-normalised.
class DensityOperator {
 public:
  DensityOperator() = default;

  explicit DensityOperator(HermitianOperator op, const Tolerances& tol = {}) : op_(std::move(op)) {
    check_psd(tol);
    require(std::abs(op_.trace() - 1.0) <= tol.eq, ErrorKind::invalid_input,
            "density operator trace must be 1 (got " + std::to_string(op_.trace()) + ")");
  }

  static DensityOperator sub_normalised(HermitianOperator op, const Tolerances& tol = {}) {
    DensityOperator rho;
    rho.op_ = std::move(op);
    rho.check_psd(tol);
    const double t = rho.op_.trace();
    require(t >= -tol.eq && t <= 1.0 + tol.eq, ErrorKind::invalid_input, "sub-normalised state trace outside [0,1]");
    return rho;
  }

  const HermitianOperator& op() const { return op_; }
  Index dim() const { return op_.dim(); }
  double trace() const { return op_.trace(); }

 private:
  void check_psd(const Tolerances& tol) const {
    const double mu = op_.min_eigenvalue();
    require(mu >= -tol.psd, ErrorKind::invalid_input,
            "state is not positive semidefinite (min eigenvalue " + std::to_string(mu) + ")");
  }

  HermitianOperator op_;
};

inline std::vector<HermitianOperator> operators_of(std::span<const DensityOperator> states) {
  std::vector<HermitianOperator> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.op());
  return out;
}

class Povm {
 public:
  Povm() = default;

  explicit Povm(std::vector<HermitianOperator> elements, const Tolerances& tol = {}) : elements_(std::move(elements)) {
    require(!elements_.empty(), ErrorKind::invalid_input, "POVM needs at least one element");
    const Index d = elements_.front().dim();
    CMatrix total = CMatrix::Zero(d, d);
    for (std::size_t a = 0; a < elements_.size(); ++a) {
      const auto& e = elements_[a];
      require(e.dim() == d, ErrorKind::dimension_mismatch, "POVM elements have different dimensions");
      const double mu = e.min_eigenvalue();
      require(mu >= -tol.psd, ErrorKind::invalid_input,
              "POVM element " + std::to_string(a) + " is not PSD (min eigenvalue " + std::to_string(mu) + ")");
      total += e.matrix();
    }
    const double residual = (total - CMatrix::Identity(d, d)).norm();
    require(residual <= tol.eq, ErrorKind::invalid_input,
            "POVM elements do not sum to identity (residual " + std::to_string(residual) + ")");
  }

  std::size_t size() const { return elements_.size(); }
  Index dim() const { return elements_.empty() ? 0 : elements_.front().dim(); }
  const HermitianOperator& operator[](std::size_t a) const { return elements_[a]; }
  const std::vector<HermitianOperator>& elements() const { return elements_; }

 private:
  std::vector<HermitianOperator> elements_;
};

/// Family {E_{a|x}}: n POVMs with a common outcome count w (shorter POVMs are padded with zero operators).
class MeasurementAssemblage {
 public:
  MeasurementAssemblage() = default;

  /// elements[x][a] = E_{a|x}.
  explicit MeasurementAssemblage(const std::vector<std::vector<HermitianOperator>>& elements, const Tolerances& tol = {}) {
    require(!elements.empty(), ErrorKind::invalid_input, "measurement assemblage needs at least one input");
    std::size_t w = 0;
    for (const auto& povm : elements) w = std::max(w, povm.size());
    const Index d = elements.front().empty() ? 0 : elements.front().front().dim();
    for (const auto& povm : elements) {
      std::vector<HermitianOperator> padded = povm;
      while (padded.size() < w) padded.push_back(HermitianOperator::zero(d));
      povms_.emplace_back(std::move(padded), tol);
      require(povms_.back().dim() == d, ErrorKind::dimension_mismatch, "assemblage POVMs differ in dimension");
    }
  }

  std::size_t inputs() const { return povms_.size(); }
  std::size_t outcomes() const { return povms_.empty() ? 0 : povms_.front().size(); }
  Index dim() const { return povms_.empty() ? 0 : povms_.front().dim(); }
  const HermitianOperator& element(std::size_t a, std::size_t x) const { return povms_.at(x)[a]; }
  const Povm& povm(std::size_t x) const { return povms_.at(x); }

  /// Operator table indexed [x][a].
  std::vector<std::vector<HermitianOperator>> table() const {
    std::vector<std::vector<HermitianOperator>> t;
    for (const auto& p : povms_) t.push_back(p.elements());
    return t;
  }

 private:
  std::vector<Povm> povms_;
};

/// Family {sigma_{a|x}} of sub-normalised states; for each x the traces sum to one.
class StateAssemblage {
 public:
  StateAssemblage() = default;

  /// sigmas[x][a] = sigma_{a|x}.
  explicit StateAssemblage(const std::vector<std::vector<HermitianOperator>>& sigmas, const Tolerances& tol = {}) {
    require(!sigmas.empty(), ErrorKind::invalid_input, "state assemblage needs at least one input");
    std::size_t w = 0;
    for (const auto& ens : sigmas) w = std::max(w, ens.size());
    require(w > 0, ErrorKind::invalid_input, "state assemblage needs at least one outcome");
    const Index d = sigmas.front().front().dim();
    for (std::size_t x = 0; x < sigmas.size(); ++x) {
      std::vector<HermitianOperator> row = sigmas[x];
      while (row.size() < w) row.push_back(HermitianOperator::zero(d));
      double total = 0.0;
      for (std::size_t a = 0; a < row.size(); ++a) {
        require(row[a].dim() == d, ErrorKind::dimension_mismatch, "assemblage states differ in dimension");
        const double mu = row[a].min_eigenvalue();
        require(mu >= -tol.psd, ErrorKind::invalid_input,
                "sigma_{" + std::to_string(a) + "|" + std::to_string(x) + "} is not PSD (min eigenvalue " +
                    std::to_string(mu) + ")");
        total += row[a].trace();
      }
      require(std::abs(total - 1.0) <= tol.eq, ErrorKind::invalid_input,
              "ensemble " + std::to_string(x) + " traces sum to " + std::to_string(total) + ", expected 1");
      sigmas_.push_back(std::move(row));
    }
  }

  std::size_t inputs() const { return sigmas_.size(); }
  std::size_t outcomes() const { return sigmas_.empty() ? 0 : sigmas_.front().size(); }
  Index dim() const { return sigmas_.empty() ? 0 : sigmas_.front().front().dim(); }
  const HermitianOperator& element(std::size_t a, std::size_t x) const { return sigmas_.at(x).at(a); }
  const std::vector<std::vector<HermitianOperator>>& table() const { return sigmas_; }

  /// P(a|x) = tr(sigma_{a|x}).
  double probability(std::size_t a, std::size_t x) const { return element(a, x).trace(); }

  /// sum_a sigma_{a|x}, i.e. the average state of ensemble x.
  HermitianOperator reduced(std::size_t x) const { return sum(std::span<const HermitianOperator>(sigmas_.at(x))); }

  /// Largest Frobenius deviation of sum_a sigma_{a|x} from the x = 0 reduced state.
  double signalling_residual() const {
    const HermitianOperator ref = reduced(0);
    double worst = 0.0;
    for (std::size_t x = 1; x < inputs(); ++x) worst = std::max(worst, frobenius_distance(reduced(x), ref));
    return worst;
  }
  bool is_non_signalling(double tol) const { return signalling_residual() <= tol; }

 private:
  std::vector<std::vector<HermitianOperator>> sigmas_;
};

enum class Subsystem { A, B };

/// Operator on A ⊗ B with composite index i * dimB + j.
class BipartiteState {
 public:
  BipartiteState() = default;

  BipartiteState(Index dim_a, Index dim_b, HermitianOperator op, const Tolerances& tol = {})
      : dim_a_(dim_a), dim_b_(dim_b), rho_(std::move(op), tol) {
    require(dim_a > 0 && dim_b > 0 && rho_.dim() == dim_a * dim_b, ErrorKind::dimension_mismatch,
            "bipartite state dimension does not match dimA * dimB");
  }

  Index dim_a() const { return dim_a_; }
  Index dim_b() const { return dim_b_; }
  const HermitianOperator& op() const { return rho_.op(); }

  HermitianOperator marginal_a() const;
  HermitianOperator marginal_b() const;

  bool has_full_rank_marginals(double tol_psd) const {
    return marginal_a().min_eigenvalue() > tol_psd && marginal_b().min_eigenvalue() > tol_psd;
  }

 private:
  Index dim_a_ = 0;
  Index dim_b_ = 0;
  DensityOperator rho_;
};

inline HermitianOperator partial_trace(const HermitianOperator& op, Index dim_a, Index dim_b, Subsystem traced) {
  require(dim_a > 0 && dim_b > 0 && op.dim() == dim_a * dim_b, ErrorKind::dimension_mismatch,
          "partial trace: operator dimension does not match dimA * dimB");
  if (traced == Subsystem::B) {
    CMatrix out = CMatrix::Zero(dim_a, dim_a);
    for (Index i = 0; i < dim_a; ++i)
      for (Index j = 0; j < dim_a; ++j)
        for (Index k = 0; k < dim_b; ++k) out(i, j) += op(i * dim_b + k, j * dim_b + k);
    return HermitianOperator(out);
  }
  CMatrix out = CMatrix::Zero(dim_b, dim_b);
  for (Index k = 0; k < dim_b; ++k)
    for (Index l = 0; l < dim_b; ++l)
      for (Index i = 0; i < dim_a; ++i) out(k, l) += op(i * dim_b + k, i * dim_b + l);
  return HermitianOperator(out);
}

inline HermitianOperator partial_trace(const BipartiteState& rho, Subsystem traced) {
  return partial_trace(rho.op(), rho.dim_a(), rho.dim_b(), traced);
}

inline HermitianOperator BipartiteState::marginal_a() const { return partial_trace(*this, Subsystem::B); }
inline HermitianOperator BipartiteState::marginal_b() const { return partial_trace(*this, Subsystem::A); }

/// |phi+> = sum_n |n>|n> / sqrt(d).
inline BipartiteState maximally_entangled(Index d) {
  require(d >= 2, ErrorKind::invalid_input, "maximally entangled state needs d >= 2");
  CVector psi = CVector::Zero(d * d);
  for (Index n = 0; n < d; ++n) psi(n * d + n) = 1.0;
  return BipartiteState(d, d, HermitianOperator::projector(psi));
}

/// sigma_{a|x} = tr_A[(E_{a|x} ⊗ I) rho_AB].
inline StateAssemblage induced_assemblage(const MeasurementAssemblage& e, const BipartiteState& rho,
                                          const Tolerances& tol = {}) {
  require(e.dim() == rho.dim_a(), ErrorKind::dimension_mismatch, "measurement dimension differs from dimA");
  const HermitianOperator id_b = HermitianOperator::identity(rho.dim_b());
  std::vector<std::vector<HermitianOperator>> sigmas(e.inputs());
  for (std::size_t x = 0; x < e.inputs(); ++x) {
    for (std::size_t a = 0; a < e.outcomes(); ++a) {
      const CMatrix lifted = tensor_product(e.element(a, x), id_b).matrix() * rho.op().matrix();
      sigmas[x].push_back(partial_trace(HermitianOperator(lifted), rho.dim_a(), rho.dim_b(), Subsystem::A));
    }
  }
  return StateAssemblage(sigmas, tol);
}

/// {E_{a|x} / d}: the state assemblage a measurement assemblage defines on its own.
inline StateAssemblage scaled_assemblage(const MeasurementAssemblage& e, const Tolerances& tol = {}) {
  auto table = e.table();
  for (auto& row : table)
    for (auto& op : row) op = op / static_cast<double>(e.dim());
  return StateAssemblage(table, tol);
}

/// Strictly positive probability vector.
class PriorDistribution {
 public:
  PriorDistribution() = default;

  explicit PriorDistribution(std::vector<double> probs, const Tolerances& tol = {}) : probs_(std::move(probs)) {
    require(!probs_.empty(), ErrorKind::invalid_input, "prior needs at least one entry");
    double total = 0.0;
    for (std::size_t x = 0; x < probs_.size(); ++x) {
      require(probs_[x] > 0.0, ErrorKind::invalid_input, "prior entry " + std::to_string(x) + " is not strictly positive");
      total += probs_[x];
    }
    require(std::abs(total - 1.0) <= tol.eq, ErrorKind::invalid_input,
            "prior sums to " + std::to_string(total) + ", expected 1");
  }

  static PriorDistribution uniform(std::size_t n) { return PriorDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n))); }

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t x) const { return probs_[x]; }
  const std::vector<double>& probs() const { return probs_; }

  double min() const { return *std::min_element(probs_.begin(), probs_.end()); }
  /// Lowest index attaining the minimum.
  std::size_t argmin() const {
    return static_cast<std::size_t>(std::min_element(probs_.begin(), probs_.end()) - probs_.begin());
  }

 private:
  std::vector<double> probs_;
};

}  // namespace qcomp
