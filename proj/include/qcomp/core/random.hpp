#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "qcomp/core/objects.hpp"

namespace qcomp {

/// Seeded generator. mt19937_64 output is fixed by the standard; the real and
/// Gaussian transforms below are spelled out so draws are identical across
/// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in (0, 1).
  double uniform() {
    for (;;) {
      const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline CMatrix ginibre(Index rows, Index cols, Rng& rng) {
  CMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
  return g;
}

/// Haar-random unitary (QR of a Ginibre matrix with the phase correction).
inline CMatrix random_unitary(Index d, Rng& rng) {
  const CMatrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < d; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

/// Induced-measure random state of the given rank (full rank by default).
inline DensityOperator random_density(Index d, Rng& rng, Index rank = 0) {
  if (rank <= 0) rank = d;
  const CMatrix g = ginibre(d, rank, rng);
  const CMatrix rho = g * g.adjoint();
  return DensityOperator(HermitianOperator(rho / rho.trace().real()));
}

inline CVector random_ket(Index d, Rng& rng) {
  CVector v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

inline DensityOperator random_pure_state(Index d, Rng& rng) {
  return DensityOperator(HermitianOperator::projector(random_ket(d, rng)));
}

/// w Ginibre PSD operators normalised by the inverse square root of their sum.
inline Povm random_povm(Index d, std::size_t w, Rng& rng) {
  std::vector<HermitianOperator> raw;
  for (std::size_t a = 0; a < w; ++a) {
    const CMatrix g = ginibre(d, d, rng);
    raw.emplace_back(CMatrix(g * g.adjoint()));
  }
  const HermitianOperator s_inv_half = inverse_sqrt(sum(std::span<const HermitianOperator>(raw)));
  std::vector<HermitianOperator> elements;
  for (const auto& r : raw) elements.emplace_back(CMatrix(s_inv_half.matrix() * r.matrix() * s_inv_half.matrix()));
  return Povm(elements);
}

/// Rank-one projective measurement in a Haar-random basis (w = d).
inline Povm random_projective(Index d, Rng& rng) {
  const CMatrix u = random_unitary(d, rng);
  std::vector<HermitianOperator> elements;
  for (Index k = 0; k < d; ++k) elements.push_back(HermitianOperator::projector(u.col(k)));
  return Povm(elements);
}

inline MeasurementAssemblage random_povm_assemblage(Index d, std::size_t n, std::size_t w, Rng& rng) {
  std::vector<std::vector<HermitianOperator>> table;
  for (std::size_t x = 0; x < n; ++x) table.push_back(random_povm(d, w, rng).elements());
  return MeasurementAssemblage(table);
}

inline MeasurementAssemblage random_povm_pair(std::uint64_t seed, Index d, std::size_t w) {
  Rng rng(seed);
  return random_povm_assemblage(d, 2, w, rng);
}

inline MeasurementAssemblage random_projective_pair(Index d, Rng& rng) {
  return MeasurementAssemblage({random_projective(d, rng).elements(), random_projective(d, rng).elements()});
}

/// Post-processings of a single random parent POVM, so jointly measurable by construction.
inline MeasurementAssemblage random_compatible_assemblage(Index d, std::size_t n, std::size_t w, std::size_t parent_outcomes,
                                                          Rng& rng) {
  const Povm parent = random_povm(d, parent_outcomes, rng);
  std::vector<std::vector<HermitianOperator>> table(n, std::vector<HermitianOperator>(w, HermitianOperator::zero(d)));
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t l = 0; l < parent_outcomes; ++l) {
      std::vector<double> column(w);
      double total = 0.0;
      for (auto& c : column) total += (c = -std::log(rng.uniform()));
      for (std::size_t a = 0; a < w; ++a) table[x][a] = table[x][a] + parent[l] * (column[a] / total);
    }
  }
  return MeasurementAssemblage(table);
}

inline BipartiteState random_pure_bipartite(Index dim_a, Index dim_b, Rng& rng) {
  return BipartiteState(dim_a, dim_b, HermitianOperator::projector(random_ket(dim_a * dim_b, rng)));
}

inline BipartiteState random_mixed_bipartite(Index dim_a, Index dim_b, Rng& rng) {
  return BipartiteState(dim_a, dim_b, random_density(dim_a * dim_b, rng).op());
}

/// Kraus operators (d_out x d_in) of a random channel, from a random isometry
/// d_in -> kraus_count * d_out.
inline std::vector<CMatrix> random_channel_kraus(Index d_in, Index d_out, Index kraus_count, Rng& rng) {
  const CMatrix g = ginibre(kraus_count * d_out, d_in, rng);
  const HermitianOperator gram(CMatrix(g.adjoint() * g));
  const CMatrix v = g * inverse_sqrt(gram).matrix();
  std::vector<CMatrix> kraus;
  for (Index k = 0; k < kraus_count; ++k) kraus.push_back(v.middleRows(k * d_out, d_out));
  return kraus;
}

inline HermitianOperator apply_channel(const std::vector<CMatrix>& kraus, const HermitianOperator& rho) {
  CMatrix out = CMatrix::Zero(kraus.front().rows(), kraus.front().rows());
  for (const auto& k : kraus) out += k * rho.matrix() * k.adjoint();
  return HermitianOperator(out);
}

/// Heisenberg-picture (adjoint) channel.
inline HermitianOperator apply_adjoint_channel(const std::vector<CMatrix>& kraus, const HermitianOperator& op) {
  CMatrix out = CMatrix::Zero(kraus.front().cols(), kraus.front().cols());
  for (const auto& k : kraus) out += k.adjoint() * op.matrix() * k;
  return HermitianOperator(out);
}

/// Dirichlet(1,...,1) draw mapped into [floor, 1]: p_x = floor + (1 - n floor) u_x.
inline PriorDistribution random_prior(std::size_t n, Rng& rng, double floor = 1e-3) {
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& v : p) total += (v = -std::log(rng.uniform()));
  for (auto& v : p) v = floor + (1.0 - static_cast<double>(n) * floor) * v / total;
  return PriorDistribution(p);
}

inline std::vector<DensityOperator> random_states(Index d, std::size_t n, Rng& rng) {
  std::vector<DensityOperator> out;
  for (std::size_t x = 0; x < n; ++x) out.push_back(random_density(d, rng));
  return out;
}

}  // namespace qcomp
