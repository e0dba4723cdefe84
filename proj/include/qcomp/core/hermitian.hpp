#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <span>
#include <vector>

#include "qcomp/core/types.hpp"

namespace qcomp {

/// Complex Hermitian matrix. Construction stores (X + X^dagger) / 2, so the
/// stored entries satisfy m(i,j) == conj(m(j,i)) bit for bit.
class HermitianOperator {
 public:
  HermitianOperator() = default;

  explicit HermitianOperator(const CMatrix& m) {
    require(m.rows() == m.cols(), ErrorKind::dimension_mismatch, "Hermitian operator must be square");
    m_ = CMatrix(m.rows(), m.cols());
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) {
        m_(i, j) = (m(i, j) + std::conj(m(j, i))) * 0.5;
      }
    }
  }

  static HermitianOperator zero(Index dim) { return HermitianOperator(CMatrix::Zero(dim, dim)); }
  static HermitianOperator identity(Index dim) { return HermitianOperator(CMatrix::Identity(dim, dim)); }

  static HermitianOperator diagonal(std::initializer_list<double> values) {
    CMatrix m = CMatrix::Zero(static_cast<Index>(values.size()), static_cast<Index>(values.size()));
    Index k = 0;
    for (double v : values) m(k, k) = v, ++k;
    return HermitianOperator(m);
  }

  /// |psi><psi| / <psi|psi>.
  static HermitianOperator projector(const CVector& ket) {
    const double norm2 = ket.squaredNorm();
    require(norm2 > 0.0, ErrorKind::invalid_input, "projector onto the zero vector");
    return HermitianOperator(ket * ket.adjoint() / norm2);
  }

  Index dim() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(Index i, Index j) const { return m_(i, j); }

  double trace() const { return m_.trace().real(); }

  /// Ascending eigenvalues.
  RVector eigenvalues() const {
    if (dim() == 0) return RVector();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }
  double min_eigenvalue() const { return dim() == 0 ? 0.0 : eigenvalues()(0); }
  double max_eigenvalue() const { return dim() == 0 ? 0.0 : eigenvalues()(dim() - 1); }
  double operator_norm() const {
    if (dim() == 0) return 0.0;
    const RVector ev = eigenvalues();
    return std::max(std::abs(ev(0)), std::abs(ev(dim() - 1)));
  }
  double frobenius_norm() const { return m_.norm(); }

  bool is_psd(double tol) const { return min_eigenvalue() >= -tol; }

  HermitianOperator operator+(const HermitianOperator& o) const { return HermitianOperator(sum_checked(o, 1.0)); }
  HermitianOperator operator-(const HermitianOperator& o) const { return HermitianOperator(sum_checked(o, -1.0)); }
  HermitianOperator operator-() const { return HermitianOperator(-m_); }
  HermitianOperator operator*(double s) const { return HermitianOperator(m_ * s); }
  friend HermitianOperator operator*(double s, const HermitianOperator& h) { return h * s; }
  HermitianOperator operator/(double s) const { return HermitianOperator(m_ / s); }

  bool operator==(const HermitianOperator& o) const { return m_.rows() == o.m_.rows() && m_ == o.m_; }

 private:
  CMatrix sum_checked(const HermitianOperator& o, double sign) const {
    require(dim() == o.dim(), ErrorKind::dimension_mismatch, "operator dimensions differ");
    return m_ + sign * o.m_;
  }

  CMatrix m_;
};

/// Re tr(A B).
inline double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
  require(a.dim() == b.dim(), ErrorKind::dimension_mismatch, "operator dimensions differ");
  return (a.matrix().cwiseProduct(b.matrix().transpose())).sum().real();
}

inline double frobenius_distance(const HermitianOperator& a, const HermitianOperator& b) {
  require(a.dim() == b.dim(), ErrorKind::dimension_mismatch, "operator dimensions differ");
  return (a.matrix() - b.matrix()).norm();
}

inline double min_eigenvalue(const HermitianOperator& a) { return a.min_eigenvalue(); }

/// Kronecker product, A-major: (A ⊗ B)(i*dB + k, j*dB + l) = A(i,j) B(k,l).
inline HermitianOperator tensor_product(const HermitianOperator& a, const HermitianOperator& b) {
  const Index da = a.dim(), db = b.dim();
  CMatrix out(da * db, da * db);
  for (Index i = 0; i < da; ++i) {
    for (Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a(i, j) * b.matrix();
    }
  }
  return HermitianOperator(out);
}

inline HermitianOperator transpose_map(const HermitianOperator& a) { return HermitianOperator(CMatrix(a.matrix().transpose())); }

/// V^dagger A V for a (possibly rectangular) V; the result lives on the column space of V.
inline HermitianOperator congruence(const HermitianOperator& a, const CMatrix& v) {
  require(v.rows() == a.dim(), ErrorKind::dimension_mismatch, "congruence dimension mismatch");
  return HermitianOperator(CMatrix(v.adjoint() * a.matrix() * v));
}

/// f(A) for a real function applied to the spectrum.
template <typename F>
HermitianOperator spectral_apply(const HermitianOperator& a, F&& f) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix());
  RVector mapped = es.eigenvalues();
  for (Index i = 0; i < mapped.size(); ++i) mapped(i) = f(mapped(i));
  return HermitianOperator(CMatrix(es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().adjoint()));
}

inline HermitianOperator psd_sqrt(const HermitianOperator& a) {
  return spectral_apply(a, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

/// Inverse square root of a positive definite operator.
inline HermitianOperator inverse_sqrt(const HermitianOperator& a) {
  require(a.min_eigenvalue() > 0.0, ErrorKind::invalid_input, "inverse square root of a singular operator");
  return spectral_apply(a, [](double x) { return 1.0 / std::sqrt(x); });
}

inline HermitianOperator sum(std::span<const HermitianOperator> ops) {
  require(!ops.empty(), ErrorKind::invalid_input, "sum of an empty operator list");
  CMatrix acc = CMatrix::Zero(ops.front().dim(), ops.front().dim());
  for (const auto& op : ops) {
    require(op.dim() == ops.front().dim(), ErrorKind::dimension_mismatch, "operator dimensions differ");
    acc += op.matrix();
  }
  return HermitianOperator(acc);
}

/// Orthonormal basis (columns) of the eigenspace with eigenvalue <= threshold.
inline CMatrix low_eigenspace(const HermitianOperator& a, double threshold) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix());
  Index count = 0;
  while (count < a.dim() && es.eigenvalues()(count) <= threshold) ++count;
  return es.eigenvectors().leftCols(count);
}

/// Orthonormal basis (columns) of the eigenspace with eigenvalue > threshold.
inline CMatrix high_eigenspace(const HermitianOperator& a, double threshold) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix());
  Index count = 0;
  while (count < a.dim() && es.eigenvalues()(count) <= threshold) ++count;
  return es.eigenvectors().rightCols(a.dim() - count);
}

namespace ops {

inline CVector ket(std::initializer_list<Complex> amplitudes) {
  CVector v(static_cast<Index>(amplitudes.size()));
  Index k = 0;
  for (auto a : amplitudes) v(k++) = a;
  return v;
}

inline CVector basis(Index dim, Index k) {
  CVector v = CVector::Zero(dim);
  v(k) = 1.0;
  return v;
}

inline HermitianOperator pauli_x() { return HermitianOperator((CMatrix(2, 2) << 0, 1, 1, 0).finished()); }
inline HermitianOperator pauli_y() {
  return HermitianOperator((CMatrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished());
}
inline HermitianOperator pauli_z() { return HermitianOperator((CMatrix(2, 2) << 1, 0, 0, -1).finished()); }

inline HermitianOperator ket0() { return HermitianOperator::projector(ket({1.0, 0.0})); }
inline HermitianOperator ket1() { return HermitianOperator::projector(ket({0.0, 1.0})); }
inline HermitianOperator plus() { return HermitianOperator::projector(ket({1.0, 1.0})); }
inline HermitianOperator minus() { return HermitianOperator::projector(ket({1.0, -1.0})); }

}  // namespace ops

}  // namespace qcomp
