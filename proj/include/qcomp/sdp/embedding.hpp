#pragma once

#include "qcomp/core/hermitian.hpp"

namespace qcomp::sdp {

/// [[Re A, -Im A], [Im A, Re A]]. Works for any square complex matrix; for a
/// Hermitian argument the result is real symmetric with every eigenvalue of A
/// repeated twice, and trace 2 tr(A).
inline RMatrix embed(const CMatrix& a) {
  const Index n = a.rows();
  RMatrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = a.real();
  out.topRightCorner(n, n) = -a.imag();
  out.bottomLeftCorner(n, n) = a.imag();
  out.bottomRightCorner(n, n) = a.real();
  return out;
}

inline RMatrix hermitian_embedding(const HermitianOperator& a) { return embed(a.matrix()); }

/// Adjoint of the embedding with respect to the trace inner products:
/// Re tr(F Z) = <embed(F), X> for Z = deembed(X). For X = embed(Z)/2 this returns Z,
/// which is where the factor 2 in trace objectives is absorbed. Z = W^dagger X W
/// with W = [I; -iI], so X >= 0 implies Z >= 0.
inline CMatrix deembed(const RMatrix& x) {
  const Index n = x.rows() / 2;
  CMatrix z(n, n);
  z.real() = x.topLeftCorner(n, n) + x.bottomRightCorner(n, n);
  z.imag() = x.bottomLeftCorner(n, n) - x.topRightCorner(n, n);
  return (z + z.adjoint()) * 0.5;
}

}  // namespace qcomp::sdp
