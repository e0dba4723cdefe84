#pragma once

// Semidefinite programs in linear-matrix-inequality form.
//
//   primal:  maximize / minimize   c^T y + offset
//            subject to            F0_j + sum_i y_i F_ij  >= 0     (Hermitian, one block per j)
//                                  a_k^T y = beta_k                 (scalar equalities)
//
//   dual  (for maximize, with b = c):
//            minimize   sum_j Re tr(F0_j Z_j) + beta^T nu
//            subject to b_i + sum_j Re tr(F_ij Z_j) = (A_eq^T nu)_i,  Z_j >= 0
//
// A minimization is handled as the maximization of -c^T y; reported primal and
// dual values are always in the caller's sense.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qcomp/core/hermitian.hpp"

namespace qcomp::sdp {

enum class Sense { maximize, minimize };

struct LmiTerm {
  std::size_t variable = 0;
  CMatrix coefficient;
};

struct LmiBlock {
  std::string name;
  CMatrix constant;
  std::vector<LmiTerm> terms;

  Index dim() const { return constant.rows(); }
};

struct LinearEquality {
  std::string name;
  std::vector<std::pair<std::size_t, double>> coefficients;
  double rhs = 0.0;
};

struct SdpProblem {
  Sense sense = Sense::maximize;
  std::vector<std::string> variables;
  RVector objective;
  double objective_offset = 0.0;
  std::vector<LmiBlock> blocks;
  std::vector<LinearEquality> equalities;

  std::size_t num_variables() const { return variables.size(); }

  /// F_j(y) = F0_j + sum_i y_i F_ij.
  CMatrix evaluate_block(std::size_t j, const RVector& y) const {
    const LmiBlock& blk = blocks.at(j);
    CMatrix f = blk.constant;
    for (const auto& t : blk.terms) f += y(static_cast<Index>(t.variable)) * t.coefficient;
    return f;
  }

  double objective_value(const RVector& y) const { return objective.dot(y) + objective_offset; }

  /// Throws on malformed data: non-Hermitian coefficients, dimension or index mismatches.
  void validate(double hermitian_tol = 1e-12) const {
    require(objective.size() == static_cast<Index>(variables.size()), ErrorKind::invalid_input,
            "objective length differs from the variable count");
    require(!blocks.empty(), ErrorKind::invalid_input, "SDP has no LMI blocks");
    for (const auto& blk : blocks) {
      require(blk.dim() > 0 && blk.constant.cols() == blk.dim(), ErrorKind::dimension_mismatch,
              "block '" + blk.name + "' has an invalid constant");
      auto hermitian = [&](const CMatrix& m) {
        return (m - m.adjoint()).norm() <= hermitian_tol * (1.0 + m.norm());
      };
      require(hermitian(blk.constant), ErrorKind::invalid_input, "block '" + blk.name + "' constant is not Hermitian");
      for (const auto& t : blk.terms) {
        require(t.variable < variables.size(), ErrorKind::invalid_input, "block '" + blk.name + "' references an unknown variable");
        require(t.coefficient.rows() == blk.dim() && t.coefficient.cols() == blk.dim(), ErrorKind::dimension_mismatch,
                "block '" + blk.name + "' coefficient dimension mismatch");
        require(hermitian(t.coefficient), ErrorKind::invalid_input, "block '" + blk.name + "' coefficient is not Hermitian");
      }
    }
    for (const auto& eq : equalities) {
      for (const auto& [i, v] : eq.coefficients) {
        (void)v;
        require(i < variables.size(), ErrorKind::invalid_input, "equality '" + eq.name + "' references an unknown variable");
      }
    }
  }
};

enum class SolveStatus { optimal, infeasible, unbounded, numerical_failure };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

struct SdpSolution {
  SolveStatus status = SolveStatus::numerical_failure;
  double primal_value = 0.0;
  double dual_value = 0.0;
  /// |primal - dual| / (1 + |primal|).
  double gap = 0.0;
  RVector y;
  std::vector<CMatrix> primal_blocks;     // F_j(y)
  std::vector<CMatrix> dual_multipliers;  // Z_j
  RVector equality_multipliers;           // nu
  int iterations = 0;
  double primal_residual = 0.0;  // relative, as measured by the solver
  double dual_residual = 0.0;
  std::string message;

  bool optimal() const { return status == SolveStatus::optimal; }
};

/// Real-linear functional of the variables plus a constant.
struct LinearForm {
  std::map<std::size_t, double> coefficients;
  double constant = 0.0;

  LinearForm& operator+=(const LinearForm& o) {
    for (const auto& [i, v] : o.coefficients) coefficients[i] += v;
    constant += o.constant;
    return *this;
  }
  friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
  friend LinearForm operator*(double s, LinearForm f) {
    for (auto& [i, v] : f.coefficients) v *= s;
    f.constant *= s;
    return f;
  }
  friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a += (-1.0) * b; }
};

/// Affine matrix-valued function: constant + sum_i y_i terms[i]. May be rectangular.
class AffineMatrix {
 public:
  AffineMatrix() = default;
  AffineMatrix(Index rows, Index cols) : constant_(CMatrix::Zero(rows, cols)) {}
  explicit AffineMatrix(CMatrix constant) : constant_(std::move(constant)) {}

  static AffineMatrix identity(Index d, double scale = 1.0) { return AffineMatrix(CMatrix(scale * CMatrix::Identity(d, d))); }

  Index rows() const { return constant_.rows(); }
  Index cols() const { return constant_.cols(); }
  const CMatrix& constant() const { return constant_; }
  const std::map<std::size_t, CMatrix>& terms() const { return terms_; }

  void add_term(std::size_t variable, const CMatrix& coefficient) {
    require(coefficient.rows() == rows() && coefficient.cols() == cols(), ErrorKind::dimension_mismatch,
            "affine term dimension mismatch");
    auto [it, inserted] = terms_.try_emplace(variable, coefficient);
    if (!inserted) it->second += coefficient;
  }

  AffineMatrix& operator+=(const AffineMatrix& o) {
    require(o.rows() == rows() && o.cols() == cols(), ErrorKind::dimension_mismatch, "affine sum dimension mismatch");
    constant_ += o.constant_;
    for (const auto& [i, c] : o.terms_) add_term(i, c);
    return *this;
  }
  AffineMatrix& operator-=(const AffineMatrix& o) { return *this += (-1.0) * o; }
  friend AffineMatrix operator+(AffineMatrix a, const AffineMatrix& b) { return a += b; }
  friend AffineMatrix operator-(AffineMatrix a, const AffineMatrix& b) { return a -= b; }
  friend AffineMatrix operator*(double s, AffineMatrix a) {
    a.constant_ *= s;
    for (auto& [i, c] : a.terms_) c *= s;
    return a;
  }
  friend AffineMatrix operator*(Complex s, AffineMatrix a) {
    a.constant_ *= s;
    for (auto& [i, c] : a.terms_) c *= s;
    return a;
  }

  /// L * (this) * R.
  AffineMatrix sandwich(const CMatrix& left, const CMatrix& right) const {
    AffineMatrix out(CMatrix(left * constant_ * right));
    for (const auto& [i, c] : terms_) out.terms_.emplace(i, left * c * right);
    return out;
  }
  /// V^dagger (this) V.
  AffineMatrix congruence(const CMatrix& v) const { return sandwich(v.adjoint(), v); }

  CMatrix evaluate(const RVector& y) const {
    CMatrix m = constant_;
    for (const auto& [i, c] : terms_) m += y(static_cast<Index>(i)) * c;
    return m;
  }

  /// Re tr(M (this)) as a linear form.
  LinearForm trace_with(const CMatrix& m) const {
    require(m.rows() == cols() && m.cols() == rows(), ErrorKind::dimension_mismatch, "trace_with dimension mismatch");
    LinearForm f;
    f.constant = (m * constant_).trace().real();
    for (const auto& [i, c] : terms_) f.coefficients[i] += (m * c).trace().real();
    return f;
  }
  LinearForm trace() const { return trace_with(CMatrix::Identity(cols(), rows())); }

 private:
  CMatrix constant_;
  std::map<std::size_t, CMatrix> terms_;
};

/// Hermitian matrix variable stored as dim^2 real coordinates:
/// diagonal entries, then (re, im) of each upper off-diagonal entry in row order.
struct HermitianVariable {
  std::string name;
  std::size_t offset = 0;
  Index dim = 0;

  std::size_t size() const { return static_cast<std::size_t>(dim * dim); }

  CMatrix value(const RVector& y) const {
    CMatrix h = CMatrix::Zero(dim, dim);
    std::size_t k = offset;
    for (Index j = 0; j < dim; ++j) h(j, j) = y(static_cast<Index>(k++));
    for (Index j = 0; j < dim; ++j) {
      for (Index l = j + 1; l < dim; ++l) {
        const double re = y(static_cast<Index>(k++));
        const double im = y(static_cast<Index>(k++));
        h(j, l) = Complex(re, im);
        h(l, j) = Complex(re, -im);
      }
    }
    return h;
  }

  /// The same variable as an affine expression.
  AffineMatrix expr() const {
    AffineMatrix e(dim, dim);
    std::size_t k = offset;
    for (Index j = 0; j < dim; ++j) {
      CMatrix b = CMatrix::Zero(dim, dim);
      b(j, j) = 1.0;
      e.add_term(k++, b);
    }
    for (Index j = 0; j < dim; ++j) {
      for (Index l = j + 1; l < dim; ++l) {
        CMatrix re = CMatrix::Zero(dim, dim);
        re(j, l) = re(l, j) = 1.0;
        e.add_term(k++, re);
        CMatrix im = CMatrix::Zero(dim, dim);
        im(j, l) = Complex(0, 1);
        im(l, j) = Complex(0, -1);
        e.add_term(k++, im);
      }
    }
    return e;
  }
};

struct ScalarVariable {
  std::string name;
  std::size_t index = 0;

  LinearForm form(double scale = 1.0) const {
    LinearForm f;
    f.coefficients[index] = scale;
    return f;
  }
  /// y_index * m as an affine expression.
  AffineMatrix times(const CMatrix& m) const {
    AffineMatrix e(m.rows(), m.cols());
    e.add_term(index, m);
    return e;
  }
  double value(const RVector& y) const { return y(static_cast<Index>(index)); }
};

class ProblemBuilder {
 public:
  HermitianVariable hermitian(const std::string& name, Index dim) {
    require(dim > 0, ErrorKind::invalid_input, "Hermitian variable needs a positive dimension");
    HermitianVariable v{name, variables_.size(), dim};
    for (Index j = 0; j < dim; ++j) variables_.push_back(name + "[" + std::to_string(j) + "," + std::to_string(j) + "]");
    for (Index j = 0; j < dim; ++j) {
      for (Index l = j + 1; l < dim; ++l) {
        const std::string idx = "[" + std::to_string(j) + "," + std::to_string(l) + "]";
        variables_.push_back(name + ".re" + idx);
        variables_.push_back(name + ".im" + idx);
      }
    }
    return v;
  }

  ScalarVariable scalar(const std::string& name) {
    ScalarVariable v{name, variables_.size()};
    variables_.push_back(name);
    return v;
  }

  /// expr >= 0.
  void psd(const std::string& name, const AffineMatrix& expr) {
    require(expr.rows() == expr.cols(), ErrorKind::dimension_mismatch, "LMI '" + name + "' is not square");
    LmiBlock blk;
    blk.name = name;
    blk.constant = hermitian_part(expr.constant());
    for (const auto& [i, c] : expr.terms()) {
      if (c.norm() == 0.0) continue;
      blk.terms.push_back({i, hermitian_part(c)});
    }
    blocks_.push_back(std::move(blk));
  }

  /// form >= 0, as a 1x1 block.
  void nonnegative(const std::string& name, const LinearForm& form) {
    AffineMatrix e(CMatrix::Constant(1, 1, form.constant));
    for (const auto& [i, v] : form.coefficients) e.add_term(i, CMatrix::Constant(1, 1, v));
    psd(name, e);
  }

  /// expr == 0 entrywise (real and imaginary parts). Hermitian square expressions
  /// contribute only their independent entries.
  void equal_zero(const std::string& name, const AffineMatrix& expr, bool hermitian) {
    auto emit = [&](const std::string& label, auto&& pick) {
      LinearEquality eq;
      eq.name = name + label;
      eq.rhs = -pick(expr.constant());
      for (const auto& [i, c] : expr.terms()) {
        const double v = pick(c);
        if (v != 0.0) eq.coefficients.emplace_back(i, v);
      }
      equalities_.push_back(std::move(eq));
    };
    for (Index r = 0; r < expr.rows(); ++r) {
      for (Index c = hermitian ? r : 0; c < expr.cols(); ++c) {
        const std::string idx = "[" + std::to_string(r) + "," + std::to_string(c) + "]";
        emit(".re" + idx, [r, c](const CMatrix& m) { return m(r, c).real(); });
        if (!hermitian || r != c) emit(".im" + idx, [r, c](const CMatrix& m) { return m(r, c).imag(); });
      }
    }
  }

  void equal(const std::string& name, const LinearForm& form, double rhs) {
    LinearEquality eq;
    eq.name = name;
    eq.rhs = rhs - form.constant;
    for (const auto& [i, v] : form.coefficients)
      if (v != 0.0) eq.coefficients.emplace_back(i, v);
    equalities_.push_back(std::move(eq));
  }

  void maximize(const LinearForm& f) { set_objective(Sense::maximize, f); }
  void minimize(const LinearForm& f) { set_objective(Sense::minimize, f); }

  std::size_t num_variables() const { return variables_.size(); }

  SdpProblem build() const {
    SdpProblem p;
    p.sense = sense_;
    p.variables = variables_;
    p.objective = RVector::Zero(static_cast<Index>(variables_.size()));
    for (const auto& [i, v] : objective_.coefficients) p.objective(static_cast<Index>(i)) = v;
    p.objective_offset = objective_.constant;
    p.blocks = blocks_;
    p.equalities = equalities_;
    p.validate(1e-9);
    return p;
  }

 private:
  static CMatrix hermitian_part(const CMatrix& m) { return (m + m.adjoint()) * 0.5; }

  void set_objective(Sense s, const LinearForm& f) {
    sense_ = s;
    objective_ = f;
  }

  std::vector<std::string> variables_;
  std::vector<LmiBlock> blocks_;
  std::vector<LinearEquality> equalities_;
  Sense sense_ = Sense::maximize;
  LinearForm objective_;
};

}  // namespace qcomp::sdp
