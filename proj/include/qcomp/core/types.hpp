#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qcomp {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Numerical tolerances shared by every module.
struct Tolerances {
  double psd = 1e-9;   // eigenvalue floor for positivity checks
  double eq = 1e-7;    // operator / value equality (Frobenius norm for operators)
  double zero = 1e-9;  // q_exc below this is reported as zero, messages below this are skipped
  double comp = 1e-6;  // binary complementarity verdict
};

enum class ErrorKind {
  invalid_input,
  dimension_mismatch,
  budget_exceeded,
  solver_failure,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::budget_exceeded: return "budget-exceeded";
    case ErrorKind::solver_failure: return "solver-failure";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) throw Error(kind, message);
}

}  // namespace qcomp
