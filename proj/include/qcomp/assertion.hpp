#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace qcomp {

enum class Relation { equal, less_equal, greater_equal, greater };

inline const char* to_string(Relation r) {
  switch (r) {
    case Relation::equal: return "==";
    case Relation::less_equal: return "<=";
    case Relation::greater_equal: return ">=";
    case Relation::greater: return ">";
  }
  return "?";
}

/// One checked relation with both sides recorded.
///
/// residual: |lhs - rhs| for ==, lhs - rhs for <=, rhs - lhs for >= and >.
/// A relation passes when residual <= tolerance, except ">" which needs
/// lhs - rhs > tolerance (strict separation).
struct Assertion {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  Relation relation = Relation::equal;
  double tolerance = 0.0;
  double residual = 0.0;
  bool pass = false;
};

inline Assertion make_assertion(std::string name, double lhs, Relation rel, double rhs, double tolerance) {
  Assertion a{std::move(name), lhs, rhs, rel, tolerance, 0.0, false};
  switch (rel) {
    case Relation::equal: a.residual = std::abs(lhs - rhs); break;
    case Relation::less_equal: a.residual = lhs - rhs; break;
    case Relation::greater_equal:
    case Relation::greater: a.residual = rhs - lhs; break;
  }
  a.pass = rel == Relation::greater ? (lhs - rhs > tolerance) : (a.residual <= tolerance);
  return a;
}

/// Named collection of assertions plus free-form notes.
struct CheckReport {
  std::string name;
  std::vector<Assertion> assertions;
  std::vector<std::string> notes;

  const Assertion& check(std::string label, double lhs, Relation rel, double rhs, double tolerance) {
    assertions.push_back(make_assertion(std::move(label), lhs, rel, rhs, tolerance));
    return assertions.back();
  }
  void note(std::string text) { notes.push_back(std::move(text)); }

  void absorb(const CheckReport& other, const std::string& prefix = {}) {
    for (auto a : other.assertions) {
      if (!prefix.empty()) a.name = prefix + a.name;
      assertions.push_back(std::move(a));
    }
    for (const auto& n : other.notes) notes.push_back(prefix + n);
  }

  bool pass() const {
    for (const auto& a : assertions)
      if (!a.pass) return false;
    return true;
  }
  std::size_t failures() const {
    std::size_t k = 0;
    for (const auto& a : assertions) k += a.pass ? 0 : 1;
    return k;
  }
  /// Largest residual over all assertions (NaN if none).
  double worst_residual() const {
    double w = -INFINITY;
    for (const auto& a : assertions) w = std::max(w, a.residual);
    return assertions.empty() ? NAN : w;
  }
};

}  // namespace qcomp
