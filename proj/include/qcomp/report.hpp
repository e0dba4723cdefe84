#pragma once

// Task reports: JSON (canonical, sorted keys, shortest round-trip doubles) and a
// flattened CSV / text projection of the scalar values and assertions.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcomp/assertion.hpp"
#include "qcomp/core/json_io.hpp"
#include "qcomp/permutations.hpp"

namespace qcomp {

using nlohmann::json;

/// Finite doubles as numbers; infinities and NaN as strings, which JSON cannot hold.
inline json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline json to_json(const Assertion& a) {
  return {{"name", a.name},     {"lhs", number(a.lhs)},         {"relation", to_string(a.relation)},
          {"rhs", number(a.rhs)}, {"residual", number(a.residual)}, {"tolerance", a.tolerance},
          {"pass", a.pass}};
}

inline json to_json(const PermutationSet& pi) { return pi.to_string(); }

inline json encode_operators(const std::vector<HermitianOperator>& ops) {
  json out = json::array();
  for (const auto& op : ops) out.push_back(io::encode(op));
  return out;
}

struct TaskReport {
  std::string task;
  json inputs = json::object();
  json values = json::object();
  std::vector<Assertion> assertions;
  std::vector<std::string> notes;
  double wall_seconds = 0.0;

  void absorb(const CheckReport& rep, const std::string& prefix = {}) {
    for (auto a : rep.assertions) {
      if (!prefix.empty()) a.name = prefix + a.name;
      assertions.push_back(std::move(a));
    }
    for (const auto& n : rep.notes) notes.push_back(prefix + n);
  }

  bool pass() const {
    for (const auto& a : assertions)
      if (!a.pass) return false;
    return true;
  }

  /// Everything except timing is a function of the inputs; timing sits in its own member.
  json to_json(bool with_timing = true) const {
    json j;
    j["task"] = task;
    j["inputs"] = inputs;
    j["values"] = values;
    j["assertions"] = json::array();
    for (const auto& a : assertions) j["assertions"].push_back(qcomp::to_json(a));
    j["notes"] = notes;
    j["pass"] = pass();
    if (with_timing) j["timing"] = {{"wall_seconds", wall_seconds}};
    return j;
  }
};

namespace detail {

/// Scalar leaves of `j` as (dotted path, rendered value). Arrays of scalars are
/// indexed; arrays holding arrays (matrices) are skipped.
inline void flatten(const json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(*it, path.empty() ? it.key() : path + "." + it.key(), out);
  } else if (j.is_array()) {
    for (const auto& el : j)
      if (el.is_array()) return;
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
  } else if (j.is_string()) {
    out.emplace_back(path, j.get<std::string>());
  } else {
    out.emplace_back(path, j.dump());
  }
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace detail

inline std::string to_csv(const TaskReport& r) {
  std::ostringstream os;
  os << "kind,name,value,relation,rhs,residual,tolerance,pass\n";
  std::vector<std::pair<std::string, std::string>> rows;
  detail::flatten(r.values, "", rows);
  for (const auto& [k, v] : rows) os << "value," << detail::csv_field(k) << ',' << detail::csv_field(v) << ",,,,,\n";
  for (const auto& a : r.assertions) {
    os << "assertion," << detail::csv_field(a.name) << ',' << number(a.lhs).dump() << ',' << detail::csv_field(to_string(a.relation))
       << ',' << number(a.rhs).dump() << ',' << number(a.residual).dump() << ',' << json(a.tolerance).dump() << ','
       << (a.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

/// Short human-readable summary.
inline std::string to_text(const TaskReport& r) {
  std::ostringstream os;
  os << r.task << '\n';
  std::vector<std::pair<std::string, std::string>> rows;
  detail::flatten(r.values, "", rows);
  for (const auto& [k, v] : rows) os << "  " << k << " = " << v << '\n';
  std::size_t failed = 0;
  for (const auto& a : r.assertions) {
    if (a.pass) continue;
    ++failed;
    os << "  FAIL " << a.name << ": " << number(a.lhs).dump() << ' ' << to_string(a.relation) << ' '
       << number(a.rhs).dump() << " (residual " << number(a.residual).dump() << ", tolerance " << a.tolerance << ")\n";
  }
  for (const auto& n : r.notes) os << "  note: " << n << '\n';
  if (!r.assertions.empty())
    os << "  assertions: " << r.assertions.size() - failed << '/' << r.assertions.size() << " passed\n";
  return os.str();
}

}  // namespace qcomp
