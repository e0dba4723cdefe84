#pragma once

// Debug dump of problems and solutions, using the matrix encoding of core/json_io.

#include <nlohmann/json.hpp>

#include "qcomp/core/json_io.hpp"
#include "qcomp/sdp/problem.hpp"

namespace qcomp::sdp {

inline nlohmann::json to_json(const SdpProblem& p) {
  using nlohmann::json;
  json j;
  j["sense"] = p.sense == Sense::maximize ? "maximize" : "minimize";
  j["variables"] = p.variables;
  j["objective"] = std::vector<double>(p.objective.data(), p.objective.data() + p.objective.size());
  j["objective_offset"] = p.objective_offset;
  j["blocks"] = json::array();
  for (const auto& blk : p.blocks) {
    json b{{"name", blk.name}, {"dim", blk.dim()}, {"constant", io::encode_matrix(blk.constant)}};
    b["terms"] = json::array();
    for (const auto& t : blk.terms)
      b["terms"].push_back({{"variable", p.variables.at(t.variable)}, {"coefficient", io::encode_matrix(t.coefficient)}});
    j["blocks"].push_back(std::move(b));
  }
  j["equalities"] = json::array();
  for (const auto& eq : p.equalities) {
    json e{{"name", eq.name}, {"rhs", eq.rhs}};
    e["coefficients"] = json::object();
    for (const auto& [i, v] : eq.coefficients) e["coefficients"][p.variables.at(i)] = v;
    j["equalities"].push_back(std::move(e));
  }
  return j;
}

inline nlohmann::json to_json(const SdpSolution& s) {
  using nlohmann::json;
  json j{{"status", to_string(s.status)},
         {"primal_value", s.primal_value},
         {"dual_value", s.dual_value},
         {"gap", s.gap},
         {"iterations", s.iterations},
         {"primal_residual", s.primal_residual},
         {"dual_residual", s.dual_residual},
         {"message", s.message}};
  j["y"] = std::vector<double>(s.y.data(), s.y.data() + s.y.size());
  j["primal_blocks"] = json::array();
  for (const auto& m : s.primal_blocks) j["primal_blocks"].push_back(io::encode_matrix(m));
  j["dual_multipliers"] = json::array();
  for (const auto& m : s.dual_multipliers) j["dual_multipliers"].push_back(io::encode_matrix(m));
  j["equality_multipliers"] =
      std::vector<double>(s.equality_multipliers.data(), s.equality_multipliers.data() + s.equality_multipliers.size());
  return j;
}

}  // namespace qcomp::sdp
