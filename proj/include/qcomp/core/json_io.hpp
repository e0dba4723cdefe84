#pragma once

// JSON encoding of quantum objects.
//
//   complex entry : [re, im]
//   matrix        : array of rows
//   assemblage    : {"dim": d, "n": n, "w": w, "elements": [{"x": x, "a": a, "matrix": M}, ...]}
//   operator set  : {"dim": d, "operators": [M, ...]}
//   bipartite     : {"dimA": dA, "dimB": dB, "matrix": M}
//
// Doubles are written in shortest round-trip form, so decode(encode(M)) == M bit for bit.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcomp/core/objects.hpp"

namespace qcomp::io {

using nlohmann::json;

inline json encode_matrix(const CMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json encode(const HermitianOperator& op) { return encode_matrix(op.matrix()); }

inline double number_at(const json& j, const std::string& where) {
  require(j.is_number(), ErrorKind::invalid_input, where + ": expected a number");
  return j.get<double>();
}

inline CMatrix decode_matrix(const json& j) {
  require(j.is_array() && !j.empty(), ErrorKind::invalid_input, "matrix must be a non-empty array of rows");
  const auto rows = static_cast<Index>(j.size());
  require(j[0].is_array(), ErrorKind::invalid_input, "matrix rows must be arrays");
  const auto cols = static_cast<Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    require(row.is_array() && static_cast<Index>(row.size()) == cols, ErrorKind::invalid_input, "ragged matrix rows");
    for (Index k = 0; k < cols; ++k) {
      const json& entry = row[static_cast<std::size_t>(k)];
      const std::string where = "entry (" + std::to_string(i) + "," + std::to_string(k) + ")";
      if (entry.is_number()) {
        m(i, k) = number_at(entry, where);
      } else {
        require(entry.is_array() && entry.size() == 2, ErrorKind::invalid_input, where + ": expected [re, im]");
        m(i, k) = Complex(number_at(entry[0], where), number_at(entry[1], where));
      }
    }
  }
  return m;
}

/// Decodes and checks Hermiticity (the stored operator is symmetrised regardless).
inline HermitianOperator decode_hermitian(const json& j, double tol = 1e-7) {
  const CMatrix m = decode_matrix(j);
  require(m.rows() == m.cols(), ErrorKind::dimension_mismatch, "operator matrix must be square");
  const double asym = (m - m.adjoint()).norm();
  require(asym <= tol, ErrorKind::invalid_input, "matrix is not Hermitian (residual " + std::to_string(asym) + ")");
  return HermitianOperator(m);
}

inline json encode_table(const std::vector<std::vector<HermitianOperator>>& table) {
  const std::size_t n = table.size();
  const std::size_t w = n ? table.front().size() : 0;
  json out;
  out["dim"] = (n && w) ? table.front().front().dim() : 0;
  out["n"] = n;
  out["w"] = w;
  out["elements"] = json::array();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t a = 0; a < w; ++a)
      out["elements"].push_back({{"x", x}, {"a", a}, {"matrix", encode(table[x][a])}});
  return out;
}

inline json encode(const MeasurementAssemblage& e) { return encode_table(e.table()); }
inline json encode(const StateAssemblage& s) { return encode_table(s.table()); }

inline std::size_t index_field(const json& j, const char* key) {
  require(j.contains(key) && j[key].is_number_integer() && j[key].get<long long>() >= 0, ErrorKind::invalid_input,
          std::string("missing or invalid integer field '") + key + "'");
  return j[key].get<std::size_t>();
}

/// Assemblage table [x][a]; missing elements are zero operators.
inline std::vector<std::vector<HermitianOperator>> decode_table(const json& j) {
  require(j.is_object(), ErrorKind::invalid_input, "assemblage must be a JSON object");
  const auto d = static_cast<Index>(index_field(j, "dim"));
  const std::size_t n = index_field(j, "n");
  const std::size_t w = index_field(j, "w");
  require(d > 0 && n > 0 && w > 0, ErrorKind::invalid_input, "assemblage dim, n and w must be positive");
  require(j.contains("elements") && j["elements"].is_array(), ErrorKind::invalid_input, "assemblage needs 'elements'");
  std::vector<std::vector<HermitianOperator>> table(n, std::vector<HermitianOperator>(w, HermitianOperator::zero(d)));
  std::vector<std::vector<bool>> seen(n, std::vector<bool>(w, false));
  for (const auto& el : j["elements"]) {
    const std::size_t x = index_field(el, "x");
    const std::size_t a = index_field(el, "a");
    require(x < n && a < w, ErrorKind::invalid_input, "element index out of range");
    require(!seen[x][a], ErrorKind::invalid_input, "duplicate element (x, a)");
    require(el.contains("matrix"), ErrorKind::invalid_input, "element without 'matrix'");
    HermitianOperator op = decode_hermitian(el["matrix"]);
    require(op.dim() == d, ErrorKind::dimension_mismatch, "element dimension differs from 'dim'");
    table[x][a] = std::move(op);
    seen[x][a] = true;
  }
  return table;
}

inline MeasurementAssemblage decode_measurement_assemblage(const json& j, const Tolerances& tol = {}) {
  return MeasurementAssemblage(decode_table(j), tol);
}

inline StateAssemblage decode_state_assemblage(const json& j, const Tolerances& tol = {}) {
  return StateAssemblage(decode_table(j), tol);
}

inline json encode_operator_set(const std::vector<HermitianOperator>& ops) {
  json out;
  out["dim"] = ops.empty() ? 0 : ops.front().dim();
  out["operators"] = json::array();
  for (const auto& op : ops) out["operators"].push_back(encode(op));
  return out;
}

inline std::vector<HermitianOperator> decode_operator_set(const json& j) {
  require(j.is_object() && j.contains("operators") && j["operators"].is_array(), ErrorKind::invalid_input,
          "operator set must be an object with an 'operators' array");
  std::vector<HermitianOperator> ops;
  for (const auto& m : j["operators"]) ops.push_back(decode_hermitian(m));
  require(!ops.empty(), ErrorKind::invalid_input, "operator set is empty");
  for (const auto& op : ops) require(op.dim() == ops.front().dim(), ErrorKind::dimension_mismatch, "operators differ in dimension");
  if (j.contains("dim")) {
    require(static_cast<Index>(index_field(j, "dim")) == ops.front().dim(), ErrorKind::dimension_mismatch,
            "'dim' does not match the operators");
  }
  return ops;
}

inline json encode(const BipartiteState& rho) {
  return {{"dimA", rho.dim_a()}, {"dimB", rho.dim_b()}, {"matrix", encode(rho.op())}};
}

inline BipartiteState decode_bipartite(const json& j, const Tolerances& tol = {}) {
  const auto da = static_cast<Index>(index_field(j, "dimA"));
  const auto db = static_cast<Index>(index_field(j, "dimB"));
  require(j.contains("matrix"), ErrorKind::invalid_input, "bipartite state needs 'matrix'");
  return BipartiteState(da, db, decode_hermitian(j["matrix"]), tol);
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::invalid_input, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::invalid_input, "malformed JSON in '" + path + "': " + e.what());
  }
}

}  // namespace qcomp::io
