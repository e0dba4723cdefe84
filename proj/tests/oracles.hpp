#pragma once

// Reference computations used by the tests. Each one takes a route that shares
// no code with the library: closed forms for commuting operators, brute-force
// enumeration, direct index loops.

#include <algorithm>
#include <complex>
#include <functional>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Diag = std::vector<double>;

/// q_exc of simultaneously diagonal operators: sum over the basis of the smallest entry.
inline double diag_qexc(const std::vector<Diag>& ops) {
  double total = 0.0;
  for (std::size_t i = 0; i < ops.front().size(); ++i) {
    double m = ops.front()[i];
    for (const auto& op : ops) m = std::min(m, op[i]);
    total += m;
  }
  return total;
}

/// D_eta of diagonal operators: each basis vector puts weight 1 - eta on its cheapest x.
inline double diag_deta(const std::vector<Diag>& ops, double eta) { return (1.0 - eta) * diag_qexc(ops); }

/// max over all n-tuples of permutations with pi_0 fixed to the identity of
/// sum_a term(pi_0(a), ..., pi_{n-1}(a)), by plain recursion.
inline double brute_sweep(std::size_t n, std::size_t w, const std::function<double(const std::vector<std::size_t>&)>& term) {
  std::vector<std::vector<std::size_t>> perms(n, std::vector<std::size_t>(w));
  for (auto& p : perms) std::iota(p.begin(), p.end(), std::size_t{0});
  double best = -1e300;
  std::function<void(std::size_t)> rec = [&](std::size_t x) {
    if (x == n) {
      double v = 0.0;
      for (std::size_t a = 0; a < w; ++a) {
        std::vector<std::size_t> t(n);
        for (std::size_t k = 0; k < n; ++k) t[k] = perms[k][a];
        v += term(t);
      }
      best = std::max(best, v);
      return;
    }
    std::iota(perms[x].begin(), perms[x].end(), std::size_t{0});
    do {
      rec(x + 1);
    } while (x > 0 && std::next_permutation(perms[x].begin(), perms[x].end()));
  };
  rec(0);
  return best;
}

inline std::size_t factorial(std::size_t w) { return w <= 1 ? 1 : w * factorial(w - 1); }

/// Trace norm via the Hermitian eigensolver.
inline double trace_norm(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  return es.eigenvalues().cwiseAbs().sum();
}

/// Minimal probability of naming the wrong state when discriminating p0 rho0 from p1 rho1.
inline double helstrom_error(const Eigen::MatrixXcd& w0, const Eigen::MatrixXcd& w1) {
  return 0.5 * (w0.trace().real() + w1.trace().real() - trace_norm(w0 - w1));
}

/// tr_B with the B index outermost.
inline Eigen::MatrixXcd trace_out_b(const Eigen::MatrixXcd& rho, int da, int db) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(da, da);
  for (int k = 0; k < db; ++k)
    for (int j = 0; j < da; ++j)
      for (int i = 0; i < da; ++i) out(i, j) += rho(i * db + k, j * db + k);
  return out;
}

inline Eigen::MatrixXcd trace_out_a(const Eigen::MatrixXcd& rho, int da, int db) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(db, db);
  for (int k = 0; k < da; ++k)
    for (int j = 0; j < db; ++j)
      for (int i = 0; i < db; ++i) out(i, j) += rho(k * db + i, k * db + j);
  return out;
}

}  // namespace oracle
