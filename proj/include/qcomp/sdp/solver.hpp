#pragma once

// Dense primal-dual interior-point solver.
//
// Each Hermitian block is mapped to its real symmetric embedding and the LMI
// problem becomes the standard pair
//
//   (X)  minimize <C, X>   s.t. <A_k, X> = b_k, X >= 0
//   (S)  maximize b^T y    s.t. S = C - sum_k y_k A_k >= 0
//
// with C = embed(F0), A_k = -embed(F_k). Scalar equalities are eliminated up
// front (y = y0 + N t) and linearly dependent directions are projected out,
// so the Schur complement is positive definite. Iterations follow Mehrotra's
// predictor-corrector scheme with Nesterov-Todd scaling from an infeasible
// start, so no strictly feasible initial point is needed.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include "qcomp/sdp/embedding.hpp"
#include "qcomp/sdp/problem.hpp"

namespace qcomp::sdp {

struct SolverConfig {
  double tol_gap = 1e-8;
  double tol_feas = 1e-8;
  int max_iters = 200;
};

namespace detail {

struct RealBlock {
  Index n = 0;
  RMatrix c;
  std::vector<RMatrix> a;  // one per reduced variable
};

struct IpmResult {
  SolveStatus status = SolveStatus::numerical_failure;
  std::vector<RMatrix> x;
  RVector y;
  int iterations = 0;
  double pinf = 0.0;
  double dinf = 0.0;
  double relgap = 0.0;
  std::string message;
};

inline double inner(const RMatrix& a, const RMatrix& b) { return a.cwiseProduct(b).sum(); }

inline RMatrix sym(const RMatrix& m) { return (m + m.transpose()) * 0.5; }

/// Largest alpha in [0, inf) with diag(d) + alpha * dm >= 0 (d > 0).
inline double max_step(const RVector& d, const RMatrix& dm) {
  const RVector s = d.cwiseSqrt().cwiseInverse();
  const RMatrix scaled = s.asDiagonal() * dm * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<RMatrix> es(sym(scaled), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

struct Scaling {
  RMatrix g;      // G with G^{-1} X G^{-T} = G^T S G = diag(d)
  RMatrix g_inv_t;
  RVector d;
};

inline bool nt_scaling(const RMatrix& x, const RMatrix& s, Scaling& out) {
  Eigen::LLT<RMatrix> lx(x), ls(s);
  if (lx.info() != Eigen::Success || ls.info() != Eigen::Success) return false;
  const RMatrix Lx = lx.matrixL();
  const RMatrix Ls = ls.matrixL();
  Eigen::JacobiSVD<RMatrix> svd(Lx.transpose() * Ls, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.d = svd.singularValues();
  if (out.d.minCoeff() <= 0.0 || !out.d.allFinite()) return false;
  const RVector dih = out.d.cwiseSqrt().cwiseInverse();
  out.g = Lx * svd.matrixU() * dih.asDiagonal();
  // G^{-T} = Ls V D^{-1/2}, since G^T S G = D.
  out.g_inv_t = Ls * svd.matrixV() * dih.asDiagonal();
  return true;
}

/// `offset` is the constant dropped from the objective; gaps are measured
/// relative to the full objective value.
inline IpmResult interior_point(const std::vector<RealBlock>& blocks, const RVector& b, const SolverConfig& cfg,
                                double offset = 0.0) {
  const Index m = b.size();
  const std::size_t nb = blocks.size();
  double total_dim = 0.0;
  double c_norm = 0.0;
  for (const auto& blk : blocks) {
    total_dim += static_cast<double>(blk.n);
    c_norm += blk.c.squaredNorm();
  }
  c_norm = std::sqrt(c_norm);
  const double b_norm = b.norm();

  std::vector<RMatrix> x(nb), s(nb);
  for (std::size_t j = 0; j < nb; ++j) {
    const auto& blk = blocks[j];
    const double n = static_cast<double>(blk.n);
    double xi = std::max(10.0, std::sqrt(n));
    double zeta = std::max({10.0, std::sqrt(n), blk.c.norm()});
    for (Index k = 0; k < m; ++k) {
      const double an = blk.a[static_cast<std::size_t>(k)].norm();
      xi = std::max(xi, n * (1.0 + std::abs(b(k))) / (1.0 + an));
      zeta = std::max(zeta, an);
    }
    zeta = std::max(zeta, (1.0 + std::max(b.cwiseAbs().maxCoeff(), 0.0)) / std::sqrt(n));
    x[j] = xi * RMatrix::Identity(blk.n, blk.n);
    s[j] = zeta * RMatrix::Identity(blk.n, blk.n);
  }
  RVector y = RVector::Zero(m);

  IpmResult res;
  std::vector<Scaling> sc(nb);
  std::vector<std::vector<RMatrix>> at(nb);  // scaled A
  std::vector<RMatrix> rd(nb), rdt(nb);

  // Failed runs report the iterate with the smallest merit seen.
  double best_merit = std::numeric_limits<double>::infinity();
  int stall = 0;
  std::vector<RMatrix> best_x;
  RVector best_y;
  IpmResult best;
  double best_compl = std::numeric_limits<double>::infinity();

  for (int iter = 0;; ++iter) {
    // Residuals and measures at the current iterate.
    RVector ax = RVector::Zero(m);
    double pobj = 0.0, xs = 0.0, rd_norm = 0.0;
    for (std::size_t j = 0; j < nb; ++j) {
      const auto& blk = blocks[j];
      for (Index k = 0; k < m; ++k) ax(k) += inner(blk.a[static_cast<std::size_t>(k)], x[j]);
      RMatrix aty = RMatrix::Zero(blk.n, blk.n);
      for (Index k = 0; k < m; ++k) aty += y(k) * blk.a[static_cast<std::size_t>(k)];
      rd[j] = blk.c - aty - s[j];
      rd_norm += rd[j].squaredNorm();
      pobj += inner(blk.c, x[j]);
      xs += inner(x[j], s[j]);
    }
    const RVector rp = b - ax;
    const double dobj = b.dot(y);
    res.pinf = rp.norm() / (1.0 + b_norm);
    res.dinf = std::sqrt(rd_norm) / (1.0 + c_norm);
    res.relgap = std::abs(pobj - dobj) / (1.0 + std::abs(dobj + offset));
    const double compl_rel = xs / (1.0 + std::abs(dobj + offset));
    const double mu = xs / total_dim;
    res.iterations = iter;

    if (std::getenv("QCOMP_IPM_TRACE")) std::fprintf(stderr, "%3d pinf %.2e dinf %.2e gap %.2e pobj %.6e dobj %.6e mu %.2e\n", iter, res.pinf, res.dinf, res.relgap, pobj, dobj, mu);
    const bool feasible = res.pinf <= cfg.tol_feas && res.dinf <= cfg.tol_feas;
    if (feasible && res.relgap <= 0.5 * cfg.tol_gap && compl_rel <= 0.5 * cfg.tol_gap) {
      res.status = SolveStatus::optimal;
      break;
    }

    // Farkas-type certificates from diverging iterates. X >= 0 with A(X) ~ 0 and
    // <C, X> < 0 proves the LMI infeasible; y with sum y_k A_k <= 0 and b^T y > 0
    // is an improving ray.
    double x_norm = 0.0;
    for (const auto& xj : x) x_norm += xj.squaredNorm();
    x_norm = std::sqrt(x_norm);
    if (x_norm > 1e4 && pobj < 0.0 && ax.norm() <= 1e-8 * (-pobj)) {
      res.status = SolveStatus::infeasible;
      res.message = "Farkas certificate: the LMI is infeasible";
      break;
    }
    if (y.norm() > 1e4 && dobj > 0.0) {
      double worst = 0.0;
      for (const auto& blk : blocks) {
        RMatrix aty = RMatrix::Zero(blk.n, blk.n);
        for (Index k = 0; k < m; ++k) aty += y(k) * blk.a[static_cast<std::size_t>(k)];
        Eigen::SelfAdjointEigenSolver<RMatrix> es(sym(aty), Eigen::EigenvaluesOnly);
        worst = std::max(worst, es.eigenvalues()(blk.n - 1));
      }
      if (worst <= 1e-8 * dobj) {
        res.status = SolveStatus::unbounded;
        res.message = "improving ray: the problem is unbounded";
        break;
      }
    }

    const double merit = std::max({res.pinf, res.dinf, res.relgap, compl_rel});
    if (merit < best_merit) {
      best_x = x;
      best_y = y;
      best = res;
      best_compl = compl_rel;
    }
    if (merit < 0.999 * best_merit) {
      best_merit = merit;
      stall = 0;
    } else if (++stall >= 15) {
      res.message = "no progress in 15 iterations";
      break;
    }
    if (iter >= cfg.max_iters) {
      res.message = "iteration limit reached";
      break;
    }

    // Scaling and Schur complement.
    RMatrix schur = RMatrix::Zero(m, m);
    bool ok = true;
    for (std::size_t j = 0; j < nb && ok; ++j) {
      const auto& blk = blocks[j];
      if (!nt_scaling(x[j], s[j], sc[j])) {
        ok = false;
        break;
      }
      const RMatrix& g = sc[j].g;
      at[j].resize(static_cast<std::size_t>(m));
      RMatrix stacked(blk.n * blk.n, m);
      for (Index k = 0; k < m; ++k) {
        at[j][static_cast<std::size_t>(k)] = g.transpose() * blk.a[static_cast<std::size_t>(k)] * g;
        stacked.col(k) = Eigen::Map<const RVector>(at[j][static_cast<std::size_t>(k)].data(), blk.n * blk.n);
      }
      schur.noalias() += stacked.transpose() * stacked;
      rdt[j] = g.transpose() * rd[j] * g;
    }
    if (!ok) {
      res.message = "iterate lost positive definiteness";
      break;
    }
    Eigen::LLT<RMatrix> chol(schur);
    if (chol.info() != Eigen::Success) {
      const double reg = 1e-14 * std::max(1.0, schur.diagonal().maxCoeff());
      chol.compute(schur + reg * RMatrix::Identity(m, m));
      if (chol.info() != Eigen::Success) {
        res.message = "Schur complement is not positive definite";
        break;
      }
    }

    // Solves for one right-hand side R~c; returns dy, dX~, dS~.
    auto direction = [&](const std::vector<RMatrix>& rct, RVector& dy, std::vector<RMatrix>& dxt,
                         std::vector<RMatrix>& dst) {
      RVector rhs = rp;
      for (std::size_t j = 0; j < nb; ++j) {
        const RMatrix diff = rct[j] - rdt[j];
        for (Index k = 0; k < m; ++k) rhs(k) -= inner(at[j][static_cast<std::size_t>(k)], diff);
      }
      dy = chol.solve(rhs);
      dxt.resize(nb);
      dst.resize(nb);
      for (std::size_t j = 0; j < nb; ++j) {
        RMatrix t = rdt[j];
        for (Index k = 0; k < m; ++k) t -= dy(k) * at[j][static_cast<std::size_t>(k)];
        dst[j] = sym(t);
        dxt[j] = sym(rct[j] - dst[j]);
      }
    };
    auto step_lengths = [&](const std::vector<RMatrix>& dxt, const std::vector<RMatrix>& dst, double& ap,
                            double& ad) {
      ap = ad = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < nb; ++j) {
        ap = std::min(ap, max_step(sc[j].d, dxt[j]));
        ad = std::min(ad, max_step(sc[j].d, dst[j]));
      }
    };

    // Predictor.
    std::vector<RMatrix> rct(nb);
    for (std::size_t j = 0; j < nb; ++j) rct[j] = RMatrix((-sc[j].d).asDiagonal());
    RVector dy;
    std::vector<RMatrix> dxt, dst;
    direction(rct, dy, dxt, dst);
    double ap = 0.0, ad = 0.0;
    step_lengths(dxt, dst, ap, ad);
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);
    double mu_aff = 0.0;
    for (std::size_t j = 0; j < nb; ++j) {
      const RMatrix xa = RMatrix(sc[j].d.asDiagonal()) + ap * dxt[j];
      const RMatrix sa = RMatrix(sc[j].d.asDiagonal()) + ad * dst[j];
      mu_aff += inner(xa, sa);
    }
    mu_aff /= total_dim;
    const double expon = std::max(1.0, 3.0 * std::min(ap, ad) * std::min(ap, ad));
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, expon), 0.0, 1.0);
    const double gamma = 0.9 + 0.09 * std::min(ap, ad);

    // Corrector.
    for (std::size_t j = 0; j < nb; ++j) {
      const RVector& d = sc[j].d;
      const RMatrix cross = dxt[j] * dst[j] + dst[j] * dxt[j];
      RMatrix r(d.size(), d.size());
      for (Index p = 0; p < d.size(); ++p) {
        for (Index q = 0; q < d.size(); ++q) {
          double v = -cross(p, q);
          if (p == q) v += 2.0 * sigma * mu - 2.0 * d(p) * d(p);
          r(p, q) = v / (d(p) + d(q));
        }
      }
      rct[j] = r;
    }
    direction(rct, dy, dxt, dst);
    step_lengths(dxt, dst, ap, ad);
    ap = std::min(1.0, gamma * ap);
    ad = std::min(1.0, gamma * ad);
    if (!(ap > 0.0) || !(ad > 0.0) || !dy.allFinite()) {
      res.message = "degenerate step";
      break;
    }

    for (std::size_t j = 0; j < nb; ++j) {
      const auto& blk = blocks[j];
      x[j] = sym(x[j] + ap * (sc[j].g * dxt[j] * sc[j].g.transpose()));
      RMatrix ds = rd[j];
      for (Index k = 0; k < m; ++k) ds -= dy(k) * blk.a[static_cast<std::size_t>(k)];
      s[j] = sym(s[j] + ad * ds);
    }
    y += ad * dy;
  }

  if (res.status == SolveStatus::numerical_failure && !best_x.empty()) {
    const std::string why = res.message;
    const int iters = res.iterations;
    res = best;
    // Rounding can stall the final approach just short of the internal target;
    // a best iterate that meets the requested tolerances is still an optimum.
    const bool good = best.pinf <= cfg.tol_feas && best.dinf <= cfg.tol_feas && best.relgap <= cfg.tol_gap &&
                      best_compl <= cfg.tol_gap;
    res.status = good ? SolveStatus::optimal : SolveStatus::numerical_failure;
    res.message = good ? std::string() : why;
    res.iterations = iters;
    x = std::move(best_x);
    y = std::move(best_y);
  }
  res.x = std::move(x);
  res.y = std::move(y);
  return res;
}

/// Orthonormal basis of the range (first) and kernel (second) of the column space
/// of m, using a relative singular-value threshold.
inline std::pair<RMatrix, RMatrix> column_split(const RMatrix& m, double rel_tol, RVector* singular = nullptr) {
  const Index cols = m.cols();
  if (m.rows() == 0 || cols == 0) return {RMatrix(cols, 0), RMatrix::Identity(cols, cols)};
  Eigen::JacobiSVD<RMatrix> svd(m, Eigen::ComputeFullV | Eigen::ComputeThinU);
  const RVector sv = svd.singularValues();
  const double cut = rel_tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  if (singular) *singular = sv;
  return {svd.matrixV().leftCols(rank), svd.matrixV().rightCols(cols - rank)};
}

}  // namespace detail

inline SdpSolution solve(const SdpProblem& problem, const SolverConfig& cfg = {}) {
  problem.validate(1e-9);
  const Index nvar = static_cast<Index>(problem.num_variables());
  const double sign = problem.sense == Sense::maximize ? 1.0 : -1.0;
  const RVector bfull = sign * problem.objective;

  SdpSolution out;
  out.y = RVector::Zero(nvar);

  // Equality elimination: y = y0 + N t.
  const Index neq = static_cast<Index>(problem.equalities.size());
  RMatrix aeq = RMatrix::Zero(neq, nvar);
  RVector beta(neq);
  for (Index r = 0; r < neq; ++r) {
    const auto& eq = problem.equalities[static_cast<std::size_t>(r)];
    for (const auto& [i, v] : eq.coefficients) aeq(r, static_cast<Index>(i)) += v;
    beta(r) = eq.rhs;
  }
  RVector y0 = RVector::Zero(nvar);
  RMatrix null_basis = RMatrix::Identity(nvar, nvar);
  if (neq > 0) {
    Eigen::CompleteOrthogonalDecomposition<RMatrix> cod(aeq);
    cod.setThreshold(1e-12);
    y0 = cod.solve(beta);
    if ((aeq * y0 - beta).norm() > 1e-9 * (1.0 + beta.norm())) {
      out.status = SolveStatus::infeasible;
      out.message = "linear equalities are inconsistent";
      return out;
    }
    // Kernel of A_eq = kernel of the row-stacked transpose's complement.
    null_basis = detail::column_split(aeq, 1e-12).second;
  }

  // Embedded data in the t coordinates.
  const std::size_t nb = problem.blocks.size();
  std::vector<detail::RealBlock> blocks(nb);
  const Index nt = null_basis.cols();
  for (std::size_t j = 0; j < nb; ++j) {
    const auto& blk = problem.blocks[j];
    auto& rb = blocks[j];
    rb.n = 2 * blk.dim();
    rb.c = embed(problem.evaluate_block(j, y0));
    rb.a.assign(static_cast<std::size_t>(nt), RMatrix::Zero(rb.n, rb.n));
    for (const auto& term : blk.terms) {
      const RMatrix e = embed(term.coefficient);
      const auto row = static_cast<Index>(term.variable);
      for (Index k = 0; k < nt; ++k) {
        const double w = null_basis(row, k);
        if (w != 0.0) rb.a[static_cast<std::size_t>(k)] -= w * e;
      }
    }
  }
  RVector bt = null_basis.transpose() * bfull;

  // Project out directions that leave every block unchanged.
  Index rows = 0;
  for (const auto& rb : blocks) rows += rb.n * rb.n;
  RMatrix stacked(rows, nt);
  {
    Index off = 0;
    for (const auto& rb : blocks) {
      for (Index k = 0; k < nt; ++k)
        stacked.block(off, k, rb.n * rb.n, 1) = Eigen::Map<const RVector>(rb.a[static_cast<std::size_t>(k)].data(), rb.n * rb.n);
      off += rb.n * rb.n;
    }
  }
  const auto [range, kernel] = detail::column_split(stacked, 1e-11);
  if (kernel.cols() > 0 && (kernel.transpose() * bt).norm() > 1e-9 * (1.0 + bt.norm())) {
    out.status = SolveStatus::unbounded;
    out.message = "objective improves along a direction that leaves every LMI unchanged";
    return out;
  }
  const RMatrix basis = null_basis * range;  // y = y0 + basis * u
  const Index nu = range.cols();
  for (auto& rb : blocks) {
    std::vector<RMatrix> reduced(static_cast<std::size_t>(nu), RMatrix::Zero(rb.n, rb.n));
    for (Index l = 0; l < nu; ++l)
      for (Index k = 0; k < nt; ++k) {
        const double w = range(k, l);
        if (w != 0.0) reduced[static_cast<std::size_t>(l)] += w * rb.a[static_cast<std::size_t>(k)];
      }
    rb.a = std::move(reduced);
  }
  const RVector bu = range.transpose() * bt;

  std::vector<RMatrix> xblocks;
  RVector u = RVector::Zero(nu);
  if (nu == 0) {
    // Nothing to optimise: feasibility of the fixed point decides.
    bool psd = true;
    for (const auto& rb : blocks) {
      Eigen::SelfAdjointEigenSolver<RMatrix> es(rb.c, Eigen::EigenvaluesOnly);
      psd = psd && es.eigenvalues()(0) >= -cfg.tol_feas * (1.0 + rb.c.norm());
      xblocks.push_back(RMatrix::Zero(rb.n, rb.n));
    }
    if (!psd) {
      out.status = SolveStatus::infeasible;
      out.message = "the only point allowed by the equalities violates an LMI";
      return out;
    }
    out.status = SolveStatus::optimal;
  } else {
    detail::IpmResult ipm = detail::interior_point(blocks, bu, cfg, bfull.dot(y0));
    out.status = ipm.status;
    out.iterations = ipm.iterations;
    out.message = ipm.message;
    out.primal_residual = ipm.dinf;  // the LMI side is the slack S
    out.dual_residual = ipm.pinf;
    xblocks = std::move(ipm.x);
    u = std::move(ipm.y);
  }

  out.y = y0 + basis * u;
  for (std::size_t j = 0; j < nb; ++j) {
    out.primal_blocks.push_back(problem.evaluate_block(j, out.y));
    out.dual_multipliers.push_back(deembed(xblocks[j]));
  }

  // Equality multipliers: least-squares fit of b + F^*(Z) = A_eq^T nu.
  RVector fz = bfull;
  double f0z = 0.0;
  for (std::size_t j = 0; j < nb; ++j) {
    const auto& blk = problem.blocks[j];
    const CMatrix& z = out.dual_multipliers[j];
    f0z += (blk.constant * z).trace().real();
    for (const auto& t : blk.terms) fz(static_cast<Index>(t.variable)) += (t.coefficient * z).trace().real();
  }
  out.equality_multipliers = neq > 0 ? RVector(aeq.transpose().completeOrthogonalDecomposition().solve(fz)) : RVector();
  const double dual_internal = f0z + (neq > 0 ? beta.dot(out.equality_multipliers) : 0.0);
  const double primal_internal = bfull.dot(out.y);
  out.primal_value = sign * primal_internal + problem.objective_offset;
  out.dual_value = sign * dual_internal + problem.objective_offset;
  out.gap = std::abs(out.primal_value - out.dual_value) / (1.0 + std::abs(out.primal_value));
  if (out.status == SolveStatus::optimal && out.gap > cfg.tol_gap) {
    out.status = SolveStatus::numerical_failure;
    out.message = "reconstructed duality gap exceeds tolerance";
  }
  return out;
}

}  // namespace qcomp::sdp
