#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "nomarch/errors.hpp"
#include "nomarch/parallel.hpp"
#include "nomarch/rng.hpp"
#include "nomarch/simplex_ls.hpp"
#include "nomarch/types.hpp"

namespace nomarch {

struct AAOptions {
  int restarts = 20;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  int max_iter = 200;
  int threads = 0;  // 0 = NOMARCH_THREADS env, then hardware count
};

struct AARestartInfo {
  int restart = 0;
  double rss = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct AADiagnostics {
  std::vector<AARestartInfo> restarts;
  std::vector<double> winner_rss_path;  // per-sweep objective of the winner
  bool all_rows_identical = false;
};

// Continuous archetype model: mixtures alpha over archetypes Z, themselves
// simplex combinations (rows of beta) of the data rows, Z = beta * X.
struct AAModel {
  Matrix alpha;  // n x k
  Matrix beta;   // k x n
  Matrix Z;      // k x m
  double rss = 0.0;
  int iterations = 0;
  bool converged = false;
  int k = 0;
  AADiagnostics diagnostics;
};

// Residual sum of squares sum_i ||x_i - (alpha Z)_i||^2, no averaging.
inline double compute_rss(const Matrix& X, const Matrix& alpha,
                          const Matrix& Z) {
  if (alpha.rows() != X.rows() || alpha.cols() != Z.rows() ||
      Z.cols() != X.cols())
    throw dimension_error("compute_rss: dimension mismatch");
  return (X - alpha * Z).squaredNorm();
}

namespace detail {

struct aa_restart_result {
  Matrix alpha, beta, Z;
  double rss = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  std::vector<double> rss_path;
};

// One alternating-minimization restart. XXt is the cached data Gram matrix
// (n x n) and xtx_diag its diagonal.
inline aa_restart_result fit_aa_restart(const Matrix& X, const Matrix& XXt,
                                        const Vector& xtx_diag, int k,
                                        rng stream, double tol, int max_iter) {
  const int n = static_cast<int>(X.rows());
  aa_restart_result r;

  std::vector<int> init = stream.sample_distinct(k, n);
  r.beta = Matrix::Zero(k, n);
  for (int j = 0; j < k; ++j) r.beta(j, init[static_cast<std::size_t>(j)]) = 1.0;
  r.Z = r.beta * X;
  r.alpha = Matrix::Zero(n, k);
  bool have_alpha = false;

  double prev = std::numeric_limits<double>::infinity();
  std::vector<std::vector<int>> beta_support(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j)
    beta_support[static_cast<std::size_t>(j)] = {init[static_cast<std::size_t>(j)]};

  for (int it = 1; it <= max_iter; ++it) {
    // (a) alpha rows against the current archetypes
    const Matrix Gz = r.Z * r.Z.transpose();
    const Matrix Cz = r.Z * X.transpose();  // k x n
    double rss_a = 0.0;
    for (int i = 0; i < n; ++i) {
      Vector ref;
      if (have_alpha) ref = r.alpha.row(i).transpose();
      auto sol = solve_simplex_gram(Gz, Cz.col(i), xtx_diag(i), nullptr,
                                    have_alpha ? &ref : nullptr);
      r.alpha.row(i) = sol.weights.w.transpose();
      rss_a += sol.ssd;
    }
    have_alpha = true;

    // (b) unconstrained archetypes, then projection onto the data hull
    Matrix AtA = r.alpha.transpose() * r.alpha;
    AtA.diagonal().array() += 1e-10;  // survives rank deficiency
    const Matrix Ztilde = AtA.ldlt().solve(r.alpha.transpose() * X);

    Matrix beta_new = Matrix::Zero(k, n);
    std::vector<std::vector<int>> support_new(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
      const Vector zt = Ztilde.row(j).transpose();
      const Vector cz = X * zt;  // n-vector
      auto sol = solve_simplex_gram(XXt, cz, zt.squaredNorm(),
                                    &beta_support[static_cast<std::size_t>(j)]);
      beta_new.row(j) = sol.weights.w.transpose();
      for (Eigen::Index l = 0; l < sol.weights.w.size(); ++l)
        if (sol.weights.w(l) > 0.0)
          support_new[static_cast<std::size_t>(j)].push_back(static_cast<int>(l));
    }
    const Matrix Z_new = beta_new * X;
    const double rss_full = compute_rss(X, r.alpha, Z_new);

    double current;
    if (rss_full <= rss_a) {
      r.beta = std::move(beta_new);
      r.Z = Z_new;
      beta_support = std::move(support_new);
      current = rss_full;
    } else {
      // the hull projection step degraded the objective: keep the previous
      // archetypes, declare convergence at the alpha-step value
      current = rss_a;
      r.rss_path.push_back(current);
      r.iterations = it;
      r.converged = true;
      break;
    }
    r.rss_path.push_back(current);
    r.iterations = it;
    if (std::isfinite(prev) &&
        prev - current < tol * std::max(prev, 1e-300)) {
      r.converged = true;
      break;
    }
    prev = current;
  }

  // final resync: alpha against the final archetypes, rss made exactly
  // consistent with the returned matrices
  const Matrix Gz = r.Z * r.Z.transpose();
  const Matrix Cz = r.Z * X.transpose();
  double rss_final = 0.0;
  for (int i = 0; i < n; ++i) {
    Vector ref = r.alpha.row(i).transpose();
    auto sol = solve_simplex_gram(Gz, Cz.col(i), xtx_diag(i), nullptr, &ref);
    r.alpha.row(i) = sol.weights.w.transpose();
    rss_final += sol.ssd;
  }
  r.rss = rss_final;
  if (!r.rss_path.empty() && rss_final < r.rss_path.back())
    r.rss_path.back() = rss_final;
  return r;
}

}  // namespace detail

// Fit classical archetype analysis by alternating simplex-constrained least
// squares, best of `restarts` seeded starts. Restart r uses the random
// stream derived from (seed, r), so results do not depend on thread count.
inline AAModel fit_aa(const Matrix& X, int k, const AAOptions& opts = {}) {
  const int n = static_cast<int>(X.rows());
  if (k < 1) throw dimension_error("fit_aa: k must be >= 1");
  if (n < 1) throw dimension_error("fit_aa: X has no rows");
  if (k > n) throw cardinality_error("fit_aa: k = " + std::to_string(k) +
                                     " exceeds n = " + std::to_string(n));
  if (opts.restarts < 1) throw config_error("fit_aa: restarts must be >= 1");
  if (opts.max_iter < 1) throw config_error("fit_aa: max_iter must be >= 1");
  if (!(opts.tol > 0.0)) throw config_error("fit_aa: tol must be positive");
  if (!X.allFinite()) throw numeric_error("fit_aa: non-finite input");

  const Matrix XXt = X * X.transpose();
  const Vector xtx_diag = XXt.diagonal();

  bool identical = true;
  for (int i = 1; i < n && identical; ++i)
    if ((X.row(i) - X.row(0)).cwiseAbs().maxCoeff() != 0.0) identical = false;

  std::vector<detail::aa_restart_result> results(
      static_cast<std::size_t>(opts.restarts));
  const int threads = resolve_threads(opts.threads);
  parallel_for(opts.restarts, threads, [&](int r) {
    results[static_cast<std::size_t>(r)] = detail::fit_aa_restart(
        X, XXt, xtx_diag, k, rng::derive(opts.seed, static_cast<std::uint64_t>(r)),
        opts.tol, opts.max_iter);
  });

  int best = 0;
  for (int r = 1; r < opts.restarts; ++r)
    if (results[static_cast<std::size_t>(r)].rss <
        results[static_cast<std::size_t>(best)].rss)
      best = r;

  AAModel model;
  auto& win = results[static_cast<std::size_t>(best)];
  model.alpha = std::move(win.alpha);
  model.beta = std::move(win.beta);
  model.Z = model.beta * X;  // exact by construction
  model.rss = win.rss;
  model.iterations = win.iterations;
  model.converged = win.converged;
  model.k = k;
  model.diagnostics.all_rows_identical = identical;
  model.diagnostics.winner_rss_path = win.rss_path;
  for (int r = 0; r < opts.restarts; ++r) {
    const auto& rr = results[static_cast<std::size_t>(r)];
    model.diagnostics.restarts.push_back(
        {r, rr.rss, rr.iterations, rr.converged});
  }
  return model;
}

}  // namespace nomarch
