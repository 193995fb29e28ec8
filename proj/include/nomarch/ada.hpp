#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nomarch/aa.hpp"
#include "nomarch/errors.hpp"
#include "nomarch/parallel.hpp"
#include "nomarch/simplex_ls.hpp"
#include "nomarch/types.hpp"

namespace nomarch {

enum class ADAInit { NEAREST, MAX_ALPHA, MAX_BETA, USER };

inline const char* ada_init_name(ADAInit k) {
  switch (k) {
    case ADAInit::NEAREST: return "NEAREST";
    case ADAInit::MAX_ALPHA: return "MAX_ALPHA";
    case ADAInit::MAX_BETA: return "MAX_BETA";
    default: return "USER";
  }
}

struct ADAOptions {
  int restarts = 20;  // forwarded to the initializing archetype fit
  std::uint64_t seed = 0;
  double tol = 1e-6;
  int max_iter = 200;
  int threads = 0;
};

struct ADAStartInfo {
  ADAInit kind = ADAInit::USER;
  std::vector<int> initial;  // candidate archetypoid rows before the swaps
  double initial_rss = 0.0;
  double final_rss = 0.0;
  int swaps = 0;
};

struct ADADiagnostics {
  std::vector<ADAStartInfo> starts;
  double aa_rss = 0.0;             // objective of the initializing fit
  bool data_degenerate = false;    // fewer distinct row patterns than k
  bool duplicate_patterns = false; // chosen archetypoids repeat a pattern
};

// Archetypoid model: archetypes restricted to actual data rows.
struct ADAModel {
  std::vector<int> indices;  // k distinct 0-based row indices into X
  Matrix alpha;              // n x k
  double rss = 0.0;
  ADAInit init_kind = ADAInit::USER;
  int swap_steps = 0;
  int k = 0;
  ADADiagnostics diagnostics;
};

struct BuildCandidates {
  std::vector<int> nearest;
  std::vector<int> max_alpha;
  std::vector<int> max_beta;
};

// The three candidate initializations derived from a continuous archetype
// fit: per archetype, the nearest data row, the row with the largest mixture
// weight, and the row with the largest generator weight. Collisions are
// repaired by taking the next-best row not already chosen.
inline BuildCandidates build_candidates(const AAModel& aa, const Matrix& X) {
  const int n = static_cast<int>(X.rows());
  const int k = aa.k;
  if (aa.alpha.rows() != n || aa.Z.cols() != X.cols())
    throw dimension_error("build_candidates: model does not match X");

  // ascending key, lowest row index wins ties; skips taken rows
  auto pick = [&](const Vector& key, std::vector<char>& taken) {
    int best = -1;
    for (int i = 0; i < n; ++i) {
      if (taken[static_cast<std::size_t>(i)]) continue;
      if (best < 0 || key(i) < key(best)) best = i;
    }
    taken[static_cast<std::size_t>(best)] = 1;
    return best;
  };

  BuildCandidates out;
  const Vector diag = X.rowwise().squaredNorm();
  std::vector<char> taken_n(static_cast<std::size_t>(n), 0);
  std::vector<char> taken_a(static_cast<std::size_t>(n), 0);
  std::vector<char> taken_b(static_cast<std::size_t>(n), 0);
  for (int j = 0; j < k; ++j) {
    const Vector zj = aa.Z.row(j).transpose();
    const Vector d2 =
        diag - 2.0 * (X * zj) + Vector::Constant(n, zj.squaredNorm());
    out.nearest.push_back(pick(d2, taken_n));
    out.max_alpha.push_back(pick(-aa.alpha.col(j), taken_a));
    out.max_beta.push_back(pick(-aa.beta.row(j).transpose(), taken_b));
  }
  return out;
}

// Mixture weights and objective for a fixed archetypoid index set; each
// alpha row is an independent simplex-constrained least-squares solve.
inline std::pair<Matrix, double> evaluate_indices(const Matrix& X,
                                                  const std::vector<int>& idx,
                                                  int threads = 0) {
  const int n = static_cast<int>(X.rows());
  const int k = static_cast<int>(idx.size());
  if (k < 1) throw dimension_error("evaluate_indices: empty index set");
  std::vector<int> sorted = idx;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < k; ++i) {
    if (sorted[static_cast<std::size_t>(i)] < 0 ||
        sorted[static_cast<std::size_t>(i)] >= n)
      throw dimension_error("evaluate_indices: index out of range");
    if (i > 0 && sorted[static_cast<std::size_t>(i)] ==
                     sorted[static_cast<std::size_t>(i - 1)])
      throw cardinality_error("evaluate_indices: duplicate index " +
                              std::to_string(sorted[static_cast<std::size_t>(i)]));
  }
  Matrix Xs(k, X.cols());
  for (int j = 0; j < k; ++j) Xs.row(j) = X.row(idx[static_cast<std::size_t>(j)]);
  const Matrix G0 = Xs * Xs.transpose();
  const Matrix C = Xs * X.transpose();  // k x n
  const Vector diag = X.rowwise().squaredNorm();

  Matrix alpha(n, k);
  Vector ssd(n);
  parallel_for(n, resolve_threads(threads), [&](int i) {
    auto sol = solve_simplex_gram(G0, C.col(i), diag(i));
    alpha.row(i) = sol.weights.w.transpose();
    ssd(i) = sol.ssd;
  });
  double rss = 0.0;
  for (int i = 0; i < n; ++i) rss += ssd(i);
  return {std::move(alpha), rss};
}

namespace detail {

// Best-improvement single-exchange local search over archetypoid sets,
// backed by the cached data Gram matrix. Per-candidate objectives are exact:
// rows whose optimality certificate is unaffected by the exchange keep their
// residual (dual screen); the rest are re-solved warm. Each candidate is
// evaluated wholly by one thread and all reductions run in fixed order, so
// results are independent of the thread count.
class swap_engine {
 public:
  swap_engine(const Matrix& X, const Matrix& XXt, int threads)
      : X_(X),
        XXt_(XXt),
        diag_(XXt.diagonal()),
        n_(static_cast<int>(X.rows())),
        threads_(threads) {
    // group identical row patterns; candidates are the lowest-index
    // representative of each pattern
    std::map<std::vector<double>, int> seen;
    pattern_id_.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      std::vector<double> key(X.row(i).begin(), X.row(i).end());
      auto [it, inserted] = seen.emplace(std::move(key), i);
      pattern_id_[static_cast<std::size_t>(i)] = it->second;
      if (inserted) representatives_.push_back(i);
    }
  }

  int pattern_count() const { return static_cast<int>(representatives_.size()); }
  int pattern_of(int row) const { return pattern_id_[static_cast<std::size_t>(row)]; }

  struct outcome {
    std::vector<int> indices;
    double rss = 0.0;
    double initial_rss = 0.0;
    int swaps = 0;
  };

  outcome run(std::vector<int> S) {
    const int k = static_cast<int>(S.size());
    cur_.assign(static_cast<std::size_t>(n_), row_sol{});
    resolve_all(S);
    outcome out;
    out.initial_rss = total_ssd();
    double rss_cur = out.initial_rss;

    const int max_sweeps = 50 * k + 200;  // strict descent; never reached
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      double best_rss = std::numeric_limits<double>::infinity();
      int best_p = -1, best_c = -1;

      std::vector<std::vector<row_sol>> base(static_cast<std::size_t>(k));
      std::vector<std::vector<int>> s_minus(static_cast<std::size_t>(k));
      for (int p = 0; p < k; ++p) prepare_base(S, p, s_minus, base);

      // candidate rows: one representative per pattern not already used
      std::vector<char> used_pattern(static_cast<std::size_t>(n_), 0);
      for (int j : S) used_pattern[static_cast<std::size_t>(pattern_of(j))] = 1;
      std::vector<int> cands;
      for (int c : representatives_)
        if (!used_pattern[static_cast<std::size_t>(c)]) cands.push_back(c);
      if (cands.empty()) break;

      const int total = k * static_cast<int>(cands.size());
      std::vector<double> cand_rss(static_cast<std::size_t>(total));
      parallel_for(total, threads_, [&](int t) {
        const int p = t / static_cast<int>(cands.size());
        const int c = cands[static_cast<std::size_t>(
            t % static_cast<int>(cands.size()))];
        cand_rss[static_cast<std::size_t>(t)] = candidate_rss(
            s_minus[static_cast<std::size_t>(p)], base[static_cast<std::size_t>(p)], c);
      });
      for (int t = 0; t < total; ++t)
        if (cand_rss[static_cast<std::size_t>(t)] < best_rss) {
          best_rss = cand_rss[static_cast<std::size_t>(t)];
          best_p = t / static_cast<int>(cands.size());
          best_c = cands[static_cast<std::size_t>(
              t % static_cast<int>(cands.size()))];
        }

      if (best_p < 0 || best_rss >= rss_cur - 1e-9 * (1.0 + rss_cur)) break;
      S[static_cast<std::size_t>(best_p)] = best_c;
      resolve_all(S);  // warm re-solve against the updated set
      rss_cur = total_ssd();
      ++out.swaps;
    }
    out.indices = std::move(S);
    out.rss = rss_cur;
    return out;
  }

 private:
  struct row_sol {
    std::vector<int> sup;     // column positions into the solved set
    std::vector<double> w;    // raw penalty-NNLS weights, aligned with sup
    double sum_raw = 0.0;
    double ssd = 0.0;
  };

  // gram submatrix for an ordered list of global rows
  Matrix gram_for(const std::vector<int>& rows) const {
    const int k = static_cast<int>(rows.size());
    Matrix G(k, k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        G(a, b) = XXt_(rows[static_cast<std::size_t>(a)],
                       rows[static_cast<std::size_t>(b)]);
    return G;
  }

  row_sol solve_row(int i, const std::vector<int>& rows, const Matrix& G0,
                    const std::vector<int>* warm) const {
    const int k = static_cast<int>(rows.size());
    Vector c0(k);
    for (int a = 0; a < k; ++a)
      c0(a) = XXt_(rows[static_cast<std::size_t>(a)], i);
    auto sol = solve_simplex_gram(G0, c0, diag_(i), warm);
    row_sol rs;
    rs.sup = std::move(sol.raw_support);
    rs.w = std::move(sol.raw_w);
    rs.sum_raw = sol.raw_sum;
    rs.ssd = sol.ssd;
    return rs;
  }

  void resolve_all(const std::vector<int>& S) {
    const Matrix G0 = gram_for(S);
    parallel_for(n_, threads_, [&](int i) {
      const auto& prev = cur_[static_cast<std::size_t>(i)].sup;
      cur_[static_cast<std::size_t>(i)] =
          solve_row(i, S, G0, prev.empty() ? nullptr : &prev);
    });
  }

  double total_ssd() const {
    double rss = 0.0;
    for (int i = 0; i < n_; ++i) rss += cur_[static_cast<std::size_t>(i)].ssd;
    return rss;
  }

  // base solutions over S minus position p; rows that never used position p
  // keep their solution with support positions remapped
  void prepare_base(const std::vector<int>& S, int p,
                    std::vector<std::vector<int>>& s_minus,
                    std::vector<std::vector<row_sol>>& base) {
    const int k = static_cast<int>(S.size());
    auto& sm = s_minus[static_cast<std::size_t>(p)];
    sm.clear();
    for (int a = 0; a < k; ++a)
      if (a != p) sm.push_back(S[static_cast<std::size_t>(a)]);
    auto& bp = base[static_cast<std::size_t>(p)];
    bp.assign(static_cast<std::size_t>(n_), row_sol{});
    if (sm.empty()) return;  // k = 1: no reduced set to solve against
    const Matrix Gm = gram_for(sm);
    parallel_for(n_, threads_, [&](int i) {
      const auto& c = cur_[static_cast<std::size_t>(i)];
      bool uses_p = false;
      for (int pos : c.sup)
        if (pos == p) {
          uses_p = true;
          break;
        }
      auto& b = bp[static_cast<std::size_t>(i)];
      if (!uses_p) {
        b = c;
        for (auto& pos : b.sup)
          if (pos > p) --pos;
        return;
      }
      std::vector<int> warm;
      for (int pos : c.sup)
        if (pos != p) warm.push_back(pos > p ? pos - 1 : pos);
      b = solve_row(i, sm, Gm, warm.empty() ? nullptr : &warm);
    });
  }

  // exact objective of (S minus p) plus candidate row c
  double candidate_rss(const std::vector<int>& sm,
                       const std::vector<row_sol>& base, int c) const {
    const int km = static_cast<int>(sm.size());
    std::vector<int> rows = sm;
    rows.push_back(c);  // candidate column appended last
    Matrix G0;
    bool have_g = false;
    const double m2 = detail::kPenalty * detail::kPenalty;
    const double* xc = XXt_.col(c).data();

    double rss = 0.0;
    for (int i = 0; i < n_; ++i) {
      const row_sol& b = base[static_cast<std::size_t>(i)];
      // dual of the entering column at the reduced optimum
      double dot = 0.0;
      for (std::size_t a = 0; a < b.sup.size(); ++a)
        dot += b.w[a] * xc[sm[static_cast<std::size_t>(b.sup[a])]];
      const double dual = xc[i] - dot + m2 * (1.0 - b.sum_raw);
      if (dual <= detail::kDualTol) {
        rss += b.ssd;
        continue;
      }
      if (!have_g) {
        G0 = gram_for(rows);
        have_g = true;
      }
      Vector c0(km + 1);
      for (int a = 0; a < km; ++a)
        c0(a) = XXt_(sm[static_cast<std::size_t>(a)], i);
      c0(km) = xc[i];
      auto sol = solve_simplex_gram(G0, c0, diag_(i), &b.sup);
      rss += sol.ssd;
    }
    return rss;
  }

  const Matrix& X_;
  const Matrix& XXt_;
  Vector diag_;
  int n_;
  int threads_;
  std::vector<int> pattern_id_;
  std::vector<int> representatives_;
  std::vector<row_sol> cur_;
};

inline void check_ada_inputs(const Matrix& X, int k) {
  const int n = static_cast<int>(X.rows());
  if (k < 1) throw dimension_error("fit_ada: k must be >= 1");
  if (n < 1) throw dimension_error("fit_ada: X has no rows");
  if (k > n) throw cardinality_error("fit_ada: k = " + std::to_string(k) +
                                     " exceeds n = " + std::to_string(n));
  if (!X.allFinite()) throw numeric_error("fit_ada: non-finite input");
}

inline ADAModel finish_ada(const Matrix& X, swap_engine& eng,
                           std::vector<swap_engine::outcome> outs,
                           std::vector<ADAInit> kinds,
                           std::vector<std::vector<int>> initials, double aa_rss,
                           int threads) {
  int best = 0;
  for (std::size_t s = 1; s < outs.size(); ++s)
    if (outs[s].rss < outs[static_cast<std::size_t>(best)].rss)
      best = static_cast<int>(s);

  ADAModel model;
  model.indices = outs[static_cast<std::size_t>(best)].indices;
  model.k = static_cast<int>(model.indices.size());
  model.init_kind = kinds[static_cast<std::size_t>(best)];
  model.swap_steps = outs[static_cast<std::size_t>(best)].swaps;
  auto [alpha, rss] = evaluate_indices(X, model.indices, threads);
  model.alpha = std::move(alpha);
  model.rss = rss;
  model.diagnostics.aa_rss = aa_rss;
  model.diagnostics.data_degenerate = eng.pattern_count() < model.k;
  std::vector<int> pats;
  for (int i : model.indices) pats.push_back(eng.pattern_of(i));
  std::sort(pats.begin(), pats.end());
  model.diagnostics.duplicate_patterns =
      std::adjacent_find(pats.begin(), pats.end()) != pats.end();
  for (std::size_t s = 0; s < outs.size(); ++s)
    model.diagnostics.starts.push_back({kinds[s], initials[s],
                                        outs[s].initial_rss, outs[s].rss,
                                        outs[s].swaps});
  return model;
}

}  // namespace detail

// Fit archetypoid analysis: initialize candidate sets from a continuous
// archetype fit, then run best-improvement single-exchange local search from
// each of the three candidate sets and keep the best final model.
inline ADAModel fit_ada(const Matrix& X, int k, const ADAOptions& opts = {}) {
  detail::check_ada_inputs(X, k);
  AAOptions aa_opts;
  aa_opts.restarts = opts.restarts;
  aa_opts.seed = opts.seed;
  aa_opts.tol = opts.tol;
  aa_opts.max_iter = opts.max_iter;
  aa_opts.threads = opts.threads;
  const AAModel aa = fit_aa(X, k, aa_opts);

  const BuildCandidates cands = build_candidates(aa, X);
  const Matrix XXt = X * X.transpose();
  const int threads = resolve_threads(opts.threads);
  detail::swap_engine eng(X, XXt, threads);

  std::vector<ADAInit> kinds = {ADAInit::NEAREST, ADAInit::MAX_ALPHA,
                                ADAInit::MAX_BETA};
  std::vector<std::vector<int>> initials = {cands.nearest, cands.max_alpha,
                                            cands.max_beta};
  std::vector<detail::swap_engine::outcome> outs;
  for (const auto& init : initials) outs.push_back(eng.run(init));
  return detail::finish_ada(X, eng, std::move(outs), std::move(kinds),
                            std::move(initials), aa.rss, threads);
}

// Archetypoid fit from a user-supplied starting index set (no continuous
// initialization); the same local search applies.
inline ADAModel fit_ada_from(const Matrix& X, const std::vector<int>& init,
                             const ADAOptions& opts = {}) {
  detail::check_ada_inputs(X, static_cast<int>(init.size()));
  std::vector<int> sorted = init;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 0 || sorted[i] >= X.rows())
      throw dimension_error("fit_ada: start index out of range");
    if (i > 0 && sorted[i] == sorted[i - 1])
      throw cardinality_error("fit_ada: duplicate start index " +
                              std::to_string(sorted[i]));
  }
  const Matrix XXt = X * X.transpose();
  const int threads = resolve_threads(opts.threads);
  detail::swap_engine eng(X, XXt, threads);
  std::vector<detail::swap_engine::outcome> outs = {eng.run(init)};
  return detail::finish_ada(X, eng, std::move(outs), {ADAInit::USER}, {init},
                            0.0, threads);
}

}  // namespace nomarch
