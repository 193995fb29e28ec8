#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "nomarch/errors.hpp"
#include "nomarch/types.hpp"

namespace nomarch {

// Weights on the probability simplex: nonnegative, summing to one.
struct SimplexWeights {
  Vector w;

  bool feasible() const {
    if (w.size() == 0) return false;
    for (Eigen::Index i = 0; i < w.size(); ++i)
      if (!(w(i) >= -1e-10) || !std::isfinite(w(i))) return false;
    return std::abs(w.sum() - 1.0) <= 1e-8;
  }
};

struct simplex_ls_result {
  SimplexWeights weights;
  double ssd = 0.0;  // ||Aw - b||^2 at the returned weights
  bool hit_iteration_cap = false;
  int iterations = 0;
  // Raw state of the penalty-form NNLS before renormalization/refit. Callers
  // doing incremental work (swap screening) use it for exact dual tests.
  std::vector<int> raw_support;
  std::vector<double> raw_w;  // aligned with raw_support
  double raw_sum = 0.0;
};

namespace detail {

constexpr double kPenalty = 200.0;  // constant constraint row appended to A
constexpr double kDualTol = 1e-10;  // active-set dual-feasibility tolerance

struct nnls_state {
  Vector w;                  // dense, zeros off the support
  std::vector<int> support;  // indices with w > 0, in insertion order
  bool hit_cap = false;
  int iterations = 0;
};

// Solve the face system G[P,P] s = c[P]. Falls back to a tiny ridge when the
// plain factorization is unreliable (duplicate columns on the face).
inline Vector solve_face(const Matrix& G, const Vector& c,
                         const std::vector<int>& P) {
  const int p = static_cast<int>(P.size());
  Matrix Gpp(p, p);
  Vector cp(p);
  for (int a = 0; a < p; ++a) {
    cp(a) = c(P[static_cast<std::size_t>(a)]);
    for (int b = 0; b < p; ++b)
      Gpp(a, b) = G(P[static_cast<std::size_t>(a)], P[static_cast<std::size_t>(b)]);
  }
  Vector s = Gpp.ldlt().solve(cp);
  const double scale = 1.0 + cp.cwiseAbs().maxCoeff();
  if (!s.allFinite() || (Gpp * s - cp).cwiseAbs().maxCoeff() > 1e-7 * scale) {
    const double ridge = 1e-12 * (1.0 + Gpp.diagonal().cwiseAbs().maxCoeff());
    Matrix Gr = Gpp;
    Gr.diagonal().array() += ridge;
    s = Gr.ldlt().solve(cp);
  }
  return s;
}

// Active-set nonnegative least squares on the quadratic form
// min 1/2 w'Gw - c'w subject to w >= 0, with G symmetric positive
// semidefinite. Lawson-Hanson structure; gradients use the support only, so
// one outer iteration costs O(k * |support|). An optional warm support seeds
// the passive set. On hitting the iteration cap the best feasible iterate
// seen is returned and flagged.
inline nnls_state nnls_gram(const Matrix& G, const Vector& c,
                            const std::vector<int>* warm = nullptr) {
  const int k = static_cast<int>(G.rows());
  nnls_state st;
  st.w = Vector::Zero(k);
  std::vector<char> in_p(static_cast<std::size_t>(k), 0);
  auto& P = st.support;

  auto objective = [&](const Vector& w, const std::vector<int>& sup) {
    double quad = 0.0, lin = 0.0;
    for (int a : sup) {
      lin += c(a) * w(a);
      double ga = 0.0;
      for (int b : sup) ga += G(a, b) * w(b);
      quad += w(a) * ga;
    }
    return 0.5 * quad - lin;
  };

  const int cap = 3 * k;
  double best_obj = 0.0;  // objective of w = 0
  Vector best_w = st.w;
  std::vector<int> best_support;

  // inner step: restore feasibility of the face solution s over P
  auto restore = [&](Vector& s) {
    int guard = 0;
    while (true) {
      bool neg = false;
      for (std::size_t a = 0; a < P.size(); ++a)
        if (s(static_cast<Eigen::Index>(a)) <= 0.0) {
          neg = true;
          break;
        }
      if (!neg) break;
      double theta = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < P.size(); ++a) {
        const double sa = s(static_cast<Eigen::Index>(a));
        if (sa <= 0.0) {
          const double wa = st.w(P[a]);
          const double t = wa / (wa - sa);
          if (t < theta) theta = t;
        }
      }
      if (!std::isfinite(theta)) theta = 0.0;
      std::vector<int> keep;
      for (std::size_t a = 0; a < P.size(); ++a) {
        const double wa = st.w(P[a]);
        const double sa = s(static_cast<Eigen::Index>(a));
        const double nw = wa + theta * (sa - wa);
        if (sa <= 0.0 && nw <= 1e-14) {
          st.w(P[a]) = 0.0;
          in_p[static_cast<std::size_t>(P[a])] = 0;
        } else {
          st.w(P[a]) = nw;
          keep.push_back(P[a]);
        }
      }
      P = std::move(keep);
      if (P.empty()) return false;
      s = solve_face(G, c, P);
      if (++guard > 2 * k + 4) return false;  // stalled; caller bails out
    }
    return true;
  };

  if (warm != nullptr) {
    for (int a : *warm)
      if (a >= 0 && a < k && !in_p[static_cast<std::size_t>(a)]) {
        in_p[static_cast<std::size_t>(a)] = 1;
        P.push_back(a);
      }
    if (!P.empty()) {
      Vector s = solve_face(G, c, P);
      if (!restore(s)) {
        P.clear();
        std::fill(in_p.begin(), in_p.end(), 0);
        st.w.setZero();
      } else {
        for (std::size_t a = 0; a < P.size(); ++a)
          st.w(P[a]) = s(static_cast<Eigen::Index>(a));
        const double obj = objective(st.w, P);
        if (obj < best_obj) {
          best_obj = obj;
          best_w = st.w;
          best_support = P;
        }
      }
    }
  }

  while (st.iterations < cap) {
    // dual vector r = c - Gw over the support
    int enter = -1;
    double best_dual = kDualTol;
    for (int i = 0; i < k; ++i) {
      if (in_p[static_cast<std::size_t>(i)]) continue;
      double gi = 0.0;
      for (int b : P) gi += G(i, b) * st.w(b);
      const double dual = c(i) - gi;
      if (dual > best_dual) {
        best_dual = dual;
        enter = i;
      }
    }
    if (enter < 0) {
      st.hit_cap = false;
      return st;  // dual-feasible: optimal
    }
    ++st.iterations;
    in_p[static_cast<std::size_t>(enter)] = 1;
    P.push_back(enter);
    Vector s = solve_face(G, c, P);
    if (!restore(s)) {
      st.w.setZero();
      P.clear();
      std::fill(in_p.begin(), in_p.end(), 0);
      continue;
    }
    for (std::size_t a = 0; a < P.size(); ++a)
      st.w(P[a]) = s(static_cast<Eigen::Index>(a));
    const double obj = objective(st.w, P);
    if (obj < best_obj) {
      best_obj = obj;
      best_w = st.w;
      best_support = P;
    }
  }
  st.hit_cap = true;
  st.w = best_w;
  st.support = best_support;
  return st;
}

// Equality-constrained refit on a fixed support: minimize ||Aw - b||^2 with
// sum(w) = 1 over the given support, dropping the most negative coordinate
// until the solution is nonnegative. Returns false when no usable face is
// found. G0/c0 are the unpenalized Gram terms.
inline bool polish_face(const Matrix& G0, const Vector& c0,
                        std::vector<int> P, Vector& out) {
  const int k = static_cast<int>(G0.rows());
  while (!P.empty()) {
    const int p = static_cast<int>(P.size());
    Matrix K = Matrix::Zero(p + 1, p + 1);
    Vector rhs(p + 1);
    for (int a = 0; a < p; ++a) {
      rhs(a) = 2.0 * c0(P[static_cast<std::size_t>(a)]);
      K(a, p) = 1.0;
      K(p, a) = 1.0;
      for (int b = 0; b < p; ++b)
        K(a, b) = 2.0 * G0(P[static_cast<std::size_t>(a)],
                           P[static_cast<std::size_t>(b)]);
    }
    rhs(p) = 1.0;
    Eigen::FullPivLU<Matrix> lu(K);
    Vector sol = lu.solve(rhs);
    const double scale =
        1.0 + rhs.cwiseAbs().maxCoeff() + K.cwiseAbs().maxCoeff();
    if (!sol.allFinite() || (K * sol - rhs).cwiseAbs().maxCoeff() > 1e-7 * scale)
      return false;
    int worst = -1;
    double worst_val = -1e-10;
    for (int a = 0; a < p; ++a)
      if (sol(a) < worst_val) {
        worst_val = sol(a);
        worst = a;
      }
    if (worst < 0) {
      out = Vector::Zero(k);
      double sum = 0.0;
      for (int a = 0; a < p; ++a) {
        const double v = std::max(sol(a), 0.0);
        out(P[static_cast<std::size_t>(a)]) = v;
        sum += v;
      }
      if (sum <= 0.0) return false;
      out /= sum;
      return true;
    }
    P.erase(P.begin() + worst);
  }
  return false;
}

inline double quad_objective(const Matrix& G0, const Vector& c0, double btb,
                             const Vector& w, const std::vector<int>& sup) {
  double quad = 0.0, lin = 0.0;
  for (int a : sup) {
    lin += c0(a) * w(a);
    double ga = 0.0;
    for (int b : sup) ga += G0(a, b) * w(b);
    quad += w(a) * ga;
  }
  const double v = quad - 2.0 * lin + btb;
  return v > 0.0 ? v : 0.0;
}

inline std::vector<int> dense_support(const Vector& w, double tol = 0.0) {
  std::vector<int> sup;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w(i) > tol) sup.push_back(static_cast<int>(i));
  return sup;
}

}  // namespace detail

// Gram-form solver used by the fitting loops: G0 = A'A, c0 = A'b, btb = b'b.
// Optionally warm-started from a previous support, and optionally given a
// reference feasible point that the result must not lose to (used to make
// alternating sweeps monotone). Inputs are trusted (no finiteness scan); the
// public solve_simplex_ls wrapper validates.
inline simplex_ls_result solve_simplex_gram(
    const Matrix& G0, const Vector& c0, double btb,
    const std::vector<int>* warm = nullptr, const Vector* reference = nullptr) {
  const int k = static_cast<int>(G0.rows());
  if (k < 1) throw dimension_error("solve_simplex_ls: k must be >= 1");
  simplex_ls_result res;
  if (k == 1) {
    res.weights.w = Vector::Ones(1);
    res.ssd = std::max(G0(0, 0) - 2.0 * c0(0) + btb, 0.0);
    return res;
  }

  const double m2 = detail::kPenalty * detail::kPenalty;
  Matrix G = G0.array() + m2;
  Vector c = c0.array() + m2;
  detail::nnls_state st = detail::nnls_gram(G, c, warm);
  res.hit_iteration_cap = st.hit_cap;
  res.iterations = st.iterations;

  double raw_sum = 0.0;
  res.raw_support = st.support;
  res.raw_w.reserve(st.support.size());
  for (int a : st.support) {
    res.raw_w.push_back(st.w(a));
    raw_sum += st.w(a);
  }
  res.raw_sum = raw_sum;
  Vector w_best;
  double ssd_best = std::numeric_limits<double>::infinity();
  std::vector<int> sup_best;

  if (raw_sum > 1e-12) {
    Vector wn = st.w / raw_sum;
    const double ssd_n = detail::quad_objective(G0, c0, btb, wn, st.support);
    w_best = wn;
    ssd_best = ssd_n;
    sup_best = st.support;
    Vector wp;
    if (detail::polish_face(G0, c0, st.support, wp)) {
      const auto sup_p = detail::dense_support(wp);
      const double ssd_p = detail::quad_objective(G0, c0, btb, wp, sup_p);
      if (ssd_p < ssd_best) {
        w_best = wp;
        ssd_best = ssd_p;
        sup_best = sup_p;
      }
    }
  } else {
    // Penalty solve collapsed (can only happen when every c entry is
    // deeply negative). Fall back to an equality-constrained descent from
    // the full support, or uniform weights as a last resort.
    Vector wp;
    std::vector<int> all(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) all[static_cast<std::size_t>(i)] = i;
    if (detail::polish_face(G0, c0, all, wp)) {
      w_best = wp;
      sup_best = detail::dense_support(wp);
      ssd_best = detail::quad_objective(G0, c0, btb, wp, sup_best);
    } else {
      w_best = Vector::Constant(k, 1.0 / k);
      sup_best = all;
      ssd_best = detail::quad_objective(G0, c0, btb, w_best, sup_best);
    }
  }

  // Never lose to the uniform point (cheap for the small k used by callers
  // that care) or to the caller's reference point.
  if (k <= 64) {
    std::vector<int> all(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) all[static_cast<std::size_t>(i)] = i;
    Vector wu = Vector::Constant(k, 1.0 / k);
    const double ssd_u = detail::quad_objective(G0, c0, btb, wu, all);
    if (ssd_u < ssd_best) {
      w_best = wu;
      ssd_best = ssd_u;
      sup_best = all;
    }
  }
  if (reference != nullptr && reference->size() == k) {
    const auto sup_r = detail::dense_support(*reference);
    const double ssd_r = detail::quad_objective(G0, c0, btb, *reference, sup_r);
    if (ssd_r < ssd_best) {
      w_best = *reference;
      ssd_best = ssd_r;
      sup_best = sup_r;
    }
  }

  for (Eigen::Index i = 0; i < w_best.size(); ++i)
    if (w_best(i) < 0.0) w_best(i) = 0.0;
  const double s = w_best.sum();
  if (s > 0.0 && s != 1.0) w_best /= s;
  res.weights.w = std::move(w_best);
  res.ssd = ssd_best;
  return res;
}

// Solve min ||Aw - b||^2 with w on the simplex. Columns of A are the
// candidate archetype vectors. Uses the penalty-row reduction (a constant
// row of 200 appended to A and b) followed by active-set nonnegative least
// squares and renormalization; an equality-constrained refit on the
// identified support then removes the O(1/M^2) penalty bias when feasible.
inline simplex_ls_result solve_simplex_ls(const Matrix& A, const Vector& b) {
  if (A.cols() < 1) throw dimension_error("solve_simplex_ls: k must be >= 1");
  if (A.rows() != b.size())
    throw dimension_error("solve_simplex_ls: A rows != b length");
  if (!A.allFinite() || !b.allFinite())
    throw numeric_error("solve_simplex_ls: non-finite input");
  const Matrix G0 = A.transpose() * A;
  const Vector c0 = A.transpose() * b;
  return solve_simplex_gram(G0, c0, b.squaredNorm());
}

}  // namespace nomarch
