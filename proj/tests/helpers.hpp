#pragma once

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "nomarch/types.hpp"

namespace test_helpers {

// unique scratch directory, removed on scope exit
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("nomarch_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

inline double naive_rss(const nomarch::Matrix& X, const nomarch::Matrix& alpha,
                        const nomarch::Matrix& Z) {
  return (X - alpha * Z).squaredNorm();
}

// Exact minimum of ||A w - b||^2 over the simplex grid {v/N}: the last free
// coordinate is scanned in closed form (quadratic in one integer variable),
// the rest by enumeration. Supports k <= 4.
inline double grid_simplex_min(const nomarch::Matrix& A,
                               const nomarch::Vector& b, int N = 500) {
  const int k = static_cast<int>(A.cols());
  auto val = [&](const nomarch::Vector& w) {
    return (A * w - b).squaredNorm();
  };
  if (k == 1) return val(nomarch::Vector::Ones(1));

  // minimize ||p + (t/N) d||^2 for integer t in [0, R]
  auto line_min = [&](const nomarch::Vector& p, const nomarch::Vector& d,
                      int R) {
    const double a2 = d.squaredNorm() / (static_cast<double>(N) * N);
    const double a1 = 2.0 * p.dot(d) / N;
    double best = p.squaredNorm();  // t = 0
    auto at = [&](int t) { return a2 * t * t + a1 * t + p.squaredNorm(); };
    if (R > 0) best = std::min(best, at(R));
    if (a2 > 0) {
      const double tstar = -a1 / (2.0 * a2);
      for (int t : {static_cast<int>(std::floor(tstar)),
                    static_cast<int>(std::ceil(tstar))})
        if (t > 0 && t < R) best = std::min(best, at(t));
    }
    return best;
  };

  double best = std::numeric_limits<double>::infinity();
  const nomarch::Vector d = A.col(k - 2) - A.col(k - 1);
  auto scan_tail = [&](const nomarch::Vector& partial, int R) {
    // partial already contains all fixed columns; coordinates k-2 and k-1
    // split the remaining mass R/N
    const nomarch::Vector p =
        partial + (static_cast<double>(R) / N) * A.col(k - 1) - b;
    best = std::min(best, line_min(p, d, R));
  };

  if (k == 2) {
    scan_tail(nomarch::Vector::Zero(A.rows()), N);
  } else if (k == 3) {
    for (int n1 = 0; n1 <= N; ++n1)
      scan_tail((static_cast<double>(n1) / N) * A.col(0), N - n1);
  } else if (k == 4) {
    for (int n1 = 0; n1 <= N; ++n1) {
      const nomarch::Vector c1 = (static_cast<double>(n1) / N) * A.col(0);
      for (int n2 = 0; n2 + n1 <= N; ++n2)
        scan_tail(c1 + (static_cast<double>(n2) / N) * A.col(1), N - n1 - n2);
    }
  }
  return best;
}

// random binary matrix, at least one 1 per row
inline nomarch::Matrix random_binary(std::mt19937_64& gen, int n, int m) {
  std::bernoulli_distribution coin(0.5);
  nomarch::Matrix X(n, m);
  for (int i = 0; i < n; ++i) {
    bool any = false;
    for (int j = 0; j < m; ++j) {
      const bool v = coin(gen);
      X(i, j) = v ? 1.0 : 0.0;
      any = any || v;
    }
    if (!any) X(i, gen() % m) = 1.0;
  }
  return X;
}

// random one-hot profile set: g groups with the given widths
inline nomarch::Matrix random_one_hot(std::mt19937_64& gen, int rows,
                                      const std::vector<int>& widths) {
  int m = 0;
  for (int w : widths) m += w;
  nomarch::Matrix P = nomarch::Matrix::Zero(rows, m);
  for (int i = 0; i < rows; ++i) {
    int start = 0;
    for (int w : widths) {
      P(i, start + static_cast<int>(gen() % static_cast<unsigned>(w))) = 1.0;
      start += w;
    }
  }
  return P;
}

// random simplex point (uniform Dirichlet(1))
inline nomarch::Vector random_simplex(std::mt19937_64& gen, int k) {
  std::exponential_distribution<double> e(1.0);
  nomarch::Vector w(k);
  double s = 0;
  for (int j = 0; j < k; ++j) s += (w(j) = e(gen));
  return w / s;
}

// Minimal well-formedness check for the emitted SVG: tags balance, attribute
// values quoted, '&' only as entity, one root element.
inline bool well_formed_xml(const std::string& s) {
  std::size_t i = 0;
  std::vector<std::string> stack;
  int roots = 0;
  auto fail = [] { return false; };
  while (i < s.size()) {
    if (s[i] != '<') {
      if (s[i] == '&') {
        const std::size_t semi = s.find(';', i);
        if (semi == std::string::npos || semi - i > 8) return fail();
        const std::string ent = s.substr(i + 1, semi - i - 1);
        if (ent != "amp" && ent != "lt" && ent != "gt" && ent != "quot" &&
            ent != "apos")
          return fail();
        i = semi + 1;
        continue;
      }
      if (s[i] == '>') return fail();
      ++i;
      continue;
    }
    const std::size_t end = s.find('>', i);
    if (end == std::string::npos) return fail();
    std::string tag = s.substr(i + 1, end - i - 1);
    i = end + 1;
    if (tag.empty()) return fail();
    if (tag.front() == '?') {
      if (tag.back() != '?') return fail();
      continue;
    }
    if (tag.front() == '/') {
      if (stack.empty()) return fail();
      const std::string name = tag.substr(1);
      if (stack.back() != name) return fail();
      stack.pop_back();
      continue;
    }
    const bool self_close = tag.back() == '/';
    if (self_close) tag.pop_back();
    // quotes must pair up inside the tag
    if (std::count(tag.begin(), tag.end(), '"') % 2) return fail();
    const std::string name = tag.substr(0, tag.find_first_of(" \t\n"));
    if (name.empty()) return fail();
    if (stack.empty() && ++roots > 1) return fail();
    if (!self_close) stack.push_back(name);
  }
  return stack.empty() && roots >= 1;
}

}  // namespace test_helpers
