#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "nomarch/errors.hpp"
#include "nomarch/nominal.hpp"
#include "nomarch/types.hpp"

namespace nomarch {

// Threshold continuous profiles into binary ones; strictly-above maps to 1.
// Idempotent for thresholds in [0, 1).
inline Matrix binarize(const Matrix& A, double threshold = 0.5) {
  if (!(threshold >= 0.0 && threshold < 1.0))
    throw config_error("binarize: threshold must be in [0, 1)");
  if (!A.allFinite()) throw numeric_error("binarize: non-finite input");
  return (A.array() > threshold).cast<double>();
}

namespace detail {

inline void require_binary(const Matrix& A, const char* who) {
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      const double v = A(i, j);
      if (v != 0.0 && v != 1.0)
        throw domain_error(std::string(who) + ": entry is not 0/1");
    }
}

}  // namespace detail

// Pairwise Hamming distances between the rows of two binary matrices.
inline IMatrix hamming_matrix(const Matrix& A, const Matrix& B) {
  if (A.cols() != B.cols())
    throw dimension_error("hamming_matrix: column counts differ");
  detail::require_binary(A, "hamming_matrix");
  detail::require_binary(B, "hamming_matrix");
  IMatrix D(A.rows(), B.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < B.rows(); ++j) {
      int d = 0;
      for (Eigen::Index c = 0; c < A.cols(); ++c)
        if (A(i, c) != B(j, c)) ++d;
      D(i, j) = d;
    }
  return D;
}

inline IMatrix hamming_matrix(const Matrix& A) { return hamming_matrix(A, A); }

// Count of entries at each observed distance, over all k*k ordered entries
// of a self-distance matrix (the zero diagonal included), plus their sum.
struct DistanceSummary {
  std::vector<int> distances;  // ascending distinct values
  std::vector<int> counts;     // aligned with distances
  long long total = 0;
};

inline DistanceSummary distance_summary(const IMatrix& D) {
  if (D.rows() != D.cols())
    throw dimension_error("distance_summary: matrix is not square");
  for (Eigen::Index i = 0; i < D.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      if (D(i, j) != D(j, i))
        throw domain_error("distance_summary: matrix is not symmetric");
  std::map<int, int> hist;
  DistanceSummary s;
  for (Eigen::Index i = 0; i < D.rows(); ++i)
    for (Eigen::Index j = 0; j < D.cols(); ++j) {
      if (D(i, j) < 0) throw domain_error("distance_summary: negative distance");
      ++hist[D(i, j)];
      s.total += D(i, j);
    }
  for (const auto& [d, c] : hist) {
    s.distances.push_back(d);
    s.counts.push_back(c);
  }
  return s;
}

// Per profile and dummy group: did binarization keep exactly one category?
struct CoverageReport {
  std::vector<std::vector<Coverage>> cells;  // profiles x groups
  int none_count = 0;
  int multiple_count = 0;
  bool clean() const { return none_count == 0 && multiple_count == 0; }
};

inline CoverageReport coverage_check(const Matrix& P,
                                     const std::vector<DummyGroup>& groups) {
  detail::require_binary(P, "coverage_check");
  for (const auto& g : groups)
    if (g.start < 0 || g.count < 1 || g.start + g.count > P.cols())
      throw dimension_error("coverage_check: group outside profile columns");
  CoverageReport rep;
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    std::vector<Coverage> row;
    for (const auto& g : groups) {
      int ones = 0;
      for (int c = 0; c < g.count; ++c)
        if (P(i, g.start + c) == 1.0) ++ones;
      const Coverage cov = ones == 1   ? Coverage::ONE
                           : ones == 0 ? Coverage::NONE
                                       : Coverage::MULTIPLE;
      if (cov == Coverage::NONE) ++rep.none_count;
      if (cov == Coverage::MULTIPLE) ++rep.multiple_count;
      row.push_back(cov);
    }
    rep.cells.push_back(std::move(row));
  }
  return rep;
}

// One-stop comparison of a profile matrix against the dummy layout:
// binarize, self Hamming distances, distance histogram, coverage.
struct EvaluationReport {
  Matrix profiles;  // binarized
  IMatrix hamming;
  DistanceSummary summary;
  CoverageReport coverage;
};

inline EvaluationReport evaluate_profiles(const Matrix& raw,
                                          const std::vector<DummyGroup>& groups,
                                          double threshold = 0.5) {
  EvaluationReport rep;
  rep.profiles = binarize(raw, threshold);
  rep.hamming = hamming_matrix(rep.profiles);
  rep.summary = distance_summary(rep.hamming);
  rep.coverage = coverage_check(rep.profiles, groups);
  return rep;
}

}  // namespace nomarch
