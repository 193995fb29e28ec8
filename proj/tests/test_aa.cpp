#include <random>

#include "catch2/catch_amalgamated.hpp"

#include "helpers.hpp"
#include "nomarch/aa.hpp"

using namespace nomarch;
using test_helpers::naive_rss;

namespace {

// vertices plus points spread over the triangle they span
Matrix triangle_data(int extra, std::mt19937_64& gen) {
  Matrix V(3, 2);
  V << 0, 0, 1, 0, 0.5, 1;
  Matrix X(3 + extra, 2);
  X.topRows(3) = V;
  for (int i = 0; i < extra; ++i) {
    const Vector w = test_helpers::random_simplex(gen, 3);
    X.row(3 + i) = (w.transpose() * V);
  }
  return X;
}

}  // namespace

TEST_CASE("one archetype over identical rows reaches zero residual") {
  Matrix X(6, 3);
  for (int i = 0; i < 6; ++i) X.row(i) << 1, 0, 1;
  AAOptions o;
  o.restarts = 2;
  const auto m = fit_aa(X, 1, o);
  CHECK(m.rss == Catch::Approx(0.0).margin(1e-18));
  CHECK(m.diagnostics.all_rows_identical);
  CHECK((m.Z.row(0).transpose() - Eigen::Vector3d(1, 0, 1)).norm() <
        1e-12);
  CHECK(m.alpha.col(0).minCoeff() == 1.0);
}

TEST_CASE("as many archetypes as rows reproduce the data") {
  std::mt19937_64 gen(3);
  const Matrix X = test_helpers::random_binary(gen, 7, 5);
  AAOptions o;
  o.restarts = 3;
  o.seed = 5;
  const auto m = fit_aa(X, 7, o);
  CHECK(m.rss <= 1e-8);
}

TEST_CASE("three archetypes recover the triangle vertices") {
  std::mt19937_64 gen(17);
  const Matrix X = triangle_data(60, gen);
  AAOptions o;
  o.restarts = 20;
  o.seed = 2;
  const auto m = fit_aa(X, 3, o);
  REQUIRE(m.k == 3);
  CHECK(m.rss <= 1e-3);
  Matrix V(3, 2);
  V << 0, 0, 1, 0, 0.5, 1;
  // each vertex has a recovered archetype within 0.05
  for (int v = 0; v < 3; ++v) {
    double best = 1e9;
    for (int j = 0; j < 3; ++j)
      best = std::min(best, (m.Z.row(j) - V.row(v)).norm());
    CHECK(best <= 0.05);
  }
}

TEST_CASE("reported rss equals the definition") {
  std::mt19937_64 gen(29);
  for (int rep = 0; rep < 5; ++rep) {
    const Matrix X = test_helpers::random_binary(gen, 15, 8);
    AAOptions o;
    o.restarts = 4;
    o.seed = rep;
    const auto m = fit_aa(X, 3, o);
    const double direct = naive_rss(X, m.alpha, m.Z);
    CHECK(m.rss == Catch::Approx(direct).margin(1e-12 * (1.0 + direct)));
    CHECK(compute_rss(X, m.alpha, m.Z) == direct);
  }
}

TEST_CASE("constraint structure holds on every output block") {
  std::mt19937_64 gen(31);
  const Matrix X = test_helpers::random_binary(gen, 20, 6);
  AAOptions o;
  o.restarts = 3;
  o.seed = 9;
  const auto m = fit_aa(X, 4, o);
  for (int i = 0; i < 20; ++i) {
    CHECK(m.alpha.row(i).minCoeff() >= 0.0);
    CHECK(std::abs(m.alpha.row(i).sum() - 1.0) <= 1e-8);
  }
  for (int j = 0; j < 4; ++j) {
    CHECK(m.beta.row(j).minCoeff() >= 0.0);
    CHECK(std::abs(m.beta.row(j).sum() - 1.0) <= 1e-8);
  }
  // Z is the beta mixture of rows
  CHECK((m.Z - m.beta * X).norm() <= 1e-12);
}

TEST_CASE("objective path of the winner never increases") {
  std::mt19937_64 gen(37);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix X = test_helpers::random_binary(gen, 18, 7);
    AAOptions o;
    o.restarts = 5;
    o.seed = 100 + rep;
    const auto m = fit_aa(X, 3, o);
    const auto& path = m.diagnostics.winner_rss_path;
    REQUIRE(!path.empty());
    for (std::size_t s = 1; s < path.size(); ++s)
      CHECK(path[s] <= path[s - 1] + 1e-9 * (1.0 + path[s - 1]));
    CHECK(m.rss == Catch::Approx(path.back()).margin(1e-12 * (1.0 + m.rss)));
  }
}

TEST_CASE("winner is the lowest-objective restart") {
  std::mt19937_64 gen(41);
  const Matrix X = test_helpers::random_binary(gen, 16, 6);
  AAOptions o;
  o.restarts = 8;
  o.seed = 3;
  const auto m = fit_aa(X, 3, o);
  REQUIRE(m.diagnostics.restarts.size() == 8);
  for (const auto& r : m.diagnostics.restarts)
    CHECK(m.rss <= r.rss + 1e-12 * (1.0 + r.rss));
}

TEST_CASE("fits are reproducible and thread-count independent") {
  std::mt19937_64 gen(43);
  const Matrix X = test_helpers::random_binary(gen, 24, 8);
  AAOptions o;
  o.restarts = 6;
  o.seed = 77;
  o.threads = 1;
  const auto a = fit_aa(X, 4, o);
  o.threads = 3;
  const auto b = fit_aa(X, 4, o);
  CHECK(a.rss == b.rss);
  CHECK((a.alpha - b.alpha).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.Z - b.Z).cwiseAbs().maxCoeff() == 0.0);
  const auto c = fit_aa(X, 4, o);
  CHECK(c.rss == b.rss);
}

TEST_CASE("invalid archetype fits are rejected") {
  Matrix X(4, 3);
  X.setOnes();
  X(1, 1) = 0;
  X(2, 0) = 0;
  CHECK_THROWS_AS(fit_aa(X, 0), dimension_error);
  CHECK_THROWS_AS(fit_aa(X, 5), cardinality_error);
  AAOptions bad;
  bad.restarts = 0;
  CHECK_THROWS_AS(fit_aa(X, 2, bad), config_error);
  bad = {};
  bad.tol = 0.0;
  CHECK_THROWS_AS(fit_aa(X, 2, bad), config_error);
  bad = {};
  bad.max_iter = 0;
  CHECK_THROWS_AS(fit_aa(X, 2, bad), config_error);
  Matrix Y = X;
  Y(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(fit_aa(Y, 2), numeric_error);
}
