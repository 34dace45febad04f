#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "gpdp/errors.hpp"
#include "gpdp/preprocess.hpp"

using gpdp::GaussianSpec;
using gpdp::Mat;
using gpdp::NormalizeResult;
using gpdp::PolytopeProblem;
using gpdp::Vec;

namespace {

bool satisfies(const Mat& A, const Vec& b, const Vec& x) {
  for (std::size_t i = 0; i < A.rows(); ++i) {
    double dot = 0.0;
    for (std::size_t j = 0; j < A.cols(); ++j) dot += A(i, j) * x[j];
    if (dot > b[i]) return false;
  }
  return true;
}

Vec matvec_t(const Mat& R, const Vec& x) {  // R^T x
  Vec y(R.cols(), 0.0);
  for (std::size_t i = 0; i < R.rows(); ++i)
    for (std::size_t j = 0; j < R.cols(); ++j) y[j] += R(i, j) * x[i];
  return y;
}

}  // namespace

TEST_CASE("whiten reproduces the hand-computed affine reduction") {
  // covariance = [[4, 2], [2, 5]] has lower Cholesky [[2, 0], [1, 2]].
  GaussianSpec g{{1.0, -2.0}, Mat{{4.0, 2.0}, {2.0, 5.0}}};
  PolytopeProblem p{Mat{{1.0, 0.0}, {3.0, -1.0}}, {2.0, 0.5}};
  const PolytopeProblem w = gpdp::whiten(g, p);
  // A C: row0 = (1,0) C = (2, 0); row1 = (3,-1) C = (6-1, -2) = (5, -2).
  CHECK(w.A(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(w.A(0, 1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(w.A(1, 0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(w.A(1, 1) == doctest::Approx(-2.0).epsilon(1e-15));
  // b - A mean: (2 - 1, 0.5 - (3 + 2)) = (1, -4.5).
  CHECK(w.b[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w.b[1] == doctest::Approx(-4.5).epsilon(1e-15));
}

TEST_CASE("whiten factorization satisfies C C^T = covariance, random SPD") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int it = 0; it < 50; ++it) {
    const int n = 2 + it % 3;
    Mat M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) = u(rng);
    Mat S(n, n);  // M M^T + n I is SPD and symmetric
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double dot = 0.0;
        for (int k = 0; k < n; ++k) dot += M(i, k) * M(j, k);
        S(i, j) = dot + (i == j ? n : 0.0);
      }
    const Mat C = gpdp::cholesky_lower(S);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double dot = 0.0;
        for (int k = 0; k < n; ++k) dot += C(i, k) * C(j, k);
        CHECK(dot == doctest::Approx(S(i, j)).epsilon(1e-12));
        if (j > i) CHECK(C(i, j) == 0.0);
      }
  }
}

TEST_CASE("whiten rejects bad covariance with a useful message") {
  PolytopeProblem p{Mat{{1.0, 0.0}}, {0.0}};
  CHECK_THROWS_WITH_AS(gpdp::whiten({{0.0, 0.0}, Mat{{1.0, 0.5}, {0.4, 1.0}}}, p),
                       doctest::Contains("symmetric"), gpdp::invalid_input);
  CHECK_THROWS_WITH_AS(gpdp::whiten({{0.0, 0.0}, Mat{{1.0, 2.0}, {2.0, 1.0}}}, p),
                       doctest::Contains("pivot"), gpdp::invalid_input);
  CHECK_THROWS_AS(gpdp::whiten({{0.0}, Mat{{1.0, 0.0}, {0.0, 1.0}}}, p), gpdp::invalid_input);
}

TEST_CASE("normalize_last_column keeps an already-usable matrix fixed") {
  PolytopeProblem p{Mat{{0.5, 0.7, 1.0, 0.9}, {0.2, 0.7, 0.5, 1.0}}, {2.0, 0.5}};
  const NormalizeResult r = gpdp::normalize_last_column_ex(p);
  CHECK(r.dropped_columns.empty());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 4; ++j) CHECK(r.problem.A(i, j) == p.A(i, j));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(r.rotation(i, j) == (i == j ? 1.0 : 0.0));
}

TEST_CASE("normalize_last_column drops all-zero columns") {
  PolytopeProblem p{Mat{{1.0, 0.0, 2.0}, {0.5, 0.0, -1.0}}, {1.0, 1.0}};
  const NormalizeResult r = gpdp::normalize_last_column_ex(p);
  REQUIRE(r.dropped_columns == std::vector<int>{1});
  CHECK(r.problem.A.cols() == 2);
  CHECK(r.problem.A(0, 0) == 1.0);
  CHECK(r.problem.A(0, 1) == 2.0);
  CHECK(r.problem.A(1, 1) == -1.0);
}

TEST_CASE("normalize_last_column rotates out zeros in the last column") {
  // The identity matrix is the canonical hard case: its last column has a zero
  // in every row but the last, and no shear-style fix preserves the mass.
  PolytopeProblem p{Mat{{1.0, 0.0}, {0.0, 1.0}}, {1.0, 1.0}};
  const NormalizeResult r = gpdp::normalize_last_column_ex(p);
  REQUIRE(r.problem.A.cols() == 2);
  double amin = std::fabs(r.problem.A(0, 1));
  amin = std::min(amin, std::fabs(r.problem.A(1, 1)));
  CHECK(amin > 0.1);

  // The rotation is orthogonal.
  const Mat& R = r.rotation;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double dot = 0.0;
      for (int k = 0; k < 2; ++k) dot += R(k, i) * R(k, j);
      CHECK(dot == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    }

  // Membership is preserved pointwise: A x <= b iff A_new (R^T x) <= b,
  // away from a thin band around the boundary where rounding may flip <=.
  std::mt19937 rng(123);
  std::normal_distribution<double> nd;
  int checked = 0;
  for (int it = 0; it < 10000; ++it) {
    const Vec x{nd(rng), nd(rng)};
    double margin = 1e9;
    for (int i = 0; i < 2; ++i) {
      double dot = 0.0;
      for (int j = 0; j < 2; ++j) dot += p.A(i, j) * x[j];
      margin = std::min(margin, std::fabs(dot - p.b[i]));
    }
    if (margin < 1e-9) continue;
    ++checked;
    CHECK(satisfies(p.A, p.b, x) == satisfies(r.problem.A, r.problem.b, matvec_t(R, x)));
  }
  CHECK(checked > 9000);
}

TEST_CASE("normalize_last_column membership equivalence on random instances") {
  std::mt19937 rng(456);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::normal_distribution<double> nd;
  for (int inst = 0; inst < 20; ++inst) {
    const int m = 1 + inst % 3;
    const int T = 2 + inst % 2;
    Mat A(m, T);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < T; ++j) A(i, j) = u(rng);
    // Force zeros into the last column so the rotation path is exercised.
    A(inst % m, T - 1) = 0.0;
    bool zero_row = false;
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int j = 0; j < T; ++j) s += std::fabs(A(i, j));
      zero_row |= s == 0.0;
    }
    if (zero_row) continue;
    Vec b(static_cast<std::size_t>(m));
    for (auto& v : b) v = u(rng);
    PolytopeProblem p{A, b};
    const NormalizeResult r = gpdp::normalize_last_column_ex(p);
    for (int i = 0; i < m; ++i) CHECK(std::fabs(r.problem.A(i, r.problem.A.cols() - 1)) > 0.0);
    for (int it = 0; it < 500; ++it) {
      Vec x(static_cast<std::size_t>(T));
      for (auto& v : x) v = nd(rng);
      double margin = 1e9;
      for (int i = 0; i < m; ++i) {
        double dot = 0.0;
        for (int j = 0; j < T; ++j) dot += A(i, j) * x[j];
        margin = std::min(margin, std::fabs(dot - b[static_cast<std::size_t>(i)]));
      }
      if (margin < 1e-9) continue;
      Vec z = matvec_t(r.rotation, x);  // dropped columns never happen here
      CHECK(satisfies(A, b, x) == satisfies(r.problem.A, r.problem.b, z));
    }
  }
}

TEST_CASE("normalize_last_column rejects zero rows and zero matrices") {
  CHECK_THROWS_WITH_AS(
      gpdp::normalize_last_column(PolytopeProblem{Mat{{1.0, 1.0}, {0.0, 0.0}}, {1.0, 1.0}}),
      doctest::Contains("vacuous"), gpdp::invalid_input);
  CHECK_THROWS_AS(gpdp::normalize_last_column(PolytopeProblem{Mat{{0.0, 0.0}}, {1.0}}),
                  gpdp::invalid_input);
}
