#include "gpdp/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "gpdp/errors.hpp"

namespace gpdp {

Mat cholesky_lower(const Mat& sigma) {
  const std::size_t n = sigma.rows();
  if (n == 0 || sigma.cols() != n) throw invalid_input("cholesky: matrix must be square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double scale = std::max({std::fabs(sigma.at(i, i)), std::fabs(sigma.at(j, j)), 1.0});
      if (std::fabs(sigma.at(i, j) - sigma.at(j, i)) > 1e-12 * scale)
        throw invalid_input("cholesky: matrix is not symmetric at (" + std::to_string(i) +
                            ", " + std::to_string(j) + ")");
    }
  Mat L(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    double diag = sigma.at(k, k);
    for (std::size_t j = 0; j < k; ++j) diag -= L.at(k, j) * L.at(k, j);
    if (!(diag > 0.0))
      throw invalid_input("cholesky: matrix is not positive definite (pivot " +
                          std::to_string(k) + " is " + std::to_string(diag) + ")");
    L.at(k, k) = std::sqrt(diag);
    for (std::size_t i = k + 1; i < n; ++i) {
      double s = sigma.at(i, k);
      for (std::size_t j = 0; j < k; ++j) s -= L.at(i, j) * L.at(k, j);
      L.at(i, k) = s / L.at(k, k);
    }
  }
  return L;
}

PolytopeProblem whiten(const GaussianSpec& g, const PolytopeProblem& p) {
  validate_problem_shape(p);
  const std::size_t n = p.A.cols();
  if (g.mean.size() != n)
    throw invalid_input("whiten: mean length " + std::to_string(g.mean.size()) +
                        " does not match constraint columns " + std::to_string(n));
  if (g.covariance.rows() != n || g.covariance.cols() != n)
    throw invalid_input("whiten: covariance must be " + std::to_string(n) + "x" +
                        std::to_string(n));
  const Mat C = cholesky_lower(g.covariance);
  PolytopeProblem out;
  out.A = matmul(p.A, C);
  out.b = p.b;
  const Vec shift = matvec(p.A, g.mean);
  for (std::size_t i = 0; i < out.b.size(); ++i) out.b[i] -= shift[i];
  return out;
}

namespace {

double min_abs_against_rows(const Mat& A, const Vec& r) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < A.rows(); ++i) {
    double dot = 0.0;
    for (std::size_t j = 0; j < A.cols(); ++j) dot += A.at(i, j) * r[j];
    worst = std::min(worst, std::fabs(dot));
  }
  return worst;
}

double norm2(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

bool normalize(Vec& v) {
  const double n = norm2(v);
  if (n <= 0.0 || !std::isfinite(n)) return false;
  for (double& x : v) x /= n;
  return true;
}

// Unit direction r maximizing min_i |A_i . r| over a deterministic candidate
// set: coordinate directions, normalized rows, a sign-aligned row average,
// and a fixed-seed batch of random directions. The maximizer is what the
// last column of A becomes after rotation, so a larger score both keeps the
// recursion well-conditioned and tightens the error bound.
Vec pick_last_direction(const Mat& A) {
  const std::size_t n = A.cols();
  std::vector<Vec> candidates;

  for (std::size_t j = 0; j < n; ++j) {
    Vec e(n, 0.0);
    // Prefer the current last column's slot so the no-op case wins ties.
    e[(n - 1 + j) % n] = 1.0;
    candidates.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < A.rows(); ++i) {
    Vec r = A.row(i);
    if (normalize(r)) candidates.push_back(std::move(r));
  }
  {
    Vec avg(n, 0.0);
    const Vec first = A.row(0);
    for (std::size_t i = 0; i < A.rows(); ++i) {
      Vec r = A.row(i);
      if (!normalize(r)) continue;
      double align = 0.0;
      for (std::size_t j = 0; j < n; ++j) align += r[j] * first[j];
      const double sgn = align < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n; ++j) avg[j] += sgn * r[j];
    }
    if (normalize(avg)) candidates.push_back(std::move(avg));
  }
  std::mt19937 rng(0x5eedu);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 0; k < 256; ++k) {
    Vec r(n);
    for (double& x : r) x = gauss(rng);
    if (normalize(r)) candidates.push_back(std::move(r));
  }

  Vec best;
  double best_score = -1.0;
  for (auto& c : candidates) {
    const double score = min_abs_against_rows(A, c);
    if (score > best_score) {
      best_score = score;
      best = std::move(c);
    }
  }
  if (best_score <= 0.0)
    throw invalid_input(
        "normalize_last_column: no direction separates all constraint rows from zero");
  return best;
}

// Householder reflection whose last column is the unit vector r.
Mat reflection_with_last_column(const Vec& r) {
  const std::size_t n = r.size();
  Mat R(n, n);
  Vec v = r;
  v[n - 1] -= 1.0;  // v = r - e_n
  double vv = 0.0;
  for (double x : v) vv += x * x;
  if (vv < 1e-28) {
    for (std::size_t i = 0; i < n; ++i) R.at(i, i) = 1.0;
    return R;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      R.at(i, j) = (i == j ? 1.0 : 0.0) - 2.0 * v[i] * v[j] / vv;
  return R;
}

}  // namespace

NormalizeResult normalize_last_column_ex(const PolytopeProblem& p) {
  validate_problem_shape(p);
  const std::size_t m = p.A.rows();

  for (std::size_t i = 0; i < m; ++i) {
    bool all_zero = true;
    for (std::size_t j = 0; j < p.A.cols(); ++j)
      if (p.A.at(i, j) != 0.0) {
        all_zero = false;
        break;
      }
    if (all_zero)
      throw invalid_input("normalize_last_column: constraint row " + std::to_string(i) +
                          " is identically zero (vacuous if b >= 0, infeasible otherwise); "
                          "remove it before solving");
  }

  NormalizeResult res;

  std::vector<int> kept;
  for (std::size_t j = 0; j < p.A.cols(); ++j) {
    bool all_zero = true;
    for (std::size_t i = 0; i < m; ++i)
      if (p.A.at(i, j) != 0.0) {
        all_zero = false;
        break;
      }
    if (all_zero) {
      res.dropped_columns.push_back(static_cast<int>(j));
      res.notes.push_back("dropped all-zero noise column " + std::to_string(j) +
                          "; an unused standard Gaussian coordinate integrates out");
    } else {
      kept.push_back(static_cast<int>(j));
    }
  }

  Mat A(m, kept.size());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < kept.size(); ++j)
      A.at(i, j) = p.A.at(i, static_cast<std::size_t>(kept[j]));
  const std::size_t n = kept.size();

  bool last_ok = true;
  for (std::size_t i = 0; i < m; ++i)
    if (A.at(i, n - 1) == 0.0) {
      last_ok = false;
      break;
    }

  if (last_ok) {
    res.problem = PolytopeProblem{std::move(A), p.b};
    res.rotation = Mat(n, n);
    for (std::size_t i = 0; i < n; ++i) res.rotation.at(i, i) = 1.0;
    return res;
  }

  const Vec r = pick_last_direction(A);
  res.rotation = reflection_with_last_column(r);
  res.problem = PolytopeProblem{matmul(A, res.rotation), p.b};

  double new_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i)
    new_min = std::min(new_min, std::fabs(res.problem.A.at(i, n - 1)));
  res.notes.push_back(
      "rotated noise coordinates (orthogonal, mass-preserving) so the last column has no "
      "zero entries; min |last-column entry| = " +
      std::to_string(new_min));
  return res;
}

PolytopeProblem normalize_last_column(const PolytopeProblem& p) {
  return normalize_last_column_ex(p).problem;
}

}  // namespace gpdp
