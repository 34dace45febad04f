#include "gpdp/oracle.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gpdp/errors.hpp"
#include "gpdp/normal.hpp"

namespace gpdp {
namespace {

constexpr double kTwoPi = 6.28318530717958647692;
constexpr double kQuadLimit = 9.0;

// One standard normal pair per two raw draws; u in (0, 1] keeps the log
// finite, v in [0, 1).
struct BoxMuller {
  std::mt19937_64 rng;
  explicit BoxMuller(std::uint64_t seed) : rng(seed) {}
  void pair(double* z1, double* z2) {
    const double u =
        (static_cast<double>(rng() >> 11) + 1.0) * 0x1p-53;
    const double v = static_cast<double>(rng() >> 11) * 0x1p-53;
    const double r = std::sqrt(-2.0 * std::log(u));
    *z1 = r * std::cos(kTwoPi * v);
    *z2 = r * std::sin(kTwoPi * v);
  }
};

}  // namespace

McResult mc_estimate(const PolytopeProblem& p, std::int64_t samples, std::uint64_t seed) {
  validate_problem_shape(p);
  if (samples < 1) throw invalid_input("mc_estimate: sample count must be positive");
  const std::size_t m = p.A.rows();
  const std::size_t T = p.A.cols();

  BoxMuller bm(seed);
  Vec z(T);
  std::int64_t hits = 0;
  for (std::int64_t s = 0; s < samples; ++s) {
    for (std::size_t j = 0; j < T; j += 2) {
      double z1, z2;
      bm.pair(&z1, &z2);
      z[j] = z1;
      if (j + 1 < T) z[j + 1] = z2;
    }
    bool inside = true;
    for (std::size_t i = 0; i < m && inside; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < T; ++j) dot += p.A.at(i, j) * z[j];
      inside = dot <= p.b[i];
    }
    if (inside) ++hits;
  }

  McResult res;
  res.samples = samples;
  res.seed = seed;
  res.estimate = static_cast<double>(hits) / static_cast<double>(samples);
  res.std_error =
      std::sqrt(res.estimate * (1.0 - res.estimate) / static_cast<double>(samples));
  return res;
}

namespace {

// Probability mass of the innermost coordinate given the outer ones: the
// constraints reduce to an interval (or emptiness) in the last coordinate.
double innermost_mass(const PolytopeProblem& p, const Vec& outer) {
  const std::size_t m = p.A.rows();
  const std::size_t T = p.A.cols();
  double lo = -kQuadLimit, hi = kQuadLimit;
  for (std::size_t i = 0; i < m; ++i) {
    double rhs = p.b[i];
    for (std::size_t j = 0; j + 1 < T; ++j) rhs -= p.A.at(i, j) * outer[j];
    const double a = p.A.at(i, T - 1);
    if (a == 0.0) {
      if (rhs < 0.0) return 0.0;
    } else if (a > 0.0) {
      hi = std::min(hi, rhs / a);
    } else {
      lo = std::max(lo, rhs / a);
    }
  }
  if (hi <= lo) return 0.0;
  return std_normal_cdf(hi) - std_normal_cdf(lo);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  const double mid = 0.5 * (a + b);
  const double lm = 0.5 * (a + mid);
  const double rm = 0.5 * (mid + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (mid - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - mid) / 6.0 * (fm + 4.0 * frm + fb);
  const double split = left + right;
  if (depth <= 0 || std::fabs(split - whole) <= 15.0 * tol)
    return split + (split - whole) / 15.0;
  return adaptive_simpson(f, a, mid, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, mid, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a);
  const double fm = f(0.5 * (a + b));
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

double quad_recurse(const PolytopeProblem& p, Vec& outer, std::size_t depth, double tol) {
  const std::size_t T = p.A.cols();
  if (depth + 1 == T) return innermost_mass(p, outer);
  auto f = [&](double z) {
    outer[depth] = z;
    return std_normal_pdf(z) * quad_recurse(p, outer, depth + 1, tol);
  };
  return integrate(f, -kQuadLimit, kQuadLimit, tol);
}

}  // namespace

double quadrature_estimate(const PolytopeProblem& p, double tol) {
  validate_problem_shape(p);
  const std::size_t T = p.A.cols();
  if (T > 3)
    throw invalid_input("quadrature_estimate only supports horizons up to 3, got " +
                        std::to_string(T));
  if (!(tol >= 1e-8))
    throw invalid_input("quadrature_estimate: tolerance must be at least 1e-8");
  Vec outer(T > 0 ? T - 1 : 0, 0.0);
  // Split the budget across nesting levels.
  const double level_tol = T >= 3 ? 0.2 * tol : tol;
  return quad_recurse(p, outer, 0, level_tol);
}

}  // namespace gpdp
