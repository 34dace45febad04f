#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gpdp/errors.hpp"
#include "gpdp/smoothing.hpp"

using gpdp::LipschitzConstants;
using gpdp::SmoothingParams;
using gpdp::Vec;

namespace {

// Unrolled backward recursion for the stage Lipschitz constants, kept
// independent of the closed form under test.
std::vector<double> recursion_reference(int T, double lambda, int m,
                                        const LipschitzConstants& k) {
  std::vector<double> L(T + 1);
  L[T] = gpdp::lipschitz_h_tilde(lambda, m, k.L_f1, k.L_f2, k.f1_sup, k.f2_sup) + k.L_h;
  for (int t = T - 1; t >= 0; --t) L[t] = (k.L_c + k.L_q * L[t + 1]) * (1.0 + k.L_psi);
  return L;
}

}  // namespace

TEST_CASE("g_eval ramp in one dimension") {
  const SmoothingParams s = gpdp::make_smoothing(10.0, {0.0});
  CHECK(gpdp::g_eval({-0.2}, s) == 1.0);
  CHECK(gpdp::g_eval({-0.1}, s) == 1.0);  // exactly at the top of the ramp
  CHECK(gpdp::g_eval({-0.05}, s) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(gpdp::g_eval({0.0}, s) == 0.0);
  CHECK(gpdp::g_eval({0.05}, s) == 0.0);
}

TEST_CASE("g_eval is the product of per-coordinate factors") {
  const SmoothingParams s = gpdp::make_smoothing(4.0, {1.0, 2.0});
  const double g0 = gpdp::g_eval({0.875, -5.0}, s);  // ramp at 0.5 in coord 0
  CHECK(g0 == doctest::Approx(0.5).epsilon(1e-15));
  const double g = gpdp::g_eval({0.875, 1.9375}, s);  // 0.5 * 0.25
  CHECK(g == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("g_eval range and monotonicity properties") {
  const SmoothingParams s = gpdp::make_smoothing(7.0, {0.3, -1.2});
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int it = 0; it < 20000; ++it) {
    Vec x{u(rng), u(rng)};
    const double g = gpdp::g_eval(x, s);
    CHECK(g >= 0.0);
    CHECK(g <= 1.0);
    Vec y = x;
    y[it % 2] += 0.25;  // moving up any coordinate cannot increase g
    CHECK(gpdp::g_eval(y, s) <= g + 1e-15);
  }
}

TEST_CASE("smoothing region is exactly where g differs from the indicator") {
  const SmoothingParams s = gpdp::make_smoothing(5.0, {0.5, 0.0});
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int inside = 0;
  for (int it = 0; it < 20000; ++it) {
    Vec x{u(rng), u(rng)};
    bool below = x[0] < s.b[0] && x[1] < s.b[1];
    const double ind = below ? 1.0 : 0.0;
    const bool region = gpdp::in_smoothing_region(x, s);
    CHECK(region == (gpdp::g_eval(x, s) != ind));
    if (!region) CHECK(gpdp::g_eval(x, s) == ind);
    inside += region;
  }
  CHECK(inside > 0);
}

TEST_CASE("empirical Lipschitz bound of the smoothed indicator") {
  const double lambda = 5.0;
  const SmoothingParams s = gpdp::make_smoothing(lambda, {0.2, -0.4});
  const double L = gpdp::lipschitz_h_tilde(lambda, 2, 0.0, 0.0, 1.0, 0.0);
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int it = 0; it < 100000; ++it) {
    Vec x{u(rng), u(rng)};
    Vec y{u(rng), u(rng)};
    const double dist = std::hypot(x[0] - y[0], x[1] - y[1]);
    CHECK(std::fabs(gpdp::g_eval(x, s) - gpdp::g_eval(y, s)) <= L * dist + 1e-12);
  }
}

TEST_CASE("lipschitz_h_tilde closed form") {
  CHECK(gpdp::lipschitz_h_tilde(20.0, 2, 0.0, 0.0, 1.0, 0.0) == 80.0);
  CHECK(gpdp::lipschitz_h_tilde(10.0, 3, 0.5, 0.25, 2.0, 1.0) ==
        doctest::Approx(0.75 + 2.0 * 10.0 * 3 * 2.0).epsilon(1e-15));
  CHECK_THROWS_AS(gpdp::lipschitz_h_tilde(1.0, 2, 0, 0, 1, 0), gpdp::invalid_input);
}

TEST_CASE("stage constants: closed form equals the unrolled recursion") {
  std::mt19937 rng(14);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int it = 0; it < 100; ++it) {
    LipschitzConstants k;
    k.L_c = u01(rng);
    k.L_psi = 0.5 * u01(rng);
    k.L_q = 0.5 + u01(rng);
    k.L_h = u01(rng);
    k.L_f1 = u01(rng);
    k.L_f2 = u01(rng);
    k.f1_sup = 0.5 + u01(rng);
    k.f2_sup = u01(rng);
    const double lambda = 1.5 + 30.0 * u01(rng);
    const int m = 1 + static_cast<int>(3.0 * u01(rng));
    const int T = 1 + static_cast<int>(6.0 * u01(rng));
    const auto ref = recursion_reference(T, lambda, m, k);
    for (int t = 0; t <= T; ++t) {
      const double closed = gpdp::lipschitz_J_tilde(t, T, lambda, m, k);
      CHECK(std::fabs(closed - ref[t]) <= 1e-12 * std::fabs(ref[t]));
    }
  }
}

TEST_CASE("plain product instance: every stage constant collapses to 2 lambda m") {
  for (double lambda : {2.0, 20.0, 40.0}) {
    for (int T : {1, 4, 7}) {
      const auto ledger = gpdp::make_lipschitz_ledger(lambda, 2, T);
      const double expect = 2.0 * lambda * 2;
      CHECK(ledger.L_h_tilde == expect);
      for (int t = 0; t <= T; ++t) CHECK(ledger.L_J_tilde[t] == expect);
    }
  }
}

TEST_CASE("ledger terminal identity holds bitwise") {
  LipschitzConstants k;
  k.L_h = 0.37;
  k.L_f1 = 0.11;
  const auto ledger = gpdp::make_lipschitz_ledger(13.7, 3, 5, k);
  const double expect =
      gpdp::lipschitz_h_tilde(13.7, 3, k.L_f1, k.L_f2, k.f1_sup, k.f2_sup) + k.L_h;
  CHECK(ledger.L_J_tilde[5] == expect);
}

TEST_CASE("smoothing parameter validation") {
  CHECK_THROWS_AS(gpdp::make_smoothing(1.0, {0.0}), gpdp::invalid_input);
  CHECK_THROWS_AS(gpdp::make_smoothing(0.5, {0.0}), gpdp::invalid_input);
  CHECK_THROWS_AS(gpdp::make_smoothing(2.0, {}), gpdp::invalid_input);
  CHECK_NOTHROW(gpdp::make_smoothing(1.0000001, {0.0}));
}
