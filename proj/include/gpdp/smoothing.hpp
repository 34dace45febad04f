#pragma once

#include <vector>

#include "gpdp/linalg.hpp"

namespace gpdp {

// Parameters of the smoothed polytope indicator: per-constraint offsets b and
// a sharpness lambda > 1. Each factor is 1 below b_i - 1/lambda, falls
// linearly to 0 at b_i, and is 0 above.
struct SmoothingParams {
  double lambda;
  Vec b;
};

// Validated constructor; rejects lambda <= 1 and empty b.
SmoothingParams make_smoothing(double lambda, Vec b);

// Product of the per-coordinate ramp factors at x. Exactly 1 on the closed
// region {x_i <= b_i - 1/lambda for all i} and exactly 0 once any x_i >= b_i.
double g_eval(const Vec& x, const SmoothingParams& s);

// True where the smoothed indicator disagrees with the sharp one, i.e. where
// g(x) != 1{x < b componentwise}. Implemented literally as that comparison.
bool in_smoothing_region(const Vec& x, const SmoothingParams& s);

// Additive stage-coupling constants of the value recursion. The shipped
// integrator runs the plain product form: zero couplings, unit kernel
// contraction, terminal factors f1 = 1, f2 = 0.
struct LipschitzConstants {
  double L_c = 0.0;
  double L_psi = 0.0;
  double L_q = 1.0;
  double L_h = 0.0;
  double L_f1 = 0.0;
  double L_f2 = 0.0;
  double f1_sup = 1.0;
  double f2_sup = 0.0;
};

// Lipschitz constant of the smoothed terminal payoff:
// L_f1 + L_f2 + 2 lambda m max(f1_sup, f2_sup).
double lipschitz_h_tilde(double lambda, int m, double L_f1, double L_f2, double f1_sup,
                         double f2_sup);

// Closed-form Lipschitz constant of the stage-t value function,
//   (L_q (1+L_psi))^(T-t) [L_f1 + L_f2 + 2 lambda m max(f1_sup,f2_sup) + L_h]
//     + L_c (1+L_psi) sum_{i=1}^{T-t} (L_q (1+L_psi))^(i-1),
// which unrolls the backward recursion
//   L_T = L_h~ + L_h,   L_t = [L_c + L_q L_{t+1}] (1 + L_psi).
double lipschitz_J_tilde(int t, int T, double lambda, int m, const LipschitzConstants& k);

// All smoothing-related Lipschitz data for one solve: the terminal constant
// and the per-stage constants L_J_tilde[0..T].
struct LipschitzLedger {
  double L_h_tilde;
  std::vector<double> L_J_tilde;
  LipschitzConstants constants;
};

LipschitzLedger make_lipschitz_ledger(double lambda, int m, int T,
                                      const LipschitzConstants& k = {});

}  // namespace gpdp
