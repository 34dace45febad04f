#include "gpdp/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gpdp/errors.hpp"

namespace gpdp {

SmoothingParams make_smoothing(double lambda, Vec b) {
  if (!(lambda > 1.0))
    throw invalid_input("smoothing sharpness lambda must exceed 1, got " +
                        std::to_string(lambda));
  if (b.empty()) throw invalid_input("smoothing offsets b must be non-empty");
  return SmoothingParams{lambda, std::move(b)};
}

double g_eval(const Vec& x, const SmoothingParams& s) {
  if (x.size() != s.b.size()) throw invalid_input("g_eval: dimension mismatch");
  double acc = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = s.lambda * (s.b[i] - x[i]);
    const double gi = u >= 1.0 ? 1.0 : (u <= 0.0 ? 0.0 : u);
    acc *= gi;
    if (acc == 0.0) return 0.0;
  }
  return acc;
}

bool in_smoothing_region(const Vec& x, const SmoothingParams& s) {
  if (x.size() != s.b.size())
    throw invalid_input("in_smoothing_region: dimension mismatch");
  bool strictly_below = true;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] < s.b[i])) {
      strictly_below = false;
      break;
    }
  return g_eval(x, s) != (strictly_below ? 1.0 : 0.0);
}

double lipschitz_h_tilde(double lambda, int m, double L_f1, double L_f2, double f1_sup,
                         double f2_sup) {
  if (!(lambda > 1.0)) throw invalid_input("lipschitz_h_tilde: lambda must exceed 1");
  if (m < 1) throw invalid_input("lipschitz_h_tilde: m must be positive");
  return L_f1 + L_f2 + 2.0 * lambda * m * std::max(f1_sup, f2_sup);
}

double lipschitz_J_tilde(int t, int T, double lambda, int m, const LipschitzConstants& k) {
  if (t < 0 || t > T) throw invalid_input("lipschitz_J_tilde: stage t outside [0, T]");
  const double growth = k.L_q * (1.0 + k.L_psi);
  const double bracket =
      lipschitz_h_tilde(lambda, m, k.L_f1, k.L_f2, k.f1_sup, k.f2_sup) + k.L_h;
  double geo = 0.0;
  double pw = 1.0;
  for (int i = 1; i <= T - t; ++i) {
    geo += pw;
    pw *= growth;
  }
  // pw now holds growth^(T-t).
  return pw * bracket + k.L_c * (1.0 + k.L_psi) * geo;
}

LipschitzLedger make_lipschitz_ledger(double lambda, int m, int T,
                                      const LipschitzConstants& k) {
  if (T < 1) throw invalid_input("make_lipschitz_ledger: horizon T must be positive");
  LipschitzLedger ledger;
  ledger.constants = k;
  ledger.L_h_tilde = lipschitz_h_tilde(lambda, m, k.L_f1, k.L_f2, k.f1_sup, k.f2_sup);
  ledger.L_J_tilde.resize(T + 1);
  for (int t = 0; t <= T; ++t) ledger.L_J_tilde[t] = lipschitz_J_tilde(t, T, lambda, m, k);
  return ledger;
}

}  // namespace gpdp
