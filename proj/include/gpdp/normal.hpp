#pragma once

namespace gpdp {

// Standard normal CDF, accurate to ~1e-15 absolute, clamped to [0, 1] and
// non-decreasing as implemented. Built on a rational erf/erfc approximation
// (Cody's classic three-branch scheme).
double std_normal_cdf(double x);

// Standard normal density.
double std_normal_pdf(double x);

// Upper bound on the standard normal upper tail P(Z > t) for t > 0:
// exp(-t^2/2) / t. Throws invalid_input for t <= 0 where the inequality
// gives no information.
double gaussian_tail_bound(double t);

namespace detail {
// Rational-approximation erf/erfc cores, exposed for accuracy tests.
double erf_cody(double x);
double erfc_cody(double x);
}  // namespace detail

}  // namespace gpdp
