#pragma once

#include <cstdint>

#include "gpdp/types.hpp"

namespace gpdp {

struct McResult {
  double estimate = 0.0;
  double std_error = 0.0;  // sqrt(p (1-p) / samples)
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

// Plain Monte Carlo estimate of P(A z <= b) for standard Gaussian z.
// Deterministic for a given seed: one mt19937_64 stream, Box-Muller pairs
// (u, v) -> sqrt(-2 ln u) (cos, sin)(2 pi v) with u drawn from (0, 1] and v
// from [0, 1); an odd horizon discards the spare variate of each final pair.
McResult mc_estimate(const PolytopeProblem& p, std::int64_t samples, std::uint64_t seed);

// Deterministic reference value for horizons T <= 3: the innermost coordinate
// is integrated in closed form as a CDF difference over the feasible
// interval, outer coordinates by adaptive Simpson on [-9, 9] to the requested
// absolute tolerance (tol >= 1e-8). Throws for T > 3.
double quadrature_estimate(const PolytopeProblem& p, double tol);

}  // namespace gpdp
