#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gpdp/grid.hpp"
#include "gpdp/smoothing.hpp"

namespace gpdp {

// Gaussian displacements with |eps| beyond this are booked as escaped mass;
// the neglected two-sided tail is below 1e-18.
inline constexpr double kSweepHalfWidth = 9.0;

// One-step transition distribution of x + a * eps, eps ~ N(0,1), restricted
// to a target grid: per-cell probabilities plus the mass that leaves the box.
struct TransitionRow {
  std::vector<std::pair<std::int64_t, double>> entries;  // ascending cell index
  double escaped_mass = 0.0;
};

// Exact sweep over the cell-edge crossings of the line eps -> x + a eps.
// Preconditions: dimensions agree; every coordinate with a_d == 0 must have
// x_d inside the target box (otherwise no eps can land inside, which is a
// caller error). Probabilities telescope from CDF differences, so the total
// including escaped mass is 1 to within accumulated rounding.
TransitionRow transition_row(const Vec& x, const Vec& a, const Grid& target);

// Exact probability that x + a eps falls where the smoothed indicator
// disagrees with the sharp one. Sweeps the 2m ramp-edge crossings of the
// line, with no truncation.
double smoothing_region_mass(const Vec& x, const Vec& a, const SmoothingParams& s);

}  // namespace gpdp
