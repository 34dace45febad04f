#include "gpdp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gpdp/errors.hpp"
#include "gpdp/normal.hpp"

namespace gpdp {
namespace {

constexpr double kDuplicateEps = 1e-14;

// Collects the eps values in (-lim, lim) at which x_d + a_d eps crosses a
// cell edge of dimension d, for every applicable dimension.
void collect_edge_crossings(const Vec& x, const Vec& a, const Grid& g, double lim,
                            std::vector<double>& out) {
  for (int d = 0; d < g.dims(); ++d) {
    if (a[d] == 0.0) continue;
    const auto& edges = g.edges(d);
    for (double e : edges) {
      const double eps = (e - x[d]) / a[d];
      if (eps > -lim && eps < lim) out.push_back(eps);
    }
  }
}

}  // namespace

TransitionRow transition_row(const Vec& x, const Vec& a, const Grid& target) {
  const int m = target.dims();
  if (static_cast<int>(x.size()) != m || static_cast<int>(a.size()) != m)
    throw invalid_input("transition_row: dimension mismatch");
  for (int d = 0; d < m; ++d)
    if (a[d] == 0.0 && target.locate(d, x[d]) < 0)
      throw invalid_input("transition_row: coordinate " + std::to_string(d) +
                          " is frozen (a_d = 0) outside the target box");

  std::vector<double> cuts;
  collect_edge_crossings(x, a, target, kSweepHalfWidth, cuts);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double p, double q) { return q - p <= kDuplicateEps; }),
             cuts.end());

  // Segment boundaries, outermost pinned to the sweep window.
  std::vector<double> bounds;
  bounds.reserve(cuts.size() + 2);
  bounds.push_back(-kSweepHalfWidth);
  for (double c : cuts) bounds.push_back(c);
  bounds.push_back(kSweepHalfWidth);

  TransitionRow row;
  row.escaped_mass = std_normal_cdf(-kSweepHalfWidth) + (1.0 - std_normal_cdf(kSweepHalfWidth));

  double phi_lo = std_normal_cdf(bounds[0]);
  Vec y(static_cast<std::size_t>(m));
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    const double phi_hi = std_normal_cdf(bounds[k + 1]);
    const double mass = phi_hi - phi_lo;
    phi_lo = phi_hi;
    const double eps_mid = 0.5 * (bounds[k] + bounds[k + 1]);
    std::int64_t flat = 0;
    bool inside = true;
    for (int d = 0; d < m; ++d) {
      y[d] = x[d] + a[d] * eps_mid;
      const std::int64_t i = target.locate(d, y[d]);
      if (i < 0) {
        inside = false;
        break;
      }
      flat += i * target.stride(d);
    }
    if (!inside) {
      row.escaped_mass += mass;
    } else if (mass > 0.0) {
      if (!row.entries.empty() && row.entries.back().first == flat)
        row.entries.back().second += mass;
      else
        row.entries.emplace_back(flat, mass);
    }
  }

  std::sort(row.entries.begin(), row.entries.end());
  // A line visits each cell over one contiguous eps range, but merged
  // duplicate cuts can split a visit; recombine after sorting.
  std::size_t w = 0;
  for (std::size_t r = 0; r < row.entries.size(); ++r) {
    if (w > 0 && row.entries[w - 1].first == row.entries[r].first)
      row.entries[w - 1].second += row.entries[r].second;
    else
      row.entries[w++] = row.entries[r];
  }
  row.entries.resize(w);
  return row;
}

double smoothing_region_mass(const Vec& x, const Vec& a, const SmoothingParams& s) {
  const std::size_t m = s.b.size();
  if (x.size() != m || a.size() != m)
    throw invalid_input("smoothing_region_mass: dimension mismatch");

  std::vector<double> cuts;
  for (std::size_t d = 0; d < m; ++d) {
    if (a[d] == 0.0) continue;
    cuts.push_back((s.b[d] - x[d]) / a[d]);
    cuts.push_back((s.b[d] - 1.0 / s.lambda - x[d]) / a[d]);
  }
  std::sort(cuts.begin(), cuts.end());

  Vec y(m);
  auto region_at = [&](double eps) {
    for (std::size_t d = 0; d < m; ++d) y[d] = x[d] + a[d] * eps;
    return in_smoothing_region(y, s);
  };

  if (cuts.empty()) return region_at(0.0) ? 1.0 : 0.0;

  double mass = 0.0;
  // Left tail, interior segments, right tail; each tested at a point that is
  // strictly inside the segment.
  if (region_at(cuts.front() - 1.0)) mass += std_normal_cdf(cuts.front());
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] <= cuts[k]) continue;
    if (region_at(0.5 * (cuts[k] + cuts[k + 1])))
      mass += std_normal_cdf(cuts[k + 1]) - std_normal_cdf(cuts[k]);
  }
  if (region_at(cuts.back() + 1.0)) mass += 1.0 - std_normal_cdf(cuts.back());
  return mass;
}

}  // namespace gpdp
