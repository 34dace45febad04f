#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gpdp/grid.hpp"
#include "gpdp/kernels.hpp"
#include "gpdp/smoothing.hpp"
#include "gpdp/types.hpp"

namespace gpdp {

// Discretized value function at one stage: one value in [0, 1] per grid cell,
// indexed by flat cell index.
struct ValueTable {
  int t = 0;
  std::shared_ptr<const Grid> grid;
  std::vector<double> values;
};

// The three additive terms of the a-priori sup-norm error bound and their
// total: theta (smoothing bias), alpha (truncation escape over all stages),
// beta (state-discretization drift times the accumulated Lipschitz weight).
struct ErrorBudget {
  double theta_term = 0.0;
  double alpha_term = 0.0;
  double beta_term = 0.0;
  double total = 0.0;
};

struct SolveOptions {
  std::int64_t cell_budget = kDefaultCellBudget;
  int threads = 0;  // 0 = all available
  kernels::Kind kernel = kernels::Kind::kAuto;
};

struct SolveReport {
  double estimate = 0.0;
  ErrorBudget bound;
  std::vector<std::int64_t> grid_cells;  // total cells per stage, index 0..T
  std::int64_t cells_total = 0;
  double escaped_mass_max = 0.0;  // worst per-state escaped mass over all steps
  double seconds = 0.0;           // wall time of the solve
  std::string kernel_name;
  std::vector<std::string> notes;
};

// Smoothed indicator evaluated at every cell representative. Computed from
// per-dimension ramp profiles; bit-identical to calling g_eval pointwise.
ValueTable terminal_values(const Grid& grid, const SmoothingParams& s,
                           const SolveOptions& opts = {});

struct BackwardResult {
  ValueTable table;
  double escaped_mass_max = 0.0;
};

// One backward induction step: for every representative x of grid_t,
// integrates the next-stage table along the line x + column * eps against the
// standard Gaussian. Values escaping the next-stage box contribute zero.
// Summation order is fixed by the plan alone (ascending target row shift,
// then sweep order), so results do not depend on kernel choice or threading.
BackwardResult backward_step_ex(const ValueTable& next, std::shared_ptr<const Grid> grid_t,
                                const Vec& column, const SolveOptions& opts = {});

ValueTable backward_step(const ValueTable& next, const Grid& grid_t, const Vec& column,
                         const SolveOptions& opts = {});

// Full pipeline on standard Gaussian noise: stage boxes, grids with spacing
// tied to beta (refined so all stages share one lattice pitch), terminal
// fill, T backward steps, and the final read-off at the origin, together with
// the a-priori error bound. Requires every entry of A's last column nonzero
// (run normalize_last_column first otherwise).
SolveReport solve(const PolytopeProblem& p, double lambda, double beta,
                  const SolveOptions& opts = {});

// The a-priori bound alone; cheap, no grids are built.
ErrorBudget error_bound(const PolytopeProblem& p, double lambda, double beta);

}  // namespace gpdp
