#include "gpdp/dp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <limits>
#include <thread>

#include "gpdp/errors.hpp"
#include "gpdp/kernel.hpp"
#include "gpdp/normal.hpp"

namespace gpdp {
namespace {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(begin, end, slot) over a contiguous partition of [0, count).
// Writes from different slots must target disjoint data.
void parallel_chunks(std::int64_t count, int threads,
                     const std::function<void(std::int64_t, std::int64_t, int)>& fn) {
  threads = std::min<std::int64_t>(threads, count);
  if (threads <= 1) {
    if (count > 0) fn(0, count, 0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  const std::int64_t chunk = (count + threads - 1) / threads;
  for (int s = 0; s < threads; ++s) {
    const std::int64_t begin = s * chunk;
    const std::int64_t end = std::min<std::int64_t>(begin + chunk, count);
    if (begin >= end) break;
    pool.emplace_back(fn, begin, end, s);
  }
  for (auto& th : pool) th.join();
}

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

// ---------------------------------------------------------------------------
// General per-state evaluation: exact edge sweep via transition_row.

double eval_state_general(const Vec& x, const Vec& column, const ValueTable& next,
                          double* escaped) {
  const TransitionRow row = transition_row(x, column, *next.grid);
  double acc = 0.0;
  for (const auto& [idx, mass] : row.entries)
    acc += mass * next.values[static_cast<std::size_t>(idx)];
  *escaped = row.escaped_mass;
  return clamp01(acc);
}

// ---------------------------------------------------------------------------
// Banded lattice fast path. When source representatives and target edges live
// on one shared pitch per dimension, every state crosses target edges along
// shifts of one arithmetic progression: state k meets edge j at
// eps = E(j - k) with E(u) = (target_lo + u h - rep_0) / a. Between two
// consecutive crossings of the merged sweep the whole source lattice
// therefore maps onto the target lattice by one fixed integer shift per
// dimension, so each segment becomes a weighted row addition applied to every
// source row. Both tables stream in layout order; no per-state gathers.

struct FastDim {
  double a = 0.0;
  std::int64_t n_src = 0;
  std::int64_t n_tgt = 0;
  std::int64_t u_min = 0, u_max = 0;  // retained crossing edge indices
  std::int64_t frozen_cell = 0;       // target cell of rep 0 when a == 0
  std::vector<double> eps;            // crossing positions, ascending
};

struct FastPlan {
  int m = 0;
  FastDim dim[2];
  // One record per sweep segment with nonzero mass, stably sorted by the row
  // shift c1: segment s sends state (i0, i1) to target cell
  // (c0[s] + i0, c1[s] + i1) and carries Gaussian mass dphi[s].
  std::vector<double> dphi;
  std::vector<std::int32_t> c0;
  std::vector<std::int32_t> c1;
  std::int64_t c1_lo = 0;
  std::vector<std::int64_t> bucket_first;

  // Index of the first sorted segment whose row shift is at least c.
  std::int64_t seg_begin(std::int64_t c) const {
    const std::int64_t b = c - c1_lo;
    const std::int64_t nb = static_cast<std::int64_t>(bucket_first.size()) - 1;
    if (b <= 0) return 0;
    if (b >= nb) return bucket_first[static_cast<std::size_t>(nb)];
    return bucket_first[static_cast<std::size_t>(b)];
  }
};

// Builds the banded plan; returns false when this step does not qualify
// (dimension > 2, mismatched pitch, or a degenerate layout), leaving the
// exact per-state sweep to handle it.
bool plan_fast_step(const ValueTable& next, const Grid& src, const Vec& column,
                    FastPlan& plan) {
  const Grid& tgt = *next.grid;
  const int m = tgt.dims();
  if (m > 2) return false;
  if (tgt.stride(0) != 1) return false;
  plan.m = m;

  for (int d = 0; d < m; ++d) {
    FastDim& fd = plan.dim[d];
    fd.a = column[d];
    fd.n_src = src.cells(d);
    fd.n_tgt = tgt.cells(d);
    if (fd.n_src > (std::numeric_limits<std::int32_t>::max)() / 4 ||
        fd.n_tgt > (std::numeric_limits<std::int32_t>::max)() / 4)
      return false;
    if (fd.a == 0.0) {
      // A frozen coordinate pins every source cell to one target cell; the
      // banded walk needs those assignments to share a single integer shift.
      fd.frozen_cell = tgt.locate(d, src.rep(d, 0));
      if (fd.frozen_cell < 0) return false;
      for (std::int64_t k = 1; k < fd.n_src; ++k)
        if (tgt.locate(d, src.rep(d, k)) != fd.frozen_cell + k) return false;
      continue;
    }
    const double h = tgt.spacing(d);
    if (!(h > 0.0)) return false;
    if (fd.n_src > 1 && std::fabs(src.spacing(d) - h) > 1e-9 * h) return false;

    const double lo = tgt.box().lo[d];
    const double rep0 = src.rep(d, 0);
    auto eps_at = [&](std::int64_t u) {
      return (lo + static_cast<double>(u) * h - rep0) / fd.a;
    };
    auto inside = [&](std::int64_t u) {
      const double e = eps_at(u);
      return e > -kSweepHalfWidth && e < kSweepHalfWidth;
    };
    const std::int64_t clip_lo = -(fd.n_src - 1);
    const std::int64_t clip_hi = fd.n_tgt;
    const double r1 = (-kSweepHalfWidth * fd.a + rep0 - lo) / h;
    const double r2 = (kSweepHalfWidth * fd.a + rep0 - lo) / h;
    std::int64_t u0 = static_cast<std::int64_t>(std::ceil(std::min(r1, r2)));
    std::int64_t u1 = static_cast<std::int64_t>(std::floor(std::max(r1, r2)));
    u0 = std::max(u0, clip_lo);
    u1 = std::min(u1, clip_hi);
    while (u0 <= u1 && !inside(u0)) ++u0;
    while (u1 >= u0 && !inside(u1)) --u1;
    while (u0 - 1 >= clip_lo && inside(u0 - 1)) --u0;
    while (u1 + 1 <= clip_hi && inside(u1 + 1)) ++u1;
    fd.u_min = u0;
    fd.u_max = u1;
    const std::int64_t cnt = u1 >= u0 ? u1 - u0 + 1 : 0;
    // A moving coordinate whose progression misses the sweep window entirely
    // is a degenerate layout; leave it to the exact per-state sweep.
    if (cnt == 0) return false;
    fd.eps.resize(static_cast<std::size_t>(cnt));
    for (std::int64_t p = 0; p < cnt; ++p)
      fd.eps[static_cast<std::size_t>(p)] = eps_at(fd.a > 0.0 ? u0 + p : u1 - p);
  }

  // Merge the per-dimension progressions, bracketed by sweep-limit sentinels.
  std::size_t total = 2;
  for (int d = 0; d < m; ++d) total += plan.dim[d].eps.size();
  std::vector<double> meps;
  std::vector<std::int8_t> mdim;  // crossing dimension, -1 for sentinels
  meps.reserve(total);
  mdim.reserve(total);
  meps.push_back(-kSweepHalfWidth);
  mdim.push_back(-1);
  std::size_t p0 = 0, p1 = 0;
  static const std::vector<double> kNoCrossings;
  const auto& e0 = plan.dim[0].eps;
  const auto& e1 = m > 1 ? plan.dim[1].eps : kNoCrossings;
  while (p0 < e0.size() || p1 < e1.size()) {
    const bool take0 = p1 >= e1.size() || (p0 < e0.size() && e0[p0] <= e1[p1]);
    if (take0) {
      meps.push_back(e0[p0++]);
      mdim.push_back(0);
    } else {
      meps.push_back(e1[p1++]);
      mdim.push_back(1);
    }
  }
  meps.push_back(kSweepHalfWidth);
  mdim.push_back(-1);

  // Walk the sweep. Before its first retained crossing a moving coordinate
  // sits one cell outside that edge (below it when a > 0, above when a < 0);
  // every crossing then shifts its cell by one. Segments of zero mass are
  // dropped.
  std::int64_t cur[2] = {0, 0};
  for (int d = 0; d < m; ++d) {
    const FastDim& fd = plan.dim[d];
    cur[d] = fd.a > 0.0 ? fd.u_min - 1 : (fd.a < 0.0 ? fd.u_max : fd.frozen_cell);
  }
  const std::size_t segs = meps.size() - 1;
  plan.dphi.clear();
  plan.c0.clear();
  plan.c1.clear();
  plan.dphi.reserve(segs);
  plan.c0.reserve(segs);
  plan.c1.reserve(segs);
  double phi_prev = std_normal_cdf(meps[0]);
  for (std::size_t k = 0; k < segs; ++k) {
    const int dd = mdim[k];
    if (k > 0 && dd >= 0) cur[dd] += plan.dim[dd].a > 0.0 ? 1 : -1;
    const double phi_next = std_normal_cdf(meps[k + 1]);
    const double dphi = phi_next - phi_prev;
    phi_prev = phi_next;
    if (dphi == 0.0) continue;
    plan.dphi.push_back(dphi);
    plan.c0.push_back(static_cast<std::int32_t>(cur[0]));
    plan.c1.push_back(static_cast<std::int32_t>(m > 1 ? cur[1] : 0));
  }

  // Stable counting sort by row shift; rows move one cell per crossing, so
  // the bucket table spans at most the crossing count.
  const std::size_t nseg = plan.dphi.size();
  if (nseg == 0) {
    plan.c1_lo = 0;
    plan.bucket_first.assign(1, 0);
    return true;
  }
  const auto [min_it, max_it] = std::minmax_element(plan.c1.begin(), plan.c1.end());
  plan.c1_lo = *min_it;
  const std::size_t buckets = static_cast<std::size_t>(*max_it - *min_it) + 1;
  plan.bucket_first.assign(buckets + 1, 0);
  for (const std::int32_t c : plan.c1)
    ++plan.bucket_first[static_cast<std::size_t>(c - plan.c1_lo) + 1];
  for (std::size_t b = 1; b <= buckets; ++b)
    plan.bucket_first[b] += plan.bucket_first[b - 1];
  std::vector<std::int64_t> slot(plan.bucket_first.begin(), plan.bucket_first.end() - 1);
  std::vector<double> sd(nseg);
  std::vector<std::int32_t> s0(nseg), s1(nseg);
  for (std::size_t s = 0; s < nseg; ++s) {
    const std::size_t b = static_cast<std::size_t>(plan.c1[s] - plan.c1_lo);
    const std::size_t at = static_cast<std::size_t>(slot[b]++);
    sd[at] = plan.dphi[s];
    s0[at] = plan.c0[s];
    s1[at] = plan.c1[s];
  }
  plan.dphi.swap(sd);
  plan.c0.swap(s0);
  plan.c1.swap(s1);
  return true;
}

// Applies the banded plan. Pass one accumulates the value table: target rows
// are tiled so one slice of the next table stays cache resident while the
// segments landing in it run every source row through the fused multiply-add
// kernel. Tiles ascend and each bucket of equal row shift falls in exactly
// one tile, so every state's contributions arrive in sorted segment order no
// matter how the rows are tiled or threaded. Pass two turns each state's
// absorbed mass into its escape figure and clamps the values.
void run_banded(const FastPlan& plan, const ValueTable& next, std::vector<double>& out,
                const kernels::Ops& ops, int threads, std::vector<double>& worst) {
  const std::int64_t n0s = plan.dim[0].n_src;
  const std::int64_t n0t = plan.dim[0].n_tgt;
  const std::int64_t n1s = plan.m > 1 ? plan.dim[1].n_src : 1;
  const std::int64_t n1t = plan.m > 1 ? plan.dim[1].n_tgt : 1;
  const double* V = next.values.data();
  std::fill(out.begin(), out.end(), 0.0);

  constexpr std::int64_t kTileBytes = std::int64_t{1} << 23;
  const std::int64_t tile_rows = std::max<std::int64_t>(
      1, kTileBytes / (n0t * static_cast<std::int64_t>(sizeof(double))));
  for (std::int64_t row0 = 0; row0 < n1t; row0 += tile_rows) {
    const std::int64_t row1 = std::min(n1t, row0 + tile_rows);
    parallel_chunks(n1s, threads, [&](std::int64_t begin, std::int64_t end, int) {
      for (std::int64_t i1 = begin; i1 < end; ++i1) {
        double* acc = out.data() + i1 * n0s;
        const std::int64_t s_end = plan.seg_begin(row1 - i1);
        for (std::int64_t s = plan.seg_begin(row0 - i1); s < s_end; ++s) {
          const std::size_t si = static_cast<std::size_t>(s);
          const std::int64_t c0 = plan.c0[si];
          const std::int64_t lo = c0 < 0 ? -c0 : 0;
          const std::int64_t hi = std::min(n0s, n0t - c0);
          if (hi <= lo) continue;
          const double* row = V + (plan.c1[si] + i1) * n0t + c0;
          ops.axpy(row + lo, static_cast<std::size_t>(hi - lo), plan.dphi[si], acc + lo);
        }
      }
    });
  }

  parallel_chunks(n1s, threads, [&](std::int64_t begin, std::int64_t end, int slot) {
    std::vector<double> diff(static_cast<std::size_t>(n0s) + 1, 0.0);
    for (std::int64_t i1 = begin; i1 < end; ++i1) {
      std::fill(diff.begin(), diff.end(), 0.0);
      const std::int64_t s_end = plan.seg_begin(n1t - i1);
      for (std::int64_t s = plan.seg_begin(-i1); s < s_end; ++s) {
        const std::size_t si = static_cast<std::size_t>(s);
        const std::int64_t c0 = plan.c0[si];
        const std::int64_t lo = c0 < 0 ? -c0 : 0;
        const std::int64_t hi = std::min(n0s, n0t - c0);
        if (hi <= lo) continue;
        diff[static_cast<std::size_t>(lo)] += plan.dphi[si];
        diff[static_cast<std::size_t>(hi)] -= plan.dphi[si];
      }
      double* row = out.data() + i1 * n0s;
      double inbox = 0.0;
      for (std::int64_t i0 = 0; i0 < n0s; ++i0) {
        inbox += diff[static_cast<std::size_t>(i0)];
        const double esc = 1.0 - inbox;
        if (esc > worst[static_cast<std::size_t>(slot)])
          worst[static_cast<std::size_t>(slot)] = esc;
        row[i0] = clamp01(row[i0]);
      }
    }
  });
}

}  // namespace

ValueTable terminal_values(const Grid& grid, const SmoothingParams& s,
                           const SolveOptions& opts) {
  const int m = grid.dims();
  if (static_cast<int>(s.b.size()) != m)
    throw invalid_input("terminal_values: smoothing offsets do not match grid dimension");
  const kernels::Ops& ops = kernels::select(opts.kernel);

  std::vector<std::vector<double>> profile(static_cast<std::size_t>(m));
  for (int d = 0; d < m; ++d) {
    const auto& reps = grid.reps(d);
    profile[d].resize(reps.size());
    ops.ramp_profile(reps.data(), reps.size(), s.lambda, s.b[d], profile[d].data());
  }

  ValueTable table;
  table.grid = std::make_shared<Grid>(grid);
  table.values.resize(static_cast<std::size_t>(grid.total_cells()));
  const int threads = resolve_threads(opts.threads);

  if (m == 1) {
    std::memcpy(table.values.data(), profile[0].data(), profile[0].size() * sizeof(double));
  } else if (m == 2) {
    const std::int64_t n0 = grid.cells(0);
    const std::int64_t n1 = grid.cells(1);
    parallel_chunks(n1, threads, [&](std::int64_t begin, std::int64_t end, int) {
      for (std::int64_t k1 = begin; k1 < end; ++k1)
        ops.scale(profile[0].data(), static_cast<std::size_t>(n0),
                  profile[1][static_cast<std::size_t>(k1)],
                  table.values.data() + k1 * n0);
    });
  } else {
    std::vector<std::int64_t> idx(static_cast<std::size_t>(m), 0);
    for (std::int64_t flat = 0; flat < grid.total_cells(); ++flat) {
      double acc = 1.0;
      for (int d = 0; d < m; ++d)
        acc *= profile[d][static_cast<std::size_t>(idx[d])];
      table.values[static_cast<std::size_t>(flat)] = acc;
      for (int d = 0; d < m; ++d) {
        if (++idx[d] < grid.cells(d)) break;
        idx[d] = 0;
      }
    }
  }
  return table;
}

BackwardResult backward_step_ex(const ValueTable& next, std::shared_ptr<const Grid> grid_t,
                                const Vec& column, const SolveOptions& opts) {
  if (!next.grid) throw invalid_input("backward_step: next table has no grid");
  const Grid& src = *grid_t;
  const Grid& tgt = *next.grid;
  const int m = src.dims();
  if (tgt.dims() != m || static_cast<int>(column.size()) != m)
    throw invalid_input("backward_step: dimension mismatch");
  if (next.values.size() != static_cast<std::size_t>(tgt.total_cells()))
    throw invalid_input("backward_step: next table size does not match its grid");
  for (int d = 0; d < m; ++d)
    if (column[d] == 0.0 &&
        (tgt.locate(d, src.rep(d, 0)) < 0 || tgt.locate(d, src.rep(d, src.cells(d) - 1)) < 0))
      throw invalid_input("backward_step: coordinate " + std::to_string(d) +
                          " is frozen (a_d = 0) with source states outside the target box");

  const kernels::Ops& ops = kernels::select(opts.kernel);
  const int threads = resolve_threads(opts.threads);

  BackwardResult res;
  res.table.t = next.t - 1;
  res.table.grid = grid_t;
  res.table.values.resize(static_cast<std::size_t>(src.total_cells()));

  FastPlan plan;
  const bool fast = plan_fast_step(next, src, column, plan);

  std::vector<double> worst(static_cast<std::size_t>(std::max(threads, 1)), 0.0);

  if (fast) {
    run_banded(plan, next, res.table.values, ops, threads, worst);
  } else {
    const std::int64_t total = src.total_cells();
    parallel_chunks(total, threads, [&](std::int64_t begin, std::int64_t end, int slot) {
      double esc = 0.0;
      for (std::int64_t flat = begin; flat < end; ++flat) {
        const Vec x = src.representative(flat);
        res.table.values[static_cast<std::size_t>(flat)] =
            eval_state_general(x, column, next, &esc);
        worst[slot] = std::max(worst[slot], esc);
      }
    });
  }

  for (double w : worst) res.escaped_mass_max = std::max(res.escaped_mass_max, w);
  return res;
}

ValueTable backward_step(const ValueTable& next, const Grid& grid_t, const Vec& column,
                         const SolveOptions& opts) {
  return backward_step_ex(next, std::make_shared<Grid>(grid_t), column, opts).table;
}

ErrorBudget error_bound(const PolytopeProblem& p, double lambda, double beta) {
  validate_problem_shape(p);
  if (!(lambda > 1.0)) throw invalid_input("error_bound: lambda must exceed 1");
  if (!(beta > 0.0)) throw invalid_input("error_bound: beta must be positive");
  const int m = static_cast<int>(p.A.rows());
  const int T = static_cast<int>(p.A.cols());

  double amin_last = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.A.rows(); ++i)
    amin_last = std::min(amin_last, std::fabs(p.A.at(i, p.A.cols() - 1)));
  if (amin_last == 0.0)
    throw invalid_input(
        "error_bound: the last column of A has zero entries; run normalize_last_column "
        "first");

  ErrorBudget eb;
  eb.theta_term = 2.0 * m / (amin_last * lambda);
  eb.alpha_term = static_cast<double>(T) * alpha_for(lambda, p.A);

  const LipschitzLedger ledger = make_lipschitz_ledger(lambda, m, T);
  double coeff = ledger.constants.L_h + ledger.L_h_tilde;
  for (int t = 0; t < T; ++t) coeff += ledger.L_J_tilde[static_cast<std::size_t>(t)];
  eb.beta_term = beta * coeff;

  // The aggregated Lipschitz weight must reproduce the closed-form
  // coefficient (T + 1) * 2 lambda m of the plain product instance.
  const double closed = static_cast<double>(T + 1) * (2.0 * lambda * m);
  if (std::fabs(coeff - closed) > 1e-12 * closed)
    throw invalid_input("error_bound: internal Lipschitz aggregation mismatch");

  eb.total = eb.theta_term + eb.alpha_term + eb.beta_term;
  return eb;
}

SolveReport solve(const PolytopeProblem& p, double lambda, double beta,
                  const SolveOptions& opts) {
  const auto t_start = std::chrono::steady_clock::now();
  validate_problem_shape(p);
  if (!(lambda > 1.0))
    throw invalid_input("solve: lambda must exceed 1, got " + std::to_string(lambda));
  if (!(beta > 0.0)) throw invalid_input("solve: beta must be positive");
  const int m = static_cast<int>(p.A.rows());
  const int T = static_cast<int>(p.A.cols());
  for (int i = 0; i < m; ++i)
    if (p.A.at(i, T - 1) == 0.0)
      throw invalid_input(
          "solve: the last column of A has zero entries; run normalize_last_column first");

  SolveReport report;
  report.bound = error_bound(p, lambda, beta);
  const SmoothingParams s = make_smoothing(lambda, p.b);
  const kernels::Ops& ops = kernels::select(opts.kernel);
  report.kernel_name = ops.name;

  // All stages share one lattice pitch: stage t spans [-t w, t w] with t * n1
  // cells per dimension, where n1 already satisfies the per-stage spacing
  // requirement (h/2) sqrt(m) <= beta. Shared pitch lets every backward step
  // reuse one crossing progression for all states.
  const double w = std::sqrt(2.0 * std::log(lambda));
  const double h_max = 2.0 * beta / std::sqrt(static_cast<double>(m));
  std::int64_t n1 = static_cast<std::int64_t>(std::ceil(2.0 * w / h_max));
  if (n1 < 1) n1 = 1;

  const double top_cells = std::pow(static_cast<double>(T) * static_cast<double>(n1),
                                    static_cast<double>(m));
  if (top_cells > static_cast<double>(opts.cell_budget))
    throw resource_error("solve: the final-stage grid needs about " +
                         format_sig(top_cells) + " cells but the budget allows " +
                         std::to_string(opts.cell_budget) +
                         " (raise --cell-budget or coarsen beta)");

  auto grid_at = [&](int t) {
    const Box box = build_box(t, lambda, m);
    const std::vector<std::int64_t> cells(
        static_cast<std::size_t>(m), t == 0 ? 1 : static_cast<std::int64_t>(t) * n1);
    return std::make_shared<const Grid>(
        Grid::build_with_cells(box, cells, opts.cell_budget));
  };

  report.grid_cells.assign(static_cast<std::size_t>(T) + 1, 0);

  auto grid_T = grid_at(T);
  report.grid_cells[static_cast<std::size_t>(T)] = grid_T->total_cells();
  ValueTable table = terminal_values(*grid_T, s, opts);
  table.t = T;
  table.grid = grid_T;
  grid_T.reset();

  for (int t = T - 1; t >= 0; --t) {
    auto grid_t = grid_at(t);
    report.grid_cells[static_cast<std::size_t>(t)] = grid_t->total_cells();
    BackwardResult step = backward_step_ex(table, grid_t, p.A.col(t), opts);
    report.escaped_mass_max = std::max(report.escaped_mass_max, step.escaped_mass_max);
    table = std::move(step.table);
  }

  for (std::int64_t c : report.grid_cells) report.cells_total += c;
  report.estimate = table.values.at(0);
  report.notes.push_back("kernel: " + std::string(ops.name));

  const auto t_end = std::chrono::steady_clock::now();
  report.seconds = std::chrono::duration<double>(t_end - t_start).count();
  return report;
}

}  // namespace gpdp
