#include "gpdp/grid.hpp"

#include <cmath>
#include <string>

#include "gpdp/errors.hpp"

namespace gpdp {

Box build_box(int t, double lambda, int m) {
  if (t < 0) throw invalid_input("build_box: stage t must be non-negative");
  if (m < 1) throw invalid_input("build_box: dimension m must be positive");
  if (!(lambda > 1.0))
    throw invalid_input("build_box: lambda must exceed 1, got " + std::to_string(lambda));
  const double half = t * std::sqrt(2.0 * std::log(lambda));
  return Box{Vec(m, -half), Vec(m, half)};
}

Grid Grid::assemble(const Box& box, std::vector<std::int64_t> cells,
                    std::int64_t cell_budget) {
  const int m = box.dims();
  Grid g;
  g.box_ = box;
  g.cells_ = std::move(cells);
  g.stride_.resize(m);
  g.h_.resize(m);
  g.edges_.resize(m);
  g.reps_.resize(m);

  double total_est = 1.0;
  for (int d = 0; d < m; ++d) total_est *= static_cast<double>(g.cells_[d]);
  if (total_est > static_cast<double>(cell_budget))
    throw resource_error("grid would need " + std::to_string(total_est) +
                         " cells, exceeding the budget of " + std::to_string(cell_budget) +
                         " (raise the cell budget or coarsen beta)");

  g.total_ = 1;
  for (int d = 0; d < m; ++d) {
    g.stride_[d] = g.total_;
    g.total_ *= g.cells_[d];
    const double side = box.hi[d] - box.lo[d];
    const std::int64_t n = g.cells_[d];
    g.h_[d] = side > 0.0 ? side / static_cast<double>(n) : 0.0;
    auto& edges = g.edges_[d];
    auto& reps = g.reps_[d];
    edges.resize(static_cast<std::size_t>(n) + 1);
    reps.resize(static_cast<std::size_t>(n));
    for (std::int64_t j = 0; j <= n; ++j)
      edges[static_cast<std::size_t>(j)] = box.lo[d] + static_cast<double>(j) * g.h_[d];
    edges[static_cast<std::size_t>(n)] = box.hi[d];
    for (std::int64_t i = 0; i < n; ++i)
      reps[static_cast<std::size_t>(i)] =
          box.lo[d] + (static_cast<double>(i) + 0.5) * g.h_[d];
  }
  return g;
}

Grid Grid::build(const Box& box, double beta, std::int64_t cell_budget) {
  const int m = box.dims();
  if (m < 1) throw invalid_input("grid: box must have at least one dimension");
  if (static_cast<int>(box.hi.size()) != m) throw invalid_input("grid: box lo/hi mismatch");
  if (!(beta > 0.0)) throw invalid_input("grid: beta must be positive");
  for (int d = 0; d < m; ++d)
    if (!(box.hi[d] >= box.lo[d])) throw invalid_input("grid: box has hi < lo");

  // Largest admissible spacing: a representative is at most (h/2) sqrt(m)
  // from any point of its cell, and that distance must not exceed beta.
  const double h_max = 2.0 * beta / std::sqrt(static_cast<double>(m));
  std::vector<std::int64_t> cells(m);
  for (int d = 0; d < m; ++d) {
    const double side = box.hi[d] - box.lo[d];
    cells[d] = side > 0.0 ? static_cast<std::int64_t>(std::ceil(side / h_max)) : 1;
    if (cells[d] < 1) cells[d] = 1;
  }
  return assemble(box, std::move(cells), cell_budget);
}

Grid Grid::build_with_cells(const Box& box, const std::vector<std::int64_t>& cells,
                            std::int64_t cell_budget) {
  const int m = box.dims();
  if (m < 1) throw invalid_input("grid: box must have at least one dimension");
  if (static_cast<int>(cells.size()) != m)
    throw invalid_input("grid: cell count list does not match box dimension");
  for (int d = 0; d < m; ++d) {
    if (cells[d] < 1) throw invalid_input("grid: cell counts must be >= 1");
    if (box.hi[d] - box.lo[d] <= 0.0 && cells[d] != 1)
      throw invalid_input("grid: degenerate dimension must have exactly one cell");
  }
  return assemble(box, cells, cell_budget);
}

std::int64_t Grid::locate(int d, double x) const {
  if (!(x >= box_.lo[d] && x <= box_.hi[d])) return -1;
  const std::int64_t n = cells_[d];
  if (h_[d] == 0.0) return 0;
  std::int64_t i = static_cast<std::int64_t>(std::floor((x - box_.lo[d]) / h_[d]));
  if (i < 0) i = 0;
  if (i > n - 1) i = n - 1;
  // Snap against the canonical edges so boundary points land in the upper
  // cell regardless of floating-point drift in the division.
  while (i + 1 <= n - 1 && x >= edge(d, i + 1)) ++i;
  while (i > 0 && x < edge(d, i)) --i;
  return i;
}

std::int64_t project(const Grid& g, const Vec& x) {
  if (static_cast<int>(x.size()) != g.dims())
    throw invalid_input("project: point dimension does not match grid");
  std::int64_t flat = 0;
  for (int d = 0; d < g.dims(); ++d) {
    const std::int64_t i = g.locate(d, x[d]);
    if (i < 0)
      throw invalid_input("project: coordinate " + std::to_string(d) + " = " +
                          std::to_string(x[d]) + " lies outside the grid box");
    flat += i * g.stride(d);
  }
  return flat;
}

double alpha_for(double lambda, const Mat& A) {
  if (!(lambda > 1.0))
    throw invalid_input("alpha_for: lambda must exceed 1, got " + std::to_string(lambda));
  double amax = 0.0;
  for (std::size_t r = 0; r < A.rows(); ++r)
    for (std::size_t c = 0; c < A.cols(); ++c) amax = std::max(amax, std::fabs(A.at(r, c)));
  if (amax == 0.0) throw invalid_input("alpha_for: constraint matrix is identically zero");
  const double m = static_cast<double>(A.rows());
  return std::sqrt(2.0) * m * amax / std::sqrt(std::log(lambda)) *
         std::pow(1.0 / lambda, 1.0 / (amax * amax));
}

}  // namespace gpdp
