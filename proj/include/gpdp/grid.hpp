#pragma once

#include <cstdint>
#include <vector>

#include "gpdp/linalg.hpp"

namespace gpdp {

inline constexpr std::int64_t kDefaultCellBudget = 100'000'000;

// Axis-aligned box. A dimension may be degenerate (lo == hi), in which case
// the grid there collapses to the single point lo.
struct Box {
  Vec lo;
  Vec hi;
  int dims() const { return static_cast<int>(lo.size()); }
};

// Truncation box for stage t: [-t w, t w]^m with w = sqrt(2 ln lambda).
// Stage 0 yields the degenerate box {0}^m. Rejects lambda <= 1, t < 0, m < 1.
Box build_box(int t, double lambda, int m);

// Uniform axis product grid over a box with half-open cells [B_j, B_{j+1})
// (the last cell additionally contains its upper edge). Spacing per dimension
// is chosen so a step from a cell's midpoint representative to any point of
// the cell moves by at most beta in Euclidean norm: (h/2) sqrt(m) <= beta.
class Grid {
 public:
  // Spacing from the accuracy parameter beta > 0.
  static Grid build(const Box& box, double beta, std::int64_t cell_budget = kDefaultCellBudget);

  // Explicit per-dimension cell counts (each >= 1). Degenerate dimensions must
  // ask for exactly one cell. Used by callers that refine spacing beyond what
  // beta alone requires; finer spacing never hurts accuracy.
  static Grid build_with_cells(const Box& box, const std::vector<std::int64_t>& cells,
                               std::int64_t cell_budget = kDefaultCellBudget);

  int dims() const { return static_cast<int>(cells_.size()); }
  const Box& box() const { return box_; }
  std::int64_t cells(int d) const { return cells_[d]; }
  std::int64_t total_cells() const { return total_; }
  double spacing(int d) const { return h_[d]; }
  std::int64_t stride(int d) const { return stride_[d]; }

  // Cell edge j in dimension d, j in [0, cells(d)]; edges are precomputed as
  // lo + j h so every caller sees identical values.
  double edge(int d, std::int64_t j) const { return edges_[d][static_cast<std::size_t>(j)]; }
  const std::vector<double>& edges(int d) const { return edges_[d]; }

  // Midpoint representative coordinate of cell i in dimension d.
  double rep(int d, std::int64_t i) const { return reps_[d][static_cast<std::size_t>(i)]; }
  const std::vector<double>& reps(int d) const { return reps_[d]; }

  std::int64_t flat_index(const std::vector<std::int64_t>& idx) const {
    std::int64_t f = 0;
    for (int d = 0; d < dims(); ++d) f += idx[d] * stride_[d];
    return f;
  }

  void unflatten(std::int64_t flat, std::vector<std::int64_t>& idx) const {
    idx.resize(cells_.size());
    for (int d = 0; d < dims(); ++d) {
      idx[d] = flat % cells_[d];
      flat /= cells_[d];
    }
  }

  Vec representative(std::int64_t flat) const {
    Vec x(cells_.size());
    for (int d = 0; d < dims(); ++d) {
      x[d] = rep(d, flat % cells_[d]);
      flat /= cells_[d];
    }
    return x;
  }

  // Cell index along dimension d of a coordinate inside the box, following
  // the half-open convention (edge points belong to the upper cell, except
  // the top edge which belongs to the last cell). Returns -1 outside the box.
  std::int64_t locate(int d, double x) const;

 private:
  Box box_;
  std::vector<std::int64_t> cells_;
  std::vector<std::int64_t> stride_;
  Vec h_;
  std::vector<std::vector<double>> edges_;
  std::vector<std::vector<double>> reps_;
  std::int64_t total_ = 1;

  static Grid assemble(const Box& box, std::vector<std::int64_t> cells,
                       std::int64_t cell_budget);
};

// Flat index of the grid cell containing x. Points outside the box are a
// caller error; edge points go to the upper neighbouring cell per the
// half-open convention.
std::int64_t project(const Grid& g, const Vec& x);

// Per-step escape mass budget of the truncation scheme:
// sqrt(2) m amax / sqrt(ln lambda) * (1/lambda)^(1/amax^2), with amax the
// largest |entry| of A. Rejects lambda <= 1 and all-zero A.
double alpha_for(double lambda, const Mat& A);

}  // namespace gpdp
