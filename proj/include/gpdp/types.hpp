#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

#include "gpdp/linalg.hpp"

namespace gpdp {

// Constraint system A x <= b over a standard Gaussian noise vector.
// Rows of A are constraints; columns index the noise coordinates, which the
// backward recursion consumes one per step (column t drives step t).
struct PolytopeProblem {
  Mat A;
  Vec b;

  std::size_t num_constraints() const { return A.rows(); }
  std::size_t horizon() const { return A.cols(); }
};

inline void validate_problem_shape(const PolytopeProblem& p) {
  if (p.A.rows() == 0 || p.A.cols() == 0) throw invalid_input("constraint matrix is empty");
  if (p.b.size() != p.A.rows())
    throw invalid_input("offset vector length " + std::to_string(p.b.size()) +
                        " does not match constraint count " + std::to_string(p.A.rows()));
}

// Fixed-width numeric formatting used for all user-facing numbers: shortest
// representation with 12 significant digits.
inline std::string format_sig(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace gpdp
