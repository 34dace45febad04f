#pragma once

#include <string>
#include <vector>

#include "gpdp/types.hpp"

namespace gpdp {

// Gaussian law N(mean, covariance) over the polytope's ambient space.
struct GaussianSpec {
  Vec mean;
  Mat covariance;
};

// Reduces P(A x <= b), x ~ N(mean, covariance), to standard Gaussian noise:
// with covariance = C C^T (lower Cholesky), x = mean + C z gives
// A' = A C and b' = b - A mean. Rejects non-symmetric or non-positive-definite
// covariance with the offending pivot in the message.
PolytopeProblem whiten(const GaussianSpec& g, const PolytopeProblem& p);

// Result of making the final constraint-matrix column usable by the backward
// recursion, which needs every entry of the last column nonzero.
struct NormalizeResult {
  PolytopeProblem problem;
  // Orthogonal change of noise coordinates applied on the right:
  // problem.A = A_kept * rotation, so z satisfies the original constraints iff
  // rotation^T z satisfies the returned ones. Identity when no rotation was
  // needed. Square, sized by the surviving column count.
  Mat rotation;
  // Indices (in the input) of all-zero columns that were dropped; a standard
  // Gaussian coordinate with no influence on any constraint integrates out.
  std::vector<int> dropped_columns;
  std::vector<std::string> notes;
};

// Ensures the last column of A has all entries nonzero while preserving the
// Gaussian mass of the constraint set exactly. All-zero columns are dropped
// first; then, if needed, an orthogonal rotation of the noise coordinates is
// chosen to maximize the smallest |entry| of the new last column. Rows that
// are entirely zero are rejected (such a constraint is either vacuous or
// infeasible and the caller must decide which). An all-zero matrix is
// rejected.
NormalizeResult normalize_last_column_ex(const PolytopeProblem& p);

// Convenience wrapper returning only the transformed problem.
PolytopeProblem normalize_last_column(const PolytopeProblem& p);

}  // namespace gpdp
