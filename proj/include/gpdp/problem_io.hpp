#pragma once

#include <map>
#include <optional>
#include <string>

#include "gpdp/preprocess.hpp"
#include "gpdp/types.hpp"

namespace gpdp {

// Parsed problem file. When a Gaussian block is present the constraints are
// stated over N(mean, covariance) and must be whitened before solving.
struct ProblemFile {
  PolytopeProblem problem;
  std::optional<GaussianSpec> gaussian;
  std::map<std::string, std::string> labels;
};

// Loads a JSON problem file:
//   { "A": [[...], ...], "b": [...],
//     "mean": [...], "covariance": [[...], ...],   // optional, paired
//     "labels": {"name": "..."} }                   // optional
// Throws io_error when the file cannot be read and parse_error (naming the
// offending field) for malformed content.
ProblemFile load_problem_file(const std::string& path);

}  // namespace gpdp
