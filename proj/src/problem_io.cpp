#include "gpdp/problem_io.hpp"

#include <fstream>

#include <json.hpp>

#include "gpdp/errors.hpp"

namespace gpdp {
namespace {

using nlohmann::json;

Mat parse_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    throw parse_error("field '" + field + "' must be a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty())
    throw parse_error("field '" + field + "' row 0 must be a non-empty array of numbers");
  const std::size_t cols = j[0].size();
  Mat out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw parse_error("field '" + field + "' row " + std::to_string(r) + " has " +
                        std::to_string(j[r].size()) + " entries, expected " +
                        std::to_string(cols));
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number())
        throw parse_error("field '" + field + "' entry (" + std::to_string(r) + ", " +
                          std::to_string(c) + ") is not a number");
      out.at(r, c) = j[r][c].get<double>();
    }
  }
  return out;
}

Vec parse_vector(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    throw parse_error("field '" + field + "' must be a non-empty array of numbers");
  Vec out(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw parse_error("field '" + field + "' entry " + std::to_string(i) +
                        " is not a number");
    out[i] = j[i].get<double>();
  }
  return out;
}

}  // namespace

ProblemFile load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open problem file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw parse_error("problem file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw parse_error("problem file '" + path + "' must be a JSON object");
  if (!j.contains("A")) throw parse_error("problem file is missing field 'A'");
  if (!j.contains("b")) throw parse_error("problem file is missing field 'b'");

  ProblemFile pf;
  pf.problem.A = parse_matrix(j["A"], "A");
  pf.problem.b = parse_vector(j["b"], "b");
  if (pf.problem.b.size() != pf.problem.A.rows())
    throw parse_error("field 'b' has " + std::to_string(pf.problem.b.size()) +
                      " entries but 'A' has " + std::to_string(pf.problem.A.rows()) +
                      " rows");

  const bool has_mean = j.contains("mean");
  const bool has_cov = j.contains("covariance");
  if (has_mean != has_cov)
    throw parse_error("fields 'mean' and 'covariance' must be given together");
  if (has_mean) {
    GaussianSpec g;
    g.mean = parse_vector(j["mean"], "mean");
    g.covariance = parse_matrix(j["covariance"], "covariance");
    if (g.mean.size() != pf.problem.A.cols())
      throw parse_error("field 'mean' has " + std::to_string(g.mean.size()) +
                        " entries but 'A' has " + std::to_string(pf.problem.A.cols()) +
                        " columns");
    if (g.covariance.rows() != g.mean.size() || g.covariance.cols() != g.mean.size())
      throw parse_error("field 'covariance' must be square with the same dimension as "
                        "'mean'");
    pf.gaussian = std::move(g);
  }

  if (j.contains("labels")) {
    if (!j["labels"].is_object())
      throw parse_error("field 'labels' must be an object of string values");
    for (const auto& [key, value] : j["labels"].items()) {
      if (!value.is_string())
        throw parse_error("label '" + key + "' must be a string");
      pf.labels[key] = value.get<std::string>();
    }
  }
  return pf;
}

}  // namespace gpdp
