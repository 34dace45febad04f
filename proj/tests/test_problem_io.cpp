#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "gpdp/errors.hpp"
#include "gpdp/problem_io.hpp"

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& body) {
    static int counter = 0;
    path = "gpdp_io_test_" + std::to_string(counter++) + ".json";
    std::ofstream out(path);
    out << body;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("load_problem_file parses a full file") {
  const TempFile f(R"({
    "A": [[0.5, 0.7, 1.0, 0.9], [0.2, 0.7, 0.5, 1.0]],
    "b": [2.0, 0.5],
    "mean": [0.0, 0.0, 0.0, 0.0],
    "covariance": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]],
    "labels": {"name": "demo", "source": "unit test"}
  })");
  const gpdp::ProblemFile pf = gpdp::load_problem_file(f.path);
  CHECK(pf.problem.A.rows() == 2);
  CHECK(pf.problem.A.cols() == 4);
  CHECK(pf.problem.A(0, 2) == 1.0);
  CHECK(pf.problem.b[1] == 0.5);
  REQUIRE(pf.gaussian.has_value());
  CHECK(pf.gaussian->mean.size() == 4);
  CHECK(pf.gaussian->covariance(3, 3) == 1.0);
  CHECK(pf.labels.at("name") == "demo");
  CHECK(pf.labels.at("source") == "unit test");
}

TEST_CASE("load_problem_file parses a minimal file") {
  const TempFile f(R"({"A": [[1.0], [1.0]], "b": [0, 0]})");
  const gpdp::ProblemFile pf = gpdp::load_problem_file(f.path);
  CHECK(pf.problem.A.rows() == 2);
  CHECK(pf.problem.A.cols() == 1);
  CHECK_FALSE(pf.gaussian.has_value());
  CHECK(pf.labels.empty());
}

TEST_CASE("load_problem_file names the offending field") {
  CHECK_THROWS_AS(gpdp::load_problem_file("does_not_exist.json"), gpdp::io_error);

  const TempFile not_json("{A: oops");
  CHECK_THROWS_AS(gpdp::load_problem_file(not_json.path), gpdp::parse_error);

  const TempFile no_a(R"({"b": [0]})");
  CHECK_THROWS_WITH_AS(gpdp::load_problem_file(no_a.path), doctest::Contains("A"),
                       gpdp::parse_error);

  const TempFile no_b(R"({"A": [[1.0]]})");
  CHECK_THROWS_WITH_AS(gpdp::load_problem_file(no_b.path), doctest::Contains("b"),
                       gpdp::parse_error);

  const TempFile ragged(R"({"A": [[1.0, 2.0], [3.0]], "b": [0, 0]})");
  CHECK_THROWS_AS(gpdp::load_problem_file(ragged.path), gpdp::parse_error);

  const TempFile mismatched(R"({"A": [[1.0], [2.0]], "b": [0]})");
  CHECK_THROWS_WITH_AS(gpdp::load_problem_file(mismatched.path), doctest::Contains("b"),
                       gpdp::parse_error);

  const TempFile non_number(R"({"A": [[1.0, "x"]], "b": [0]})");
  CHECK_THROWS_AS(gpdp::load_problem_file(non_number.path), gpdp::parse_error);

  const TempFile half_gaussian(R"({"A": [[1.0]], "b": [0], "mean": [0.0]})");
  CHECK_THROWS_WITH_AS(gpdp::load_problem_file(half_gaussian.path),
                       doctest::Contains("covariance"), gpdp::parse_error);

  const TempFile empty_a(R"({"A": [], "b": []})");
  CHECK_THROWS_AS(gpdp::load_problem_file(empty_a.path), gpdp::parse_error);
}
