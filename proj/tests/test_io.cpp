#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "sistab/io.hpp"

using namespace sistab;

TEST_CASE("matrix files round-trip") {
  const auto a = build_design_matrix(ModelSpec::bivariate_logit(2, 2));
  std::stringstream buf;
  write_matrix(buf, a);
  const auto back = read_matrix(buf);
  CHECK(back == a);
}

TEST_CASE("matrix file errors") {
  std::stringstream missing_header("not numbers");
  CHECK_THROWS_AS(read_matrix(missing_header), InvalidInput);
  std::stringstream truncated("2 2\n1 0 1");
  CHECK_THROWS_AS(read_matrix(truncated), InvalidInput);
  std::stringstream zero_col("2 2\n1 0\n1 0");
  CHECK_THROWS_AS(read_matrix(zero_col), InvalidInput);
}

TEST_CASE("vector files") {
  std::stringstream in("3 1 4 1 5");
  CHECK(read_vector(in) == std::vector<Int>{3, 1, 4, 1, 5});
  std::stringstream empty("");
  CHECK_THROWS_AS(read_vector(empty), InvalidInput);
}

TEST_CASE("integer lists accept commas and spaces") {
  CHECK(parse_int_list("1,1,1,1") == std::vector<Int>{1, 1, 1, 1});
  CHECK(parse_int_list("2 4 6") == std::vector<Int>{2, 4, 6});
  CHECK(parse_int_list("7") == std::vector<Int>{7});
  CHECK_THROWS_AS(parse_int_list(""), InvalidInput);
  CHECK_THROWS_AS(parse_int_list("1,x,3"), InvalidInput);
}

TEST_CASE("model shorthand") {
  const auto indep = parse_model_spec("indep:2,2");
  CHECK(indep.kind == ModelKind::independence);
  CHECK(indep.levels_i == 2);
  CHECK(indep.levels_j == 2);

  const auto uni = parse_model_spec("unilogit:5");
  CHECK(uni.kind == ModelKind::univariate_logit);
  CHECK(uni.levels_i == 5);

  const auto bi = parse_model_spec("bilogit:2,7");
  CHECK(bi.kind == ModelKind::bivariate_logit);
  CHECK(bi.levels_j == 7);

  CHECK_THROWS_AS(parse_model_spec("indep"), InvalidInput);
  CHECK_THROWS_AS(parse_model_spec("indep:2"), InvalidInput);
  CHECK_THROWS_AS(parse_model_spec("mystery:2,2"), InvalidInput);
  CHECK_THROWS_AS(parse_model_spec("unilogit:1"), InvalidInput);
}
