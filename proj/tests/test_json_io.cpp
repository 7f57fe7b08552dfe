#include "doctest.h"

#include "parsum/json_io.hpp"
#include "parsum/random.hpp"
#include "test_util.hpp"

#include <cmath>
#include <limits>
#include <string>

using namespace parsum;
using nlohmann::ordered_json;

TEST_CASE("json text parsing") {
  CHECK(parse_json_text("{\"a\": 1}")["a"] == 1);
  CHECK_THROWS_AS(parse_json_text("{nope"), SchemaError);
  CHECK_THROWS_AS(load_json_file("/definitely/not/a/file.json"), SchemaError);

  testutil::TempDir dir;
  std::string p = dir.write("m.json", "{\"dim\": 1, \"entries\": [[3.5]]}");
  Matrix m = read_matrix(load_json_file(p));
  CHECK(m(0, 0) == Complex(3.5, 0.0));
}

TEST_CASE("matrix schema") {
  // Bare numbers and [re, im] pairs both read as complex entries.
  auto j = parse_json_text(
      "{\"dim\": 2, \"entries\": [[1, [0, -1]], [[0, 1], 2]]}");
  Matrix m = read_matrix(j);
  CHECK(m(0, 0) == Complex(1, 0));
  CHECK(m(0, 1) == Complex(0, -1));
  CHECK(m(1, 0) == Complex(0, 1));
  CHECK(m(1, 1) == Complex(2, 0));

  CHECK_THROWS_AS(read_matrix(parse_json_text("{\"dim\": 2}")), SchemaError);
  CHECK_THROWS_AS(read_matrix(parse_json_text("{\"entries\": [[1]]}")),
                  SchemaError);
  CHECK_THROWS_AS(read_matrix(parse_json_text("[[1]]")), SchemaError);
  CHECK_THROWS_AS(
      read_matrix(parse_json_text("{\"dim\": 0, \"entries\": []}")),
      SchemaError);
  CHECK_THROWS_AS(
      read_matrix(parse_json_text("{\"dim\": -2, \"entries\": []}")),
      SchemaError);
  CHECK_THROWS_AS(
      read_matrix(parse_json_text("{\"dim\": 1.5, \"entries\": [[1]]}")),
      SchemaError);
  // Row count, row length, and entry shape must all line up.
  CHECK_THROWS_AS(
      read_matrix(parse_json_text("{\"dim\": 2, \"entries\": [[1, 2]]}")),
      SchemaError);
  CHECK_THROWS_AS(
      read_matrix(
          parse_json_text("{\"dim\": 2, \"entries\": [[1, 2], [3]]}")),
      SchemaError);
  CHECK_THROWS_AS(
      read_matrix(parse_json_text(
          "{\"dim\": 1, \"entries\": [[[1, 2, 3]]]}")),
      SchemaError);
  CHECK_THROWS_AS(
      read_matrix(parse_json_text("{\"dim\": 1, \"entries\": [[\"x\"]]}")),
      SchemaError);
}

TEST_CASE("matrix write and read is lossless") {
  Rng rng(91);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix m(3, 3);
    for (Eigen::Index i = 0; i < 3; ++i)
      for (Eigen::Index j = 0; j < 3; ++j) m(i, j) = rng.normal_complex();
    Matrix back = read_matrix(parse_json_text(dump_json(write_matrix(m))));
    // %.17g preserves every double exactly.
    CHECK(detail::max_abs(back - m) == 0.0);
  }
}

TEST_CASE("charge schema") {
  auto j = parse_json_text(
      "{\"atoms\": [\"a\", \"b\"], \"weights\": [1, 2.5]}");
  Charge c = read_charge(j);
  CHECK(c.space().atoms() == std::vector<std::string>{"a", "b"});
  CHECK(c.weights()[1] == 2.5);
  Charge back = read_charge(parse_json_text(dump_json(write_charge(c))));
  CHECK((back.weights() - c.weights()).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(read_charge(parse_json_text("{\"atoms\": [\"a\"]}")),
                  SchemaError);
  CHECK_THROWS_AS(
      read_charge(parse_json_text(
          "{\"atoms\": [\"a\", \"a\"], \"weights\": [1, 2]}")),
      SchemaError);
  CHECK_THROWS_AS(
      read_charge(
          parse_json_text("{\"atoms\": [\"a\"], \"weights\": [1, 2]}")),
      SchemaError);
  CHECK_THROWS_AS(
      read_charge(parse_json_text("{\"atoms\": [1], \"weights\": [1]}")),
      SchemaError);
  CHECK_THROWS_AS(
      read_charge(
          parse_json_text("{\"atoms\": [\"a\"], \"weights\": [\"x\"]}")),
      SchemaError);
  // Validation failures that are not schema problems keep their own type.
  CHECK_THROWS_AS(
      read_charge(
          parse_json_text("{\"atoms\": [\"a\"], \"weights\": [-1]}")),
      PsdError);
}

TEST_CASE("functional schema") {
  auto j = parse_json_text("{\"d\": 2, \"rho\": [[1, 0], [0, 0.5]]}");
  MatrixFunctional w = read_functional(j);
  CHECK(w.d() == 2);
  CHECK(w.density()(1, 1) == Complex(0.5, 0));
  MatrixFunctional back =
      read_functional(parse_json_text(dump_json(write_functional(w))));
  CHECK(detail::max_abs(back.density() - w.density()) == 0.0);

  CHECK_THROWS_AS(read_functional(parse_json_text("{\"d\": 2}")), SchemaError);
  CHECK_THROWS_AS(
      read_functional(parse_json_text("{\"d\": 0, \"rho\": []}")),
      SchemaError);
  CHECK_THROWS_AS(
      read_functional(
          parse_json_text("{\"d\": 1, \"rho\": [[-1]]}")),
      PsdError);
}

TEST_CASE("kernel schema") {
  std::string text =
      "{\"points\": [\"s\", \"t\"], \"fiber_dim\": 1, \"blocks\": {"
      "\"s,s\": [[1]], \"s,t\": [[0.5]], \"t,s\": [[0.5]], \"t,t\": [[1]]}}";
  OperatorKernel k = read_kernel(parse_json_text(text));
  CHECK(k.point_count() == 2);
  CHECK(k.block(0, 1)(0, 0) == Complex(0.5, 0));

  OperatorKernel back =
      read_kernel(parse_json_text(dump_json(write_kernel(k))));
  for (Eigen::Index s = 0; s < 2; ++s)
    for (Eigen::Index t = 0; t < 2; ++t)
      CHECK(detail::max_abs(back.block(s, t) - k.block(s, t)) == 0.0);

  CHECK_THROWS_AS(
      read_kernel(parse_json_text("{\"points\": [\"s\"], \"fiber_dim\": 1}")),
      SchemaError);
  // A missing block is a schema problem.
  CHECK_THROWS_AS(
      read_kernel(parse_json_text(
          "{\"points\": [\"s\", \"t\"], \"fiber_dim\": 1, \"blocks\": {"
          "\"s,s\": [[1]], \"t,t\": [[1]]}}")),
      SchemaError);
  // A key that does not name a point pair is too.
  CHECK_THROWS_AS(
      read_kernel(parse_json_text(
          "{\"points\": [\"s\", \"t\"], \"fiber_dim\": 1, \"blocks\": {"
          "\"s,s\": [[1]], \"s,t\": [[0]], \"t,s\": [[0]], \"t,t\": [[1]],"
          "\"s;t\": [[0]]}}")),
      SchemaError);
  // Wrong block size keeps its own type.
  CHECK_THROWS_AS(
      read_kernel(parse_json_text(
          "{\"points\": [\"s\", \"t\"], \"fiber_dim\": 1, \"blocks\": {"
          "\"s,s\": [[1, 0], [0, 1]], \"s,t\": [[0]], \"t,s\": [[0]],"
          "\"t,t\": [[1]]}}")),
      SchemaError);
  // Non-positive kernels are rejected with the positivity error.
  CHECK_THROWS_AS(
      read_kernel(parse_json_text(
          "{\"points\": [\"s\", \"t\"], \"fiber_dim\": 1, \"blocks\": {"
          "\"s,s\": [[1]], \"s,t\": [[2]], \"t,s\": [[2]], \"t,t\": [[1]]}}")),
      PsdError);

  // Point labels containing commas are resolved by requiring exactly one
  // split of the key to name a known pair.
  std::string tricky =
      "{\"points\": [\"a,b\", \"c\"], \"fiber_dim\": 1, \"blocks\": {"
      "\"a,b,a,b\": [[1]], \"a,b,c\": [[0]], \"c,a,b\": [[0]],"
      " \"c,c\": [[1]]}}";
  OperatorKernel tk = read_kernel(parse_json_text(tricky));
  CHECK(tk.block(0, 0)(0, 0) == Complex(1, 0));
  CHECK(tk.block(0, 1)(0, 0) == Complex(0, 0));
}

TEST_CASE("serializer output is deterministic and typed") {
  ordered_json j;
  j["b"] = 1;  // insertion order must survive, not alphabetical order
  j["a"] = 2;
  j["x"] = ordered_json::array({1.5, true, nullptr, "q\"uote\n"});
  std::string s = dump_json(j);
  CHECK(s == "{\"b\":1,\"a\":2,\"x\":[1.5,true,null,\"q\\\"uote\\n\"]}");

  // Integers print without a decimal point, doubles with 17 significant
  // digits (the shortest form that is always enough to round trip).
  CHECK(dump_json(ordered_json(42)) == "42");
  CHECK(dump_json(ordered_json(1.0 / 3.0)) == "0.33333333333333331");
  CHECK(dump_json(ordered_json(-0.0)) == "-0");
  CHECK(dump_json(ordered_json(1e300)) == "1.0000000000000001e+300");

  CHECK_THROWS_AS(
      dump_json(ordered_json(std::numeric_limits<double>::infinity())),
      std::invalid_argument);
  CHECK_THROWS_AS(
      dump_json(ordered_json(std::nan(""))), std::invalid_argument);

  // Round trip of parsed doubles reproduces the same text.
  std::string once = dump_json(parse_json_text("[0.1, 2.718281828459045]"));
  CHECK(dump_json(parse_json_text(once)) == once);
}
