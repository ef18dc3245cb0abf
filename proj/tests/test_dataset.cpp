#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>

#include "mbfr/dataset.hpp"

using mbfr::DataError;
using mbfr::Dataset;

namespace {

struct TempCsv {
  std::string path;
  explicit TempCsv(const std::string& content) {
    path = std::string("mbfr_test_") +
           std::to_string(std::rand()) + ".csv";
    std::ofstream f(path);
    f << content;
  }
  ~TempCsv() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("load_csv parses a small file") {
  TempCsv f("x,y\n0,1\n1,3\n2,5\n");
  Dataset d = mbfr::load_csv(f.path, "y");
  CHECK(d.n_rows() == 3);
  CHECK(d.n_cols() == 2);
  CHECK(d.target_name() == "y");
  CHECK(d.column("x") == std::vector<double>{0, 1, 2});
  CHECK(d.column("y") == std::vector<double>{1, 3, 5});
}

TEST_CASE("load_csv rejects bad input") {
  SECTION("missing file") {
    CHECK_THROWS_AS(mbfr::load_csv("no_such_file.csv", "y"), DataError);
  }
  SECTION("NaN cell") {
    TempCsv f("x,y\n0,1\nNaN,3\n");
    CHECK_THROWS_WITH(mbfr::load_csv(f.path, "y"),
                      Catch::Matchers::ContainsSubstring("non-numeric cell"));
  }
  SECTION("duplicate header") {
    TempCsv f("x,x\n0,1\n1,2\n");
    CHECK_THROWS_AS(mbfr::load_csv(f.path, "x"), DataError);
  }
  SECTION("target absent") {
    TempCsv f("x,y\n0,1\n1,2\n");
    CHECK_THROWS_AS(mbfr::load_csv(f.path, "z"), DataError);
  }
  SECTION("ragged row") {
    TempCsv f("x,y\n0,1\n1\n");
    CHECK_THROWS_AS(mbfr::load_csv(f.path, "y"), DataError);
  }
}

TEST_CASE("drop-incomplete drops and counts non-finite rows") {
  TempCsv f("x,y\n0,1\nNaN,3\n2,inf\n4,5\n");
  Dataset d = mbfr::load_csv(f.path, "y", /*drop_incomplete=*/true);
  CHECK(d.n_rows() == 2);
  CHECK(d.dropped_rows() == 2);
}

TEST_CASE("rescale maps columns onto [0,1]") {
  Dataset d = Dataset::from_columns({"a", "b", "c"},
                                    {{2, 4, 6}, {5, 5, 5}, {-5, 0, 5}}, "a");
  Dataset r = d.rescale_unit();
  CHECK(r.column("a") == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(r.column("b") == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(r.column("c") == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(r.constant_flags()[1]);
  CHECK_FALSE(r.constant_flags()[0]);
  CHECK(r.rescale_records()[0].min == 2.0);
  CHECK(r.rescale_records()[0].max == 6.0);
}

TEST_CASE("rescale is idempotent") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  std::vector<std::vector<double>> cols(4, std::vector<double>(50));
  for (auto& c : cols)
    for (auto& v : c) v = u(rng);
  Dataset d = Dataset::from_columns({"a", "b", "c", "d"}, cols, "d");
  Dataset once = d.rescale_unit();
  Dataset twice = once.rescale_unit();
  for (std::size_t c = 0; c < d.n_cols(); ++c)
    CHECK(once.column(c) == twice.column(c));
}

TEST_CASE("shuffle_target permutes only the target") {
  Dataset d = Dataset::from_columns(
      {"x", "y"}, {{1, 2, 3, 4, 5}, {10, 20, 30, 40, 50}}, "y");
  Dataset s = d.shuffle_target(7);
  CHECK(s.column("x") == d.column("x"));
  auto sorted = s.column("y");
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<double>{10, 20, 30, 40, 50});

  Dataset s2 = d.shuffle_target(7);
  CHECK(s.column("y") == s2.column("y"));
  Dataset s3 = d.shuffle_target(8);
  // A different seed is allowed to give the same permutation, but with
  // 5! = 120 possibilities these two seeds differ.
  CHECK(s.column("y") != s3.column("y"));
}

TEST_CASE("subset restricts columns") {
  Dataset d = Dataset::from_columns({"x", "y", "z"},
                                    {{1, 2}, {3, 4}, {5, 6}}, "z");
  SECTION("identity") {
    Dataset s = d.subset({"x", "y", "z"});
    CHECK(s.names() == d.names());
    CHECK(s.target_name() == "z");
    for (std::size_t c = 0; c < 3; ++c) CHECK(s.column(c) == d.column(c));
  }
  SECTION("target only") {
    Dataset s = d.subset({"z"});
    CHECK(s.n_cols() == 1);
    CHECK(s.target_name() == "z");
  }
  SECTION("target dropped") {
    Dataset s = d.subset({"x", "y"});
    CHECK_FALSE(s.has_target());
  }
  SECTION("unknown name") {
    CHECK_THROWS_AS(d.subset({"nope"}), DataError);
  }
}
