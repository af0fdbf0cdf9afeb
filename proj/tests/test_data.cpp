#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "deepspline/data.hpp"
#include "deepspline/network.hpp"

using namespace deepspline;

TEST_CASE("circle_label is the inclusive indicator of the area-2 circle") {
  CHECK(circle_label(0.0, 0.0) == 1);
  CHECK(circle_label(1.0, 1.0) == 0);
  CHECK(circle_label(std::sqrt(2.0 / std::numbers::pi), 0.0) == 1);  // boundary inclusive
  CHECK(circle_label(0.8, 0.0) == 0);
  CHECK(circle_label(-0.5, 0.5) == 1);
}

TEST_CASE("gen_circle samples the unit box with consistent labels") {
  Rng rng(31, 0);
  const Dataset ds = gen_circle(1000, rng);
  REQUIRE(ds.size() == 1000);

  int ones = 0;
  for (std::size_t m = 0; m < ds.size(); ++m) {
    REQUIRE(ds.inputs[m].size() == 2);
    CHECK(ds.inputs[m][0] >= -1.0);
    CHECK(ds.inputs[m][0] <= 1.0);
    CHECK(ds.inputs[m][1] >= -1.0);
    CHECK(ds.inputs[m][1] <= 1.0);
    CHECK(ds.labels[m] == circle_label(ds.inputs[m][0], ds.inputs[m][1]));
    ones += ds.labels[m];
  }
  // Area ratio is 1/2; binomial noise stays well inside 5 points.
  CHECK(ones >= 450);
  CHECK(ones <= 550);

  Rng again(31, 0);
  const Dataset repeat = gen_circle(1000, again);
  CHECK(repeat.inputs == ds.inputs);
  CHECK(repeat.labels == ds.labels);

  Rng single(31, 0);
  CHECK(gen_circle(1, single).size() == 1);
  Rng bad(31, 0);
  CHECK_THROWS_AS(gen_circle(0, bad), std::invalid_argument);
}

TEST_CASE("error_rate thresholds at one half") {
  // Constant predictor sigma(bias); bias > 0 gives yhat > 0.5.
  Network constant;
  constant.layers.push_back(
      make_layer(Mat::from_rows({{0.0, 0.0}}), Vec{0.05}, Activation::make_sigmoid()));

  Dataset all_ones;
  Dataset all_zeros;
  for (int i = 0; i < 10; ++i) {
    all_ones.inputs.push_back({0.1 * i, -0.1 * i});
    all_ones.labels.push_back(1);
    all_zeros.inputs.push_back({0.1 * i, -0.1 * i});
    all_zeros.labels.push_back(0);
  }
  CHECK(error_rate(constant, all_ones) == 0.0);
  CHECK(error_rate(constant, all_zeros) == 100.0);
  CHECK_THROWS_AS(error_rate(constant, Dataset{}), std::invalid_argument);

  // Permutation invariance.
  Dataset shuffled = all_ones;
  std::reverse(shuffled.inputs.begin(), shuffled.inputs.end());
  std::reverse(shuffled.labels.begin(), shuffled.labels.end());
  CHECK(error_rate(constant, shuffled) == error_rate(constant, all_ones));
}

TEST_CASE("dataset csv round-trip is lossless") {
  Rng rng(37, 0);
  const Dataset ds = gen_circle(64, rng);
  const Dataset back = dataset_from_csv(dataset_to_csv(ds));
  CHECK(back.inputs == ds.inputs);
  CHECK(back.labels == ds.labels);
}

TEST_CASE("dataset csv rejects malformed input with a line number") {
  CHECK_THROWS_WITH_AS(dataset_from_csv(""), "csv: empty file, no dataset", std::runtime_error);
  CHECK_THROWS_AS(dataset_from_csv("x1,label\n0.1,1\n"), std::runtime_error);
  CHECK_THROWS_WITH_AS(dataset_from_csv("x1,x2,label\n0.1,1\n"),
                       "csv: expected 3 columns on line 2", std::runtime_error);
  CHECK_THROWS_WITH_AS(dataset_from_csv("x1,x2,label\n0.1,0.2,1\nx,0.2,1\n"),
                       "csv: bad number on line 3", std::runtime_error);
  CHECK_THROWS_AS(dataset_from_csv("x1,x2,label\n0.1,0.2,7\n"), std::runtime_error);

  // Header-only text is an empty dataset, matching the export of one.
  CHECK(dataset_from_csv("x1,x2,label\n").size() == 0);
}
