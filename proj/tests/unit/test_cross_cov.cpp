#include "doctest.h"
#include "helpers.hpp"

#include "mstcov/cross_cov.hpp"
#include "mstcov/error.hpp"
#include "mstcov/parallel.hpp"
#include "mstcov/simulate.hpp"

#include <algorithm>
#include <cmath>

using namespace mstcov;

TEST_CASE("lagged covariance examples") {
  std::vector<double> alt{1, -1, 1, -1};
  CHECK(lagged_cross_cov(alt, alt, 0) == 1.0);
  std::vector<double> x{1, 2, 3, 4}, y{2, 1, 4, 3};
  CHECK(std::abs(lagged_cross_cov(x, y, 1) - 2.0 / 3.0) < 1e-12);
  std::vector<double> c(10, 5.0);
  CHECK(lagged_cross_cov(c, c, 3) == 0.0);
}

TEST_CASE("estimator matches brute force on 4-point series") {
  // Every lag and every ordered pair of a 2 x 2 x 4 dataset.
  auto d = testing::gaussian_dataset(2, 2, 4, 3);
  auto cov = estimate_cross_cov(d, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
          for (int u = -2; u <= 2; ++u)
            CHECK(std::abs(cov(i, j, a, b, u) - testing::brute_entry(d, i, j, a, b, u)) < 1e-12);
}

TEST_CASE("estimator matches brute force on longer correlated data") {
  auto d = testing::correlated_dataset(3, 4, 300, 5);
  auto cov = estimate_cross_cov(d, 12);
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b)
          for (int u = -12; u <= 12; ++u)
            worst = std::max(worst, std::abs(cov(i, j, a, b, u) - testing::brute_entry(d, i, j, a, b, u)));
  CHECK(worst < 1e-12);
}

TEST_CASE("constant data gives zero covariance") {
  MvstDataset d(2, testing::line_coords(3), 20, std::vector<double>(120, 5.0));
  auto cov = estimate_cross_cov(d, 4);
  for (double e : cov.entries()) CHECK(e == 0.0);
}

TEST_CASE("symmetry identity holds bit-exactly") {
  auto d = testing::correlated_dataset(2, 5, 200, 9);
  auto cov = estimate_cross_cov(d, 7);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t b = 0; b < 5; ++b)
          for (int u = -7; u <= 7; ++u) CHECK(cov(i, j, a, b, u) == cov(j, i, b, a, -u));
}

TEST_CASE("local covariances agree with the full estimate") {
  auto d = testing::correlated_dataset(3, 3, 150, 2);
  auto cov = estimate_cross_cov(d, 6);
  auto local = estimate_local_cov(d, 6);
  auto slice = local_part(cov);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t a = 0; a < 3; ++a)
        for (int u = -6; u <= 6; ++u) {
          CHECK(std::abs(local(i, j, a, u) - cov(i, j, a, a, u)) < 1e-12);
          CHECK(slice(i, j, a, u) == cov(i, j, a, a, u));
        }
}

TEST_CASE("lag range is validated") {
  auto d = testing::gaussian_dataset(1, 2, 10, 1);
  CHECK_THROWS_AS(estimate_cross_cov(d, 0), ValidationError);
  CHECK_THROWS_AS(estimate_cross_cov(d, 9), ValidationError);
  CHECK_NOTHROW(estimate_cross_cov(d, 8));
}

TEST_CASE("iid noise covariances shrink like root l") {
  auto median_abs = [](std::size_t l) {
    auto d = testing::gaussian_dataset(2, 4, l, 77);
    auto cov = estimate_cross_cov(d, 5);
    std::vector<double> v;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t a = 0; a < 4; ++a)
          for (std::size_t b = 0; b < 4; ++b)
            for (int u = 1; u <= 5; ++u) v.push_back(std::abs(cov(i, j, a, b, u)));
    std::nth_element(v.begin(), v.begin() + static_cast<long>(v.size() / 2), v.end());
    return v[v.size() / 2];
  };
  const double ratio = median_abs(2000) / median_abs(20000);
  CHECK(ratio >= 2.0);
  CHECK(ratio <= 5.0);
}

TEST_CASE("estimate does not depend on the thread count") {
  auto d = testing::correlated_dataset(2, 6, 400, 4);
  set_thread_count(1);
  auto one = estimate_cross_cov(d, 9);
  set_thread_count(4);
  auto four = estimate_cross_cov(d, 9);
  set_thread_count(0);
  CHECK(std::equal(one.entries().begin(), one.entries().end(), four.entries().begin()));
}
