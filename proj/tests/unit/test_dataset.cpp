#include "doctest.h"
#include "helpers.hpp"

#include "mstcov/csv_io.hpp"
#include "mstcov/error.hpp"
#include "mstcov/property.hpp"

#include <sstream>

using namespace mstcov;

TEST_CASE("dataset validation") {
  CHECK_THROWS_AS(MvstDataset(0, testing::line_coords(2), 3, {}), ValidationError);
  CHECK_THROWS_AS(MvstDataset(1, testing::line_coords(2), 3, std::vector<double>(5)),
                  ValidationError);
  CHECK_THROWS_AS(MvstDataset(1, {{0, 0}, {0, 0}}, 2, std::vector<double>(4)), ValidationError);
  std::vector<double> v(4, 0.0);
  v[2] = std::nan("");
  CHECK_THROWS_AS(MvstDataset(1, testing::line_coords(2), 2, v), ValidationError);
}

TEST_CASE("layout is variable, location, time") {
  std::vector<double> v(2 * 3 * 4);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = static_cast<double>(k);
  MvstDataset d(2, testing::line_coords(3), 4, v);
  CHECK(d(1, 2, 3) == 23.0);
  CHECK(d.series(1, 0)[0] == 12.0);
}

TEST_CASE("unit square grid is lexicographic") {
  auto g = unit_square_grid(3);
  REQUIRE(g.size() == 9);
  CHECK(g[1].x == 0.0);
  CHECK(g[1].y == doctest::Approx(0.5));
  CHECK(g[3].x == doctest::Approx(0.5));
  CHECK(std::is_sorted(g.begin(), g.end()));
}

TEST_CASE("csv round trip is exact") {
  auto d = testing::gaussian_dataset(2, 3, 5, 7);
  std::stringstream s;
  write_dataset_csv(s, d);
  auto back = read_dataset_csv(s);
  CHECK(back.num_variables() == 2);
  CHECK(back.num_locations() == 3);
  CHECK(back.num_times() == 5);
  for (std::size_t k = 0; k < d.values().size(); ++k) CHECK(back.values()[k] == d.values()[k]);
}

TEST_CASE("csv rejects incomplete grids and bad headers") {
  std::stringstream bad_header("var,x,y,t,v\n");
  CHECK_THROWS_AS(read_dataset_csv(bad_header), ValidationError);
  std::stringstream missing("variable,loc_x,loc_y,time,value\nZ,0,0,1,1.0\nZ,0,0,2,2.0\nZ,1,0,1,3.0\n");
  CHECK_THROWS_AS(read_dataset_csv(missing), ValidationError);
  std::stringstream gap("variable,loc_x,loc_y,time,value\nZ,0,0,1,1.0\nZ,0,0,3,2.0\n");
  CHECK_THROWS_AS(read_dataset_csv(gap), ValidationError);
}

TEST_CASE("property names parse both ways") {
  for (auto p : {PropertyType::Vsym, PropertyType::Ssym, PropertyType::Tsym, PropertyType::VST,
                 PropertyType::SVT, PropertyType::TVS, PropertyType::VS, PropertyType::VT,
                 PropertyType::ST}) {
    CHECK(parse_property(to_string(p)) == p);
    CHECK(parse_property(slug(p)) == p);
  }
  CHECK_THROWS_AS(parse_property("X|Y"), ValidationError);
}
