#include "mstcov/dataset.hpp"

#include "mstcov/error.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace mstcov {

MvstDataset::MvstDataset(std::size_t num_variables, std::vector<Point> coords,
                         std::size_t num_times, std::vector<double> values, DatasetMeta meta)
    : p_(num_variables), l_(num_times), coords_(std::move(coords)), values_(std::move(values)),
      meta_(std::move(meta)) {
  if (p_ < 1) throw ValidationError("dataset needs at least one variable");
  if (coords_.empty()) throw ValidationError("dataset needs at least one location");
  if (l_ < 2) throw ValidationError("dataset needs at least two time points");
  if (values_.size() != p_ * coords_.size() * l_) {
    throw ValidationError("dataset value count " + std::to_string(values_.size()) +
                          " does not match p*n*l = " +
                          std::to_string(p_ * coords_.size() * l_));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw ValidationError("dataset contains a non-finite value");
  }
  for (const Point& c : coords_) {
    if (!std::isfinite(c.x) || !std::isfinite(c.y)) {
      throw ValidationError("dataset contains a non-finite coordinate");
    }
  }
  std::vector<Point> sorted = coords_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("dataset coordinates must be distinct");
  }
  if (!meta_.variable_names.empty() && meta_.variable_names.size() != p_) {
    throw ValidationError("variable name count does not match number of variables");
  }
  if (!(meta_.time_step > 0.0)) throw ValidationError("time_step must be positive");
}

std::string MvstDataset::variable_name(std::size_t i) const {
  if (i < meta_.variable_names.size()) return meta_.variable_names[i];
  return "Z" + std::to_string(i + 1);
}

std::vector<Point> unit_square_grid(std::size_t m) {
  if (m < 2) throw ValidationError("grid side m must be at least 2");
  std::vector<Point> grid;
  grid.reserve(m * m);
  const double step = 1.0 / static_cast<double>(m - 1);
  for (std::size_t gx = 0; gx < m; ++gx) {
    for (std::size_t gy = 0; gy < m; ++gy) {
      grid.push_back({static_cast<double>(gx) * step, static_cast<double>(gy) * step});
    }
  }
  return grid;
}

} // namespace mstcov
