#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mstcov {

/// A spatial location in the plane (unitless grid coordinates).
struct Point {
  double x = 0.0;
  double y = 0.0;
  auto operator<=>(const Point&) const = default;
};

/// Labels carried along for I/O; they do not affect any computation except
/// the time axis used by harmonic regression.
struct DatasetMeta {
  std::vector<std::string> variable_names; // empty => "Z1", "Z2", ...
  std::int64_t first_time = 1;             // time stamp of index t = 0
  double time_step = 1.0;                  // abstract unit (e.g. hours)
};

/// p-variate values on n planar locations over l consecutive time points.
///
/// Values are stored variable-major, then location, then time:
/// `values[((i * n) + a) * l + t]`, so every series Z_i(s_a, .) is a
/// contiguous span. The object is immutable after construction.
class MvstDataset {
public:
  /// Throws ValidationError unless p >= 1, n >= 1, l >= 2, the value vector
  /// has exactly p*n*l finite entries and coordinates are pairwise distinct.
  MvstDataset(std::size_t num_variables, std::vector<Point> coords, std::size_t num_times,
              std::vector<double> values, DatasetMeta meta = {});

  std::size_t num_variables() const { return p_; }
  std::size_t num_locations() const { return coords_.size(); }
  std::size_t num_times() const { return l_; }

  double operator()(std::size_t i, std::size_t a, std::size_t t) const {
    return values_[(i * coords_.size() + a) * l_ + t];
  }

  std::span<const double> series(std::size_t i, std::size_t a) const {
    return {values_.data() + (i * coords_.size() + a) * l_, l_};
  }

  std::span<const double> values() const { return values_; }
  const std::vector<Point>& coords() const { return coords_; }
  const DatasetMeta& meta() const { return meta_; }

  /// Variable label, falling back to "Z<i+1>".
  std::string variable_name(std::size_t i) const;

  /// Time stamp of index t: first_time + t * time_step.
  double time_at(std::size_t t) const {
    return static_cast<double>(meta_.first_time) + static_cast<double>(t) * meta_.time_step;
  }

private:
  std::size_t p_;
  std::size_t l_;
  std::vector<Point> coords_;
  std::vector<double> values_;
  DatasetMeta meta_;
};

/// Regular m x m grid on the unit square, ordered lexicographically by (x, y).
std::vector<Point> unit_square_grid(std::size_t m);

} // namespace mstcov
