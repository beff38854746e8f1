#pragma once

#include "mstcov/rank_test.hpp"
#include "mstcov/test_functions.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace mstcov {

struct BoxplotSpec {
  double central_fraction = 0.5;
  double whisker_factor = 1.5;
  std::size_t density_bins = 64;
  bool zero_line = true;
  double width = 420.0;
  double height = 300.0;
  std::string title; // defaults to the property name
};

/// Pointwise geometry of the modified functional boxplot.
struct BoxplotGeometry {
  std::vector<int> lags;
  std::vector<std::size_t> central;   // curve indices in the central region
  std::vector<double> lower, upper;   // central envelope per lag
  std::vector<double> whisker_low, whisker_high;
  std::vector<std::vector<std::size_t>> density; // [lag][bin] central curves per bin
  double y_min = 0.0;                 // axis range (data and whiskers)
  double y_max = 0.0;
};

/// Central region: the ceil(fraction * N) deepest curves (modified band
/// depth, ties by label). Whiskers: envelope -/+ factor * pointwise height.
/// Density bins span the whisker range at each lag. Throws ValidationError
/// for fewer than 2 curves or an invalid spec.
BoxplotGeometry compute_boxplot(const TestFunctionSet& set, const BoxplotSpec& spec = {});

/// SVG 1.1 document. The central region is filled green when
/// result->p_value >= result->alpha, red otherwise, gray without a result;
/// fill opacity follows the density of central curves.
std::string render_functional_boxplot(const TestFunctionSet& set, const TestResult* result,
                                      const BoxplotSpec& spec = {});

struct BoxplotPanel {
  const TestFunctionSet* set = nullptr;
  const TestResult* result = nullptr;
};

/// Several panels in one SVG, `columns` per row.
std::string render_boxplot_grid(const std::vector<BoxplotPanel>& panels, std::size_t columns,
                                const BoxplotSpec& spec = {});

} // namespace mstcov
