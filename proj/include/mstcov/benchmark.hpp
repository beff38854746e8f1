#pragma once

#include "mstcov/pipeline.hpp"
#include "mstcov/property.hpp"

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace mstcov {

/// Size/power study over a grid of model parameters. For Model 1 the grid is
/// first x second = shift x lag; for Model 2 it is beta1 x beta2.
struct BenchmarkConfig {
  int model = 1;
  std::vector<double> first{0.0};
  std::vector<double> second{0.0};
  std::size_t m = 4;
  std::size_t l = 10000;
  std::size_t replicates = 100;
  std::vector<PropertyType> properties;
  PropertyTestOptions test;
};

/// Reads `key = value` lines ('#' starts a comment). Keys: model, m, l,
/// replicates, properties, alpha, B, M, U, seed, mode, null, and the grid as
/// shifts/lags (Model 1) or beta1/beta2 (Model 2). Lists are comma
/// separated, optionally in brackets. Throws ValidationError on unknown keys
/// or bad values.
BenchmarkConfig parse_benchmark_config(std::istream& in);
BenchmarkConfig parse_benchmark_config(const std::filesystem::path& path);

/// Applies one `key = value` setting.
void apply_benchmark_setting(BenchmarkConfig& config, const std::string& key, const std::string& value);

/// Throws ValidationError unless R >= 1, the grid and property list are
/// nonempty and the model is 1 or 2.
void validate(const BenchmarkConfig& config);

struct BenchmarkRow {
  double first = 0.0;
  double second = 0.0;
  PropertyType property = PropertyType::Vsym;
  std::size_t replicates = 0; // completed
  std::size_t rejections = 0;

  double rate_percent() const;
  /// 100 sqrt(p (1 - p) / R).
  double se_percent() const;
};

struct BenchmarkTable {
  BenchmarkConfig config;
  std::vector<BenchmarkRow> rows; // cell-major, then property
  bool interrupted = false;
};

using BenchmarkProgress = std::function<void(std::size_t done, std::size_t total)>;

/// Runs R seeded replicates per grid cell: simulate, then test every
/// property on the same data. Data and test seeds derive from
/// (seed, cell index, replicate), so rows do not depend on the estimator
/// mode, null mode or thread count. Replicates run across the worker pool.
/// Setting *stop makes the run finish the replicates in flight and return
/// the partial table with interrupted = true.
BenchmarkTable run_benchmark(const BenchmarkConfig& config, const std::atomic<bool>* stop = nullptr,
                             const BenchmarkProgress& progress = {});

/// Columns: model,first_name,first,second_name,second,property,estimator,
/// null,replicates,rejections,rejection_pct,se_pct.
void write_benchmark_csv(std::ostream& out, const BenchmarkTable& table);

/// Properties as rows, grid cells as columns, entries "rate(se)".
void write_benchmark_text(std::ostream& out, const BenchmarkTable& table);

} // namespace mstcov
