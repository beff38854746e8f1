#include "mstcov/benchmark.hpp"

#include "mstcov/error.hpp"
#include "mstcov/parallel.hpp"
#include "mstcov/rng.hpp"
#include "mstcov/simulate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>

namespace mstcov {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string unquote(std::string s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string> split_list(std::string value) {
  value = trim(value);
  if (!value.empty() && value.front() == '[') {
    if (value.back() != ']') throw ValidationError("unterminated list: " + value);
    value = value.substr(1, value.size() - 2);
  }
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = unquote(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("bad number for '" + key + "': " + text);
  }
}

std::uint64_t to_unsigned(const std::string& key, const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw ValidationError("bad non-negative integer for '" + key + "': " + text);
  }
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw ValidationError("integer out of range for '" + key + "': " + text);
  }
}

std::vector<double> to_doubles(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(to_double(key, item));
  return out;
}

const char* first_name(int model) { return model == 1 ? "shift" : "beta1"; }
const char* second_name(int model) { return model == 1 ? "lag" : "beta2"; }

} // namespace

void apply_benchmark_setting(BenchmarkConfig& c, const std::string& raw_key, const std::string& raw_value) {
  std::string key = trim(raw_key);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  const std::string value = unquote(raw_value);
  if (key == "model") {
    const auto v = to_unsigned(key, value);
    if (v != 1 && v != 2) throw ValidationError("model must be 1 or 2");
    c.model = static_cast<int>(v);
  } else if (key == "m") {
    c.m = to_unsigned(key, value);
  } else if (key == "l") {
    c.l = to_unsigned(key, value);
  } else if (key == "replicates" || key == "r") {
    c.replicates = to_unsigned(key, value);
  } else if (key == "properties") {
    c.properties.clear();
    for (const auto& item : split_list(raw_value)) {
      if (item == "all") {
        c.properties.assign(kAllProperties.begin(), kAllProperties.end());
      } else if (item == "symmetry") {
        c.properties.insert(c.properties.end(), kSymmetryProperties.begin(), kSymmetryProperties.end());
      } else if (item == "separability") {
        c.properties.insert(c.properties.end(), kSeparabilityProperties.begin(), kSeparabilityProperties.end());
      } else {
        c.properties.push_back(parse_property(item));
      }
    }
  } else if (key == "alpha") {
    c.test.alpha = to_double(key, value);
  } else if (key == "b" || key == "bootstrap") {
    c.test.bootstrap = to_unsigned(key, value);
  } else if (key == "memory_limit" || key == "memory-limit") {
    c.test.memory_limit = to_unsigned(key, value);
  } else if (key == "u" || key == "max_lag") {
    c.test.max_lag = to_unsigned(key, value);
  } else if (key == "seed") {
    c.test.seed = to_unsigned(key, value);
  } else if (key == "mode") {
    c.test.estimator = parse_estimator_mode(value);
  } else if (key == "null") {
    c.test.null_mode = parse_null_mode(value);
  } else if (key == "shifts" || key == "beta1") {
    c.first = to_doubles(key, raw_value);
  } else if (key == "lags" || key == "beta2") {
    c.second = to_doubles(key, raw_value);
  } else {
    throw ValidationError("unknown benchmark setting '" + key + "'");
  }
}

BenchmarkConfig parse_benchmark_config(std::istream& in) {
  BenchmarkConfig config;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue; // blank or section header
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(number) + ": expected key = value");
    }
    // M and B are case-sensitive in the docs; keys are matched lowercase, so
    // "M" becomes the memory limit and "m" the grid side.
    std::string key = trim(line.substr(0, eq));
    if (key == "M") key = "memory_limit";
    apply_benchmark_setting(config, key, line.substr(eq + 1));
  }
  return config;
}

BenchmarkConfig parse_benchmark_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  return parse_benchmark_config(in);
}

void validate(const BenchmarkConfig& c) {
  if (c.model != 1 && c.model != 2) throw ValidationError("model must be 1 or 2");
  if (c.replicates < 1) throw ValidationError("replicates must be at least 1");
  if (c.first.empty() || c.second.empty()) throw ValidationError("parameter grid is empty");
  if (c.properties.empty()) throw ValidationError("no properties to test");
  if (c.m < 2) throw ValidationError("grid side m must be at least 2");
  if (c.l < 3) throw ValidationError("l must be at least 3");
  for (double v : c.first) {
    if (v < 0.0 || (c.model == 1 && v != std::floor(v))) {
      throw ValidationError(std::string(first_name(c.model)) + " values must be " +
                            (c.model == 1 ? "non-negative integers" : "non-negative"));
    }
  }
  for (double v : c.second) {
    if (v < 0.0 || (c.model == 1 && v != std::floor(v))) {
      throw ValidationError(std::string(second_name(c.model)) + " values must be " +
                            (c.model == 1 ? "non-negative integers" : "non-negative"));
    }
  }
}

double BenchmarkRow::rate_percent() const {
  return replicates ? 100.0 * static_cast<double>(rejections) / static_cast<double>(replicates) : 0.0;
}

double BenchmarkRow::se_percent() const {
  if (replicates == 0) return 0.0;
  const double p = static_cast<double>(rejections) / static_cast<double>(replicates);
  return 100.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(replicates));
}

BenchmarkTable run_benchmark(const BenchmarkConfig& config, const std::atomic<bool>* stop,
                             const BenchmarkProgress& progress) {
  validate(config);
  BenchmarkTable table;
  table.config = config;
  const std::size_t R = config.replicates;
  const std::size_t P = config.properties.size();
  const std::size_t cells = config.first.size() * config.second.size();
  const std::size_t total = cells * R;
  std::size_t done = 0;
  std::mutex progress_mutex;

  for (std::size_t cell = 0; cell < cells; ++cell) {
    const double first = config.first[cell / config.second.size()];
    const double second = config.second[cell % config.second.size()];
    std::optional<Model2Sampler> sampler;
    if (config.model == 2) {
      sampler.emplace(config.m, config.l, first, second, config.test.memory_limit);
    }
    // -1 = not run, 0/1 = decision.
    std::vector<signed char> decisions(R * P, -1);
    parallel_for(R, [&](std::size_t rep) {
      if (stop && stop->load()) return;
      const std::uint64_t data_seed = derive_seed(config.test.seed, {cell, rep, 0});
      const MvstDataset data =
          config.model == 1
              ? simulate_model1({config.m, config.l, static_cast<std::size_t>(first),
                                 static_cast<std::size_t>(second), data_seed})
              : sampler->sample(data_seed);
      for (std::size_t k = 0; k < P; ++k) {
        PropertyTestOptions options = config.test;
        options.seed = derive_seed(config.test.seed,
                                   {cell, rep, 1, static_cast<std::uint64_t>(config.properties[k])});
        decisions[rep * P + k] = run_property_test(data, config.properties[k], options).reject ? 1 : 0;
      }
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(++done, total);
      }
    });
    for (std::size_t k = 0; k < P; ++k) {
      BenchmarkRow row{first, second, config.properties[k], 0, 0};
      for (std::size_t rep = 0; rep < R; ++rep) {
        const signed char d = decisions[rep * P + k];
        if (d < 0) continue;
        ++row.replicates;
        row.rejections += static_cast<std::size_t>(d);
      }
      table.rows.push_back(row);
    }
    if (stop && stop->load()) {
      table.interrupted = true;
      break;
    }
  }
  return table;
}

void write_benchmark_csv(std::ostream& out, const BenchmarkTable& table) {
  const auto& c = table.config;
  out << "model,first_name,first,second_name,second,property,estimator,null,replicates,"
         "rejections,rejection_pct,se_pct\n";
  char buf[160];
  for (const auto& row : table.rows) {
    std::snprintf(buf, sizeof buf, "%d,%s,%g,%s,%g,%s,%s,%s,%zu,%zu,%.1f,%.1f\n", c.model,
                  first_name(c.model), row.first, second_name(c.model), row.second,
                  std::string(slug(row.property)).c_str(),
                  std::string(to_string(c.test.estimator)).c_str(),
                  std::string(to_string(c.test.null_mode)).c_str(), row.replicates, row.rejections,
                  row.rate_percent(), row.se_percent());
    out << buf;
  }
}

void write_benchmark_text(std::ostream& out, const BenchmarkTable& table) {
  const auto& c = table.config;
  std::vector<std::string> cell_names;
  for (double f : c.first) {
    for (double s : c.second) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s=%g,%s=%g", first_name(c.model), f, second_name(c.model), s);
      cell_names.emplace_back(buf);
    }
  }
  std::vector<std::vector<std::string>> grid(c.properties.size(), std::vector<std::string>(cell_names.size(), "-"));
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::size_t cell = r / c.properties.size();
    const std::size_t prop = r % c.properties.size();
    const auto& row = table.rows[r];
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f(%.1f)", row.rate_percent(), row.se_percent());
    grid[prop][cell] = buf;
  }
  std::size_t first_width = 8;
  for (auto p : c.properties) first_width = std::max(first_width, to_string(p).size());
  std::vector<std::size_t> widths(cell_names.size());
  for (std::size_t k = 0; k < cell_names.size(); ++k) {
    widths[k] = cell_names[k].size();
    for (const auto& line : grid) widths[k] = std::max(widths[k], line[k].size());
  }
  auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - std::min(w, s.size()), ' '); };
  out << "Model " << c.model << ", R=" << c.replicates << ", alpha=" << c.test.alpha
      << ", B=" << c.test.bootstrap << ", M=" << c.test.memory_limit << ", U=" << c.test.max_lag
      << ", " << to_string(c.test.estimator) << ", " << to_string(c.test.null_mode)
      << (table.interrupted ? " (interrupted, partial)" : "") << "\n";
  out << pad("property", first_width);
  for (std::size_t k = 0; k < cell_names.size(); ++k) out << "  " << pad(cell_names[k], widths[k]);
  out << "\n";
  for (std::size_t prop = 0; prop < c.properties.size(); ++prop) {
    out << pad(std::string(to_string(c.properties[prop])), first_width);
    for (std::size_t k = 0; k < cell_names.size(); ++k) out << "  " << pad(grid[prop][k], widths[k]);
    out << "\n";
  }
}

} // namespace mstcov
