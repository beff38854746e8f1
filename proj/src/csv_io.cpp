#include "mstcov/csv_io.hpp"

#include "mstcov/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace mstcov {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

double parse_double(std::string_view field, std::size_t line_no, const char* what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw ValidationError("line " + std::to_string(line_no) + ": invalid " + what + " '" +
                          std::string(field) + "'");
  }
  return value;
}

std::int64_t parse_time(std::string_view field, std::size_t line_no) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec == std::errc() && ptr == field.data() + field.size()) return value;
  // Accept integral values written as reals ("3.0").
  const double d = parse_double(field, line_no, "time");
  if (d != std::floor(d)) {
    throw ValidationError("line " + std::to_string(line_no) + ": time must be an integer");
  }
  return static_cast<std::int64_t>(d);
}

struct Row {
  std::size_t variable;
  Point location;
  std::int64_t time;
  double value;
};

} // namespace

MvstDataset read_dataset_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ValidationError("empty CSV input");
  ++line_no;
  {
    const auto header = split_fields(line);
    const std::vector<std::string_view> expected{"variable", "loc_x", "loc_y", "time", "value"};
    if (header != expected) {
      throw ValidationError("CSV header must be 'variable,loc_x,loc_y,time,value'");
    }
  }

  std::vector<std::string> variable_names;
  std::map<std::string, std::size_t, std::less<>> variable_index;
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 5) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected 5 fields");
    }
    auto it = variable_index.find(fields[0]);
    if (it == variable_index.end()) {
      if (fields[0].empty()) {
        throw ValidationError("line " + std::to_string(line_no) + ": empty variable name");
      }
      it = variable_index.emplace(std::string(fields[0]), variable_names.size()).first;
      variable_names.emplace_back(fields[0]);
    }
    rows.push_back({it->second,
                    {parse_double(fields[1], line_no, "loc_x"),
                     parse_double(fields[2], line_no, "loc_y")},
                    parse_time(fields[3], line_no),
                    parse_double(fields[4], line_no, "value")});
  }
  if (rows.empty()) throw ValidationError("CSV has no data rows");

  std::vector<Point> coords;
  std::vector<std::int64_t> times;
  for (const Row& r : rows) {
    coords.push_back(r.location);
    times.push_back(r.time);
  }
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (times[k] != times[k - 1] + 1) {
      throw ValidationError("times are not consecutive integers (gap after " +
                            std::to_string(times[k - 1]) + ")");
    }
  }

  const std::size_t p = variable_names.size();
  const std::size_t n = coords.size();
  const std::size_t l = times.size();
  if (rows.size() != p * n * l) {
    throw ValidationError("CSV does not form a complete variable x location x time grid (" +
                          std::to_string(rows.size()) + " rows, expected " +
                          std::to_string(p * n * l) + ")");
  }
  std::vector<double> values(p * n * l, 0.0);
  std::vector<char> seen(p * n * l, 0);
  for (const Row& r : rows) {
    const auto a = static_cast<std::size_t>(
        std::lower_bound(coords.begin(), coords.end(), r.location) - coords.begin());
    const auto t = static_cast<std::size_t>(r.time - times.front());
    const std::size_t idx = (r.variable * n + a) * l + t;
    if (seen[idx]) {
      throw ValidationError("duplicate cell for variable '" + variable_names[r.variable] +
                            "' at time " + std::to_string(r.time));
    }
    seen[idx] = 1;
    values[idx] = r.value;
  }
  DatasetMeta meta;
  meta.variable_names = std::move(variable_names);
  meta.first_time = times.front();
  return MvstDataset(p, std::move(coords), l, std::move(values), std::move(meta));
}

MvstDataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  return read_dataset_csv(in);
}

void write_dataset_csv(std::ostream& out, const MvstDataset& data) {
  out << "variable,loc_x,loc_y,time,value\n";
  char buf[128];
  for (std::size_t i = 0; i < data.num_variables(); ++i) {
    const std::string name = data.variable_name(i);
    for (std::size_t a = 0; a < data.num_locations(); ++a) {
      const Point& s = data.coords()[a];
      const auto series = data.series(i, a);
      for (std::size_t t = 0; t < data.num_times(); ++t) {
        const auto stamp = data.meta().first_time + static_cast<std::int64_t>(t);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%lld,%.17g", s.x, s.y,
                      static_cast<long long>(stamp), series[t]);
        out << name << ',' << buf << '\n';
      }
    }
  }
}

void write_dataset_csv(const std::filesystem::path& path, const MvstDataset& data) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  write_dataset_csv(out, data);
}

} // namespace mstcov
