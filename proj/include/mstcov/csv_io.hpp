#pragma once

#include "mstcov/dataset.hpp"

#include <filesystem>
#include <iosfwd>

namespace mstcov {

/// Long-format CSV with header `variable,loc_x,loc_y,time,value`.
///
/// Variables keep their order of first appearance; locations are ordered
/// lexicographically by (x, y); times must be integers that become
/// consecutive after sorting. Every (variable, location, time) cell must be
/// present exactly once. Throws ValidationError otherwise.
MvstDataset read_dataset_csv(std::istream& in);
MvstDataset read_dataset_csv(const std::filesystem::path& path);

/// Writes the same schema, rows ordered variable, location, time. Values are
/// printed with 17 significant digits so a read-back is exact.
void write_dataset_csv(std::ostream& out, const MvstDataset& data);
void write_dataset_csv(const std::filesystem::path& path, const MvstDataset& data);

} // namespace mstcov
