#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "ids/dataset.hpp"

namespace ids {

enum class DataFormat { nslkdd, cicids, generic };

DataFormat parse_data_format(std::string_view name);
std::string_view to_string(DataFormat format);

/// The 41 NSL-KDD feature names in file order.
const std::vector<std::string>& nslkdd_attribute_names();

/// Headered CICIDS2017 flow CSV. `path` may be a single file or a directory,
/// in which case every *.csv inside is read in lexicographic order and all
/// headers must agree. Every non-label column is numeric; rows with NaN or
/// infinite values are dropped and counted in Dataset::dropped_rows().
Dataset load_cicids(const std::filesystem::path& path);

/// Headerless NSL-KDD file with 42 or 43 fields per line. The difficulty
/// field, when present, is discarded.
Dataset load_nslkdd(const std::filesystem::path& path);

/// Headered CSV with a `label` column. A column is numeric when every
/// non-empty token parses as a number, nominal otherwise.
Dataset load_generic(const std::filesystem::path& path);

Dataset load_dataset(const std::filesystem::path& path, DataFormat format);

/// Stream variants of the loaders; `origin` names the source in errors.
Dataset read_cicids(std::istream& in, std::string_view origin);
Dataset read_nslkdd(std::istream& in, std::string_view origin);
Dataset read_generic(std::istream& in, std::string_view origin);

/// Writes `data` as a headered CSV (attributes then `label`) readable by
/// load_generic. Numbers use the shortest round-trip representation.
void write_csv(const Dataset& data, std::ostream& out);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace ids
