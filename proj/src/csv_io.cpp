#include "ids/csv_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "ids/error.hpp"

namespace ids {

namespace fs = std::filesystem;

DataFormat parse_data_format(std::string_view name) {
  if (name == "nslkdd") return DataFormat::nslkdd;
  if (name == "cicids") return DataFormat::cicids;
  if (name == "generic") return DataFormat::generic;
  throw UsageError("unknown data format '" + std::string(name) + "' (nslkdd, cicids, generic)");
}

std::string_view to_string(DataFormat format) {
  switch (format) {
    case DataFormat::nslkdd: return "nslkdd";
    case DataFormat::cicids: return "cicids";
    case DataFormat::generic: return "generic";
  }
  return "generic";
}

const std::vector<std::string>& nslkdd_attribute_names() {
  static const std::vector<std::string> names = {
      "duration", "protocol_type", "service", "flag", "src_bytes", "dst_bytes", "land",
      "wrong_fragment", "urgent", "hot", "num_failed_logins", "logged_in", "num_compromised",
      "root_shell", "su_attempted", "num_root", "num_file_creations", "num_shells",
      "num_access_files", "num_outbound_cmds", "is_host_login", "is_guest_login", "count",
      "srv_count", "serror_rate", "srv_serror_rate", "rerror_rate", "srv_rerror_rate",
      "same_srv_rate", "diff_srv_rate", "srv_diff_host_rate", "dst_host_count",
      "dst_host_srv_count", "dst_host_same_srv_rate", "dst_host_diff_srv_rate",
      "dst_host_same_src_port_rate", "dst_host_srv_diff_host_rate", "dst_host_serror_rate",
      "dst_host_srv_serror_rate", "dst_host_rerror_rate", "dst_host_srv_rerror_rate"};
  return names;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool blank(std::string_view line) { return trim(line).empty(); }

/// Splits one CSV record. Double-quoted fields may contain commas and
/// doubled quotes; fields are returned untrimmed.
std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

/// Parses a numeric token. Accepts the inf / infinity / nan spellings used by
/// flow exporters; returns nullopt for anything else.
std::optional<double> parse_number(std::string_view token) {
  token = trim(token);
  if (token.empty()) return std::nullopt;
  if (token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec == std::errc() && ptr == token.data() + token.size()) return value;
  if (ec == std::errc::result_out_of_range && ptr == token.data() + token.size()) {
    return token.front() == '-' ? -std::numeric_limits<double>::infinity()
                                : std::numeric_limits<double>::infinity();
  }
  return std::nullopt;
}

std::string location(std::string_view origin, std::size_t line) {
  return std::string(origin) + ":" + std::to_string(line);
}

bool next_line(std::istream& in, std::string& line, std::size_t& line_no) {
  if (!std::getline(in, line)) return false;
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  return true;
}

struct Header {
  std::vector<std::string> names;  // attribute names, label excluded
  std::size_t label_column = 0;
  std::size_t field_count = 0;
};

Header parse_header(std::string_view line, std::string_view origin, bool prefer_exact_label) {
  const auto fields = split_csv(line);
  if (blank(line) || fields.size() < 2) throw DataError(std::string(origin) + ": unparseable header");
  std::optional<std::size_t> label;
  if (prefer_exact_label) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (lower(trim(fields[i])) == "label") label = i;
    }
  }
  if (!label) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (lower(trim(fields[i])).find("label") != std::string::npos) label = i;
    }
  }
  if (!label) throw DataError(std::string(origin) + ": unparseable header (no Label column)");

  Header h;
  h.label_column = *label;
  h.field_count = fields.size();
  std::map<std::string, int> seen;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i == *label) continue;
    std::string name(trim(fields[i]));
    if (name.empty()) throw DataError(std::string(origin) + ": unparseable header (empty column name)");
    // Published CICIDS files repeat "Fwd Header Length"; later copies get a
    // numeric suffix.
    const int n = seen[name]++;
    if (n > 0) name += "." + std::to_string(n);
    h.names.push_back(std::move(name));
  }
  return h;
}

std::vector<std::string> sorted_unique(const std::set<std::string>& values) {
  return {values.begin(), values.end()};
}

std::map<std::string, int> index_of(const std::vector<std::string>& values) {
  std::map<std::string, int> out;
  for (std::size_t i = 0; i < values.size(); ++i) out.emplace(values[i], static_cast<int>(i));
  return out;
}

/// Rows of one or more headered CICIDS files before class indexing.
struct CicidsAccumulator {
  std::optional<Header> header;
  std::vector<double> values;
  std::vector<std::string> labels;
  std::size_t dropped = 0;

  void read(std::istream& in, std::string_view origin) {
    std::string line;
    std::size_t line_no = 0;
    while (next_line(in, line, line_no) && blank(line)) {
    }
    if (line_no == 0 || blank(line)) throw DataError(std::string(origin) + ": unparseable header");
    Header h = parse_header(line, origin, false);
    if (!header) {
      header = std::move(h);
    } else if (h.names != header->names || h.label_column != header->label_column) {
      throw DataError(std::string(origin) + ": header differs from earlier files");
    }
    const std::size_t d = header->names.size();
    std::vector<double> buffer(d);
    while (next_line(in, line, line_no)) {
      if (blank(line)) continue;
      const auto fields = split_csv(line);
      if (fields.size() != header->field_count) {
        throw DataError(location(origin, line_no) + ": expected " +
                        std::to_string(header->field_count) + " fields, found " +
                        std::to_string(fields.size()));
      }
      bool finite = true;
      std::size_t a = 0;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i == header->label_column) continue;
        const std::string_view tok = trim(fields[i]);
        double v = std::numeric_limits<double>::quiet_NaN();
        if (!tok.empty()) {
          const auto parsed = parse_number(tok);
          if (!parsed) {
            throw DataError(location(origin, line_no) + ": non-numeric value '" + std::string(tok) +
                            "' in column '" + header->names[a] + "'");
          }
          v = *parsed;
        }
        finite = finite && std::isfinite(v);
        buffer[a++] = v;
      }
      if (!finite) {
        ++dropped;
        continue;
      }
      values.insert(values.end(), buffer.begin(), buffer.end());
      labels.emplace_back(trim(fields[header->label_column]));
    }
  }

  Dataset finish() const {
    std::vector<AttributeSchema> schema;
    for (const auto& name : header->names) schema.push_back({name, AttributeKind::numeric, {}});
    auto classes = sorted_unique(std::set<std::string>(labels.begin(), labels.end()));
    const auto class_index = index_of(classes);
    Dataset out(std::move(schema), std::move(classes), SourceTag::cicids);
    const std::size_t d = header->names.size();
    out.reserve(labels.size());
    for (std::size_t r = 0; r < labels.size(); ++r) {
      out.add_row(std::span<const double>(values.data() + r * d, d), class_index.at(labels[r]));
    }
    out.set_dropped_rows(dropped);
    return out;
  }
};

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open data file '" + path.string() + "'");
  return in;
}

}  // namespace

Dataset read_cicids(std::istream& in, std::string_view origin) {
  CicidsAccumulator acc;
  acc.read(in, origin);
  return acc.finish();
}

Dataset load_cicids(const fs::path& path) {
  CicidsAccumulator acc;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && lower(entry.path().extension().string()) == ".csv") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError("no .csv files in '" + path.string() + "'");
    for (const auto& f : files) {
      auto in = open_input(f);
      acc.read(in, f.string());
    }
  } else {
    auto in = open_input(path);
    acc.read(in, path.string());
  }
  return acc.finish();
}

Dataset read_nslkdd(std::istream& in, std::string_view origin) {
  const auto& names = nslkdd_attribute_names();
  constexpr std::array<std::size_t, 3> kNominal = {1, 2, 3};
  const auto is_nominal = [&](std::size_t a) {
    return std::find(kNominal.begin(), kNominal.end(), a) != kNominal.end();
  };

  std::size_t field_count = 0;
  std::vector<double> numeric;  // nominal slots hold 0 until indexed
  std::vector<std::array<std::string, 3>> nominal;
  std::vector<std::string> labels;
  std::array<std::set<std::string>, 3> categories;
  std::size_t dropped = 0;

  std::string line;
  std::size_t line_no = 0;
  std::vector<double> buffer(names.size());
  while (next_line(in, line, line_no)) {
    if (blank(line)) continue;
    const auto fields = split_csv(line);
    if (field_count == 0) {
      if (fields.size() != 42 && fields.size() != 43) {
        throw DataError(location(origin, line_no) + ": expected 42 or 43 fields, found " +
                        std::to_string(fields.size()));
      }
      field_count = fields.size();
    } else if (fields.size() != field_count) {
      throw DataError(location(origin, line_no) + ": inconsistent field count " +
                      std::to_string(fields.size()) + " (expected " + std::to_string(field_count) +
                      ")");
    }
    std::array<std::string, 3> cats;
    bool finite = true;
    for (std::size_t a = 0; a < names.size(); ++a) {
      const std::string_view tok = trim(fields[a]);
      if (is_nominal(a)) {
        cats[a - 1] = std::string(tok);
        buffer[a] = 0.0;
        continue;
      }
      const auto v = parse_number(tok);
      if (!v) {
        throw DataError(location(origin, line_no) + ": non-numeric value '" + std::string(tok) +
                        "' in column '" + names[a] + "'");
      }
      finite = finite && std::isfinite(*v);
      buffer[a] = *v;
    }
    if (!finite) {
      ++dropped;
      continue;
    }
    for (std::size_t i = 0; i < 3; ++i) categories[i].insert(cats[i]);
    numeric.insert(numeric.end(), buffer.begin(), buffer.end());
    nominal.push_back(std::move(cats));
    labels.emplace_back(trim(fields[41]));
  }
  if (field_count == 0) throw DataError(std::string(origin) + ": no records");

  std::vector<AttributeSchema> schema;
  for (std::size_t a = 0; a < names.size(); ++a) {
    if (is_nominal(a)) {
      schema.push_back({names[a], AttributeKind::nominal, sorted_unique(categories[a - 1])});
    } else {
      schema.push_back({names[a], AttributeKind::numeric, {}});
    }
  }
  std::array<std::map<std::string, int>, 3> cat_index;
  for (std::size_t i = 0; i < 3; ++i) cat_index[i] = index_of(schema[kNominal[i]].nominal_values);
  auto classes = sorted_unique(std::set<std::string>(labels.begin(), labels.end()));
  const auto class_index = index_of(classes);

  Dataset out(std::move(schema), std::move(classes), SourceTag::nslkdd);
  const std::size_t d = names.size();
  out.reserve(labels.size());
  for (std::size_t r = 0; r < labels.size(); ++r) {
    std::copy_n(numeric.begin() + static_cast<std::ptrdiff_t>(r * d), d, buffer.begin());
    for (std::size_t i = 0; i < 3; ++i) buffer[kNominal[i]] = cat_index[i].at(nominal[r][i]);
    out.add_row(buffer, class_index.at(labels[r]));
  }
  out.set_dropped_rows(dropped);
  return out;
}

Dataset load_nslkdd(const fs::path& path) {
  auto in = open_input(path);
  return read_nslkdd(in, path.string());
}

Dataset read_generic(std::istream& in, std::string_view origin) {
  std::string line;
  std::size_t line_no = 0;
  while (next_line(in, line, line_no) && blank(line)) {
  }
  if (line_no == 0 || blank(line)) throw DataError(std::string(origin) + ": unparseable header");
  const Header header = parse_header(line, origin, true);
  const std::size_t d = header.names.size();

  std::vector<std::vector<std::string>> tokens;  // per row, attributes then label
  while (next_line(in, line, line_no)) {
    if (blank(line)) continue;
    auto fields = split_csv(line);
    if (fields.size() != header.field_count) {
      throw DataError(location(origin, line_no) + ": expected " + std::to_string(header.field_count) +
                      " fields, found " + std::to_string(fields.size()));
    }
    std::vector<std::string> row;
    row.reserve(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i != header.label_column) row.emplace_back(trim(fields[i]));
    }
    row.emplace_back(trim(fields[header.label_column]));
    tokens.push_back(std::move(row));
  }

  std::vector<AttributeSchema> schema(d);
  for (std::size_t a = 0; a < d; ++a) {
    bool any = false;
    bool numeric = true;
    std::set<std::string> cats;
    for (const auto& row : tokens) {
      if (row[a].empty()) continue;
      any = true;
      if (numeric && !parse_number(row[a])) numeric = false;
      cats.insert(row[a]);
    }
    schema[a].name = header.names[a];
    if (any && numeric) {
      schema[a].kind = AttributeKind::numeric;
    } else {
      schema[a].kind = AttributeKind::nominal;
      for (const auto& row : tokens) cats.insert(row[a]);
      schema[a].nominal_values = sorted_unique(cats);
    }
  }

  std::vector<std::map<std::string, int>> cat_index(d);
  for (std::size_t a = 0; a < d; ++a) {
    if (schema[a].is_nominal()) cat_index[a] = index_of(schema[a].nominal_values);
  }

  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  std::size_t dropped = 0;
  for (const auto& row : tokens) {
    std::vector<double> values(d);
    bool finite = true;
    for (std::size_t a = 0; a < d; ++a) {
      if (schema[a].is_nominal()) {
        values[a] = cat_index[a].at(row[a]);
      } else {
        const auto v = parse_number(row[a]);
        values[a] = v ? *v : std::numeric_limits<double>::quiet_NaN();
        finite = finite && std::isfinite(values[a]);
      }
    }
    if (!finite) {
      ++dropped;
      continue;
    }
    rows.push_back(std::move(values));
    labels.push_back(row[d]);
  }

  auto classes = sorted_unique(std::set<std::string>(labels.begin(), labels.end()));
  const auto class_index = index_of(classes);
  Dataset out(std::move(schema), std::move(classes), SourceTag::generic);
  out.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) out.add_row(rows[r], class_index.at(labels[r]));
  out.set_dropped_rows(dropped);
  return out;
}

Dataset load_generic(const fs::path& path) {
  auto in = open_input(path);
  return read_generic(in, path.string());
}

Dataset load_dataset(const fs::path& path, DataFormat format) {
  if (!fs::exists(path)) throw DataError("data path '" + path.string() + "' does not exist");
  switch (format) {
    case DataFormat::nslkdd: return load_nslkdd(path);
    case DataFormat::cicids: return load_cicids(path);
    case DataFormat::generic: return load_generic(path);
  }
  throw UsageError("unknown data format");
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf.data(), ptr);
}

namespace {

void write_field(std::ostream& out, std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos &&
      trim(field).size() == field.size()) {
    out << field;
    return;
  }
  out << '"';
  for (const char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

void write_csv(const Dataset& data, std::ostream& out) {
  for (const auto& attr : data.schema()) {
    write_field(out, attr.name);
    out << ',';
  }
  out << "label\n";
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    for (std::size_t a = 0; a < data.num_attributes(); ++a) {
      const auto& attr = data.attribute(a);
      const double v = data.value(r, a);
      if (attr.is_nominal()) {
        if (v == kUnknownCategory) throw DataError("write_csv: unknown category has no spelling");
        write_field(out, attr.nominal_values[static_cast<std::size_t>(v)]);
      } else {
        out << format_double(v);
      }
      out << ',';
    }
    write_field(out, data.class_values()[static_cast<std::size_t>(data.label(r))]);
    out << '\n';
  }
}

}  // namespace ids
