#include "ids/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>
#include <unordered_map>

#include "ids/error.hpp"
#include "ids/execution.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace ids {

void warn(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

void set_thread_count(int n) {
#if defined(_OPENMP)
  omp_set_num_threads(std::max(1, n));
#else
  (void)n;
#endif
}

int thread_count() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::optional<std::size_t> AttributeSchema::category_index(std::string_view value) const {
  const auto it = std::find(nominal_values.begin(), nominal_values.end(), value);
  if (it == nominal_values.end()) return std::nullopt;
  return static_cast<std::size_t>(it - nominal_values.begin());
}

std::string_view to_string(SourceTag tag) {
  switch (tag) {
    case SourceTag::nslkdd: return "nslkdd";
    case SourceTag::cicids: return "cicids";
    case SourceTag::generic: return "generic";
  }
  return "generic";
}

std::string_view to_string(AttributeKind kind) {
  return kind == AttributeKind::numeric ? "numeric" : "nominal";
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_bytes(std::uint64_t& h, std::string_view bytes) {
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
}

void fnv_separator(std::uint64_t& h, unsigned char sep) {
  h ^= sep;
  h *= kFnvPrime;
}

}  // namespace

std::uint64_t schema_fingerprint(std::span<const AttributeSchema> schema) {
  std::uint64_t h = kFnvOffset;
  for (const auto& attr : schema) {
    fnv_bytes(h, attr.name);
    fnv_separator(h, 0x1f);
    fnv_bytes(h, to_string(attr.kind));
    for (const auto& v : attr.nominal_values) {
      fnv_separator(h, 0x1e);
      fnv_bytes(h, v);
    }
    fnv_separator(h, 0x1d);
  }
  return h;
}

Dataset::Dataset(std::vector<AttributeSchema> schema, std::vector<std::string> class_values,
                 SourceTag tag)
    : schema_(std::move(schema)), class_values_(std::move(class_values)), tag_(tag) {}

void Dataset::add_row(std::span<const double> values, int label) {
  if (values.size() != schema_.size()) {
    throw DataError("row has " + std::to_string(values.size()) + " values, schema has " +
                    std::to_string(schema_.size()) + " attributes");
  }
  values_.insert(values_.end(), values.begin(), values.end());
  labels_.push_back(label);
}

void Dataset::reserve(std::size_t rows) {
  values_.reserve(rows * schema_.size());
  labels_.reserve(rows);
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(class_values_.size(), 0);
  for (const int l : labels_) ++counts[static_cast<std::size_t>(l)];
  return counts;
}

std::size_t Dataset::num_present_classes() const {
  const auto counts = class_counts();
  return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(),
                                                [](std::size_t c) { return c > 0; }));
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out(schema_, class_values_, tag_);
  out.reserve(rows.size());
  for (const std::size_t r : rows) out.add_row(row(r), labels_[r]);
  return out;
}

Dataset Dataset::project(std::span<const std::size_t> attributes) const {
  std::vector<AttributeSchema> schema;
  schema.reserve(attributes.size());
  for (const std::size_t a : attributes) schema.push_back(schema_.at(a));
  Dataset out(std::move(schema), class_values_, tag_);
  out.dropped_rows_ = dropped_rows_;
  out.reserve(num_rows());
  std::vector<double> buffer(attributes.size());
  for (std::size_t r = 0; r < num_rows(); ++r) {
    for (std::size_t i = 0; i < attributes.size(); ++i) buffer[i] = value(r, attributes[i]);
    out.add_row(buffer, labels_[r]);
  }
  return out;
}

Dataset Dataset::relabel(std::vector<std::string> class_values, std::span<const int> labels) const {
  if (labels.size() != num_rows()) throw DataError("relabel: label count differs from row count");
  Dataset out(schema_, std::move(class_values), tag_);
  out.values_ = values_;
  out.labels_.assign(labels.begin(), labels.end());
  out.dropped_rows_ = dropped_rows_;
  return out;
}

std::optional<std::size_t> Dataset::attribute_index(std::string_view name) const {
  for (std::size_t a = 0; a < schema_.size(); ++a) {
    if (schema_[a].name == name) return a;
  }
  return std::nullopt;
}

void Dataset::validate() const {
  std::set<std::string_view> names;
  for (const auto& attr : schema_) {
    if (!names.insert(attr.name).second) throw DataError("duplicate attribute name: " + attr.name);
    if (attr.is_nominal() == attr.nominal_values.empty()) {
      throw DataError("attribute " + attr.name + ": nominal values present iff nominal");
    }
    const std::set<std::string_view> cats(attr.nominal_values.begin(), attr.nominal_values.end());
    if (cats.size() != attr.nominal_values.size()) {
      throw DataError("attribute " + attr.name + ": duplicate nominal value");
    }
  }
  if (values_.size() != labels_.size() * schema_.size()) throw DataError("ragged value storage");
  for (std::size_t r = 0; r < num_rows(); ++r) {
    if (labels_[r] < 0 || static_cast<std::size_t>(labels_[r]) >= class_values_.size()) {
      throw DataError("row " + std::to_string(r) + ": class index out of range");
    }
    for (std::size_t a = 0; a < schema_.size(); ++a) {
      const double v = value(r, a);
      if (!std::isfinite(v)) throw DataError("row " + std::to_string(r) + ": non-finite value");
      if (schema_[a].is_nominal() && v != kUnknownCategory &&
          (v < 0 || v >= static_cast<double>(schema_[a].nominal_values.size()) ||
           v != std::floor(v))) {
        throw DataError("row " + std::to_string(r) + ": bad category for " + schema_[a].name);
      }
    }
  }
}

bool Dataset::same_content(const Dataset& other) const {
  return schema_ == other.schema_ && class_values_ == other.class_values_ &&
         labels_ == other.labels_ && values_ == other.values_;
}

Dataset conform(const Dataset& data, std::span<const AttributeSchema> schema,
                std::span<const std::string> class_values) {
  std::vector<std::size_t> source(schema.size());
  std::vector<std::vector<double>> remap(schema.size());
  for (std::size_t a = 0; a < schema.size(); ++a) {
    const auto idx = data.attribute_index(schema[a].name);
    if (!idx) {
      throw ModelError("schema fingerprint mismatch: attribute '" + schema[a].name +
                       "' not present in data");
    }
    const auto& have = data.attribute(*idx);
    if (have.kind != schema[a].kind) {
      throw ModelError("schema fingerprint mismatch: attribute '" + schema[a].name + "' is " +
                       std::string(to_string(have.kind)) + " in data but " +
                       std::string(to_string(schema[a].kind)) + " in model");
    }
    source[a] = *idx;
    if (have.is_nominal()) {
      auto& m = remap[a];
      m.reserve(have.nominal_values.size());
      for (const auto& v : have.nominal_values) {
        const auto target = schema[a].category_index(v);
        m.push_back(target ? static_cast<double>(*target) : kUnknownCategory);
      }
    }
  }

  std::unordered_map<std::string, int> class_index;
  for (std::size_t c = 0; c < class_values.size(); ++c) class_index[class_values[c]] = static_cast<int>(c);
  std::vector<int> class_remap(data.num_classes(), -1);
  for (std::size_t c = 0; c < data.num_classes(); ++c) {
    const auto it = class_index.find(data.class_values()[c]);
    if (it != class_index.end()) class_remap[c] = it->second;
  }

  Dataset out(std::vector<AttributeSchema>(schema.begin(), schema.end()),
              std::vector<std::string>(class_values.begin(), class_values.end()), data.source_tag());
  out.set_dropped_rows(data.dropped_rows());
  out.reserve(data.num_rows());
  std::vector<double> buffer(schema.size());
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    const int label = class_remap[static_cast<std::size_t>(data.label(r))];
    if (label < 0) {
      throw DataError("class '" + data.class_values()[static_cast<std::size_t>(data.label(r))] +
                      "' is not one of the model's classes");
    }
    for (std::size_t a = 0; a < schema.size(); ++a) {
      const double v = data.value(r, source[a]);
      if (schema[a].is_nominal()) {
        buffer[a] = v == kUnknownCategory ? kUnknownCategory : remap[a][static_cast<std::size_t>(v)];
      } else {
        buffer[a] = v;
      }
    }
    out.add_row(buffer, label);
  }
  return out;
}

}  // namespace ids
