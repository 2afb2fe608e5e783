#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ids {

enum class AttributeKind { numeric, nominal };

/// Stored value of a nominal attribute whose category was not seen when the
/// schema was built (only produced by conform()).
inline constexpr double kUnknownCategory = -1.0;

struct AttributeSchema {
  std::string name;
  AttributeKind kind = AttributeKind::numeric;
  /// Ordered, unique category strings; empty for numeric attributes.
  std::vector<std::string> nominal_values;

  bool is_nominal() const { return kind == AttributeKind::nominal; }
  std::optional<std::size_t> category_index(std::string_view value) const;

  bool operator==(const AttributeSchema&) const = default;
};

enum class SourceTag { nslkdd, cicids, generic };

std::string_view to_string(SourceTag tag);
std::string_view to_string(AttributeKind kind);

/// 64-bit FNV-1a over attribute names, kinds and nominal value lists.
std::uint64_t schema_fingerprint(std::span<const AttributeSchema> schema);

/// Typed table of records. Attribute values are stored row-major as doubles:
/// numeric attributes hold the value, nominal attributes hold the category
/// index (or kUnknownCategory). Each row carries one class index.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<AttributeSchema> schema, std::vector<std::string> class_values,
          SourceTag tag = SourceTag::generic);

  const std::vector<AttributeSchema>& schema() const { return schema_; }
  const AttributeSchema& attribute(std::size_t a) const { return schema_[a]; }
  const std::vector<std::string>& class_values() const { return class_values_; }
  SourceTag source_tag() const { return tag_; }

  std::size_t num_rows() const { return labels_.size(); }
  std::size_t num_attributes() const { return schema_.size(); }
  std::size_t num_classes() const { return class_values_.size(); }
  bool empty() const { return labels_.empty(); }

  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * schema_.size(), schema_.size()};
  }
  double value(std::size_t r, std::size_t a) const { return values_[r * schema_.size() + a]; }
  int label(std::size_t r) const { return labels_[r]; }
  const std::vector<int>& labels() const { return labels_; }

  /// Appends a row; values.size() must equal num_attributes().
  void add_row(std::span<const double> values, int label);
  void reserve(std::size_t rows);

  std::vector<std::size_t> class_counts() const;
  std::size_t num_present_classes() const;

  /// Rows dropped by the loader while cleaning (NaN / infinity).
  std::size_t dropped_rows() const { return dropped_rows_; }
  void set_dropped_rows(std::size_t n) { dropped_rows_ = n; }

  std::uint64_t fingerprint() const { return schema_fingerprint(schema_); }

  /// Rows in the given order (duplicates allowed).
  Dataset subset(std::span<const std::size_t> rows) const;
  /// Keeps the given attributes, in the given order.
  Dataset project(std::span<const std::size_t> attributes) const;
  /// Same rows with a different class list and per-row labels.
  Dataset relabel(std::vector<std::string> class_values, std::span<const int> labels) const;

  std::optional<std::size_t> attribute_index(std::string_view name) const;

  /// Throws DataError if any documented invariant is violated.
  void validate() const;

  /// Schema, classes and rows equal (source tag and dropped count ignored).
  bool same_content(const Dataset& other) const;

 private:
  std::vector<AttributeSchema> schema_;
  std::vector<std::string> class_values_;
  std::vector<double> values_;
  std::vector<int> labels_;
  SourceTag tag_ = SourceTag::generic;
  std::size_t dropped_rows_ = 0;
};

/// Re-expresses `data` in a model's schema: attributes are matched by name,
/// nominal categories are remapped by string (unseen ones become
/// kUnknownCategory) and class labels are remapped by name.
///
/// Throws ModelError when an attribute is missing or has a different kind,
/// and DataError when a row's class is not one of `class_values`.
Dataset conform(const Dataset& data, std::span<const AttributeSchema> schema,
                std::span<const std::string> class_values);

}  // namespace ids
