#pragma once

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ids/cli.hpp"
#include "ids/dataset.hpp"
#include "ids/rng.hpp"

namespace ids::test {

inline AttributeSchema numeric(std::string name) { return {std::move(name), AttributeKind::numeric, {}}; }

inline AttributeSchema nominal(std::string name, std::vector<std::string> values) {
  return {std::move(name), AttributeKind::nominal, std::move(values)};
}

inline std::vector<std::string> class_names(std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < k; ++c) out.push_back("c" + std::to_string(c));
  return out;
}

/// Single numeric attribute `x`.
inline Dataset numeric_column(const std::vector<double>& xs, const std::vector<int>& labels, std::size_t k = 2) {
  Dataset d({numeric("x")}, class_names(k));
  for (std::size_t i = 0; i < xs.size(); ++i) d.add_row(std::vector<double>{xs[i]}, labels[i]);
  return d;
}

struct RandomShape {
  std::size_t max_rows = 12;
  std::size_t max_attributes = 4;
  std::size_t min_classes = 2;
  std::size_t max_classes = 3;
  /// Distinct values per attribute are drawn from [1, max_levels].
  std::size_t max_levels = 4;
  bool consistent = false;
};

/// Mixed nominal / small-integer numeric table. With `consistent`, rows with
/// equal attribute vectors share the class of the first one.
inline Dataset random_dataset(Rng& rng, const RandomShape& shape) {
  const std::size_t d = 1 + rng.uniform_index(shape.max_attributes);
  const std::size_t k = shape.min_classes + rng.uniform_index(shape.max_classes - shape.min_classes + 1);
  const std::size_t n = 1 + rng.uniform_index(shape.max_rows);
  std::vector<AttributeSchema> schema;
  std::vector<std::size_t> levels;
  for (std::size_t a = 0; a < d; ++a) {
    levels.push_back(1 + rng.uniform_index(shape.max_levels));
    if (rng.uniform_index(2) == 0) {
      std::vector<std::string> values;
      for (std::size_t v = 0; v < levels.back(); ++v) values.push_back("v" + std::to_string(v));
      schema.push_back(nominal("a" + std::to_string(a), values));
    } else {
      schema.push_back(numeric("a" + std::to_string(a)));
    }
  }
  Dataset data(schema, class_names(k));
  std::map<std::vector<double>, int> seen;
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<double> row(d);
    for (std::size_t a = 0; a < d; ++a) {
      const auto v = static_cast<double>(rng.uniform_index(levels[a]));
      row[a] = schema[a].is_nominal() ? v : v * 1.5 - 2.0;
    }
    int label = static_cast<int>(rng.uniform_index(k));
    if (shape.consistent) label = seen.try_emplace(row, label).first->second;
    data.add_row(row, label);
  }
  return data;
}

/// Uniform random rows over a schema; nominal values may include the unknown
/// category.
inline std::vector<std::vector<double>> random_rows(Rng& rng, const std::vector<AttributeSchema>& schema,
                                                    std::size_t count, double lo = -5.0, double hi = 5.0) {
  std::vector<std::vector<double>> rows(count, std::vector<double>(schema.size()));
  for (auto& row : rows) {
    for (std::size_t a = 0; a < schema.size(); ++a) {
      if (schema[a].is_nominal()) {
        const std::size_t v = schema[a].nominal_values.size();
        const std::size_t pick = rng.uniform_index(v + 1);
        row[a] = pick == v ? kUnknownCategory : static_cast<double>(pick);
      } else {
        row[a] = lo + (hi - lo) * rng.uniform01();
      }
    }
  }
  return rows;
}

/// -sum p log2 p written out directly.
inline double entropy_oracle(const std::vector<double>& counts) {
  double total = 0.0;
  for (const double c : counts) total += c;
  double h = 0.0;
  for (const double c : counts) {
    if (c > 0) h -= (c / total) * std::log2(c / total);
  }
  return h;
}

inline double training_accuracy(const TrainedModel& model, const Dataset& data) {
  std::size_t correct = 0;
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    correct += predict_class(model, data.row(r)) == static_cast<std::size_t>(data.label(r)) ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(data.num_rows());
}

}  // namespace ids::test
