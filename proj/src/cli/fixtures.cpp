#include <cmath>

#include "ids/cli.hpp"
#include "ids/error.hpp"
#include "ids/rng.hpp"

namespace ids::cli {

Dataset fixture_a() {
  const auto nominal = [](std::string name, std::vector<std::string> values) {
    return AttributeSchema{std::move(name), AttributeKind::nominal, std::move(values)};
  };
  Dataset data({nominal("A", {"a", "b"}), nominal("B", {"x", "y"}), nominal("C", {"p", "q"})},
               {"attack", "normal"});
  // (A, B, C, class) with categories and classes as indices.
  const int rows[8][4] = {{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 1, 0, 0}, {0, 1, 1, 0},
                          {1, 0, 1, 1}, {1, 0, 1, 1}, {1, 1, 1, 1}, {1, 1, 0, 1}};
  for (const auto& r : rows) {
    const double values[3] = {double(r[0]), double(r[1]), double(r[2])};
    data.add_row(values, r[3]);
  }
  return data;
}

Dataset synthetic_dataset(const SyntheticSpec& spec) {
  if (spec.rows == 0) throw UsageError("synthetic dataset needs at least one row");
  if (spec.numeric + spec.nominal < 2) throw UsageError("synthetic dataset needs at least two attributes");
  if (!(spec.noise >= 0.0 && spec.noise <= 1.0)) throw UsageError("noise must be in [0, 1]");

  constexpr std::size_t kCategories = 4;
  std::vector<AttributeSchema> schema;
  for (std::size_t i = 0; i < spec.numeric; ++i) {
    schema.push_back({"x" + std::to_string(i), AttributeKind::numeric, {}});
  }
  for (std::size_t i = 0; i < spec.nominal; ++i) {
    std::vector<std::string> values;
    for (std::size_t v = 0; v < kCategories; ++v) values.push_back("c" + std::to_string(v));
    schema.push_back({"n" + std::to_string(i), AttributeKind::nominal, std::move(values)});
  }
  Dataset data(std::move(schema), {"attack", "normal"});
  data.reserve(spec.rows);

  Rng rng(spec.seed);
  const std::size_t d = spec.numeric + spec.nominal;
  std::vector<double> row(d);
  for (std::size_t r = 0; r < spec.rows; ++r) {
    for (std::size_t a = 0; a < d; ++a) {
      row[a] = a < spec.numeric ? std::round(rng.uniform01() * 1e4) / 1e4
                                : static_cast<double>(rng.uniform_index(kCategories));
    }
    // Attack when both planted attributes are in their upper half.
    const auto high = [&](std::size_t a) {
      return a < spec.numeric ? row[a] >= 0.5 : row[a] >= kCategories / 2;
    };
    int label = high(0) && high(1) ? 0 : 1;
    if (spec.noise > 0.0 && rng.uniform01() < spec.noise) label = 1 - label;
    data.add_row(row, label);
  }
  return data;
}

}  // namespace ids::cli
