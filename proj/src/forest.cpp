#include "ids/forest.hpp"

#include <cmath>

#include "ids/error.hpp"
#include "ids/model.hpp"

namespace ids {

Voting parse_voting(std::string_view name) {
  if (name == "soft") return Voting::soft;
  if (name == "hard") return Voting::hard;
  throw UsageError("unknown voting mode '" + std::string(name) + "' (soft, hard)");
}

std::string_view to_string(Voting voting) { return voting == Voting::soft ? "soft" : "hard"; }

std::size_t ForestConfig::resolved_features(std::size_t num_attributes) const {
  if (num_attributes == 0) throw DataError("forest needs at least one attribute");
  if (features_per_split == 0) {
    auto m = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(num_attributes))));
    while (m * m < num_attributes) ++m;
    while (m > 1 && (m - 1) * (m - 1) >= num_attributes) --m;
    return m;
  }
  if (features_per_split > num_attributes) {
    throw UsageError("features_per_split " + std::to_string(features_per_split) + " exceeds " +
                     std::to_string(num_attributes) + " attributes");
  }
  return features_per_split;
}

std::vector<double> ForestModel::predict_proba(std::span<const double> row) const {
  const std::size_t k = trees.front().num_classes;
  std::vector<double> out(k, 0.0);
  for (const auto& tree : trees) {
    const auto p = tree.predict_proba(row);
    if (voting == Voting::soft) {
      for (std::size_t c = 0; c < k; ++c) out[c] += p[c];
    } else {
      out[argmax(p)] += 1.0;
    }
  }
  const double n = static_cast<double>(trees.size());
  for (auto& v : out) v /= n;
  return out;
}

}  // namespace ids
