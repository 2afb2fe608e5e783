#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ids/tree.hpp"

namespace ids {

enum class Voting { soft, hard };

Voting parse_voting(std::string_view name);
std::string_view to_string(Voting voting);

struct ForestConfig {
  std::size_t n_trees = 100;
  /// 0 selects ceil(sqrt(d)).
  std::size_t features_per_split = 0;
  std::uint64_t seed = 0;
  bool bootstrap = true;
  Voting voting = Voting::soft;
  TreeConfig tree{};

  std::size_t resolved_features(std::size_t num_attributes) const;
};

struct ForestModel {
  std::vector<TreeModel> trees;
  Voting voting = Voting::soft;

  /// Soft voting averages leaf distributions; hard voting counts per-tree
  /// argmax votes.
  std::vector<double> predict_proba(std::span<const double> row) const;
  bool operator==(const ForestModel&) const = default;
};

}  // namespace ids
