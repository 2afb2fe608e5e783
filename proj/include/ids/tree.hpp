#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ids/dataset.hpp"

namespace ids {

enum class SplitCriterion { info_gain, gain_ratio, gini };

SplitCriterion parse_split_criterion(std::string_view name);
std::string_view to_string(SplitCriterion criterion);

struct TreeConfig {
  SplitCriterion criterion = SplitCriterion::info_gain;
  std::size_t min_leaf = 2;
  std::optional<std::size_t> max_depth;
};

/// One node of a flat tree. A leaf has attribute < 0 and carries the class
/// distribution of the training rows that reached it. A numeric split sends
/// value <= threshold to children[0] and the rest to children[1]; a nominal
/// split sends category categories[i] to children[i]. Anything else (unknown
/// or unseen category) follows majority_child, the child with most rows.
struct TreeNode {
  int attribute = -1;
  double threshold = 0.0;
  std::vector<int> categories;
  std::vector<int> children;
  int majority_child = -1;
  std::vector<std::uint32_t> counts;

  bool is_leaf() const { return attribute < 0; }
  bool is_numeric_split() const { return !is_leaf() && categories.empty(); }
  bool operator==(const TreeNode&) const = default;
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::size_t num_classes = 0;

  const TreeNode& leaf_for(std::span<const double> row) const;
  std::vector<double> predict_proba(std::span<const double> row) const;
  std::size_t depth() const;
  std::size_t num_leaves() const;
  bool operator==(const TreeModel&) const = default;
};

namespace detail {

struct GrowOptions {
  TreeConfig tree;
  /// Attributes examined per node; 0 examines all of them in schema order.
  std::size_t features_per_split = 0;
  std::uint64_t seed = 0;
};

/// Grows one tree on `sample` (row indices into `data`, duplicates allowed).
TreeModel grow_tree(const Dataset& data, std::span<const std::size_t> sample,
                    const GrowOptions& options);

/// Score of splitting `parent` into `branches` under `criterion`. Returns
/// nullopt when the split is not scorable (gain ratio with zero split info).
std::optional<double> split_score(SplitCriterion criterion, std::span<const double> parent,
                                  std::span<const std::vector<double>> branches);

}  // namespace detail
}  // namespace ids
