#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "ids/dataset.hpp"
#include "ids/execution.hpp"

namespace ids {

struct DecisionTableConfig {
  /// Cross-validation folds used to score candidate attribute subsets.
  std::size_t folds = 5;
  std::size_t bins = 10;
  /// Best-first search stops after this many non-improving expansions.
  std::size_t stale_limit = 5;
  std::uint64_t seed = 0;
};

struct DecisionTableModel {
  std::vector<std::size_t> attributes;
  /// Equal-frequency cuts per selected attribute; empty for nominal ones.
  std::vector<std::vector<double>> cuts;
  std::map<std::vector<int>, std::vector<std::uint32_t>> table;
  std::vector<std::uint32_t> default_counts;

  std::vector<int> key_for(std::span<const double> row) const;
  std::vector<double> predict_proba(std::span<const double> row) const;
  bool operator==(const DecisionTableModel&) const = default;
};

/// Best-first forward search over attribute subsets, scored by seeded k-fold
/// cross-validated accuracy of the table each subset induces.
DecisionTableModel fit_decision_table(const Dataset& train, const DecisionTableConfig& cfg,
                                      Execution exec = Execution::parallel);

/// Cross-validated accuracy of the table keyed on `subset` (exposed for tests).
double decision_table_merit(const Dataset& train, std::span<const std::size_t> subset,
                            const DecisionTableConfig& cfg);

}  // namespace ids
