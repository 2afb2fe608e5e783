#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ids/model.hpp"

namespace ids {

struct StackingConfig {
  std::vector<LearnerSpec> base_learners;
  LearnerSpec meta_learner;
  std::size_t folds = 5;
  std::uint64_t seed = 0;

  /// Decision tree + random forest bases under a decision tree meta learner.
  static StackingConfig hybrid(std::uint64_t seed = 0);
};

/// Bookkeeping for one cross-validation fold of meta-feature generation.
struct FoldRecord {
  std::size_t fold = 0;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> scored_rows;
};

using FoldObserver = std::function<void(const FoldRecord&)>;

struct MetaFeatures {
  /// One row per training row, n_base * n_classes numeric attributes
  /// (base-major, then class index), original classes.
  Dataset data;
  std::vector<std::size_t> fold_of_row;
};

/// Seeded stratified fold assignment: each class is shuffled and dealt
/// round-robin. Throws DataError if a class has fewer rows than folds.
std::vector<std::size_t> stratified_folds(const Dataset& data, std::size_t folds,
                                          std::uint64_t seed);

/// Out-of-fold base-learner probabilities. `observer` (if set) is called once
/// per fold, in fold order. The parallel path trains folds concurrently.
MetaFeatures generate_meta_features(const Dataset& train, const StackingConfig& cfg,
                                    const FoldObserver& observer = {},
                                    Execution exec = Execution::parallel);

/// Phase 1 refits every base learner on all of `train`; phase 2 fits the meta
/// learner on generate_meta_features(train, cfg).
TrainedModel train_stacking(const Dataset& train, const StackingConfig& cfg,
                            Execution exec = Execution::parallel);

/// Concatenated base-learner probabilities for one row.
std::vector<double> meta_feature_vector(const StackingModel& model, std::span<const double> row);

std::vector<double> predict_stacking(const StackingModel& model, std::span<const double> row);

}  // namespace ids
