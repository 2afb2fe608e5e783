#pragma once

#include <cstddef>

#include "ids/model.hpp"

namespace ids {

/// Greedy top-down induction. Throws DataError on an empty dataset; a
/// single-class dataset yields a one-leaf model and a warning.
TrainedModel train_decision_tree(const Dataset& train, const TreeConfig& cfg);

/// One tree over all rows, examining cfg.resolved_features(d) randomly chosen
/// attributes per node (more if none of them splits). n_trees and bootstrap
/// are ignored.
TrainedModel train_random_tree(const Dataset& train, const ForestConfig& cfg);

/// Random trees on seeded bootstrap samples; tree i uses
/// derive_seed(cfg.seed, i). The parallel path grows trees concurrently.
TrainedModel train_random_forest(const Dataset& train, const ForestConfig& cfg,
                                 Execution exec = Execution::parallel);

/// Throws DataError when k exceeds the row count.
TrainedModel train_knn(const Dataset& train, std::size_t k);

/// Throws DataError when fewer than two classes are present.
TrainedModel train_naive_bayes(const Dataset& train);

/// Throws DataError when fewer than two classes are present.
TrainedModel train_decision_table(const Dataset& train, const DecisionTableConfig& cfg,
                                  Execution exec = Execution::parallel);

/// Dispatches on spec.algo. Hybrid is not a single learner; use
/// train_stacking.
TrainedModel train_learner(const LearnerSpec& spec, const Dataset& train,
                           Execution exec = Execution::parallel);

}  // namespace ids
