#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ids/dataset.hpp"
#include "ids/decision_table.hpp"
#include "ids/execution.hpp"
#include "ids/forest.hpp"
#include "ids/knn.hpp"
#include "ids/naive_bayes.hpp"
#include "ids/tree.hpp"

namespace ids {

/// Benchmark algorithms, in the order result tables list them.
enum class Algorithm { bayes, dtable, dtree, j48, knn, rforest, rtree, hybrid };

inline constexpr Algorithm kAllAlgorithms[] = {
    Algorithm::bayes, Algorithm::dtable,  Algorithm::dtree, Algorithm::j48,
    Algorithm::knn,   Algorithm::rforest, Algorithm::rtree, Algorithm::hybrid};

/// CLI name ("dtree").
std::string_view to_string(Algorithm algo);
/// Table label ("Decision Tree").
std::string_view display_name(Algorithm algo);
Algorithm parse_algorithm(std::string_view name);

struct TrainedModel;

struct StackingModel {
  /// Phase-1 learners refit on the full training set, in meta-feature order.
  std::vector<TrainedModel> bases;
  /// Phase-2 learner over the concatenated base probability vectors.
  std::shared_ptr<const TrainedModel> meta;
  std::size_t folds = 0;
};

using ModelBody =
    std::variant<TreeModel, ForestModel, KnnModel, NaiveBayesModel, DecisionTableModel, StackingModel>;

/// A fitted classifier plus the schema it accepts.
struct TrainedModel {
  Algorithm algo = Algorithm::dtree;
  std::vector<AttributeSchema> schema;
  std::vector<std::string> class_values;
  std::uint64_t fingerprint = 0;
  std::uint64_t seed = 0;
  ModelBody body;

  std::size_t num_classes() const { return class_values.size(); }
};

/// Wraps a body with the schema and classes of `train`.
TrainedModel make_model(Algorithm algo, const Dataset& train, std::uint64_t seed, ModelBody body);

/// Configuration of one non-stacking learner.
struct LearnerSpec {
  Algorithm algo = Algorithm::dtree;
  TreeConfig tree{};
  ForestConfig forest{};
  std::size_t k = 1;
  DecisionTableConfig table{};

  /// Benchmark defaults: dtree uses Gini, j48 gain ratio, rtree one
  /// unbagged random tree, rforest 100 trees, knn k = 1. `seed` feeds every
  /// seeded component.
  static LearnerSpec defaults(Algorithm algo, std::uint64_t seed = 0);
};

/// Non-negative, sums to 1. `row` must be in the model's schema order.
std::vector<double> predict_proba(const TrainedModel& model, std::span<const double> row);

/// Argmax with the lowest index winning ties.
std::size_t argmax(std::span<const double> proba);
std::size_t predict_class(const TrainedModel& model, std::span<const double> row);

/// Throws ModelError unless `data` has the model's schema fingerprint and
/// class list.
void check_compatible(const TrainedModel& model, const Dataset& data);

/// Class predictions for every row; rows are scored concurrently on the
/// parallel path.
std::vector<int> predict_all(const TrainedModel& model, const Dataset& data,
                             Execution exec = Execution::parallel);

/// Row-major rows x num_classes probability matrix.
std::vector<double> predict_proba_all(const TrainedModel& model, const Dataset& data,
                                      Execution exec = Execution::parallel);

}  // namespace ids
