#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ids/dataset.hpp"

namespace ids {

/// k-nearest-neighbour model over min-max normalized numerics plus a 0/1
/// mismatch term per nominal attribute.
class KnnModel {
 public:
  KnnModel() = default;
  /// Stores the raw training rows; normalization is rebuilt from them.
  KnnModel(std::size_t k, std::vector<AttributeKind> kinds, std::size_t num_classes,
           std::vector<double> raw_rows, std::vector<int> labels);

  static KnnModel fit(const Dataset& train, std::size_t k);

  std::size_t k() const { return k_; }
  std::size_t num_classes() const { return num_classes_; }
  std::size_t num_rows() const { return labels_.size(); }
  const std::vector<AttributeKind>& kinds() const { return kinds_; }
  const std::vector<double>& raw_rows() const { return raw_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<double>& mins() const { return mins_; }
  const std::vector<double>& maxs() const { return maxs_; }

  /// Squared distance between a query and training row i.
  double squared_distance(std::span<const double> normalized_query, std::size_t i) const;
  std::vector<double> normalize(std::span<const double> row) const;

  /// Indices of the k nearest training rows ordered by (distance, index),
  /// using a bounded max-heap.
  std::vector<std::size_t> neighbors(std::span<const double> row) const;
  /// Neighbour class frequencies.
  std::vector<double> predict_proba(std::span<const double> row) const;

  bool operator==(const KnnModel& other) const {
    return k_ == other.k_ && kinds_ == other.kinds_ && num_classes_ == other.num_classes_ &&
           raw_ == other.raw_ && labels_ == other.labels_;
  }

 private:
  std::size_t k_ = 1;
  std::vector<AttributeKind> kinds_;
  std::size_t num_classes_ = 0;
  std::vector<double> raw_;
  std::vector<int> labels_;
  std::vector<double> mins_, maxs_;
  std::vector<double> normalized_;
};

namespace reference {
/// Full sort of all distances; the oracle for KnnModel::neighbors.
std::vector<std::size_t> knn_neighbors(const KnnModel& model, std::span<const double> row);
}  // namespace reference

}  // namespace ids
