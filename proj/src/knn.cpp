#include "ids/knn.hpp"

#include <algorithm>
#include <queue>

#include "ids/error.hpp"

namespace ids {

KnnModel::KnnModel(std::size_t k, std::vector<AttributeKind> kinds, std::size_t num_classes,
                   std::vector<double> raw_rows, std::vector<int> labels)
    : k_(k), kinds_(std::move(kinds)), num_classes_(num_classes), raw_(std::move(raw_rows)),
      labels_(std::move(labels)) {
  const std::size_t d = kinds_.size();
  const std::size_t n = labels_.size();
  if (raw_.size() != n * d) throw ModelError("k-NN: training matrix does not match row count");
  if (k_ == 0 || k_ > n) {
    throw DataError("k-NN: k = " + std::to_string(k_) + " but training set has " +
                    std::to_string(n) + " rows");
  }
  mins_.assign(d, 0.0);
  maxs_.assign(d, 0.0);
  for (std::size_t a = 0; a < d; ++a) {
    if (kinds_[a] == AttributeKind::nominal) continue;
    double lo = raw_[a], hi = raw_[a];
    for (std::size_t r = 1; r < n; ++r) {
      lo = std::min(lo, raw_[r * d + a]);
      hi = std::max(hi, raw_[r * d + a]);
    }
    mins_[a] = lo;
    maxs_[a] = hi;
  }
  normalized_.resize(raw_.size());
  for (std::size_t r = 0; r < n; ++r) {
    const auto norm = normalize(std::span<const double>(raw_.data() + r * d, d));
    std::copy(norm.begin(), norm.end(), normalized_.begin() + static_cast<std::ptrdiff_t>(r * d));
  }
}

KnnModel KnnModel::fit(const Dataset& train, std::size_t k) {
  std::vector<AttributeKind> kinds;
  for (const auto& attr : train.schema()) kinds.push_back(attr.kind);
  std::vector<double> raw;
  raw.reserve(train.num_rows() * train.num_attributes());
  for (std::size_t r = 0; r < train.num_rows(); ++r) {
    const auto row = train.row(r);
    raw.insert(raw.end(), row.begin(), row.end());
  }
  return KnnModel(k, std::move(kinds), train.num_classes(), std::move(raw), train.labels());
}

std::vector<double> KnnModel::normalize(std::span<const double> row) const {
  std::vector<double> out(row.begin(), row.end());
  for (std::size_t a = 0; a < kinds_.size(); ++a) {
    if (kinds_[a] == AttributeKind::nominal) continue;
    const double range = maxs_[a] - mins_[a];
    out[a] = range > 0.0 ? (row[a] - mins_[a]) / range : 0.0;
  }
  return out;
}

double KnnModel::squared_distance(std::span<const double> q, std::size_t i) const {
  const std::size_t d = kinds_.size();
  const double* x = normalized_.data() + i * d;
  double sum = 0.0;
  for (std::size_t a = 0; a < d; ++a) {
    if (kinds_[a] == AttributeKind::nominal) {
      sum += (q[a] == kUnknownCategory || q[a] != x[a]) ? 1.0 : 0.0;
    } else {
      const double diff = q[a] - x[a];
      sum += diff * diff;
    }
  }
  return sum;
}

std::vector<std::size_t> KnnModel::neighbors(std::span<const double> row) const {
  const auto q = normalize(row);
  using Entry = std::pair<double, std::size_t>;
  // Max-heap on (distance, index): the top is the worst of the current k.
  std::priority_queue<Entry> heap;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const Entry e{squared_distance(q, i), i};
    if (heap.size() < k_) {
      heap.push(e);
    } else if (e < heap.top()) {
      heap.pop();
      heap.push(e);
    }
  }
  std::vector<std::size_t> out(heap.size());
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = heap.top().second;
    heap.pop();
  }
  return out;
}

std::vector<double> KnnModel::predict_proba(std::span<const double> row) const {
  std::vector<double> out(num_classes_, 0.0);
  const auto nn = neighbors(row);
  for (const auto i : nn) out[static_cast<std::size_t>(labels_[i])] += 1.0;
  for (auto& v : out) v /= static_cast<double>(nn.size());
  return out;
}

namespace reference {

std::vector<std::size_t> knn_neighbors(const KnnModel& model, std::span<const double> row) {
  const auto q = model.normalize(row);
  std::vector<std::pair<double, std::size_t>> all(model.num_rows());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = {model.squared_distance(q, i), i};
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < model.k(); ++i) out.push_back(all[i].second);
  return out;
}

}  // namespace reference
}  // namespace ids
