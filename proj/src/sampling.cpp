#include "ids/sampling.hpp"

#include <algorithm>
#include <numeric>

#include "ids/error.hpp"
#include "ids/rng.hpp"

namespace ids {

namespace {

/// Largest-remainder apportionment of `total` over `weights`; ties in the
/// fractional part go to the lower index.
std::vector<std::size_t> apportion(std::size_t total, const std::vector<std::size_t>& weights) {
  const std::size_t sum = std::accumulate(weights.begin(), weights.end(), std::size_t{0});
  std::vector<std::size_t> out(weights.size(), 0);
  std::vector<std::pair<std::size_t, std::size_t>> remainders;  // (remainder numerator, index)
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const unsigned __int128 scaled = static_cast<unsigned __int128>(total) * weights[i];
    out[i] = static_cast<std::size_t>(scaled / sum);
    remainders.emplace_back(static_cast<std::size_t>(scaled % sum), i);
    assigned += out[i];
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++out[remainders[i].second];
  return out;
}

}  // namespace

std::pair<Dataset, Dataset> sample_subset(const Dataset& data, const SampleSpec& spec) {
  if (spec.train_count == 0 || spec.test_count == 0) {
    throw DataError("sample counts must be positive");
  }
  if (spec.train_count + spec.test_count > data.num_rows()) {
    throw DataError("infeasible sample: " + std::to_string(spec.train_count) + " + " +
                    std::to_string(spec.test_count) + " rows requested from " +
                    std::to_string(data.num_rows()));
  }

  Rng rng(spec.seed);
  std::vector<std::size_t> train_rows, test_rows;
  if (spec.stratified) {
    const auto counts = data.class_counts();
    const auto train_alloc = apportion(spec.train_count, counts);
    const auto test_alloc = apportion(spec.test_count, counts);
    std::vector<std::vector<std::size_t>> by_class(data.num_classes());
    for (std::size_t r = 0; r < data.num_rows(); ++r) {
      by_class[static_cast<std::size_t>(data.label(r))].push_back(r);
    }
    for (std::size_t c = 0; c < by_class.size(); ++c) {
      if (train_alloc[c] + test_alloc[c] > counts[c]) {
        throw DataError("stratified sample infeasible: class '" + data.class_values()[c] + "' has " +
                        std::to_string(counts[c]) + " rows, needs " +
                        std::to_string(train_alloc[c] + test_alloc[c]));
      }
      auto& rows = by_class[c];
      rng.shuffle(rows);
      train_rows.insert(train_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(train_alloc[c]));
      test_rows.insert(test_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(train_alloc[c]),
                       rows.begin() + static_cast<std::ptrdiff_t>(train_alloc[c] + test_alloc[c]));
    }
  } else {
    std::vector<std::size_t> rows(data.num_rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    rng.shuffle(rows);
    train_rows.assign(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(spec.train_count));
    test_rows.assign(rows.begin() + static_cast<std::ptrdiff_t>(spec.train_count),
                     rows.begin() + static_cast<std::ptrdiff_t>(spec.train_count + spec.test_count));
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {data.subset(train_rows), data.subset(test_rows)};
}

}  // namespace ids
