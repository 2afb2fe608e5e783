#include "ids/featsel.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ids/error.hpp"

namespace ids {

double entropy(std::span<const std::size_t> class_counts) {
  std::size_t total = 0;
  for (const auto c : class_counts) total += c;
  if (total == 0) throw DataError("entropy of an all-zero count vector");
  double h = 0.0;
  const double n = static_cast<double>(total);
  for (const auto c : class_counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

std::vector<double> equal_frequency_cuts(std::span<const double> column, std::size_t bins) {
  if (column.empty()) throw DataError("cannot discretize an empty column");
  if (bins < 2) throw UsageError("discretization needs at least 2 bins");
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::vector<double> cuts;
  for (std::size_t b = 1; b < bins; ++b) {
    const std::size_t rank = (b * n + bins - 1) / bins;  // ceil(b * n / bins)
    if (rank == 0) continue;
    const double cut = sorted[rank - 1];
    if (cuts.empty() || cut > cuts.back()) cuts.push_back(cut);
  }
  // A cut at the maximum would only create an empty top bin.
  while (!cuts.empty() && cuts.back() >= sorted.back()) cuts.pop_back();
  return cuts;
}

std::size_t bin_of(std::span<const double> cuts, double value) {
  return static_cast<std::size_t>(std::lower_bound(cuts.begin(), cuts.end(), value) - cuts.begin());
}

std::vector<std::size_t> discretize_numeric(std::span<const double> column, std::size_t bins) {
  const auto cuts = equal_frequency_cuts(column, bins);
  std::vector<std::size_t> out(column.size());
  for (std::size_t i = 0; i < column.size(); ++i) out[i] = bin_of(cuts, column[i]);
  return out;
}

double information_gain(const Dataset& data, std::size_t attribute, const SelectionConfig& cfg) {
  if (attribute >= data.num_attributes()) {
    throw UsageError("attribute index " + std::to_string(attribute) + " out of range");
  }
  const std::size_t n = data.num_rows();
  if (n == 0) return 0.0;
  const std::size_t k = data.num_classes();
  const auto& attr = data.attribute(attribute);

  std::vector<std::size_t> bucket(n);
  std::size_t num_buckets = 0;
  if (attr.is_nominal()) {
    // Unknown categories share one extra bucket.
    num_buckets = attr.nominal_values.size() + 1;
    for (std::size_t r = 0; r < n; ++r) {
      const double v = data.value(r, attribute);
      bucket[r] = v == kUnknownCategory ? attr.nominal_values.size() : static_cast<std::size_t>(v);
    }
  } else {
    std::vector<double> column(n);
    for (std::size_t r = 0; r < n; ++r) column[r] = data.value(r, attribute);
    bucket = discretize_numeric(column, cfg.bins);
    num_buckets = *std::max_element(bucket.begin(), bucket.end()) + 1;
  }

  std::vector<std::size_t> joint(num_buckets * k, 0);
  std::vector<std::size_t> classes(k, 0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto c = static_cast<std::size_t>(data.label(r));
    ++joint[bucket[r] * k + c];
    ++classes[c];
  }
  const double h_class = entropy(classes);
  double conditional = 0.0;
  for (std::size_t b = 0; b < num_buckets; ++b) {
    const std::span<const std::size_t> counts(joint.data() + b * k, k);
    std::size_t size = 0;
    for (const auto c : counts) size += c;
    if (size == 0) continue;
    conditional += static_cast<double>(size) / static_cast<double>(n) * entropy(counts);
  }
  return std::clamp(h_class - conditional, 0.0, h_class);
}

std::vector<RankedAttribute> rank_attributes(const Dataset& data, const SelectionConfig& cfg,
                                             Execution exec) {
  if (data.num_attributes() == 0) throw DataError("cannot rank a dataset without attributes");
  if (cfg.bins < 2) throw UsageError("discretization needs at least 2 bins");
  if (data.num_present_classes() < 2) {
    warn("ranking a single-class dataset: every information gain is 0");
  }
  const auto d = static_cast<std::ptrdiff_t>(data.num_attributes());
  std::vector<RankedAttribute> ranking(data.num_attributes());

#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
  for (std::ptrdiff_t a = 0; a < d; ++a) {
    const auto i = static_cast<std::size_t>(a);
    ranking[i] = {data.attribute(i).name, i, information_gain(data, i, cfg)};
  }

  std::stable_sort(ranking.begin(), ranking.end(),
                   [](const RankedAttribute& x, const RankedAttribute& y) { return x.gain > y.gain; });
  return ranking;
}

Dataset filter_by_threshold(const Dataset& data, std::span<const RankedAttribute> ranking,
                            double threshold) {
  std::map<std::string, double, std::less<>> gain_of;
  for (const auto& r : ranking) gain_of.emplace(r.attribute_name, r.gain);
  std::vector<std::size_t> kept;
  for (std::size_t a = 0; a < data.num_attributes(); ++a) {
    const auto it = gain_of.find(data.attribute(a).name);
    if (it == gain_of.end()) {
      throw UsageError("ranking does not cover attribute '" + data.attribute(a).name + "'");
    }
    if (it->second > threshold) kept.push_back(a);
  }
  if (kept.empty()) {
    throw DataError("empty feature set: no attribute has information gain above " +
                    std::to_string(threshold));
  }
  return data.project(kept);
}

}  // namespace ids
