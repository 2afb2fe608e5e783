#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ids/dataset.hpp"
#include "ids/execution.hpp"

namespace ids {

struct RankedAttribute {
  std::string attribute_name;
  std::size_t attribute_index = 0;
  /// Information gain in bits.
  double gain = 0.0;
};

struct SelectionConfig {
  double threshold = 0.4;
  /// Equal-frequency bins used to discretize numeric attributes.
  std::size_t bins = 10;
};

/// Shannon entropy in bits of a class-count vector. Throws DataError when all
/// counts are zero.
double entropy(std::span<const std::size_t> class_counts);

/// Cut points of an equal-frequency partition into at most `bins` bins. Cut
/// b is the value at sorted rank ceil(b * n / bins) - 1; duplicates removed.
std::vector<double> equal_frequency_cuts(std::span<const double> column, std::size_t bins);

/// Bin of `value` given cuts: the number of cuts strictly below it, so a value
/// equal to a cut falls in the lower bin.
std::size_t bin_of(std::span<const double> cuts, double value);

/// Equal-frequency bin index for every value of `column`.
std::vector<std::size_t> discretize_numeric(std::span<const double> column, std::size_t bins);

/// H(class) - sum_v |S_v|/|S| H(class | attribute = v), where v ranges over
/// nominal categories or equal-frequency bins.
double information_gain(const Dataset& data, std::size_t attribute, const SelectionConfig& cfg);

/// Gains for every attribute, sorted descending; ties keep schema order.
/// The parallel path scores attributes concurrently.
std::vector<RankedAttribute> rank_attributes(const Dataset& data, const SelectionConfig& cfg,
                                             Execution exec = Execution::parallel);

/// Keeps the attributes whose gain is strictly above `threshold`, in schema
/// order. Throws DataError if nothing survives.
Dataset filter_by_threshold(const Dataset& data, std::span<const RankedAttribute> ranking,
                            double threshold);

}  // namespace ids
