#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>

#include "ids/dataset.hpp"

namespace ids {

struct SampleSpec {
  std::size_t train_count = 0;
  std::size_t test_count = 0;
  std::uint64_t seed = 0;
  bool stratified = false;
};

/// Seeded, disjoint train/test draw. Selected rows keep their original
/// relative order. Stratified draws allocate per-class counts by largest
/// remainder, so each class is within one row of its exact proportion.
std::pair<Dataset, Dataset> sample_subset(const Dataset& data, const SampleSpec& spec);

}  // namespace ids
