#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ids/dataset.hpp"

namespace ids {

inline constexpr double kMinGaussianVariance = 1e-9;

/// Naive Bayes with add-one smoothed priors and nominal likelihoods and
/// per-class Gaussians for numeric attributes.
struct NaiveBayesModel {
  std::vector<AttributeKind> kinds;
  std::vector<std::uint64_t> class_counts;
  /// Nominal attributes: [class][category] counts. Empty for numeric ones.
  std::vector<std::vector<std::vector<std::uint64_t>>> category_counts;
  /// Numeric attributes: per-class mean and population variance.
  std::vector<std::vector<double>> means;
  std::vector<std::vector<double>> variances;

  static NaiveBayesModel fit(const Dataset& train);

  std::vector<double> log_posterior(std::span<const double> row) const;
  std::vector<double> predict_proba(std::span<const double> row) const;
  bool operator==(const NaiveBayesModel&) const = default;
};

}  // namespace ids
