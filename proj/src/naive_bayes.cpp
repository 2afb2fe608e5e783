#include "ids/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ids/error.hpp"

namespace ids {

NaiveBayesModel NaiveBayesModel::fit(const Dataset& train) {
  if (train.num_present_classes() < 2) {
    throw DataError("naive Bayes needs at least two classes in the training data");
  }
  const std::size_t d = train.num_attributes();
  const std::size_t k = train.num_classes();
  NaiveBayesModel m;
  m.class_counts.assign(k, 0);
  m.category_counts.assign(d, {});
  m.means.assign(d, {});
  m.variances.assign(d, {});
  for (std::size_t a = 0; a < d; ++a) {
    const auto& attr = train.attribute(a);
    m.kinds.push_back(attr.kind);
    if (attr.is_nominal()) {
      m.category_counts[a].assign(k, std::vector<std::uint64_t>(attr.nominal_values.size(), 0));
    } else {
      m.means[a].assign(k, 0.0);
      m.variances[a].assign(k, 0.0);
    }
  }

  for (std::size_t r = 0; r < train.num_rows(); ++r) {
    const auto c = static_cast<std::size_t>(train.label(r));
    ++m.class_counts[c];
    for (std::size_t a = 0; a < d; ++a) {
      const double v = train.value(r, a);
      if (m.kinds[a] == AttributeKind::nominal) {
        if (v != kUnknownCategory) ++m.category_counts[a][c][static_cast<std::size_t>(v)];
      } else {
        m.means[a][c] += v;
      }
    }
  }
  for (std::size_t a = 0; a < d; ++a) {
    if (m.kinds[a] == AttributeKind::nominal) continue;
    for (std::size_t c = 0; c < k; ++c) {
      if (m.class_counts[c] > 0) m.means[a][c] /= static_cast<double>(m.class_counts[c]);
    }
  }
  // Second pass for the variance keeps it accurate for large offsets.
  for (std::size_t r = 0; r < train.num_rows(); ++r) {
    const auto c = static_cast<std::size_t>(train.label(r));
    for (std::size_t a = 0; a < d; ++a) {
      if (m.kinds[a] == AttributeKind::nominal) continue;
      const double diff = train.value(r, a) - m.means[a][c];
      m.variances[a][c] += diff * diff;
    }
  }
  for (std::size_t a = 0; a < d; ++a) {
    if (m.kinds[a] == AttributeKind::nominal) continue;
    for (std::size_t c = 0; c < k; ++c) {
      const double n = static_cast<double>(m.class_counts[c]);
      const double var = n > 0 ? m.variances[a][c] / n : 0.0;
      m.variances[a][c] = std::max(var, kMinGaussianVariance);
    }
  }
  return m;
}

std::vector<double> NaiveBayesModel::log_posterior(std::span<const double> row) const {
  const std::size_t k = class_counts.size();
  std::uint64_t total = 0;
  for (const auto c : class_counts) total += c;
  std::vector<double> lp(k);
  for (std::size_t c = 0; c < k; ++c) {
    lp[c] = std::log((static_cast<double>(class_counts[c]) + 1.0) /
                     (static_cast<double>(total) + static_cast<double>(k)));
  }
  for (std::size_t a = 0; a < kinds.size(); ++a) {
    const double v = row[a];
    if (kinds[a] == AttributeKind::nominal) {
      if (v == kUnknownCategory) continue;
      const std::size_t cat = static_cast<std::size_t>(v);
      for (std::size_t c = 0; c < k; ++c) {
        const auto& counts = category_counts[a][c];
        lp[c] += std::log((static_cast<double>(counts[cat]) + 1.0) /
                          (static_cast<double>(class_counts[c]) + static_cast<double>(counts.size())));
      }
    } else {
      for (std::size_t c = 0; c < k; ++c) {
        const double var = variances[a][c];
        const double diff = v - means[a][c];
        lp[c] += -0.5 * std::log(2.0 * std::numbers::pi * var) - diff * diff / (2.0 * var);
      }
    }
  }
  return lp;
}

std::vector<double> NaiveBayesModel::predict_proba(std::span<const double> row) const {
  auto lp = log_posterior(row);
  const double top = *std::max_element(lp.begin(), lp.end());
  double sum = 0.0;
  for (auto& v : lp) {
    v = std::exp(v - top);
    sum += v;
  }
  for (auto& v : lp) v /= sum;
  return lp;
}

}  // namespace ids
