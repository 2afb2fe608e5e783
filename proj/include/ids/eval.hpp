#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ids/model.hpp"

namespace ids {

/// counts[actual][predicted] over an ordered label set.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::vector<std::string> labels);

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }

  void add(std::size_t actual, std::size_t predicted, std::uint64_t n = 1);
  void merge(const ConfusionMatrix& other);

  std::uint64_t at(std::size_t actual, std::size_t predicted) const {
    return counts_[actual * labels_.size() + predicted];
  }
  std::uint64_t total() const;
  std::uint64_t trace() const;
  std::uint64_t row_sum(std::size_t actual) const;
  std::uint64_t column_sum(std::size_t predicted) const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<std::uint64_t> counts_;
};

/// Scores every test row. Throws ModelError on schema mismatch. Rows are
/// scored concurrently on the parallel path.
ConfusionMatrix confusion_matrix(const TrainedModel& model, const Dataset& test,
                                 Execution exec = Execution::parallel);

/// One-vs-rest rates of one class (or their support-weighted average).
struct ClassMetrics {
  double tp_rate = 0.0;
  double fp_rate = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  std::uint64_t support = 0;
};

struct MetricsReport {
  std::vector<ClassMetrics> per_class;
  ClassMetrics weighted;
  double accuracy = 0.0;
};

/// Zero denominators yield 0. Throws DataError on an empty matrix.
std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& cm);

/// Per-class metrics plus their average weighted by actual support. The
/// weighted TP rate and recall are computed as trace / total, the exact
/// value the weighted average reduces to, so they equal accuracy bit for bit.
MetricsReport weighted_metrics(const ConfusionMatrix& cm);

/// A result-table row; `metrics` empty marks a failed algorithm.
struct ReportRow {
  std::string algorithm;
  std::optional<MetricsReport> metrics;
  std::optional<double> train_seconds;
  std::optional<double> test_seconds;
  std::string failure;
};

/// Three decimals, correctly rounded from the binary value (exact ties go to
/// even).
std::string format_rate(double value);

/// Columns: Algorithm TP FP Precision Recall F-measure Accuracy, plus
/// Train(s) Test(s) when `with_timing`. Throws UsageError on no rows.
void render_tsv(std::span<const ReportRow> rows, std::ostream& out, bool with_timing = false);
void render_markdown(std::span<const ReportRow> rows, std::ostream& out, bool with_timing = false);

void render_per_class_tsv(const ConfusionMatrix& cm, const MetricsReport& report, std::ostream& out);
void render_confusion_tsv(const ConfusionMatrix& cm, std::ostream& out);

}  // namespace ids
