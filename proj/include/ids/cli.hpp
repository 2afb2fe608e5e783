#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ids/csv_io.hpp"
#include "ids/eval.hpp"
#include "ids/execution.hpp"
#include "ids/featsel.hpp"
#include "ids/labels.hpp"
#include "ids/model.hpp"
#include "ids/sampling.hpp"

namespace ids::cli {

/// Relative paths resolve against $IDS_DATA_DIR when it is set.
std::filesystem::path resolve_data_path(const std::string& path);

/// Load, clean (done by the loader) and apply the class mapping.
Dataset load_mapped(const std::string& path, DataFormat format, ClassMode mode);

/// Train part of a sampled split, or all of `data` when `sample` is empty.
Dataset train_part(const Dataset& data, const std::optional<SampleSpec>& sample);
/// Test part of a sampled split, or all of `data` when `sample` is empty.
Dataset test_part(const Dataset& data, const std::optional<SampleSpec>& sample);

struct Selection {
  std::vector<RankedAttribute> ranking;
  /// Training data projected onto the kept attributes.
  Dataset data;
};

/// Ranks on the training data and keeps gains above `threshold`.
Selection select_features(const Dataset& train, double threshold, Execution exec);

/// Benchmark configuration of `algo`, hybrid included.
TrainedModel train_algorithm(Algorithm algo, const Dataset& train, std::uint64_t seed, Execution exec);

/// A trained model plus the preprocessing needed to apply it to raw data.
struct ModelFile {
  TrainedModel model;
  DataFormat format = DataFormat::generic;
  ClassMode class_mode = ClassMode::binary;
  double threshold = 0.4;

  /// Kept attribute names in model order.
  std::vector<std::string> selected_attributes() const;
};

/// Canonical text: sorted keys, shortest round-trip numbers, trailing newline.
std::string serialize_model_file(const ModelFile& file);
ModelFile parse_model_file(const std::string& text);
void save_model_file(const std::filesystem::path& path, const ModelFile& file);
ModelFile load_model_file(const std::filesystem::path& path);

/// Metrics of `model` on raw (mapped, unprojected) test data.
ConfusionMatrix evaluate_model(const TrainedModel& model, const Dataset& test, Execution exec);

struct BenchmarkPlan {
  std::string train_path;
  /// Empty: the test split comes from `sample` over train_path.
  std::string test_path;
  std::optional<SampleSpec> sample;
  DataFormat format = DataFormat::generic;
  ClassMode class_mode = ClassMode::binary;
  std::vector<Algorithm> algorithms;
  double threshold = 0.4;
  std::uint64_t seed = 0;
};

struct BenchmarkResult {
  std::vector<RankedAttribute> ranking;
  std::size_t kept_attributes = 0;
  /// One row per algorithm, in table order.
  std::vector<ReportRow> rows;
};

/// Shared preprocessing once, then train and test each algorithm. Failures
/// become FAILED rows and are reported on `log`.
BenchmarkResult run_benchmark(const BenchmarkPlan& plan, Execution exec, std::ostream& log);

/// The 8-row FIX-A table (columns A, B, C, label).
Dataset fixture_a();

struct SyntheticSpec {
  std::size_t rows = 1000;
  std::size_t numeric = 6;
  std::size_t nominal = 2;
  /// Fraction of labels flipped after planting.
  double noise = 0.0;
  std::uint64_t seed = 0;
};

/// Flow-like table whose class depends on the first two attributes.
Dataset synthetic_dataset(const SyntheticSpec& spec);

/// Entry point of the `ids` tool. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ids::cli
