#include <chrono>
#include <cstdlib>
#include <ostream>
#include <tuple>

#include "ids/classifiers.hpp"
#include "ids/cli.hpp"
#include "ids/ensemble.hpp"
#include "ids/error.hpp"
#include "ids/persistence.hpp"

namespace ids::cli {

using nlohmann::json;

std::filesystem::path resolve_data_path(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* base = std::getenv("IDS_DATA_DIR"); base != nullptr && *base != '\0') {
      return std::filesystem::path(base) / p;
    }
  }
  return p;
}

Dataset load_mapped(const std::string& path, DataFormat format, ClassMode mode) {
  const auto data = load_dataset(resolve_data_path(path), format);
  if (data.dropped_rows() > 0) {
    warn(path + ": dropped " + std::to_string(data.dropped_rows()) + " rows with NaN or infinite values");
  }
  return apply_class_mapping(data, ClassMapping{mode});
}

Dataset train_part(const Dataset& data, const std::optional<SampleSpec>& sample) {
  return sample ? sample_subset(data, *sample).first : data;
}

Dataset test_part(const Dataset& data, const std::optional<SampleSpec>& sample) {
  return sample ? sample_subset(data, *sample).second : data;
}

Selection select_features(const Dataset& train, double threshold, Execution exec) {
  SelectionConfig cfg;
  cfg.threshold = threshold;
  Selection sel;
  sel.ranking = rank_attributes(train, cfg, exec);
  sel.data = filter_by_threshold(train, sel.ranking, threshold);
  return sel;
}

TrainedModel train_algorithm(Algorithm algo, const Dataset& train, std::uint64_t seed, Execution exec) {
  if (algo == Algorithm::hybrid) return train_stacking(train, StackingConfig::hybrid(seed), exec);
  return train_learner(LearnerSpec::defaults(algo, seed), train, exec);
}

std::vector<std::string> ModelFile::selected_attributes() const {
  std::vector<std::string> names;
  for (const auto& attr : model.schema) names.push_back(attr.name);
  return names;
}

std::string serialize_model_file(const ModelFile& file) {
  json j = model_to_json(file.model);
  j["data_format"] = std::string(to_string(file.format));
  j["class_mode"] = std::string(to_string(file.class_mode));
  j["threshold"] = file.threshold;
  j["selected_attributes"] = file.selected_attributes();
  return j.dump(1) + "\n";
}

ModelFile parse_model_file(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ModelError(std::string("model file is not valid JSON: ") + e.what());
  }
  ModelFile file;
  file.model = model_from_json(j);
  try {
    file.format = parse_data_format(j.at("data_format").get<std::string>());
    file.class_mode = parse_class_mode(j.at("class_mode").get<std::string>());
    file.threshold = j.at("threshold").get<double>();
    if (j.at("selected_attributes").get<std::vector<std::string>>() != file.selected_attributes()) {
      throw ModelError("selected_attributes do not match the model schema");
    }
  } catch (const json::exception& e) {
    throw ModelError(std::string("malformed model file: ") + e.what());
  } catch (const UsageError& e) {
    throw ModelError(std::string("malformed model file: ") + e.what());
  }
  return file;
}

void save_model_file(const std::filesystem::path& path, const ModelFile& file) {
  write_file_atomic(path, serialize_model_file(file));
}

ModelFile load_model_file(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const DataError& e) {
    throw ModelError(e.what());
  }
  return parse_model_file(text);
}

ConfusionMatrix evaluate_model(const TrainedModel& model, const Dataset& test, Execution exec) {
  return confusion_matrix(model, conform(test, model.schema, model.class_values), exec);
}

BenchmarkResult run_benchmark(const BenchmarkPlan& plan, Execution exec, std::ostream& log) {
  if (plan.algorithms.empty()) throw UsageError("benchmark needs at least one algorithm");
  if (plan.test_path.empty() && !plan.sample) {
    throw UsageError("benchmark needs --test or a train/test sample of --data");
  }
  Dataset train, test;
  {
    const Dataset all = load_mapped(plan.train_path, plan.format, plan.class_mode);
    if (plan.sample) {
      std::tie(train, test) = sample_subset(all, *plan.sample);
    } else {
      train = all;
    }
    if (!plan.test_path.empty()) test = load_mapped(plan.test_path, plan.format, plan.class_mode);
  }

  BenchmarkResult result;
  Selection sel = select_features(train, plan.threshold, exec);
  result.ranking = std::move(sel.ranking);
  result.kept_attributes = sel.data.num_attributes();
  const Dataset projected_test = conform(test, sel.data.schema(), sel.data.class_values());

  using Clock = std::chrono::steady_clock;
  const auto seconds = [](Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };
  for (const auto algo : plan.algorithms) {
    ReportRow row;
    row.algorithm = std::string(display_name(algo));
    try {
      const auto t0 = Clock::now();
      const auto model = train_algorithm(algo, sel.data, plan.seed, exec);
      const auto t1 = Clock::now();
      const auto cm = confusion_matrix(model, projected_test, exec);
      const auto t2 = Clock::now();
      row.metrics = weighted_metrics(cm);
      row.train_seconds = seconds(t0, t1);
      row.test_seconds = seconds(t1, t2);
    } catch (const Error& e) {
      row.failure = e.what();
      log << "ids: " << to_string(algo) << " FAILED: " << e.what() << '\n';
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace ids::cli
