#include "ids/ensemble.hpp"

#include <exception>
#include <memory>

#include "ids/classifiers.hpp"
#include "ids/error.hpp"
#include "ids/rng.hpp"

namespace ids {

StackingConfig StackingConfig::hybrid(std::uint64_t seed) {
  StackingConfig cfg;
  cfg.base_learners = {LearnerSpec::defaults(Algorithm::dtree, seed),
                       LearnerSpec::defaults(Algorithm::rforest, seed)};
  cfg.meta_learner = LearnerSpec::defaults(Algorithm::dtree, seed);
  cfg.seed = seed;
  return cfg;
}

std::vector<std::size_t> stratified_folds(const Dataset& data, std::size_t folds,
                                          std::uint64_t seed) {
  if (folds < 2) throw UsageError("stacking needs at least 2 folds");
  const auto counts = data.class_counts();
  std::vector<std::vector<std::size_t>> by_class(data.num_classes());
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    by_class[static_cast<std::size_t>(data.label(r))].push_back(r);
  }
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] > 0 && counts[c] < folds) {
      throw DataError("class '" + data.class_values()[c] + "' has " + std::to_string(counts[c]) +
                      " rows, fewer than " + std::to_string(folds) + " folds");
    }
  }
  Rng rng(seed);
  std::vector<std::size_t> fold(data.num_rows());
  // Dealing continues across classes so fold sizes differ by at most one.
  std::size_t next = 0;
  for (auto& rows : by_class) {
    rng.shuffle(rows);
    for (const auto r : rows) fold[r] = next++ % folds;
  }
  return fold;
}

namespace {

void validate(const StackingConfig& cfg) {
  if (cfg.base_learners.empty()) throw UsageError("stacking needs at least one base learner");
  if (cfg.folds < 2) throw UsageError("stacking needs at least 2 folds");
}

std::vector<AttributeSchema> meta_schema(const StackingConfig& cfg,
                                         const std::vector<std::string>& classes) {
  std::vector<AttributeSchema> schema;
  for (std::size_t b = 0; b < cfg.base_learners.size(); ++b) {
    for (const auto& cls : classes) {
      AttributeSchema attr;
      attr.name = "p" + std::to_string(b) + "_" + std::string(to_string(cfg.base_learners[b].algo)) +
                  "_" + cls;
      schema.push_back(std::move(attr));
    }
  }
  return schema;
}

}  // namespace

MetaFeatures generate_meta_features(const Dataset& train, const StackingConfig& cfg,
                                    const FoldObserver& observer, Execution exec) {
  validate(cfg);
  const std::size_t n = train.num_rows();
  const std::size_t k = train.num_classes();
  const std::size_t width = cfg.base_learners.size() * k;
  const auto fold_of_row = stratified_folds(train, cfg.folds, cfg.seed);

  std::vector<FoldRecord> records(cfg.folds);
  for (std::size_t f = 0; f < cfg.folds; ++f) records[f].fold = f;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t f = 0; f < cfg.folds; ++f) {
      (fold_of_row[r] == f ? records[f].scored_rows : records[f].train_rows).push_back(r);
    }
  }

  std::vector<double> features(n * width, 0.0);
  std::vector<std::exception_ptr> failures(cfg.folds);
  const auto folds = static_cast<std::ptrdiff_t>(cfg.folds);
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
  for (std::ptrdiff_t f = 0; f < folds; ++f) {
    const auto& rec = records[static_cast<std::size_t>(f)];
    try {
      const Dataset fold_train = train.subset(rec.train_rows);
      for (std::size_t b = 0; b < cfg.base_learners.size(); ++b) {
        const auto model = train_learner(cfg.base_learners[b], fold_train, exec);
        for (const auto r : rec.scored_rows) {
          const auto p = predict_proba(model, train.row(r));
          std::copy(p.begin(), p.end(), features.begin() + static_cast<std::ptrdiff_t>(r * width + b * k));
        }
      }
    } catch (...) {
      failures[static_cast<std::size_t>(f)] = std::current_exception();
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  if (observer) {
    for (const auto& rec : records) observer(rec);
  }

  MetaFeatures meta{Dataset(meta_schema(cfg, train.class_values()), train.class_values()), fold_of_row};
  meta.data.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    meta.data.add_row(std::span<const double>(features.data() + r * width, width), train.label(r));
  }
  return meta;
}

TrainedModel train_stacking(const Dataset& train, const StackingConfig& cfg, Execution exec) {
  validate(cfg);
  if (train.empty()) throw DataError("cannot train on an empty dataset");
  const auto meta = generate_meta_features(train, cfg, {}, exec);

  StackingModel model;
  model.folds = cfg.folds;
  for (const auto& spec : cfg.base_learners) model.bases.push_back(train_learner(spec, train, exec));
  model.meta = std::make_shared<const TrainedModel>(train_learner(cfg.meta_learner, meta.data, exec));
  return make_model(Algorithm::hybrid, train, cfg.seed, std::move(model));
}

std::vector<double> meta_feature_vector(const StackingModel& model, std::span<const double> row) {
  std::vector<double> out;
  for (const auto& base : model.bases) {
    const auto p = predict_proba(base, row);
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

std::vector<double> predict_stacking(const StackingModel& model, std::span<const double> row) {
  if (!model.meta) throw ModelError("stacking model has no meta learner");
  return predict_proba(*model.meta, meta_feature_vector(model, row));
}

}  // namespace ids
