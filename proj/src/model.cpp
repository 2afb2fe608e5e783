#include "ids/model.hpp"

#include <exception>
#include <numeric>

#include "ids/classifiers.hpp"
#include "ids/ensemble.hpp"
#include "ids/error.hpp"
#include "ids/rng.hpp"

namespace ids {

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::bayes: return "bayes";
    case Algorithm::dtable: return "dtable";
    case Algorithm::dtree: return "dtree";
    case Algorithm::j48: return "j48";
    case Algorithm::knn: return "knn";
    case Algorithm::rforest: return "rforest";
    case Algorithm::rtree: return "rtree";
    case Algorithm::hybrid: return "hybrid";
  }
  return "dtree";
}

std::string_view display_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::bayes: return "NaiveBayes (Bayes Net stand-in)";
    case Algorithm::dtable: return "Decision Table";
    case Algorithm::dtree: return "Decision Tree";
    case Algorithm::j48: return "J48";
    case Algorithm::knn: return "K-Nearest Neighbor";
    case Algorithm::rforest: return "Random Forest";
    case Algorithm::rtree: return "Random Tree";
    case Algorithm::hybrid: return "Hybrid (DT+RF stacking)";
  }
  return "";
}

Algorithm parse_algorithm(std::string_view name) {
  for (const auto algo : kAllAlgorithms) {
    if (to_string(algo) == name) return algo;
  }
  throw UsageError("unknown algorithm '" + std::string(name) +
                   "' (bayes, dtable, dtree, j48, knn, rforest, rtree, hybrid)");
}

TrainedModel make_model(Algorithm algo, const Dataset& train, std::uint64_t seed, ModelBody body) {
  TrainedModel m;
  m.algo = algo;
  m.schema = train.schema();
  m.class_values = train.class_values();
  m.fingerprint = train.fingerprint();
  m.seed = seed;
  m.body = std::move(body);
  return m;
}

LearnerSpec LearnerSpec::defaults(Algorithm algo, std::uint64_t seed) {
  LearnerSpec spec;
  spec.algo = algo;
  spec.forest.seed = seed;
  spec.table.seed = seed;
  switch (algo) {
    case Algorithm::dtree: spec.tree.criterion = SplitCriterion::gini; break;
    case Algorithm::j48: spec.tree.criterion = SplitCriterion::gain_ratio; break;
    case Algorithm::rtree:
      spec.forest.n_trees = 1;
      spec.forest.bootstrap = false;
      break;
    case Algorithm::hybrid: throw UsageError("hybrid is configured through StackingConfig");
    default: break;
  }
  return spec;
}

namespace {

void require_trainable(const Dataset& train) {
  if (train.empty()) throw DataError("cannot train on an empty dataset");
  if (train.num_attributes() == 0) throw DataError("cannot train without attributes");
}

std::vector<std::size_t> all_rows(const Dataset& data) {
  std::vector<std::size_t> rows(data.num_rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

void warn_if_single_class(const Dataset& train, std::string_view what) {
  if (train.num_present_classes() < 2) {
    warn(std::string(what) + ": training data has a single class; model is one leaf");
  }
}

}  // namespace

TrainedModel train_decision_tree(const Dataset& train, const TreeConfig& cfg) {
  require_trainable(train);
  warn_if_single_class(train, "decision tree");
  const auto rows = all_rows(train);
  detail::GrowOptions opts{cfg, 0, 0};
  const Algorithm algo = cfg.criterion == SplitCriterion::gain_ratio ? Algorithm::j48 : Algorithm::dtree;
  return make_model(algo, train, 0, detail::grow_tree(train, rows, opts));
}

TrainedModel train_random_tree(const Dataset& train, const ForestConfig& cfg) {
  require_trainable(train);
  warn_if_single_class(train, "random tree");
  const auto rows = all_rows(train);
  detail::GrowOptions opts{cfg.tree, cfg.resolved_features(train.num_attributes()), cfg.seed};
  return make_model(Algorithm::rtree, train, cfg.seed, detail::grow_tree(train, rows, opts));
}

TrainedModel train_random_forest(const Dataset& train, const ForestConfig& cfg, Execution exec) {
  require_trainable(train);
  warn_if_single_class(train, "random forest");
  if (cfg.n_trees == 0) throw UsageError("forest needs at least one tree");
  const std::size_t m = cfg.resolved_features(train.num_attributes());
  const std::size_t n = train.num_rows();

  ForestModel forest;
  forest.voting = cfg.voting;
  forest.trees.resize(cfg.n_trees);
  const auto trees = static_cast<std::ptrdiff_t>(cfg.n_trees);
  std::vector<std::exception_ptr> failures(cfg.n_trees);
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
  for (std::ptrdiff_t t = 0; t < trees; ++t) {
    try {
      Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(t)));
      std::vector<std::size_t> sample(n);
      if (cfg.bootstrap) {
        for (auto& s : sample) s = rng.uniform_index(n);
      } else {
        std::iota(sample.begin(), sample.end(), std::size_t{0});
      }
      detail::GrowOptions opts{cfg.tree, m, rng.next()};
      forest.trees[static_cast<std::size_t>(t)] = detail::grow_tree(train, sample, opts);
    } catch (...) {
      failures[static_cast<std::size_t>(t)] = std::current_exception();
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return make_model(Algorithm::rforest, train, cfg.seed, std::move(forest));
}

TrainedModel train_knn(const Dataset& train, std::size_t k) {
  require_trainable(train);
  return make_model(Algorithm::knn, train, 0, KnnModel::fit(train, k));
}

TrainedModel train_naive_bayes(const Dataset& train) {
  require_trainable(train);
  return make_model(Algorithm::bayes, train, 0, NaiveBayesModel::fit(train));
}

TrainedModel train_decision_table(const Dataset& train, const DecisionTableConfig& cfg,
                                  Execution exec) {
  require_trainable(train);
  return make_model(Algorithm::dtable, train, cfg.seed, fit_decision_table(train, cfg, exec));
}

TrainedModel train_learner(const LearnerSpec& spec, const Dataset& train, Execution exec) {
  TrainedModel m;
  switch (spec.algo) {
    case Algorithm::bayes: m = train_naive_bayes(train); break;
    case Algorithm::dtable: m = train_decision_table(train, spec.table, exec); break;
    case Algorithm::dtree:
    case Algorithm::j48: m = train_decision_tree(train, spec.tree); break;
    case Algorithm::knn: m = train_knn(train, spec.k); break;
    case Algorithm::rforest: m = train_random_forest(train, spec.forest, exec); break;
    case Algorithm::rtree: m = train_random_tree(train, spec.forest); break;
    case Algorithm::hybrid: throw UsageError("hybrid is trained with train_stacking");
  }
  m.algo = spec.algo;
  return m;
}

std::size_t argmax(std::span<const double> proba) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < proba.size(); ++c) {
    if (proba[c] > proba[best]) best = c;
  }
  return best;
}

std::vector<double> predict_proba(const TrainedModel& model, std::span<const double> row) {
  if (row.size() != model.schema.size()) {
    throw ModelError("row has " + std::to_string(row.size()) + " values, model expects " +
                     std::to_string(model.schema.size()));
  }
  return std::visit(
      [&](const auto& body) -> std::vector<double> {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, StackingModel>) {
          return predict_stacking(body, row);
        } else {
          return body.predict_proba(row);
        }
      },
      model.body);
}

std::size_t predict_class(const TrainedModel& model, std::span<const double> row) {
  return argmax(predict_proba(model, row));
}

void check_compatible(const TrainedModel& model, const Dataset& data) {
  if (data.fingerprint() != model.fingerprint) {
    throw ModelError("schema fingerprint mismatch: model was trained on a different schema");
  }
  if (data.class_values() != model.class_values) {
    throw ModelError("class list of the data differs from the model's");
  }
}

std::vector<double> predict_proba_all(const TrainedModel& model, const Dataset& data,
                                      Execution exec) {
  check_compatible(model, data);
  const std::size_t k = model.num_classes();
  std::vector<double> out(data.num_rows() * k);
  const auto n = static_cast<std::ptrdiff_t>(data.num_rows());
#pragma omp parallel for schedule(dynamic, 64) if (exec == Execution::parallel)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    const auto p = predict_proba(model, data.row(static_cast<std::size_t>(r)));
    std::copy(p.begin(), p.end(), out.begin() + r * static_cast<std::ptrdiff_t>(k));
  }
  return out;
}

std::vector<int> predict_all(const TrainedModel& model, const Dataset& data, Execution exec) {
  check_compatible(model, data);
  std::vector<int> out(data.num_rows());
  const auto n = static_cast<std::ptrdiff_t>(data.num_rows());
#pragma omp parallel for schedule(dynamic, 64) if (exec == Execution::parallel)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    out[static_cast<std::size_t>(r)] =
        static_cast<int>(predict_class(model, data.row(static_cast<std::size_t>(r))));
  }
  return out;
}

}  // namespace ids
