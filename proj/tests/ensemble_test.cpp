#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "ids/classifiers.hpp"
#include "ids/ensemble.hpp"
#include "ids/error.hpp"
#include "ids/persistence.hpp"
#include "support.hpp"

namespace ids {
namespace {

StackingConfig small_hybrid(std::size_t folds, std::uint64_t seed = 1) {
  auto cfg = StackingConfig::hybrid(seed);
  cfg.folds = folds;
  for (auto& base : cfg.base_learners) base.forest.n_trees = 15;
  return cfg;
}

TEST(StratifiedFolds, EveryFoldGetsItsShareOfEachClass) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Dataset d = test::random_dataset(rng, {.max_rows = 200, .max_classes = 4});
    const std::size_t folds = 2 + rng.uniform_index(4);
    const auto counts = d.class_counts();
    if (std::any_of(counts.begin(), counts.end(), [&](std::size_t c) { return c > 0 && c < folds; })) {
      EXPECT_THROW(stratified_folds(d, folds, 3), DataError);
      continue;
    }
    const auto assignment = stratified_folds(d, folds, 3);
    ASSERT_EQ(assignment.size(), d.num_rows());
    for (std::size_t c = 0; c < d.num_classes(); ++c) {
      std::vector<std::size_t> per_fold(folds, 0);
      for (std::size_t r = 0; r < d.num_rows(); ++r) {
        if (static_cast<std::size_t>(d.label(r)) == c) ++per_fold[assignment[r]];
      }
      const auto [lo, hi] = std::minmax_element(per_fold.begin(), per_fold.end());
      EXPECT_LE(*hi - *lo, 1u);
    }
    EXPECT_EQ(assignment, stratified_folds(d, folds, 3));
  }
}

TEST(StratifiedFolds, SmallClassFails) {
  EXPECT_THROW(stratified_folds(cli::fixture_a(), 5, 0), DataError);
  EXPECT_THROW(stratified_folds(cli::fixture_a(), 1, 0), UsageError);
  EXPECT_NO_THROW(stratified_folds(cli::fixture_a(), 4, 0));
}

TEST(MetaFeatures, ShapeAndBlockSums) {
  const Dataset d = cli::synthetic_dataset({.rows = 300, .numeric = 4, .nominal = 1, .seed = 2});
  const auto cfg = small_hybrid(5);
  const auto meta = generate_meta_features(d, cfg);
  ASSERT_EQ(meta.data.num_rows(), d.num_rows());
  ASSERT_EQ(meta.data.num_attributes(), cfg.base_learners.size() * d.num_classes());
  EXPECT_EQ(meta.data.class_values(), d.class_values());
  EXPECT_EQ(meta.data.labels(), d.labels());
  EXPECT_EQ(meta.data.attribute(0).name, "p0_dtree_attack");
  EXPECT_EQ(meta.data.attribute(3).name, "p1_rforest_normal");
  for (std::size_t r = 0; r < meta.data.num_rows(); ++r) {
    for (std::size_t b = 0; b < cfg.base_learners.size(); ++b) {
      double sum = 0.0;
      for (std::size_t c = 0; c < d.num_classes(); ++c) sum += meta.data.value(r, b * d.num_classes() + c);
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
  }
}

TEST(MetaFeatures, ScoredRowsAreNeverTrainedOn) {
  const Dataset d = cli::synthetic_dataset({.rows = 200, .seed = 4});
  const auto cfg = small_hybrid(4);
  std::vector<std::size_t> seen_folds;
  std::vector<int> scored(d.num_rows(), 0);
  const auto meta = generate_meta_features(d, cfg, [&](const FoldRecord& rec) {
    seen_folds.push_back(rec.fold);
    const std::set<std::size_t> train(rec.train_rows.begin(), rec.train_rows.end());
    for (const auto r : rec.scored_rows) {
      EXPECT_EQ(train.count(r), 0u);
      ++scored[r];
    }
    EXPECT_EQ(rec.train_rows.size() + rec.scored_rows.size(), d.num_rows());
  });
  EXPECT_EQ(seen_folds, (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_TRUE(std::all_of(scored.begin(), scored.end(), [](int n) { return n == 1; }));
  for (std::size_t r = 0; r < d.num_rows(); ++r) EXPECT_LT(meta.fold_of_row[r], 4u);
}

TEST(MetaFeatures, MatchesIndependentlyTrainedFoldModels) {
  const Dataset d = cli::synthetic_dataset({.rows = 120, .numeric = 3, .nominal = 1, .seed = 6});
  const auto cfg = small_hybrid(3);
  const auto meta = generate_meta_features(d, cfg, {}, Execution::serial);
  const auto assignment = stratified_folds(d, cfg.folds, cfg.seed);
  EXPECT_EQ(meta.fold_of_row, assignment);
  for (std::size_t f = 0; f < cfg.folds; ++f) {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < d.num_rows(); ++r) {
      if (assignment[r] != f) rows.push_back(r);
    }
    const Dataset train = d.subset(rows);
    for (std::size_t b = 0; b < cfg.base_learners.size(); ++b) {
      const auto model = train_learner(cfg.base_learners[b], train);
      for (std::size_t r = 0; r < d.num_rows(); ++r) {
        if (assignment[r] != f) continue;
        const auto p = predict_proba(model, d.row(r));
        for (std::size_t c = 0; c < p.size(); ++c) {
          EXPECT_EQ(meta.data.value(r, b * d.num_classes() + c), p[c]);
        }
      }
    }
  }
}

TEST(Stacking, FixtureAWithFourFolds) {
  const Dataset fix = cli::fixture_a();
  const auto cfg = small_hybrid(4, 0);
  const auto meta = generate_meta_features(fix, cfg);
  for (std::size_t r = 0; r < fix.num_rows(); ++r) {
    const auto own = static_cast<std::size_t>(fix.label(r));
    // Attribute A alone separates the classes in every training fold.
    EXPECT_EQ(meta.data.value(r, own), 1.0);
    EXPECT_GT(meta.data.value(r, 2 + own), 0.5);
  }
  const auto model = train_stacking(fix, cfg);
  EXPECT_EQ(model.algo, Algorithm::hybrid);
  EXPECT_EQ(test::training_accuracy(model, fix), 1.0);
}

TEST(Stacking, SingleBaseIsStackedOverItsOwnOutput) {
  const Dataset d = cli::synthetic_dataset({.rows = 150, .numeric = 3, .nominal = 0, .seed = 8});
  StackingConfig cfg;
  cfg.base_learners = {LearnerSpec::defaults(Algorithm::dtree)};
  cfg.meta_learner = LearnerSpec::defaults(Algorithm::dtree);
  cfg.folds = 3;
  const auto model = train_stacking(d, cfg);
  const auto& stack = std::get<StackingModel>(model.body);
  ASSERT_EQ(stack.bases.size(), 1u);
  const auto base = train_learner(cfg.base_learners[0], d);
  EXPECT_EQ(std::get<TreeModel>(stack.bases[0].body), std::get<TreeModel>(base.body));
  Rng rng(9);
  for (const auto& row : test::random_rows(rng, d.schema(), 50, 0.0, 1.0)) {
    EXPECT_EQ(meta_feature_vector(stack, row), predict_proba(base, row));
    EXPECT_EQ(predict_proba(model, row), predict_proba(*stack.meta, predict_proba(base, row)));
  }
}

TEST(Stacking, DeterministicAndExecutionIndependent) {
  const Dataset d = cli::synthetic_dataset({.rows = 200, .noise = 0.05, .seed = 10});
  const auto cfg = small_hybrid(5, 7);
  const auto a = model_to_json(train_stacking(d, cfg, Execution::serial)).dump();
  const auto b = model_to_json(train_stacking(d, cfg, Execution::parallel)).dump();
  const auto c = model_to_json(train_stacking(d, cfg, Execution::parallel)).dump();
  EXPECT_EQ(a, b);
  EXPECT_EQ(b, c);
}

TEST(Stacking, RejectsBadConfigurations) {
  const Dataset fix = cli::fixture_a();
  auto cfg = small_hybrid(4);
  cfg.base_learners.clear();
  EXPECT_THROW(train_stacking(fix, cfg), UsageError);
  cfg = small_hybrid(5);
  EXPECT_THROW(train_stacking(fix, cfg), DataError);
}

}  // namespace
}  // namespace ids
