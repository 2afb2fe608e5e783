#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>

#include "ids/error.hpp"
#include "ids/featsel.hpp"
#include "support.hpp"

namespace ids {
namespace {

using test::entropy_oracle;

TEST(Entropy, Examples) {
  const std::vector<std::size_t> uniform{4, 4}, pure{8, 0}, skewed{3, 1};
  EXPECT_DOUBLE_EQ(entropy(uniform), 1.0);
  EXPECT_DOUBLE_EQ(entropy(pure), 0.0);
  EXPECT_NEAR(entropy(skewed), 0.811278, 1e-6);
  EXPECT_NEAR(entropy(skewed), -(0.75 * std::log2(0.75)) - 0.25 * std::log2(0.25), 1e-15);
}

TEST(Entropy, AllZeroCountsFail) {
  const std::vector<std::size_t> zeros{0, 0};
  EXPECT_THROW(entropy(zeros), DataError);
}

TEST(Discretize, Examples) {
  EXPECT_EQ(discretize_numeric(std::vector<double>{1, 2, 3, 4}, 2), (std::vector<std::size_t>{0, 0, 1, 1}));
  EXPECT_EQ(discretize_numeric(std::vector<double>{5, 5, 5, 5}, 4), (std::vector<std::size_t>{0, 0, 0, 0}));
  EXPECT_EQ(discretize_numeric(std::vector<double>{10, 20, 30, 40, 50, 60}, 3),
            (std::vector<std::size_t>{0, 0, 1, 1, 2, 2}));
}

TEST(Discretize, TiesAtCutGoToLowerBin) {
  const std::vector<double> column{1, 2, 2, 2, 3, 4};
  const auto bins = discretize_numeric(column, 2);
  EXPECT_EQ(bins[1], bins[2]);
  EXPECT_EQ(bins[2], bins[3]);
  EXPECT_EQ(bins[0], 0u);
  EXPECT_LE(*std::max_element(bins.begin(), bins.end()), 1u);
}

TEST(Discretize, OrderIndependentOfInputOrder) {
  const std::vector<double> column{60, 10, 40, 30, 50, 20};
  EXPECT_EQ(discretize_numeric(column, 3), (std::vector<std::size_t>{2, 0, 1, 1, 2, 0}));
}

TEST(InformationGain, FixtureA) {
  const Dataset fix = cli::fixture_a();
  const SelectionConfig cfg;
  const double h31 = entropy_oracle({3, 1});
  EXPECT_NEAR(information_gain(fix, 0, cfg), 1.0, 1e-12);
  EXPECT_NEAR(information_gain(fix, 1, cfg), 0.0, 1e-12);
  EXPECT_NEAR(information_gain(fix, 2, cfg), 1.0 - 0.5 * h31 - 0.5 * h31, 1e-12);
  EXPECT_NEAR(information_gain(fix, 2, cfg), 0.188722, 1e-6);
}

TEST(RankAttributes, FixtureAOrder) {
  const auto ranking = rank_attributes(cli::fixture_a(), {});
  ASSERT_EQ(ranking.size(), 3u);
  EXPECT_EQ(ranking[0].attribute_name, "A");
  EXPECT_EQ(ranking[1].attribute_name, "C");
  EXPECT_EQ(ranking[2].attribute_name, "B");
  EXPECT_NEAR(ranking[1].gain, 0.188722, 1e-6);
}

TEST(RankAttributes, DuplicateColumnsTieInSchemaOrder) {
  const Dataset fix = cli::fixture_a();
  const std::vector<std::size_t> cols{2, 0, 2};
  Dataset dup = fix.project(cols);
  // project keeps names; rename the copy to keep the schema valid.
  std::vector<AttributeSchema> schema = dup.schema();
  schema[2].name = "C2";
  Dataset renamed(schema, dup.class_values());
  for (std::size_t r = 0; r < dup.num_rows(); ++r) renamed.add_row(dup.row(r), dup.label(r));
  const auto ranking = rank_attributes(renamed, {});
  EXPECT_EQ(ranking[1].attribute_name, "C");
  EXPECT_EQ(ranking[2].attribute_name, "C2");
  EXPECT_EQ(ranking[1].gain, ranking[2].gain);
}

TEST(RankAttributes, SerialAndParallelAgree) {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Dataset d = test::random_dataset(rng, {.max_rows = 40, .max_attributes = 6});
    const auto a = rank_attributes(d, {}, Execution::serial);
    const auto b = rank_attributes(d, {}, Execution::parallel);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].attribute_index, b[i].attribute_index);
      EXPECT_EQ(a[i].gain, b[i].gain);
    }
  }
}

TEST(FilterByThreshold, StrictInequality) {
  const Dataset fix = cli::fixture_a();
  const auto ranking = rank_attributes(fix, {});
  const Dataset kept = filter_by_threshold(fix, ranking, 0.4);
  ASSERT_EQ(kept.num_attributes(), 1u);
  EXPECT_EQ(kept.attribute(0).name, "A");
  const Dataset zero = filter_by_threshold(fix, ranking, 0.0);
  ASSERT_EQ(zero.num_attributes(), 2u);
  EXPECT_EQ(zero.attribute(0).name, "A");
  EXPECT_EQ(zero.attribute(1).name, "C");
  EXPECT_EQ(zero.num_rows(), fix.num_rows());
}

TEST(FilterByThreshold, EmptySelectionFails) {
  const Dataset fix = cli::fixture_a();
  EXPECT_THROW(filter_by_threshold(fix, rank_attributes(fix, {}), 1.0), DataError);
}

std::vector<std::size_t> class_counts_of(const Dataset& d) { return d.class_counts(); }

TEST(InformationGainProperties, BoundedByClassEntropy) {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const Dataset d = test::random_dataset(rng, {.max_rows = 30});
    const auto counts = class_counts_of(d);
    const double h = entropy(counts);
    for (std::size_t a = 0; a < d.num_attributes(); ++a) {
      const double g = information_gain(d, a, {});
      EXPECT_GE(g, 0.0);
      EXPECT_LE(g, h + 1e-12);
    }
  }
}

TEST(InformationGainProperties, RowPermutationInvariant) {
  Rng rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset d = test::random_dataset(rng, {.max_rows = 30});
    std::vector<std::size_t> perm(d.num_rows());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(perm);
    const Dataset shuffled = d.subset(perm);
    for (std::size_t a = 0; a < d.num_attributes(); ++a) {
      EXPECT_NEAR(information_gain(d, a, {}), information_gain(shuffled, a, {}), 1e-12);
    }
  }
}

TEST(InformationGainProperties, ConstantAttributeHasZeroGain) {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const Dataset d = test::random_dataset(rng, {.max_rows = 30});
    std::vector<AttributeSchema> schema = d.schema();
    schema.push_back(test::numeric("constant"));
    Dataset wide(schema, d.class_values());
    for (std::size_t r = 0; r < d.num_rows(); ++r) {
      std::vector<double> row(d.row(r).begin(), d.row(r).end());
      row.push_back(7.0);
      wide.add_row(row, d.label(r));
    }
    EXPECT_EQ(information_gain(wide, d.num_attributes(), {}), 0.0);
    for (std::size_t a = 0; a < d.num_attributes(); ++a) {
      EXPECT_EQ(information_gain(wide, a, {}), information_gain(d, a, {}));
    }
  }
}

TEST(InformationGainProperties, CategoryRelabelInvariant) {
  const Dataset fix = cli::fixture_a();
  std::vector<AttributeSchema> schema = fix.schema();
  schema[2].nominal_values = {"alpha", "beta"};
  Dataset swapped(schema, fix.class_values());
  for (std::size_t r = 0; r < fix.num_rows(); ++r) {
    std::vector<double> row(fix.row(r).begin(), fix.row(r).end());
    row[2] = 1.0 - row[2];
    swapped.add_row(row, fix.label(r));
  }
  EXPECT_DOUBLE_EQ(information_gain(swapped, 2, {}), information_gain(fix, 2, {}));
}

}  // namespace
}  // namespace ids
