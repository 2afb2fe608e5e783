#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ids/classifiers.hpp"
#include "ids/error.hpp"
#include "ids/eval.hpp"
#include "support.hpp"

namespace ids {
namespace {

ConfusionMatrix from_counts(const std::vector<std::vector<std::uint64_t>>& counts) {
  ConfusionMatrix cm(test::class_names(counts.size()));
  for (std::size_t a = 0; a < counts.size(); ++a) {
    for (std::size_t p = 0; p < counts.size(); ++p) cm.add(a, p, counts[a][p]);
  }
  return cm;
}

double ratio(double num, double den) { return den == 0 ? 0.0 : num / den; }

/// One-vs-rest counts enumerated cell by cell.
ClassMetrics oracle_class(const std::vector<std::vector<std::uint64_t>>& m, std::size_t c) {
  double tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t a = 0; a < m.size(); ++a) {
    for (std::size_t p = 0; p < m.size(); ++p) {
      const double n = static_cast<double>(m[a][p]);
      if (a == c && p == c) tp += n;
      else if (a != c && p == c) fp += n;
      else if (a == c && p != c) fn += n;
      else tn += n;
    }
  }
  ClassMetrics out;
  out.tp_rate = out.recall = ratio(tp, tp + fn);
  out.fp_rate = ratio(fp, fp + tn);
  out.precision = ratio(tp, tp + fp);
  out.f_measure = ratio(2 * out.precision * out.recall, out.precision + out.recall);
  out.support = static_cast<std::uint64_t>(tp + fn);
  return out;
}

TEST(Metrics, BinaryExample) {
  const auto cm = from_counts({{90, 10}, {5, 95}});
  const auto per = per_class_metrics(cm);
  EXPECT_NEAR(per[1].precision, 0.904762, 1e-6);
  EXPECT_NEAR(per[1].recall, 0.95, 1e-12);
  EXPECT_NEAR(per[1].f_measure, 0.926829, 1e-6);
  EXPECT_NEAR(per[1].fp_rate, 0.10, 1e-12);
  EXPECT_NEAR(per[0].precision, 90.0 / 95.0, 1e-12);
  const auto report = weighted_metrics(cm);
  EXPECT_EQ(report.accuracy, 0.925);
  EXPECT_EQ(report.weighted.recall, report.accuracy);
  EXPECT_EQ(report.weighted.tp_rate, report.accuracy);
  EXPECT_NEAR(report.weighted.fp_rate, 0.5 * 0.05 + 0.5 * 0.10, 1e-12);
  EXPECT_EQ(report.weighted.support, 200u);
}

TEST(Metrics, ZeroSupportClassContributesNothing) {
  const auto cm = from_counts({{5, 0, 1}, {0, 0, 0}, {2, 0, 4}});
  const auto per = per_class_metrics(cm);
  EXPECT_EQ(per[1].support, 0u);
  EXPECT_EQ(per[1].recall, 0.0);
  EXPECT_EQ(per[1].precision, 0.0);
  EXPECT_EQ(per[1].f_measure, 0.0);
  const auto report = weighted_metrics(cm);
  EXPECT_NEAR(report.accuracy, 9.0 / 12.0, 1e-15);
  EXPECT_NEAR(report.weighted.precision, (6 * (5.0 / 7.0) + 6 * 0.8) / 12.0, 1e-12);
}

TEST(Metrics, DiagonalMatrixIsPerfect) {
  const auto report = weighted_metrics(from_counts({{3, 0, 0}, {0, 7, 0}, {0, 0, 1}}));
  EXPECT_EQ(report.accuracy, 1.0);
  EXPECT_EQ(report.weighted.precision, 1.0);
  EXPECT_EQ(report.weighted.f_measure, 1.0);
  EXPECT_EQ(report.weighted.fp_rate, 0.0);
}

TEST(Metrics, EmptyMatrixFails) {
  EXPECT_THROW(per_class_metrics(from_counts({{0, 0}, {0, 0}})), DataError);
  EXPECT_THROW(weighted_metrics(from_counts({{0, 0}, {0, 0}})), DataError);
}

TEST(Metrics, MatchBruteForceOracle) {
  Rng rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 2 + rng.uniform_index(4);
    std::vector<std::vector<std::uint64_t>> m(k, std::vector<std::uint64_t>(k));
    std::uint64_t total = 0;
    for (auto& row : m) {
      for (auto& v : row) total += v = rng.uniform_index(3) == 0 ? 0 : rng.uniform_index(50);
    }
    if (total == 0) continue;
    const auto cm = from_counts(m);
    const auto per = per_class_metrics(cm);
    ClassMetrics weighted;
    for (std::size_t c = 0; c < k; ++c) {
      const auto o = oracle_class(m, c);
      EXPECT_NEAR(per[c].precision, o.precision, 1e-12);
      EXPECT_NEAR(per[c].recall, o.recall, 1e-12);
      EXPECT_NEAR(per[c].fp_rate, o.fp_rate, 1e-12);
      EXPECT_NEAR(per[c].f_measure, o.f_measure, 1e-12);
      EXPECT_EQ(per[c].support, o.support);
      const double w = static_cast<double>(o.support) / static_cast<double>(total);
      weighted.precision += w * o.precision;
      weighted.recall += w * o.recall;
      weighted.fp_rate += w * o.fp_rate;
      weighted.f_measure += w * o.f_measure;
    }
    const auto report = weighted_metrics(cm);
    EXPECT_NEAR(report.weighted.precision, weighted.precision, 1e-12);
    EXPECT_NEAR(report.weighted.recall, weighted.recall, 1e-12);
    EXPECT_NEAR(report.weighted.fp_rate, weighted.fp_rate, 1e-12);
    EXPECT_NEAR(report.weighted.f_measure, weighted.f_measure, 1e-12);
    EXPECT_EQ(report.weighted.recall, report.accuracy);
    for (const double v : {report.weighted.precision, report.weighted.recall, report.weighted.fp_rate,
                           report.weighted.f_measure, report.accuracy}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Metrics, ClassPermutationInvariant) {
  Rng rng(103);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 + rng.uniform_index(4);
    std::vector<std::vector<std::uint64_t>> m(k, std::vector<std::uint64_t>(k));
    for (auto& row : m) {
      for (auto& v : row) v = 1 + rng.uniform_index(30);
    }
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(perm);
    auto permuted = m;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t p = 0; p < k; ++p) permuted[perm[a]][perm[p]] = m[a][p];
    }
    const auto r1 = weighted_metrics(from_counts(m));
    const auto r2 = weighted_metrics(from_counts(permuted));
    EXPECT_NEAR(r1.weighted.precision, r2.weighted.precision, 1e-12);
    EXPECT_NEAR(r1.weighted.f_measure, r2.weighted.f_measure, 1e-12);
    EXPECT_NEAR(r1.weighted.fp_rate, r2.weighted.fp_rate, 1e-12);
    EXPECT_EQ(r1.accuracy, r2.accuracy);
  }
}

TEST(ConfusionMatrix, CountsAndBounds) {
  ConfusionMatrix cm({"a", "b"});
  cm.add(0, 1);
  cm.add(0, 1, 2);
  cm.add(1, 1);
  EXPECT_EQ(cm.at(0, 1), 3u);
  EXPECT_EQ(cm.total(), 4u);
  EXPECT_EQ(cm.trace(), 1u);
  EXPECT_EQ(cm.row_sum(0), 3u);
  EXPECT_EQ(cm.column_sum(1), 4u);
  EXPECT_THROW(cm.add(2, 0), DataError);
  ConfusionMatrix other({"a", "b"});
  other.add(1, 0);
  cm.merge(other);
  EXPECT_EQ(cm.total(), 5u);
}

TEST(ConfusionMatrix, FromModelPredictions) {
  const Dataset fix = cli::fixture_a();
  const auto model = train_decision_tree(fix, {});
  const auto cm = confusion_matrix(model, fix);
  EXPECT_EQ(cm.labels(), fix.class_values());
  EXPECT_EQ(cm.at(0, 0), 4u);
  EXPECT_EQ(cm.at(1, 1), 4u);
  EXPECT_EQ(cm, confusion_matrix(model, fix, Execution::serial));
  const Dataset other = fix.project(std::vector<std::size_t>{0, 1});
  EXPECT_THROW(confusion_matrix(model, other), ModelError);
}

TEST(FormatRate, ThreeDecimals) {
  EXPECT_EQ(format_rate(0.8524), "0.852");
  EXPECT_EQ(format_rate(1.0), "1.000");
  EXPECT_EQ(format_rate(0.0), "0.000");
  EXPECT_EQ(format_rate(0.9995), "1.000");
  // 0.0625 is exact in binary; the tie rounds to even.
  EXPECT_EQ(format_rate(0.0625), "0.062");
}

TEST(Render, PerfectModelTsvLine) {
  const std::vector<ReportRow> rows{{"J48", weighted_metrics(from_counts({{4, 0}, {0, 4}})), {}, {}, ""}};
  std::ostringstream out;
  render_tsv(rows, out);
  EXPECT_EQ(out.str(),
            "Algorithm\tTP\tFP\tPrecision\tRecall\tF-measure\tAccuracy\n"
            "J48\t1.000\t0.000\t1.000\t1.000\t1.000\t1.000\n");
}

TEST(Render, FailedRowAndTiming) {
  const std::vector<ReportRow> rows{
      {"Random Forest", weighted_metrics(from_counts({{90, 10}, {5, 95}})), 1.25, std::nullopt, ""},
      {"Hybrid (DT+RF stacking)", std::nullopt, std::nullopt, std::nullopt, "boom"}};
  std::ostringstream out;
  render_tsv(rows, out, true);
  EXPECT_EQ(out.str(),
            "Algorithm\tTP\tFP\tPrecision\tRecall\tF-measure\tAccuracy\tTrain(s)\tTest(s)\n"
            "Random Forest\t0.925\t0.075\t0.926\t0.925\t0.925\t0.925\t1.250\t-\n"
            "Hybrid (DT+RF stacking)\tFAILED\tFAILED\tFAILED\tFAILED\tFAILED\tFAILED\t-\t-\n");
  std::ostringstream md;
  render_markdown(rows, md);
  const std::string text = md.str();
  EXPECT_EQ(text.rfind("| Algorithm", 0), 0u);
  EXPECT_NE(text.find("---:"), std::string::npos);
  EXPECT_NE(text.find("FAILED"), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}

TEST(Render, EmptyTableFails) {
  std::ostringstream out;
  EXPECT_THROW(render_tsv({}, out), UsageError);
}

TEST(Render, PerClassAndConfusion) {
  const auto cm = from_counts({{90, 10}, {5, 95}});
  std::ostringstream per, conf;
  render_per_class_tsv(cm, weighted_metrics(cm), per);
  render_confusion_tsv(cm, conf);
  EXPECT_EQ(per.str(),
            "Class\tTP\tFP\tPrecision\tRecall\tF-measure\tSupport\n"
            "c0\t0.900\t0.050\t0.947\t0.900\t0.923\t100\n"
            "c1\t0.950\t0.100\t0.905\t0.950\t0.927\t100\n"
            "weighted\t0.925\t0.075\t0.926\t0.925\t0.925\t200\n");
  EXPECT_EQ(conf.str(), "actual\\predicted\tc0\tc1\nc0\t90\t10\nc1\t5\t95\n");
}

}  // namespace
}  // namespace ids
