#include "ids/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "ids/error.hpp"

namespace ids {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)), counts_(labels_.size() * labels_.size(), 0) {}

void ConfusionMatrix::add(std::size_t actual, std::size_t predicted, std::uint64_t n) {
  if (actual >= size() || predicted >= size()) throw DataError("confusion matrix index out of range");
  counts_[actual * size() + predicted] += n;
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  if (other.labels_ != labels_) throw DataError("cannot merge confusion matrices over different labels");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t sum = 0;
  for (const auto v : counts_) sum += v;
  return sum;
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t sum = 0;
  for (std::size_t c = 0; c < size(); ++c) sum += at(c, c);
  return sum;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t actual) const {
  std::uint64_t sum = 0;
  for (std::size_t p = 0; p < size(); ++p) sum += at(actual, p);
  return sum;
}

std::uint64_t ConfusionMatrix::column_sum(std::size_t predicted) const {
  std::uint64_t sum = 0;
  for (std::size_t a = 0; a < size(); ++a) sum += at(a, predicted);
  return sum;
}

ConfusionMatrix confusion_matrix(const TrainedModel& model, const Dataset& test, Execution exec) {
  const auto predicted = predict_all(model, test, exec);
  ConfusionMatrix cm(model.class_values);
  for (std::size_t r = 0; r < test.num_rows(); ++r) {
    cm.add(static_cast<std::size_t>(test.label(r)), static_cast<std::size_t>(predicted[r]));
  }
  return cm;
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& cm) {
  const std::uint64_t total = cm.total();
  if (total == 0) throw DataError("metrics need a non-empty confusion matrix");
  std::vector<ClassMetrics> out(cm.size());
  for (std::size_t c = 0; c < cm.size(); ++c) {
    const std::uint64_t tp = cm.at(c, c);
    const std::uint64_t support = cm.row_sum(c);
    const std::uint64_t fn = support - tp;
    const std::uint64_t fp = cm.column_sum(c) - tp;
    const std::uint64_t tn = total - tp - fn - fp;
    auto& m = out[c];
    m.support = support;
    m.tp_rate = ratio(tp, tp + fn);
    m.recall = m.tp_rate;
    m.fp_rate = ratio(fp, fp + tn);
    m.precision = ratio(tp, tp + fp);
    const double pr = m.precision + m.recall;
    m.f_measure = pr == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / pr;
  }
  return out;
}

MetricsReport weighted_metrics(const ConfusionMatrix& cm) {
  MetricsReport report;
  report.per_class = per_class_metrics(cm);
  const std::uint64_t total = cm.total();
  const auto n = static_cast<double>(total);
  auto& w = report.weighted;
  for (const auto& m : report.per_class) {
    const auto s = static_cast<double>(m.support);
    w.fp_rate += s * m.fp_rate;
    w.precision += s * m.precision;
    w.f_measure += s * m.f_measure;
  }
  w.fp_rate /= n;
  w.precision /= n;
  w.f_measure /= n;
  w.support = total;
  report.accuracy = ratio(cm.trace(), total);
  w.tp_rate = report.accuracy;
  w.recall = report.accuracy;
  return report;
}

std::string format_rate(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", value);
  return buf;
}

namespace {

std::vector<std::string> header(bool with_timing) {
  std::vector<std::string> h{"Algorithm", "TP", "FP", "Precision", "Recall", "F-measure", "Accuracy"};
  if (with_timing) {
    h.emplace_back("Train(s)");
    h.emplace_back("Test(s)");
  }
  return h;
}

std::string seconds(const std::optional<double>& s) { return s ? format_rate(*s) : "-"; }

std::vector<std::string> cells(const ReportRow& row, bool with_timing) {
  std::vector<std::string> out{row.algorithm};
  if (row.metrics) {
    const auto& w = row.metrics->weighted;
    for (const double v : {w.tp_rate, w.fp_rate, w.precision, w.recall, w.f_measure, row.metrics->accuracy}) {
      out.push_back(format_rate(v));
    }
  } else {
    out.insert(out.end(), 6, "FAILED");
  }
  if (with_timing) {
    out.push_back(seconds(row.train_seconds));
    out.push_back(seconds(row.test_seconds));
  }
  return out;
}

void write_tsv_line(const std::vector<std::string>& fields, std::ostream& out) {
  for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "\t" : "") << fields[i];
  out << '\n';
}

}  // namespace

void render_tsv(std::span<const ReportRow> rows, std::ostream& out, bool with_timing) {
  if (rows.empty()) throw UsageError("report needs at least one row");
  write_tsv_line(header(with_timing), out);
  for (const auto& row : rows) write_tsv_line(cells(row, with_timing), out);
}

void render_markdown(std::span<const ReportRow> rows, std::ostream& out, bool with_timing) {
  if (rows.empty()) throw UsageError("report needs at least one row");
  std::vector<std::vector<std::string>> table{header(with_timing)};
  for (const auto& row : rows) table.push_back(cells(row, with_timing));
  std::vector<std::size_t> width(table.front().size(), 3);
  for (const auto& line : table) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  const auto emit = [&](const std::vector<std::string>& line) {
    out << '|';
    for (std::size_t i = 0; i < line.size(); ++i) {
      // Names left-aligned, numbers right-aligned.
      const std::string pad(width[i] - line[i].size(), ' ');
      out << ' ' << (i == 0 ? line[i] + pad : pad + line[i]) << " |";
    }
    out << '\n';
  };
  emit(table.front());
  out << '|';
  for (std::size_t i = 0; i < width.size(); ++i) {
    out << (i == 0 ? ' ' + std::string(width[i], '-') + " |" : ' ' + std::string(width[i] - 1, '-') + ": |");
  }
  out << '\n';
  for (std::size_t r = 1; r < table.size(); ++r) emit(table[r]);
}

void render_per_class_tsv(const ConfusionMatrix& cm, const MetricsReport& report, std::ostream& out) {
  out << "Class\tTP\tFP\tPrecision\tRecall\tF-measure\tSupport\n";
  const auto line = [&](const std::string& name, const ClassMetrics& m) {
    out << name << '\t' << format_rate(m.tp_rate) << '\t' << format_rate(m.fp_rate) << '\t'
        << format_rate(m.precision) << '\t' << format_rate(m.recall) << '\t'
        << format_rate(m.f_measure) << '\t' << m.support << '\n';
  };
  for (std::size_t c = 0; c < report.per_class.size(); ++c) line(cm.labels()[c], report.per_class[c]);
  line("weighted", report.weighted);
}

void render_confusion_tsv(const ConfusionMatrix& cm, std::ostream& out) {
  out << "actual\\predicted";
  for (const auto& label : cm.labels()) out << '\t' << label;
  out << '\n';
  for (std::size_t a = 0; a < cm.size(); ++a) {
    out << cm.labels()[a];
    for (std::size_t p = 0; p < cm.size(); ++p) out << '\t' << cm.at(a, p);
    out << '\n';
  }
}

}  // namespace ids
