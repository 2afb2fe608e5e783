#include <algorithm>
#include <cstdio>
#include <exception>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ids/cli.hpp"
#include "ids/error.hpp"
#include "ids/persistence.hpp"

namespace ids::cli {

namespace {

struct Options {
  std::string data;
  std::string format = "generic";
  double threshold = 0.4;
  std::uint64_t seed = 0;
  std::string classes = "binary";
  std::string model;
  std::string out;
  std::string algo;
  std::string algos = "all";
  int threads = 0;
  std::string train;
  std::string test;
  std::size_t train_count = 0;
  std::size_t test_count = 0;
  bool stratified = false;
  bool markdown = false;
  bool no_timing = false;
  SyntheticSpec synthetic;
};

Execution configure_threads(int threads) {
  if (threads < 0) throw UsageError("--threads must be >= 0");
  if (threads > 0) set_thread_count(threads);
  return threads == 1 ? Execution::serial : Execution::parallel;
}

std::optional<SampleSpec> sample_spec(const Options& o) {
  if (o.train_count == 0 && o.test_count == 0) {
    if (o.stratified) throw UsageError("--stratified needs --train-count and --test-count");
    return std::nullopt;
  }
  if (o.train_count == 0 || o.test_count == 0) {
    throw UsageError("--train-count and --test-count must be given together");
  }
  return SampleSpec{o.train_count, o.test_count, o.seed, o.stratified};
}

const std::string& require_flag(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string(flag) + " is required");
  return value;
}

std::vector<Algorithm> parse_algorithm_list(const std::string& text) {
  std::vector<Algorithm> algos;
  std::stringstream ss(text);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name == "all") {
      algos.insert(algos.end(), std::begin(kAllAlgorithms), std::end(kAllAlgorithms));
    } else if (!name.empty()) {
      algos.push_back(parse_algorithm(name));
    }
  }
  if (algos.empty()) throw UsageError("--algos lists no algorithm");
  std::sort(algos.begin(), algos.end());
  algos.erase(std::unique(algos.begin(), algos.end()), algos.end());
  return algos;
}

/// Runs `body` against stdout or, with --out, a file written atomically.
void with_output(const Options& o, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (o.out.empty()) {
    body(out);
    return;
  }
  std::ostringstream buffer;
  body(buffer);
  write_file_atomic(o.out, buffer.str());
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void cmd_rank(const Options& o, std::ostream& out) {
  const Execution exec = configure_threads(o.threads);
  const Dataset data = load_mapped(require_flag(o.data, "--data"), parse_data_format(o.format),
                                   parse_class_mode(o.classes));
  SelectionConfig cfg;
  cfg.threshold = o.threshold;
  const auto ranking = rank_attributes(data, cfg, exec);
  with_output(o, out, [&](std::ostream& os) {
    for (std::size_t i = 0; i < ranking.size(); ++i) {
      const auto& r = ranking[i];
      os << i + 1 << '\t' << r.attribute_name << '\t' << fixed6(r.gain) << '\t'
         << (r.gain > o.threshold ? 'Y' : 'N') << '\n';
    }
  });
}

void cmd_train(const Options& o, std::ostream& out) {
  const Execution exec = configure_threads(o.threads);
  if (o.algo == "all") throw UsageError("--algo all is only accepted by benchmark");
  const Algorithm algo = parse_algorithm(require_flag(o.algo, "--algo"));
  const std::string& model_path = require_flag(o.model, "--model");
  ModelFile file;
  file.format = parse_data_format(o.format);
  file.class_mode = parse_class_mode(o.classes);
  file.threshold = o.threshold;
  const Dataset data = train_part(load_mapped(require_flag(o.data, "--data"), file.format, file.class_mode),
                                  sample_spec(o));
  const Selection sel = select_features(data, o.threshold, exec);
  file.model = train_algorithm(algo, sel.data, o.seed, exec);
  save_model_file(model_path, file);
  out << "trained " << to_string(algo) << " on " << sel.data.num_rows() << " rows, "
      << sel.data.num_attributes() << " of " << data.num_attributes() << " attributes -> "
      << model_path << '\n';
}

void cmd_evaluate(const Options& o, std::ostream& out, bool format_given) {
  const Execution exec = configure_threads(o.threads);
  const ModelFile file = load_model_file(require_flag(o.model, "--model"));
  const DataFormat format = format_given ? parse_data_format(o.format) : file.format;
  const Dataset test = test_part(load_mapped(require_flag(o.data, "--data"), format, file.class_mode),
                                 sample_spec(o));
  const ConfusionMatrix cm = evaluate_model(file.model, test, exec);
  const MetricsReport report = weighted_metrics(cm);
  const ReportRow row{std::string(display_name(file.model.algo)), report, std::nullopt, std::nullopt, {}};
  with_output(o, out, [&](std::ostream& os) {
    const std::span<const ReportRow> rows(&row, 1);
    o.markdown ? render_markdown(rows, os) : render_tsv(rows, os);
    os << '\n';
    render_per_class_tsv(cm, report, os);
    os << '\n';
    render_confusion_tsv(cm, os);
  });
}

void cmd_benchmark(const Options& o, std::ostream& out, std::ostream& err) {
  const Execution exec = configure_threads(o.threads);
  BenchmarkPlan plan;
  plan.train_path = !o.train.empty() ? o.train : require_flag(o.data, "--data or --train");
  if (!o.train.empty() && !o.data.empty()) throw UsageError("give either --data or --train, not both");
  plan.test_path = o.test;
  plan.sample = sample_spec(o);
  if (plan.sample && !plan.test_path.empty()) throw UsageError("--test cannot be combined with sampling");
  plan.format = parse_data_format(o.format);
  plan.class_mode = parse_class_mode(o.classes);
  plan.algorithms = parse_algorithm_list(o.algo.empty() ? o.algos : o.algo);
  plan.threshold = o.threshold;
  plan.seed = o.seed;
  const auto result = run_benchmark(plan, exec, err);
  err << "ids: kept " << result.kept_attributes << " of " << result.ranking.size()
      << " attributes at threshold " << o.threshold << '\n';
  with_output(o, out, [&](std::ostream& os) {
    o.markdown ? render_markdown(result.rows, os, !o.no_timing) : render_tsv(result.rows, os, !o.no_timing);
  });
}

void cmd_fixtures(const Options& o, std::ostream& out) {
  const std::filesystem::path dir = require_flag(o.out, "--out");
  const Dataset synthetic = synthetic_dataset(o.synthetic);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create directory '" + dir.string() + "'");
  const auto write = [&](const std::string& name, const Dataset& data) {
    std::ostringstream ss;
    write_csv(data, ss);
    write_file_atomic(dir / name, ss.str());
    out << (dir / name).string() << '\t' << data.num_rows() << " rows\n";
  };
  write("fixA.csv", fixture_a());
  write("synthetic.csv", synthetic);
}

void cmd_dataset_info(const Options& o, std::ostream& out) {
  const Dataset data = load_mapped(require_flag(o.data, "--data"), parse_data_format(o.format),
                                   parse_class_mode(o.classes));
  std::size_t nominal = 0;
  for (const auto& attr : data.schema()) nominal += attr.is_nominal() ? 1 : 0;
  const auto counts = data.class_counts();
  with_output(o, out, [&](std::ostream& os) {
    os << "rows\t" << data.num_rows() << '\n'
       << "dropped_rows\t" << data.dropped_rows() << '\n'
       << "attributes\t" << data.num_attributes() << '\n'
       << "numeric\t" << data.num_attributes() - nominal << '\n'
       << "nominal\t" << nominal << '\n'
       << "fingerprint\t" << fingerprint_hex(data.fingerprint()) << '\n';
    for (std::size_t c = 0; c < data.num_classes(); ++c) {
      os << "class\t" << data.class_values()[c] << '\t' << counts[c] << '\n';
    }
  });
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Network intrusion detection toolkit", "ids"};
  app.require_subcommand(1);

  const auto data_flags = [&](CLI::App* sub) {
    sub->add_option("--data", o.data, "Data file (relative paths use $IDS_DATA_DIR)");
    sub->add_option("--format", o.format, "nslkdd, cicids or generic")->capture_default_str();
    sub->add_option("--classes", o.classes, "binary or multiclass")->capture_default_str();
    sub->add_option("--out", o.out, "Output file (default stdout)");
  };
  const auto sample_flags = [&](CLI::App* sub) {
    sub->add_option("--train-count", o.train_count, "Sampled training rows");
    sub->add_option("--test-count", o.test_count, "Sampled test rows");
    sub->add_flag("--stratified", o.stratified, "Stratify the sample by class");
  };
  const auto threads_flag = [&](CLI::App* sub) {
    sub->add_option("--threads", o.threads, "Worker threads; 1 runs the serial path")->capture_default_str();
  };
  const auto seed_flag = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  };
  const auto threshold_flag = [&](CLI::App* sub) {
    sub->add_option("--threshold", o.threshold, "Information gain cutoff")->capture_default_str();
  };

  auto* rank = app.add_subcommand("rank", "Rank attributes by information gain");
  data_flags(rank);
  threshold_flag(rank);
  threads_flag(rank);

  auto* train = app.add_subcommand("train", "Select features, train and save a model");
  data_flags(train);
  threshold_flag(train);
  seed_flag(train);
  threads_flag(train);
  sample_flags(train);
  train->add_option("--algo", o.algo, "bayes, dtable, dtree, j48, knn, rforest, rtree or hybrid");
  train->add_option("--model", o.model, "Model file to write");

  auto* evaluate = app.add_subcommand("evaluate", "Score a saved model on test data");
  data_flags(evaluate);
  seed_flag(evaluate);
  threads_flag(evaluate);
  sample_flags(evaluate);
  evaluate->add_option("--model", o.model, "Model file to read");
  evaluate->add_flag("--markdown", o.markdown, "Markdown summary table");

  auto* benchmark = app.add_subcommand("benchmark", "Train and test several algorithms");
  data_flags(benchmark);
  threshold_flag(benchmark);
  seed_flag(benchmark);
  threads_flag(benchmark);
  sample_flags(benchmark);
  benchmark->add_option("--train", o.train, "Training file");
  benchmark->add_option("--test", o.test, "Test file");
  benchmark->add_option("--algos", o.algos, "Comma-separated algorithms or all")->capture_default_str();
  benchmark->add_option("--algo", o.algo, "Same as --algos");
  benchmark->add_flag("--markdown", o.markdown, "Markdown table");
  benchmark->add_flag("--no-timing", o.no_timing, "Omit the time columns");

  auto* fixtures = app.add_subcommand("fixtures", "Write FIX-A and a synthetic dataset");
  fixtures->add_option("--out", o.out, "Output directory");
  seed_flag(fixtures);
  fixtures->add_option("--rows", o.synthetic.rows, "Synthetic rows")->capture_default_str();
  fixtures->add_option("--numeric", o.synthetic.numeric, "Synthetic numeric attributes")->capture_default_str();
  fixtures->add_option("--nominal", o.synthetic.nominal, "Synthetic nominal attributes")->capture_default_str();
  fixtures->add_option("--noise", o.synthetic.noise, "Fraction of flipped labels")->capture_default_str();

  auto* info = app.add_subcommand("dataset-info", "Summarize a dataset");
  data_flags(info);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (rank->parsed()) cmd_rank(o, out);
    if (train->parsed()) cmd_train(o, out);
    if (evaluate->parsed()) cmd_evaluate(o, out, evaluate->count("--format") > 0);
    if (benchmark->parsed()) cmd_benchmark(o, out, err);
    if (fixtures->parsed()) {
      o.synthetic.seed = o.seed;
      cmd_fixtures(o, out);
    }
    if (info->parsed()) cmd_dataset_info(o, out);
  } catch (const UsageError& e) {
    err << "ids: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    err << "ids: " << e.what() << '\n';
    return 2;
  } catch (const ModelError& e) {
    err << "ids: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "ids: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace ids::cli
