#include "ids/decision_table.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

#include "ids/error.hpp"
#include "ids/featsel.hpp"
#include "ids/rng.hpp"

namespace ids {

namespace {

struct VectorHash {
  std::size_t operator()(const std::vector<int>& key) const {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (const int v : key) h = mix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)));
    return static_cast<std::size_t>(h);
  }
};

std::size_t majority(std::span<const std::uint64_t> counts) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c) {
    if (counts[c] > counts[best]) best = c;
  }
  return best;
}

/// Per-attribute integer codes of the training rows plus the CV fold of each
/// row; shared by every subset evaluation of one search.
struct CodedTable {
  std::size_t n = 0, k = 0;
  std::vector<std::vector<int>> codes;       // [attribute][row]
  std::vector<std::vector<double>> cuts;     // [attribute]
  std::vector<int> labels;
  std::vector<std::size_t> fold;
  std::size_t folds = 0;
  std::vector<std::uint64_t> fold_class_counts;  // [fold][class]
  std::vector<std::uint64_t> class_counts;
};

CodedTable encode(const Dataset& train, const DecisionTableConfig& cfg) {
  CodedTable t;
  t.n = train.num_rows();
  t.k = train.num_classes();
  const std::size_t d = train.num_attributes();
  t.codes.assign(d, std::vector<int>(t.n));
  t.cuts.assign(d, {});
  for (std::size_t a = 0; a < d; ++a) {
    if (train.attribute(a).is_nominal()) {
      for (std::size_t r = 0; r < t.n; ++r) t.codes[a][r] = static_cast<int>(train.value(r, a));
    } else {
      std::vector<double> column(t.n);
      for (std::size_t r = 0; r < t.n; ++r) column[r] = train.value(r, a);
      t.cuts[a] = equal_frequency_cuts(column, cfg.bins);
      for (std::size_t r = 0; r < t.n; ++r) t.codes[a][r] = static_cast<int>(bin_of(t.cuts[a], column[r]));
    }
  }
  t.labels = train.labels();
  t.folds = std::min(cfg.folds, t.n);
  std::vector<std::size_t> perm(t.n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(cfg.seed);
  rng.shuffle(perm);
  t.fold.resize(t.n);
  for (std::size_t i = 0; i < t.n; ++i) t.fold[perm[i]] = i % t.folds;
  t.fold_class_counts.assign(t.folds * t.k, 0);
  t.class_counts.assign(t.k, 0);
  for (std::size_t r = 0; r < t.n; ++r) {
    const auto c = static_cast<std::size_t>(t.labels[r]);
    ++t.fold_class_counts[t.fold[r] * t.k + c];
    ++t.class_counts[c];
  }
  return t;
}

/// Cross-validated accuracy from one pass: a held-out row sees its key's
/// counts minus those contributed by its own fold.
double merit(const CodedTable& t, std::span<const std::size_t> subset) {
  const std::size_t k = t.k;
  std::unordered_map<std::vector<int>, std::size_t, VectorHash> key_id;
  std::vector<std::size_t> row_key(t.n);
  std::vector<int> key(subset.size());
  for (std::size_t r = 0; r < t.n; ++r) {
    for (std::size_t i = 0; i < subset.size(); ++i) key[i] = t.codes[subset[i]][r];
    const auto [it, inserted] = key_id.try_emplace(key, key_id.size());
    row_key[r] = it->second;
  }
  const std::size_t keys = key_id.size();
  std::vector<std::uint64_t> total(keys * k, 0);
  std::vector<std::uint64_t> per_fold(keys * t.folds * k, 0);
  for (std::size_t r = 0; r < t.n; ++r) {
    const auto c = static_cast<std::size_t>(t.labels[r]);
    ++total[row_key[r] * k + c];
    ++per_fold[(row_key[r] * t.folds + t.fold[r]) * k + c];
  }
  std::size_t correct = 0;
  std::vector<std::uint64_t> counts(k);
  for (std::size_t r = 0; r < t.n; ++r) {
    const std::size_t id = row_key[r];
    const std::size_t f = t.fold[r];
    std::uint64_t seen = 0;
    for (std::size_t c = 0; c < k; ++c) {
      counts[c] = total[id * k + c] - per_fold[(id * t.folds + f) * k + c];
      seen += counts[c];
    }
    if (seen == 0) {
      for (std::size_t c = 0; c < k; ++c) counts[c] = t.class_counts[c] - t.fold_class_counts[f * k + c];
    }
    if (majority(counts) == static_cast<std::size_t>(t.labels[r])) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(t.n);
}

}  // namespace

std::vector<int> DecisionTableModel::key_for(std::span<const double> row) const {
  std::vector<int> key(attributes.size());
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    const double v = row[attributes[i]];
    key[i] = cuts[i].empty() ? static_cast<int>(v) : static_cast<int>(bin_of(cuts[i], v));
  }
  return key;
}

std::vector<double> DecisionTableModel::predict_proba(std::span<const double> row) const {
  const auto it = table.find(key_for(row));
  const auto& counts = it == table.end() ? default_counts : it->second;
  double total = 0.0;
  for (const auto c : counts) total += c;
  std::vector<double> out(counts.size());
  for (std::size_t c = 0; c < counts.size(); ++c) out[c] = counts[c] / total;
  return out;
}

double decision_table_merit(const Dataset& train, std::span<const std::size_t> subset,
                            const DecisionTableConfig& cfg) {
  return merit(encode(train, cfg), subset);
}

DecisionTableModel fit_decision_table(const Dataset& train, const DecisionTableConfig& cfg,
                                      Execution exec) {
  if (train.num_present_classes() < 2) {
    throw DataError("decision table needs at least two classes in the training data");
  }
  if (cfg.folds < 2) throw UsageError("decision table needs at least 2 folds");
  const CodedTable t = encode(train, cfg);
  const std::size_t d = train.num_attributes();

  struct Node {
    std::vector<std::size_t> subset;  // sorted
    double merit;
  };
  std::vector<Node> open;
  std::set<std::vector<std::size_t>> visited;
  Node best{{}, merit(t, {})};
  open.push_back(best);
  visited.insert({});
  std::size_t stale = 0;

  while (!open.empty() && stale < cfg.stale_limit) {
    // Highest merit first; earliest inserted wins ties.
    std::size_t pick = 0;
    for (std::size_t i = 1; i < open.size(); ++i) {
      if (open[i].merit > open[pick].merit) pick = i;
    }
    const Node current = open[pick];
    open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));

    std::vector<std::vector<std::size_t>> children;
    for (std::size_t a = 0; a < d; ++a) {
      if (std::binary_search(current.subset.begin(), current.subset.end(), a)) continue;
      auto child = current.subset;
      child.insert(std::upper_bound(child.begin(), child.end(), a), a);
      if (visited.insert(child).second) children.push_back(std::move(child));
    }
    std::vector<double> merits(children.size());
    const auto m = static_cast<std::ptrdiff_t>(children.size());
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
    for (std::ptrdiff_t i = 0; i < m; ++i) {
      merits[static_cast<std::size_t>(i)] = merit(t, children[static_cast<std::size_t>(i)]);
    }

    bool improved = false;
    for (std::size_t i = 0; i < children.size(); ++i) {
      if (merits[i] > best.merit) {
        best = {children[i], merits[i]};
        improved = true;
      }
      open.push_back({std::move(children[i]), merits[i]});
    }
    stale = improved ? 0 : stale + 1;
  }

  DecisionTableModel model;
  model.attributes = best.subset;
  for (const auto a : model.attributes) model.cuts.push_back(t.cuts[a]);
  model.default_counts.assign(t.k, 0);
  for (std::size_t r = 0; r < t.n; ++r) {
    const auto c = static_cast<std::size_t>(t.labels[r]);
    ++model.default_counts[c];
    if (model.attributes.empty()) continue;
    std::vector<int> key(model.attributes.size());
    for (std::size_t i = 0; i < key.size(); ++i) key[i] = t.codes[model.attributes[i]][r];
    auto& counts = model.table[key];
    if (counts.empty()) counts.assign(t.k, 0);
    ++counts[c];
  }
  return model;
}

}  // namespace ids
