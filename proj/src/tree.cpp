#include "ids/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ids/error.hpp"
#include "ids/rng.hpp"

namespace ids {

SplitCriterion parse_split_criterion(std::string_view name) {
  if (name == "info_gain") return SplitCriterion::info_gain;
  if (name == "gain_ratio") return SplitCriterion::gain_ratio;
  if (name == "gini") return SplitCriterion::gini;
  throw UsageError("unknown split criterion '" + std::string(name) + "'");
}

std::string_view to_string(SplitCriterion criterion) {
  switch (criterion) {
    case SplitCriterion::info_gain: return "info_gain";
    case SplitCriterion::gain_ratio: return "gain_ratio";
    case SplitCriterion::gini: return "gini";
  }
  return "info_gain";
}

const TreeNode& TreeModel::leaf_for(std::span<const double> row) const {
  const TreeNode* node = &nodes.front();
  while (!node->is_leaf()) {
    const double v = row[static_cast<std::size_t>(node->attribute)];
    int next = node->majority_child;
    if (node->is_numeric_split()) {
      next = v <= node->threshold ? node->children[0] : node->children[1];
    } else {
      const int cat = v == kUnknownCategory ? -1 : static_cast<int>(v);
      for (std::size_t i = 0; i < node->categories.size(); ++i) {
        if (node->categories[i] == cat) {
          next = node->children[i];
          break;
        }
      }
    }
    node = &nodes[static_cast<std::size_t>(next)];
  }
  return *node;
}

std::vector<double> TreeModel::predict_proba(std::span<const double> row) const {
  const auto& leaf = leaf_for(row);
  double total = 0.0;
  for (const auto c : leaf.counts) total += c;
  std::vector<double> out(num_classes, 0.0);
  for (std::size_t c = 0; c < num_classes; ++c) out[c] = leaf.counts[c] / total;
  return out;
}

std::size_t TreeModel::depth() const {
  std::size_t best = 0;
  std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [id, depth] = stack.back();
    stack.pop_back();
    best = std::max(best, depth);
    for (const int child : nodes[static_cast<std::size_t>(id)].children) stack.emplace_back(child, depth + 1);
  }
  return best;
}

std::size_t TreeModel::num_leaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

namespace detail {

namespace {

double entropy_of(std::span<const double> counts, double total) {
  double h = 0.0;
  for (const double c : counts) {
    if (c <= 0.0) continue;
    const double p = c / total;
    h -= p * std::log2(p);
  }
  return h;
}

double gini_of(std::span<const double> counts, double total) {
  double s = 0.0;
  for (const double c : counts) {
    const double p = c / total;
    s += p * p;
  }
  return 1.0 - s;
}

double sum_of(std::span<const double> counts) {
  return std::accumulate(counts.begin(), counts.end(), 0.0);
}

}  // namespace

std::optional<double> split_score(SplitCriterion criterion, std::span<const double> parent,
                                  std::span<const std::vector<double>> branches) {
  const double n = sum_of(parent);
  if (n <= 0.0) return std::nullopt;
  if (criterion == SplitCriterion::gini) {
    double weighted = 0.0;
    for (const auto& b : branches) {
      const double nb = sum_of(b);
      if (nb > 0.0) weighted += nb / n * gini_of(b, nb);
    }
    return gini_of(parent, n) - weighted;
  }
  double weighted = 0.0;
  double split_info = 0.0;
  for (const auto& b : branches) {
    const double nb = sum_of(b);
    if (nb <= 0.0) continue;
    const double w = nb / n;
    weighted += w * entropy_of(b, nb);
    split_info -= w * std::log2(w);
  }
  const double gain = entropy_of(parent, n) - weighted;
  if (criterion == SplitCriterion::info_gain) return gain;
  if (split_info <= 1e-12) return std::nullopt;
  return gain / split_info;
}

namespace {

constexpr double kMinScore = 1e-12;

struct Candidate {
  int attribute = -1;
  double score = 0.0;
  double threshold = 0.0;
  // Nominal splits: bucket (category, or V for unknown) -> branch index.
  std::vector<int> bucket_branch;
  std::vector<int> branch_category;
};

struct Frame {
  int node = 0;
  std::size_t lo = 0, hi = 0;
  std::size_t depth = 0;
  std::vector<char> used_nominal;
};

/// Presorted induction: every numeric attribute keeps its sample positions
/// sorted by value, and each node owns the same [lo, hi) range in every
/// array. Splits stably partition those ranges, so no node re-sorts.
class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, std::span<const std::size_t> sample, const GrowOptions& options)
      : data_(data), options_(options), n_(sample.size()), d_(data.num_attributes()),
        k_(data.num_classes()), rng_(options.seed) {
    labels_.resize(n_);
    columns_.assign(d_, {});
    for (std::size_t a = 0; a < d_; ++a) columns_[a].resize(n_);
    for (std::size_t p = 0; p < n_; ++p) {
      const auto row = data.row(sample[p]);
      labels_[p] = static_cast<std::size_t>(data.label(sample[p]));
      for (std::size_t a = 0; a < d_; ++a) columns_[a][p] = row[a];
    }
    positions_.resize(n_);
    std::iota(positions_.begin(), positions_.end(), std::uint32_t{0});
    order_.assign(d_, {});
    for (std::size_t a = 0; a < d_; ++a) {
      if (data.attribute(a).is_nominal()) continue;
      auto& ord = order_[a];
      ord = positions_;
      const auto& col = columns_[a];
      std::stable_sort(ord.begin(), ord.end(),
                       [&col](std::uint32_t x, std::uint32_t y) { return col[x] < col[y]; });
    }
    branch_.resize(n_);
    scratch_.resize(n_);
  }

  TreeModel build() {
    TreeModel model;
    model.num_classes = k_;
    if (n_ == 0) throw DataError("cannot grow a tree on zero rows");
    nodes_.emplace_back();
    std::vector<Frame> stack;
    stack.push_back({0, 0, n_, 0, std::vector<char>(d_, 0)});
    while (!stack.empty()) {
      Frame frame = std::move(stack.back());
      stack.pop_back();
      expand(frame, stack);
    }
    model.nodes = std::move(nodes_);
    return model;
  }

 private:
  std::vector<double> class_counts(std::size_t lo, std::size_t hi) const {
    std::vector<double> counts(k_, 0.0);
    for (std::size_t i = lo; i < hi; ++i) counts[labels_[positions_[i]]] += 1.0;
    return counts;
  }

  void make_leaf(int node, const std::vector<double>& counts) {
    auto& leaf = nodes_[static_cast<std::size_t>(node)];
    leaf.attribute = -1;
    leaf.counts.assign(k_, 0);
    for (std::size_t c = 0; c < k_; ++c) leaf.counts[c] = static_cast<std::uint32_t>(counts[c]);
  }

  std::optional<Candidate> evaluate(std::size_t a, const Frame& f, const std::vector<double>& parent) {
    if (data_.attribute(a).is_nominal()) {
      if (f.used_nominal[a]) return std::nullopt;
      return evaluate_nominal(a, f, parent);
    }
    return evaluate_numeric(a, f, parent);
  }

  std::optional<Candidate> evaluate_numeric(std::size_t a, const Frame& f,
                                            const std::vector<double>& parent) {
    const auto& ord = order_[a];
    const auto& col = columns_[a];
    const std::size_t min_leaf = options_.tree.min_leaf;
    const std::size_t total = f.hi - f.lo;

    std::vector<double> left(k_, 0.0);
    std::vector<double> run(k_, 0.0);
    std::vector<std::vector<double>> branches(2, std::vector<double>(k_, 0.0));
    std::optional<Candidate> best;

    // Run = maximal block of equal values. The boundary in front of a run is
    // a candidate unless the runs on both sides are pure in the same class.
    std::size_t i = f.lo;
    std::size_t left_size = 0;
    int prev_class = -2;  // -1 marks a mixed run
    while (i < f.hi) {
      const double v = col[ord[i]];
      std::fill(run.begin(), run.end(), 0.0);
      int run_class = static_cast<int>(labels_[ord[i]]);
      std::size_t j = i;
      while (j < f.hi && col[ord[j]] == v) {
        const auto c = labels_[ord[j]];
        if (static_cast<int>(c) != run_class) run_class = -1;
        run[c] += 1.0;
        ++j;
      }
      const bool same_pure = prev_class >= 0 && prev_class == run_class;
      if (i > f.lo && !same_pure && left_size >= min_leaf && total - left_size >= min_leaf) {
        for (std::size_t c = 0; c < k_; ++c) {
          branches[0][c] = left[c];
          branches[1][c] = parent[c] - left[c];
        }
        const auto score = split_score(options_.tree.criterion, parent, branches);
        if (score && (!best || *score > best->score)) {
          const double lo_v = col[ord[i - 1]];
          double mid = lo_v + (v - lo_v) / 2.0;
          if (!(mid < v)) mid = lo_v;
          best = Candidate{static_cast<int>(a), *score, mid, {}, {}};
        }
      }
      for (std::size_t c = 0; c < k_; ++c) left[c] += run[c];
      left_size += j - i;
      prev_class = run_class;
      i = j;
    }
    return best;
  }

  std::optional<Candidate> evaluate_nominal(std::size_t a, const Frame& f,
                                            const std::vector<double>& parent) {
    const std::size_t v = data_.attribute(a).nominal_values.size();
    std::vector<std::vector<double>> buckets(v + 1, std::vector<double>(k_, 0.0));
    std::vector<std::size_t> sizes(v + 1, 0);
    const auto& col = columns_[a];
    for (std::size_t i = f.lo; i < f.hi; ++i) {
      const auto p = positions_[i];
      const std::size_t b = col[p] == kUnknownCategory ? v : static_cast<std::size_t>(col[p]);
      buckets[b][labels_[p]] += 1.0;
      ++sizes[b];
    }
    Candidate cand;
    cand.attribute = static_cast<int>(a);
    cand.bucket_branch.assign(v + 1, -1);
    std::vector<std::vector<double>> branches;
    std::size_t big_enough = 0;
    for (std::size_t b = 0; b <= v; ++b) {
      if (sizes[b] == 0) continue;
      cand.bucket_branch[b] = static_cast<int>(branches.size());
      cand.branch_category.push_back(b == v ? -1 : static_cast<int>(b));
      branches.push_back(std::move(buckets[b]));
      if (sizes[b] >= options_.tree.min_leaf) ++big_enough;
    }
    if (branches.size() < 2 || big_enough < 2) return std::nullopt;
    const auto score = split_score(options_.tree.criterion, parent, branches);
    if (!score) return std::nullopt;
    cand.score = *score;
    return cand;
  }

  std::optional<Candidate> choose(const Frame& f, const std::vector<double>& parent) {
    std::optional<Candidate> best;
    // Positive scores win; an impure node with no positive split still takes
    // the lowest-index valid split so consistent data can always be fitted.
    const auto better = [](const Candidate& x, const std::optional<Candidate>& cur) {
      if (!cur) return true;
      const bool xp = x.score > kMinScore;
      const bool cp = cur->score > kMinScore;
      if (xp != cp) return xp;
      if (!xp) return x.attribute < cur->attribute;
      return x.score > cur->score || (x.score == cur->score && x.attribute < cur->attribute);
    };
    const std::size_t m = options_.features_per_split;
    if (m == 0) {
      for (std::size_t a = 0; a < d_; ++a) {
        auto c = evaluate(a, f, parent);
        if (c && better(*c, best)) best = std::move(c);
      }
      return best;
    }
    // Lazily drawn random permutation: the first m attributes are compared,
    // then further ones are drawn until one yields a positive score.
    std::vector<std::size_t> perm(d_);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = 0; i < d_; ++i) {
      const std::size_t j = i + rng_.uniform_index(d_ - i);
      std::swap(perm[i], perm[j]);
      auto c = evaluate(perm[i], f, parent);
      if (c && better(*c, best)) best = std::move(c);
      if (i + 1 >= m && best && best->score > kMinScore) break;
    }
    return best;
  }

  void expand(Frame& f, std::vector<Frame>& stack) {
    const auto parent = class_counts(f.lo, f.hi);
    const std::size_t size = f.hi - f.lo;
    const std::size_t present =
        static_cast<std::size_t>(std::count_if(parent.begin(), parent.end(), [](double c) { return c > 0; }));
    const bool depth_capped = options_.tree.max_depth && f.depth >= *options_.tree.max_depth;
    if (present <= 1 || size < 2 * options_.tree.min_leaf || depth_capped) {
      make_leaf(f.node, parent);
      return;
    }
    auto best = choose(f, parent);
    if (!best) {
      make_leaf(f.node, parent);
      return;
    }

    const auto a = static_cast<std::size_t>(best->attribute);
    const bool numeric = !data_.attribute(a).is_nominal();
    const std::size_t num_branches = numeric ? 2 : best->branch_category.size();
    const auto& col = columns_[a];
    const std::size_t v = data_.attribute(a).nominal_values.size();
    for (std::size_t i = f.lo; i < f.hi; ++i) {
      const auto p = positions_[i];
      if (numeric) {
        branch_[p] = col[p] <= best->threshold ? 0 : 1;
      } else {
        const std::size_t b = col[p] == kUnknownCategory ? v : static_cast<std::size_t>(col[p]);
        branch_[p] = best->bucket_branch[b];
      }
    }
    std::vector<std::size_t> sizes(num_branches, 0);
    for (std::size_t i = f.lo; i < f.hi; ++i) ++sizes[static_cast<std::size_t>(branch_[positions_[i]])];

    partition(positions_, f, sizes);
    for (std::size_t b = 0; b < d_; ++b) {
      if (!order_[b].empty()) partition(order_[b], f, sizes);
    }

    const int first_child = static_cast<int>(nodes_.size());
    nodes_.resize(nodes_.size() + num_branches);
    auto& node = nodes_[static_cast<std::size_t>(f.node)];
    node.attribute = best->attribute;
    node.threshold = numeric ? best->threshold : 0.0;
    node.categories = numeric ? std::vector<int>{} : best->branch_category;
    node.children.resize(num_branches);
    std::size_t majority = 0;
    for (std::size_t b = 0; b < num_branches; ++b) {
      node.children[b] = first_child + static_cast<int>(b);
      if (sizes[b] > sizes[majority]) majority = b;
    }
    node.majority_child = node.children[majority];

    std::vector<char> used = f.used_nominal;
    if (!numeric) used[a] = 1;
    std::vector<Frame> children;
    std::size_t lo = f.lo;
    for (std::size_t b = 0; b < num_branches; ++b) {
      children.push_back({first_child + static_cast<int>(b), lo, lo + sizes[b], f.depth + 1, used});
      lo += sizes[b];
    }
    for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(std::move(*it));
  }

  /// Stable counting partition of arr[lo, hi) by branch id.
  void partition(std::vector<std::uint32_t>& arr, const Frame& f, const std::vector<std::size_t>& sizes) {
    std::vector<std::size_t> offset(sizes.size(), 0);
    for (std::size_t b = 1; b < sizes.size(); ++b) offset[b] = offset[b - 1] + sizes[b - 1];
    for (std::size_t i = f.lo; i < f.hi; ++i) {
      const auto p = arr[i];
      scratch_[offset[static_cast<std::size_t>(branch_[p])]++] = p;
    }
    std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(f.hi - f.lo),
              arr.begin() + static_cast<std::ptrdiff_t>(f.lo));
  }

  const Dataset& data_;
  const GrowOptions& options_;
  std::size_t n_, d_, k_;
  Rng rng_;
  std::vector<std::size_t> labels_;
  std::vector<std::vector<double>> columns_;
  std::vector<std::uint32_t> positions_;
  std::vector<std::vector<std::uint32_t>> order_;
  std::vector<int> branch_;
  std::vector<std::uint32_t> scratch_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

TreeModel grow_tree(const Dataset& data, std::span<const std::size_t> sample,
                    const GrowOptions& options) {
  if (options.tree.min_leaf < 1) throw UsageError("min_leaf must be at least 1");
  if (options.tree.max_depth && *options.tree.max_depth < 1) {
    throw UsageError("max_depth must be at least 1");
  }
  TreeBuilder builder(data, sample, options);
  return builder.build();
}

}  // namespace detail
}  // namespace ids
