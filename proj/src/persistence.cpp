#include "ids/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "ids/error.hpp"

namespace ids {

using nlohmann::json;

namespace {

// JSON has no literal for non-finite numbers; they are stored as strings.
json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double get_num(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  throw ModelError("invalid number '" + s + "' in model file");
}

json nums(std::span<const double> values) {
  json out = json::array();
  for (const double v : values) out.push_back(num(v));
  return out;
}

std::vector<double> get_nums(const json& j) {
  std::vector<double> out;
  for (const auto& v : j) out.push_back(get_num(v));
  return out;
}

json kinds_to_json(const std::vector<AttributeKind>& kinds) {
  json out = json::array();
  for (const auto kind : kinds) out.push_back(std::string(to_string(kind)));
  return out;
}

AttributeKind kind_from_string(const std::string& s) {
  if (s == "numeric") return AttributeKind::numeric;
  if (s == "nominal") return AttributeKind::nominal;
  throw ModelError("unknown attribute kind '" + s + "'");
}

std::vector<AttributeKind> kinds_from_json(const json& j) {
  std::vector<AttributeKind> out;
  for (const auto& v : j) out.push_back(kind_from_string(v.get<std::string>()));
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw ModelError(std::string("malformed model: ") + what);
}

json tree_to_json(const TreeModel& tree) {
  json nodes = json::array();
  for (const auto& node : tree.nodes) {
    json n;
    if (node.is_leaf()) {
      n["counts"] = node.counts;
    } else {
      n["attribute"] = node.attribute;
      n["children"] = node.children;
      n["majority_child"] = node.majority_child;
      if (node.is_numeric_split()) {
        n["threshold"] = num(node.threshold);
      } else {
        n["categories"] = node.categories;
      }
    }
    nodes.push_back(std::move(n));
  }
  return {{"num_classes", tree.num_classes}, {"nodes", std::move(nodes)}};
}

TreeModel tree_from_json(const json& j, std::size_t num_attributes) {
  TreeModel tree;
  tree.num_classes = j.at("num_classes").get<std::size_t>();
  for (const auto& n : j.at("nodes")) {
    TreeNode node;
    if (n.contains("counts")) {
      node.counts = n.at("counts").get<std::vector<std::uint32_t>>();
      require(node.counts.size() == tree.num_classes, "leaf count arity");
    } else {
      node.attribute = n.at("attribute").get<int>();
      node.children = n.at("children").get<std::vector<int>>();
      node.majority_child = n.at("majority_child").get<int>();
      if (n.contains("threshold")) {
        node.threshold = get_num(n.at("threshold"));
        require(node.children.size() == 2, "numeric split arity");
      } else {
        node.categories = n.at("categories").get<std::vector<int>>();
        require(!node.categories.empty() && node.categories.size() == node.children.size(),
                "nominal split arity");
      }
      require(node.attribute >= 0 && static_cast<std::size_t>(node.attribute) < num_attributes,
              "split attribute");
    }
    tree.nodes.push_back(std::move(node));
  }
  require(!tree.nodes.empty(), "empty tree");
  // Children always follow their parent, which rules out cycles.
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& node = tree.nodes[i];
    if (node.is_leaf()) continue;
    for (const int c : node.children) {
      require(c > static_cast<int>(i) && static_cast<std::size_t>(c) < tree.nodes.size(), "child index");
    }
    require(std::find(node.children.begin(), node.children.end(), node.majority_child) != node.children.end(),
            "majority child");
  }
  return tree;
}

json body_to_json(const TrainedModel& model);
ModelBody body_from_json(Algorithm algo, const json& j, const std::vector<AttributeSchema>& schema,
                         std::size_t num_classes);

json body_to_json(const TrainedModel& model) {
  return std::visit(
      [](const auto& body) -> json {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, TreeModel>) {
          return tree_to_json(body);
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          json trees = json::array();
          for (const auto& t : body.trees) trees.push_back(tree_to_json(t));
          return {{"voting", std::string(to_string(body.voting))}, {"trees", std::move(trees)}};
        } else if constexpr (std::is_same_v<T, KnnModel>) {
          return {{"k", body.k()},
                  {"kinds", kinds_to_json(body.kinds())},
                  {"num_classes", body.num_classes()},
                  {"rows", nums(body.raw_rows())},
                  {"labels", body.labels()}};
        } else if constexpr (std::is_same_v<T, NaiveBayesModel>) {
          json means = json::array(), variances = json::array();
          for (std::size_t a = 0; a < body.kinds.size(); ++a) {
            means.push_back(nums(body.means[a]));
            variances.push_back(nums(body.variances[a]));
          }
          return {{"kinds", kinds_to_json(body.kinds)},
                  {"class_counts", body.class_counts},
                  {"category_counts", body.category_counts},
                  {"means", std::move(means)},
                  {"variances", std::move(variances)}};
        } else if constexpr (std::is_same_v<T, DecisionTableModel>) {
          json cuts = json::array(), table = json::array();
          for (const auto& c : body.cuts) cuts.push_back(nums(c));
          for (const auto& [key, counts] : body.table) table.push_back({{"key", key}, {"counts", counts}});
          return {{"attributes", body.attributes},
                  {"cuts", std::move(cuts)},
                  {"table", std::move(table)},
                  {"default_counts", body.default_counts}};
        } else {
          json bases = json::array();
          for (const auto& b : body.bases) bases.push_back(model_to_json(b));
          return {{"folds", body.folds}, {"bases", std::move(bases)}, {"meta", model_to_json(*body.meta)}};
        }
      },
      model.body);
}

ModelBody body_from_json(Algorithm algo, const json& j, const std::vector<AttributeSchema>& schema,
                         std::size_t num_classes) {
  const std::size_t d = schema.size();
  switch (algo) {
    case Algorithm::dtree:
    case Algorithm::j48:
    case Algorithm::rtree: {
      auto tree = tree_from_json(j, d);
      require(tree.num_classes == num_classes, "tree class count");
      return tree;
    }
    case Algorithm::rforest: {
      ForestModel forest;
      forest.voting = parse_voting(j.at("voting").get<std::string>());
      for (const auto& t : j.at("trees")) {
        forest.trees.push_back(tree_from_json(t, d));
        require(forest.trees.back().num_classes == num_classes, "tree class count");
      }
      require(!forest.trees.empty(), "empty forest");
      return forest;
    }
    case Algorithm::knn: {
      auto kinds = kinds_from_json(j.at("kinds"));
      require(kinds.size() == d, "k-NN attribute count");
      auto labels = j.at("labels").get<std::vector<int>>();
      const auto k = j.at("num_classes").get<std::size_t>();
      require(k == num_classes, "k-NN class count");
      for (const int l : labels) require(l >= 0 && static_cast<std::size_t>(l) < k, "k-NN label");
      return KnnModel(j.at("k").get<std::size_t>(), std::move(kinds), k, get_nums(j.at("rows")),
                      std::move(labels));
    }
    case Algorithm::bayes: {
      NaiveBayesModel nb;
      nb.kinds = kinds_from_json(j.at("kinds"));
      nb.class_counts = j.at("class_counts").get<std::vector<std::uint64_t>>();
      nb.category_counts =
          j.at("category_counts").get<std::vector<std::vector<std::vector<std::uint64_t>>>>();
      for (const auto& m : j.at("means")) nb.means.push_back(get_nums(m));
      for (const auto& v : j.at("variances")) nb.variances.push_back(get_nums(v));
      require(nb.kinds.size() == d && nb.category_counts.size() == d && nb.means.size() == d &&
                  nb.variances.size() == d && nb.class_counts.size() == num_classes,
              "naive Bayes arity");
      for (std::size_t a = 0; a < d; ++a) {
        const bool nominal = schema[a].is_nominal();
        require((nb.kinds[a] == AttributeKind::nominal) == nominal, "naive Bayes kinds");
        require(nominal ? nb.category_counts[a].size() == num_classes
                        : nb.means[a].size() == num_classes && nb.variances[a].size() == num_classes,
                "naive Bayes class arity");
        for (const auto& per_class : nb.category_counts[a]) {
          require(per_class.size() == schema[a].nominal_values.size(), "naive Bayes category arity");
        }
      }
      return nb;
    }
    case Algorithm::dtable: {
      DecisionTableModel dt;
      dt.attributes = j.at("attributes").get<std::vector<std::size_t>>();
      for (const auto& c : j.at("cuts")) dt.cuts.push_back(get_nums(c));
      for (const auto& e : j.at("table")) {
        dt.table.emplace(e.at("key").get<std::vector<int>>(),
                         e.at("counts").get<std::vector<std::uint32_t>>());
      }
      dt.default_counts = j.at("default_counts").get<std::vector<std::uint32_t>>();
      require(dt.cuts.size() == dt.attributes.size() && dt.default_counts.size() == num_classes,
              "decision table arity");
      for (const auto a : dt.attributes) require(a < d, "decision table attribute");
      return dt;
    }
    case Algorithm::hybrid: {
      StackingModel st;
      st.folds = j.at("folds").get<std::size_t>();
      for (const auto& b : j.at("bases")) {
        st.bases.push_back(model_from_json(b));
        require(st.bases.back().schema == schema, "base learner schema");
      }
      st.meta = std::make_shared<const TrainedModel>(model_from_json(j.at("meta")));
      require(st.meta->schema.size() == st.bases.size() * num_classes, "meta learner arity");
      return st;
    }
  }
  throw ModelError("unknown algorithm in model file");
}

}  // namespace

std::string fingerprint_hex(std::uint64_t fingerprint) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fingerprint));
  return buf;
}

json schema_to_json(const std::vector<AttributeSchema>& schema) {
  json out = json::array();
  for (const auto& attr : schema) {
    json a{{"name", attr.name}, {"kind", std::string(to_string(attr.kind))}};
    if (attr.is_nominal()) a["values"] = attr.nominal_values;
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<AttributeSchema> schema_from_json(const json& j) {
  std::vector<AttributeSchema> out;
  for (const auto& a : j) {
    AttributeSchema attr;
    attr.name = a.at("name").get<std::string>();
    attr.kind = kind_from_string(a.at("kind").get<std::string>());
    if (attr.is_nominal()) attr.nominal_values = a.at("values").get<std::vector<std::string>>();
    out.push_back(std::move(attr));
  }
  return out;
}

json model_to_json(const TrainedModel& model) {
  return {{"format_version", kModelFormatVersion},
          {"algo", std::string(to_string(model.algo))},
          {"schema", schema_to_json(model.schema)},
          {"class_values", model.class_values},
          {"fingerprint", fingerprint_hex(model.fingerprint)},
          {"seed", model.seed},
          {"params", body_to_json(model)}};
}

TrainedModel model_from_json(const json& j) {
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw ModelError("unsupported model format_version " + std::to_string(version));
    }
    TrainedModel m;
    m.algo = parse_algorithm(j.at("algo").get<std::string>());
    m.schema = schema_from_json(j.at("schema"));
    m.class_values = j.at("class_values").get<std::vector<std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.fingerprint = schema_fingerprint(m.schema);
    if (fingerprint_hex(m.fingerprint) != j.at("fingerprint").get<std::string>()) {
      throw ModelError("schema fingerprint mismatch: stored fingerprint does not match stored schema");
    }
    require(m.class_values.size() >= 1, "class list");
    m.body = body_from_json(m.algo, j.at("params"), m.schema, m.class_values.size());
    return m;
  } catch (const json::exception& e) {
    throw ModelError(std::string("malformed model: ") + e.what());
  } catch (const DataError& e) {
    throw ModelError(std::string("malformed model: ") + e.what());
  } catch (const UsageError& e) {
    throw ModelError(std::string("malformed model: ") + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out << text;
    out.flush();
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw DataError("cannot write '" + path.string() + "'");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ids
