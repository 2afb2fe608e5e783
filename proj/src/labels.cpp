#include "ids/labels.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "ids/error.hpp"

namespace ids {

namespace detail {
std::string_view nslkdd_families_tsv();
}

ClassMode parse_class_mode(std::string_view name) {
  if (name == "binary") return ClassMode::binary;
  if (name == "multiclass") return ClassMode::multiclass;
  throw UsageError("unknown class mode '" + std::string(name) + "' (binary, multiclass)");
}

std::string_view to_string(ClassMode mode) {
  return mode == ClassMode::binary ? "binary" : "multiclass";
}

const std::map<std::string, std::string, std::less<>>& nslkdd_families() {
  static const auto table = [] {
    std::map<std::string, std::string, std::less<>> out;
    std::istringstream in{std::string(detail::nslkdd_families_tsv())};
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line.front() == '#') continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) continue;
      out.emplace(line.substr(0, tab), line.substr(tab + 1));
    }
    return out;
  }();
  return table;
}

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
           return std::tolower(x) == std::tolower(y);
         });
}

bool is_normal_label(std::string_view label) {
  return iequals(label, "normal") || iequals(label, "benign");
}

}  // namespace

Dataset apply_class_mapping(const Dataset& data, const ClassMapping& mapping) {
  if (data.empty()) throw DataError("class mapping: dataset is empty");

  std::vector<std::string> classes;
  std::vector<int> class_map(data.num_classes());
  if (mapping.mode == ClassMode::binary) {
    if (mapping.positive_name.empty() || mapping.positive_name == kNormalClass) {
      throw UsageError("binary positive class name must be non-empty and differ from 'normal'");
    }
    classes = {std::string(kNormalClass), mapping.positive_name};
    for (std::size_t c = 0; c < data.num_classes(); ++c) {
      class_map[c] = is_normal_label(data.class_values()[c]) ? 0 : 1;
    }
  } else if (data.source_tag() == SourceTag::nslkdd) {
    classes = {std::string(kNormalClass), "DoS", "Probe", "R2L", "U2R"};
    const auto& families = nslkdd_families();
    std::vector<std::size_t> counts = data.class_counts();
    for (std::size_t c = 0; c < data.num_classes(); ++c) {
      const auto& label = data.class_values()[c];
      if (is_normal_label(label)) {
        class_map[c] = 0;
        continue;
      }
      const auto it = families.find(label);
      if (it == families.end()) {
        if (counts[c] == 0) {
          class_map[c] = 0;  // never referenced
          continue;
        }
        throw DataError("NSL-KDD label '" + label + "' is not in nslkdd_families.tsv");
      }
      const auto pos = std::find(classes.begin(), classes.end(), it->second);
      class_map[c] = static_cast<int>(pos - classes.begin());
    }
  } else {
    return data;
  }

  std::vector<int> labels(data.num_rows());
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    labels[r] = class_map[static_cast<std::size_t>(data.label(r))];
  }
  return data.relabel(std::move(classes), labels);
}

}  // namespace ids
