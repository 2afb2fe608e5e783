#pragma once

#include <map>
#include <string>
#include <string_view>

#include "ids/dataset.hpp"

namespace ids {

enum class ClassMode { binary, multiclass };

ClassMode parse_class_mode(std::string_view name);
std::string_view to_string(ClassMode mode);

inline constexpr std::string_view kNormalClass = "normal";

struct ClassMapping {
  ClassMode mode = ClassMode::binary;
  /// Binary mode: name of the merged attack class.
  std::string positive_name = "anomaly";
};

/// NSL-KDD attack name -> family (DoS, Probe, R2L, U2R), parsed from the
/// shipped nslkdd_families.tsv.
const std::map<std::string, std::string, std::less<>>& nslkdd_families();

/// Binary: "normal" / "BENIGN" (case-insensitive) become class 0 `normal`,
/// everything else class 1 `positive_name`. Multiclass: NSL-KDD labels are
/// grouped into {normal, DoS, Probe, R2L, U2R}; other sources pass through.
Dataset apply_class_mapping(const Dataset& data, const ClassMapping& mapping);

}  // namespace ids
