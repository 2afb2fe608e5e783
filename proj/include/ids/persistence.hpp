#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ids/model.hpp"

namespace ids {

inline constexpr int kModelFormatVersion = 1;

/// Canonical JSON form of a model: sorted keys, shortest round-trip floats.
nlohmann::json model_to_json(const TrainedModel& model);

/// Rebuilds a model; throws ModelError on malformed content or a stored
/// fingerprint that does not match the stored schema.
TrainedModel model_from_json(const nlohmann::json& j);

nlohmann::json schema_to_json(const std::vector<AttributeSchema>& schema);
std::vector<AttributeSchema> schema_from_json(const nlohmann::json& j);

std::string fingerprint_hex(std::uint64_t fingerprint);

/// Writes `text` to `path` through a sibling temp file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

}  // namespace ids
