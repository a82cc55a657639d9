#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

namespace pmt::json_util {

/// Parses a JSON document from disk; errors become ValidationError naming the file.
nlohmann::json read_file(const std::filesystem::path& path);

const nlohmann::json& require(const nlohmann::json& node, const std::string& key, const std::string& owner);
std::string require_string(const nlohmann::json& node, const std::string& key, const std::string& owner);

}  // namespace pmt::json_util
