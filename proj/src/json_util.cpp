#include "pmt/json_util.hpp"

#include <fstream>

#include "pmt/error.hpp"

namespace pmt::json_util {

nlohmann::json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

const nlohmann::json& require(const nlohmann::json& node, const std::string& key, const std::string& owner) {
  if (!node.is_object() || !node.contains(key)) throw ValidationError(owner + ": missing '" + key + "'");
  return node.at(key);
}

std::string require_string(const nlohmann::json& node, const std::string& key, const std::string& owner) {
  const auto& v = require(node, key, owner);
  if (!v.is_string() || v.get_ref<const std::string&>().empty())
    throw ValidationError(owner + ": '" + key + "' must be a non-empty string");
  return v.get<std::string>();
}

}  // namespace pmt::json_util
