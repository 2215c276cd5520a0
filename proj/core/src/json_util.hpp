#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>

#include "algsim/errors.hpp"
#include "json.hpp"

// Strict JSON helpers shared by the config loaders: every accessor carries a
// JSON-pointer-ish path so ConfigError messages point at the offending spot.
namespace algsim::jsonu {

using nlohmann::json;

inline json parse_document(std::string_view bytes, const std::string& what) {
  json doc = json::parse(bytes, nullptr, false);
  if (doc.is_discarded()) {
    throw ConfigError("", what + " is not valid JSON");
  }
  if (!doc.is_object()) {
    throw ConfigError("", what + " must be a JSON object");
  }
  return doc;
}

inline void reject_unknown_keys(const json& obj, const std::string& path,
                                const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError(path + "/" + item.key(), "unknown key");
    }
  }
}

inline const json& require(const json& obj, const std::string& path,
                           const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError(path + "/" + key, "missing required field");
  }
  return *it;
}

inline bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path, "expected a boolean");
  return v.get<bool>();
}

inline std::int64_t as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<std::int64_t>();
}

inline double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

inline std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

inline const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array");
  return v;
}

inline const json& as_object(const json& v, const std::string& path) {
  if (!v.is_object()) throw ConfigError(path, "expected an object");
  return v;
}

inline std::uint16_t as_port(const json& v, const std::string& path) {
  const std::int64_t n = as_int(v, path);
  if (n < 0 || n > 65535) throw ConfigError(path, "port out of range 0..65535");
  return static_cast<std::uint16_t>(n);
}

}  // namespace algsim::jsonu
