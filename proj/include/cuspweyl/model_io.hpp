/*
 * model_io.hpp: JSON model files.
 *
 *   {"dimension": n,
 *    "core": {"volume": v, "remainder_coeff": c},
 *    "cusps": [{"a": a, "delta": d, "lengths": [...], "magnetic": [...]}]}
 *
 * Field names are exact and unknown fields are rejected.
 */
#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cuspweyl/errors.hpp"
#include "cuspweyl/manifold_model.hpp"

namespace cuspweyl {

namespace detail {

inline void reject_unknown(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                           const std::string& where) {
  if (!obj.is_object()) throw model_format_error(where + ": expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) throw model_format_error(where + ": unknown field \"" + item.key() + "\"");
  }
  for (const char* k : allowed)
    if (!obj.contains(k)) throw model_format_error(where + ": missing field \"" + k + "\"");
}

inline double number(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number()) throw model_format_error(where + ": expected a number");
  return v.get<double>();
}

inline std::vector<double> numbers(const nlohmann::json& v, const std::string& where) {
  if (!v.is_array()) throw model_format_error(where + ": expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace detail

inline ManifoldModel model_from_json(const nlohmann::json& doc) {
  detail::reject_unknown(doc, {"dimension", "core", "cusps"}, "model");
  const auto& dim = doc["dimension"];
  if (!dim.is_number_integer()) throw model_format_error("dimension: expected an integer");

  ManifoldModel m;
  m.n = dim.get<int>();
  detail::reject_unknown(doc["core"], {"volume", "remainder_coeff"}, "core");
  m.core.volume = detail::number(doc["core"]["volume"], "core.volume");
  m.core.remainder_coeff = detail::number(doc["core"]["remainder_coeff"], "core.remainder_coeff");

  const auto& cusps = doc["cusps"];
  if (!cusps.is_array()) throw model_format_error("cusps: expected an array");
  for (std::size_t j = 0; j < cusps.size(); ++j) {
    const std::string where = "cusps[" + std::to_string(j) + "]";
    detail::reject_unknown(cusps[j], {"a", "delta", "lengths", "magnetic"}, where);
    CuspEnd c;
    c.a = detail::number(cusps[j]["a"], where + ".a");
    c.delta = detail::number(cusps[j]["delta"], where + ".delta");
    c.cross_section.lengths = detail::numbers(cusps[j]["lengths"], where + ".lengths");
    c.cross_section.magnetic = detail::numbers(cusps[j]["magnetic"], where + ".magnetic");
    m.cusps.push_back(std::move(c));
  }
  return m;
}

inline ManifoldModel parse_model(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw model_format_error(std::string("model is not valid JSON: ") + e.what());
  }
  return model_from_json(doc);
}

inline nlohmann::json model_to_json(const ManifoldModel& m) {
  nlohmann::json cusps = nlohmann::json::array();
  for (const auto& c : m.cusps) {
    cusps.push_back({{"a", c.a},
                     {"delta", c.delta},
                     {"lengths", c.cross_section.lengths},
                     {"magnetic", c.cross_section.magnetic}});
  }
  return {{"dimension", m.n},
          {"core", {{"volume", m.core.volume}, {"remainder_coeff", m.core.remainder_coeff}}},
          {"cusps", cusps}};
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw model_format_error("cannot open model file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// FNV-1a 64-bit digest, rendered as 16 hex digits; identifies a model file in output metadata.
inline std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cuspweyl
