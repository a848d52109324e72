#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "campana/toric_fan.hpp"

namespace campana {

using json = nlohmann::json;

/// Exact rational from a JSON number or a "p/q" string.
inline Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number()) return parse_rational(j.dump());
  throw Error(ErrorKind::ConfigError, "expected a rational, got " + j.dump());
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// {"dim":2,"rays":[[1,0],...],"max_cones":[[1,2],...],"m":[...],"L":null};
/// cone entries are 1-based. "m" and "L" are optional.
inline OrbifoldInstance instance_from_json(const json& j) {
  try {
    Fan f;
    f.dim = j.at("dim").get<std::size_t>();
    f.rays = j.at("rays").get<std::vector<std::vector<long long>>>();
    for (const auto& c : j.at("max_cones")) {
      IndexSet cone;
      for (const auto& x : c) {
        const long v = x.get<long>();
        if (v < 1) throw Error(ErrorKind::MalformedFan, "cone indices are 1-based");
        cone.push_back(static_cast<Index>(v - 1));
      }
      std::sort(cone.begin(), cone.end());
      f.max_cones.push_back(cone);
    }
    std::vector<unsigned> m;
    if (j.contains("m") && !j["m"].is_null()) m = j["m"].get<std::vector<unsigned>>();
    std::optional<Vec> L;
    if (j.contains("L") && !j["L"].is_null()) {
      Vec l;
      for (const auto& x : j["L"]) l.push_back(rational_from_json(x));
      L = l;
    }
    return make_instance(std::move(f), std::move(m), L);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedFan, e.what());
  }
}

inline OrbifoldInstance load_instance(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::MalformedFan, path + ": " + e.what());
  }
  return instance_from_json(j);
}

inline json fan_to_json(const Fan& f) {
  json cones = json::array();
  for (const auto& c : f.max_cones) {
    json cj = json::array();
    for (auto i : c) cj.push_back(i + 1);
    cones.push_back(cj);
  }
  return {{"dim", f.dim}, {"rays", f.rays}, {"max_cones", cones}};
}

}  // namespace campana
