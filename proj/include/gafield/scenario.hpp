#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "gafield/expression.hpp"

namespace gafield {

using json = nlohmann::json;

inline const std::vector<std::string>& scenario_kinds() {
  static const std::vector<std::string> kinds = {
      "algebra-check", "gauge-check",  "field-strength", "torsion",
      "geodesic",      "killing-scan", "action-sweep",   "em-equivalence"};
  return kinds;
}

// declarative description of one deterministic run
struct Scenario {
  std::string name;
  std::string kind;
  int dim = 0;
  std::vector<int> signature;
  int split = 0;  // base-space dimension for split kinds; 0 means no split
  json fields;    // kind-specific expression tables
  double box_lo = -0.7, box_hi = 0.7;
  int points = 64;
  int instances = 200;
  int steps = 400;
  double dtau = 1e-3;
  std::uint64_t seed = 1;
  double lambda = 1.0;
  int sign = +1;
  json raw;  // full document, echoed into reports

  Algebra algebra() const { return Algebra(dim, signature); }
};

namespace detail {

[[noreturn]] inline void field_error(const std::string& field, const std::string& what) {
  throw ga_error("scenario field '" + field + "': " + what);
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    field_error(key, e.what());
  }
}

}  // namespace detail

inline Scenario scenario_from_json(const json& doc) {
  using detail::field_error;
  if (!doc.is_object()) throw ga_error("scenario: top level must be a JSON object");
  Scenario s;
  s.raw = doc;
  s.name = detail::get_or<std::string>(doc, "name", "unnamed");
  if (!doc.contains("kind")) field_error("kind", "missing");
  s.kind = doc.at("kind").get<std::string>();
  bool known = false;
  for (const auto& k : scenario_kinds()) known = known || (k == s.kind);
  if (!known) field_error("kind", "unknown kind '" + s.kind + "'");

  if (!doc.contains("algebra") || !doc.at("algebra").is_object())
    field_error("algebra", "missing object with dim/signature");
  const json& alg = doc.at("algebra");
  s.dim = detail::get_or<int>(alg, "dim", 0);
  if (s.dim < 1 || s.dim > 12) field_error("algebra.dim", "must be in 1..12");
  if (alg.contains("signature")) {
    try {
      s.signature = alg.at("signature").get<std::vector<int>>();
    } catch (const json::exception& e) {
      field_error("algebra.signature", e.what());
    }
  } else {
    s.signature.assign(static_cast<std::size_t>(s.dim), 1);
  }
  if (static_cast<int>(s.signature.size()) != s.dim)
    field_error("algebra.signature", "length must equal dim");
  for (int v : s.signature)
    if (v != 1 && v != -1) field_error("algebra.signature", "entries must be +1 or -1");
  s.split = detail::get_or<int>(alg, "split", 0);
  if (s.split < 0 || s.split > s.dim) field_error("algebra.split", "must be in 0..dim");

  s.fields = detail::get_or<json>(doc, "fields", json::object());
  if (doc.contains("box")) {
    const json& b = doc.at("box");
    s.box_lo = detail::get_or<double>(b, "lo", s.box_lo);
    s.box_hi = detail::get_or<double>(b, "hi", s.box_hi);
    if (!(s.box_lo < s.box_hi)) field_error("box", "needs lo < hi");
  }
  s.points = detail::get_or<int>(doc, "points", s.points);
  if (s.points < 1) field_error("points", "must be positive");
  s.instances = detail::get_or<int>(doc, "instances", s.instances);
  if (s.instances < 1) field_error("instances", "must be positive");
  s.steps = detail::get_or<int>(doc, "steps", s.steps);
  if (s.steps < 1) field_error("steps", "must be positive");
  s.dtau = detail::get_or<double>(doc, "dtau", s.dtau);
  if (!(s.dtau > 0.0)) field_error("dtau", "must be positive");
  s.seed = detail::get_or<std::uint64_t>(doc, "seed", s.seed);
  s.lambda = detail::get_or<double>(doc, "lambda", s.lambda);
  s.sign = detail::get_or<int>(doc, "sign", s.sign);
  if (s.sign != 1 && s.sign != -1) field_error("sign", "must be +1 or -1");

  const bool needs_split = s.kind == "action-sweep" || s.kind == "em-equivalence";
  if (needs_split && (s.split < 1 || s.split >= s.dim))
    field_error("algebra.split", "kind '" + s.kind + "' needs 1 <= split < dim");
  return s;
}

inline Scenario scenario_from_string(const std::string& text) {
  try {
    return scenario_from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw ga_error(std::string("scenario parse error: ") + e.what());
  }
}

inline Scenario scenario_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ga_error("scenario: cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return scenario_from_string(text);
}

}  // namespace gafield
