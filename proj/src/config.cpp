#include "oraclebench/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace oraclebench {
namespace {

using nlohmann::json;

double get_real(const json& node, const std::string& field) {
  if (!node.is_number()) throw ConfigError(field, "expected a number");
  const double v = node.get<double>();
  if (!std::isfinite(v)) throw ConfigError(field, "expected a finite number");
  return v;
}

long get_integer(const json& node, const std::string& field) {
  if (node.is_number_integer()) {
    if (node.is_number_unsigned() &&
        node.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<long>::max()))
      throw ConfigError(field, "integer out of range");
    return node.get<long>();
  }
  if (node.is_number_float()) {
    const double v = node.get<double>();
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9.0e15) return static_cast<long>(v);
  }
  throw ConfigError(field, "expected an integer");
}

std::uint64_t get_seed(const json& node, const std::string& field) {
  if (node.is_number_unsigned()) return node.get<std::uint64_t>();
  if (node.is_number_integer() && node.get<long long>() >= 0)
    return static_cast<std::uint64_t>(node.get<long long>());
  throw ConfigError(field, "expected a nonnegative 64-bit integer");
}

std::string get_string(const json& node, const std::string& field) {
  if (!node.is_string()) throw ConfigError(field, "expected a string");
  return node.get<std::string>();
}

void reject_unknown(const json& node, const std::set<std::string>& known, const std::string& prefix) {
  for (const auto& item : node.items())
    if (!known.count(item.key())) throw ConfigError(prefix + item.key(), "unknown field");
}

const char* noise_parameter_key(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::Gaussian: return "sd";
    case NoiseFamily::Bounded: return "range";
    case NoiseFamily::Exponential: return "rate";
  }
  return "parameter";
}

}  // namespace

json parse_config_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("not valid JSON: ") + e.what());
  }
}

json load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

void apply_override(json& tree, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("--set", "expected key=value, got \"" + assignment + "\"");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  if (!tree.is_object()) throw ConfigError("config", "top level must be an object");
  json* node = &tree;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError(key, "empty path segment");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    json& child = (*node)[part];
    if (child.is_null()) child = json::object();
    if (!child.is_object()) throw ConfigError(key.substr(0, dot), "is not an object");
    node = &child;
    start = dot + 1;
  }
}

void apply_seed_override(json& tree, const std::string& seed, const std::string& source) {
  std::uint64_t value = 0;
  const char* first = seed.data();
  const char* last = seed.data() + seed.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (seed.empty() || ec != std::errc() || ptr != last)
    throw ConfigError(source, "expected a decimal 64-bit seed, got \"" + seed + "\"");
  if (!tree.is_object()) throw ConfigError("config", "top level must be an object");
  tree["masterSeed"] = value;
}

ScenarioConfig config_from_json(const json& tree) {
  if (!tree.is_object()) throw ConfigError("config", "top level must be an object");
  reject_unknown(tree,
                 {"scenario", "nGrid", "d", "q", "epsilon", "x", "replications", "masterSeed",
                  "noise", "betaStar", "constants", "gamma", "floor", "testSize",
                  "lambdaReplications", "rhoScale", "modelSize", "cells", "labelNoise"},
                 "");
  ScenarioConfig c;
  if (!tree.contains("scenario")) throw ConfigError("scenario", "missing");
  const std::string name = get_string(tree["scenario"], "scenario");
  const auto scenario = parse_scenario(name);
  if (!scenario)
    throw ConfigError("scenario", "unknown scenario \"" + name +
                                      "\" (FiniteGap, Isomorphy, SquareLasso, LqRerm)");
  c.scenario = *scenario;

  if (!tree.contains("nGrid")) throw ConfigError("nGrid", "missing");
  const json& grid = tree["nGrid"];
  if (!grid.is_array()) throw ConfigError("nGrid", "expected an array of sample sizes");
  for (const json& n : grid) c.nGrid.push_back(get_integer(n, "nGrid"));

  if (tree.contains("d")) c.d = get_integer(tree["d"], "d");
  if (tree.contains("q")) c.q = get_real(tree["q"], "q");
  if (tree.contains("epsilon")) c.epsilon = get_real(tree["epsilon"], "epsilon");
  if (tree.contains("x")) c.x = get_real(tree["x"], "x");
  if (tree.contains("replications")) c.replications = get_integer(tree["replications"], "replications");
  if (tree.contains("masterSeed")) c.masterSeed = get_seed(tree["masterSeed"], "masterSeed");
  if (tree.contains("gamma")) c.gamma = get_real(tree["gamma"], "gamma");
  if (tree.contains("floor")) c.floor = get_real(tree["floor"], "floor");
  if (tree.contains("testSize")) c.testSize = get_integer(tree["testSize"], "testSize");
  if (tree.contains("lambdaReplications"))
    c.lambdaReplications = get_integer(tree["lambdaReplications"], "lambdaReplications");
  if (tree.contains("rhoScale")) c.rhoScale = get_real(tree["rhoScale"], "rhoScale");
  if (tree.contains("modelSize")) c.modelSize = get_integer(tree["modelSize"], "modelSize");
  if (tree.contains("cells")) c.cells = get_integer(tree["cells"], "cells");
  if (tree.contains("labelNoise")) c.labelNoise = get_real(tree["labelNoise"], "labelNoise");

  if (tree.contains("noise")) {
    const json& noise = tree["noise"];
    if (!noise.is_object()) throw ConfigError("noise", "expected an object");
    if (!noise.contains("family")) throw ConfigError("noise.family", "missing");
    const std::string family = get_string(noise["family"], "noise.family");
    const auto parsed = parse_noise_family(family);
    if (!parsed)
      throw ConfigError("noise.family",
                        "unknown family \"" + family + "\" (Gaussian, Bounded, Exponential)");
    c.noise.family = *parsed;
    const std::string key = noise_parameter_key(c.noise.family);
    reject_unknown(noise, {"family", key}, "noise.");
    if (noise.contains(key)) c.noise.parameter = get_real(noise[key], "noise." + key);
  }
  if (tree.contains("betaStar")) {
    const json& beta = tree["betaStar"];
    if (!beta.is_object()) throw ConfigError("betaStar", "expected an object");
    reject_unknown(beta, {"supportSize", "magnitude"}, "betaStar.");
    if (beta.contains("supportSize"))
      c.betaStar.supportSize = get_integer(beta["supportSize"], "betaStar.supportSize");
    if (beta.contains("magnitude"))
      c.betaStar.magnitude = get_real(beta["magnitude"], "betaStar.magnitude");
  }
  if (tree.contains("constants")) {
    const json& constants = tree["constants"];
    if (!constants.is_object()) throw ConfigError("constants", "expected an object");
    for (const auto& item : constants.items())
      c.constants[item.key()] = get_real(item.value(), "constants." + item.key());
  }
  validate(c);
  return c;
}

json config_to_json(const ScenarioConfig& c) {
  json tree;
  tree["scenario"] = to_string(c.scenario);
  tree["nGrid"] = c.nGrid;
  tree["d"] = c.d;
  tree["q"] = c.q;
  tree["epsilon"] = c.epsilon;
  tree["x"] = c.x;
  tree["replications"] = c.replications;
  tree["masterSeed"] = c.masterSeed;
  tree["noise"] = {{"family", to_string(c.noise.family)},
                   {noise_parameter_key(c.noise.family), c.noise.parameter}};
  tree["betaStar"] = {{"supportSize", c.betaStar.supportSize},
                      {"magnitude", c.betaStar.magnitude}};
  tree["constants"] = json::object();
  for (const auto& [k, v] : c.constants) tree["constants"][k] = v;
  tree["gamma"] = c.gamma;
  tree["floor"] = c.floor;
  tree["testSize"] = c.testSize;
  tree["lambdaReplications"] = c.lambdaReplications;
  tree["rhoScale"] = c.rhoScale;
  tree["modelSize"] = c.modelSize;
  tree["cells"] = c.cells;
  tree["labelNoise"] = c.labelNoise;
  return tree;
}

ScenarioConfig resolve_config(json tree, const std::optional<std::string>& seedOverride,
                              const std::vector<std::string>& assignments) {
  if (seedOverride) apply_seed_override(tree, *seedOverride);
  for (const std::string& a : assignments) apply_override(tree, a);
  return config_from_json(tree);
}

}  // namespace oraclebench
