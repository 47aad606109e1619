#include "thmas/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "thmas/switching.hpp"

namespace thmas {

namespace {

using nlohmann::json;

const json& require_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ConfigParseError(std::string("missing required field: ") + key);
  }
  return *it;
}

int as_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) {
    throw ConfigParseError("field " + field + ": expected an integer");
  }
  return v.get<int>();
}

double as_double(const json& v, const std::string& field) {
  if (!v.is_number()) {
    throw ConfigParseError("field " + field + ": expected a number");
  }
  return v.get<double>();
}

bool as_bool(const json& v, const std::string& field) {
  if (!v.is_boolean()) {
    throw ConfigParseError("field " + field + ": expected a boolean");
  }
  return v.get<bool>();
}

}  // namespace

ScenarioConfig parse_config_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw ConfigParseError("config must be a JSON object");
  }
  static const std::set<std::string> known = {
      "name", "N",  "w", "k_fb", "Ts",       "M",
      "quantized", "c", "leader_scale", "x0", "schedule"};
  for (const auto& item : j.items()) {
    if (known.find(item.key()) == known.end()) {
      throw ConfigParseError("unknown field: " + item.key());
    }
  }

  ScenarioConfig cfg;
  if (j.contains("name")) {
    if (!j["name"].is_string()) {
      throw ConfigParseError("field name: expected a string");
    }
    cfg.name = j["name"].get<std::string>();
  }
  cfg.N = as_int(require_field(j, "N"), "N");
  cfg.w = as_double(require_field(j, "w"), "w");
  cfg.k_fb = as_double(require_field(j, "k_fb"), "k_fb");
  cfg.Ts = as_double(require_field(j, "Ts"), "Ts");
  cfg.M = as_int(require_field(j, "M"), "M");
  if (j.contains("quantized")) {
    cfg.quantized = as_bool(j["quantized"], "quantized");
  }
  if (j.contains("c")) {
    cfg.c = as_int(j["c"], "c");
  }
  if (j.contains("leader_scale")) {
    cfg.leader_scale = as_double(j["leader_scale"], "leader_scale");
  }

  const json& x0 = require_field(j, "x0");
  if (!x0.is_array()) {
    throw ConfigParseError("field x0: expected an array of numbers");
  }
  for (std::size_t i = 0; i < x0.size(); ++i) {
    cfg.x0.push_back(as_double(x0[i], "x0[" + std::to_string(i) + "]"));
  }

  const json& schedule = require_field(j, "schedule");
  if (!schedule.is_array()) {
    throw ConfigParseError("field schedule: expected an array of {sigma, u_L} objects");
  }
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const json& e = schedule[i];
    const std::string where = "schedule[" + std::to_string(i) + "]";
    if (!e.is_object() || !e.contains("sigma") || !e.contains("u_L")) {
      throw ConfigParseError("field " + where + ": expected {sigma, u_L}");
    }
    for (const auto& item : e.items()) {
      if (item.key() != "sigma" && item.key() != "u_L") {
        throw ConfigParseError("unknown field: " + where + "." + item.key());
      }
    }
    cfg.schedule.push_back(
        {as_int(e["sigma"], where + ".sigma"), as_double(e["u_L"], where + ".u_L")});
  }
  return cfg;
}

nlohmann::json config_json(const ScenarioConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["N"] = cfg.N;
  j["w"] = cfg.w;
  j["k_fb"] = cfg.k_fb;
  j["Ts"] = cfg.Ts;
  j["M"] = cfg.M;
  j["quantized"] = cfg.quantized;
  j["c"] = cfg.c;
  j["leader_scale"] = cfg.leader_scale;
  j["x0"] = cfg.x0;
  j["schedule"] = json::array();
  for (const ScheduleEntry& e : cfg.schedule) {
    j["schedule"].push_back({{"sigma", e.sigma}, {"u_L", e.u_L}});
  }
  return j;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigFileError("config file not found: " + path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigParseError(std::string("config parse error: ") + e.what());
  }
  ScenarioConfig cfg = parse_config_json(j);
  validate_config(cfg);
  return cfg;
}

void validate_config(const ScenarioConfig& cfg) {
  if (cfg.N < 1) {
    throw ConfigValidationError("N", "N=" + std::to_string(cfg.N) +
                                         " violates N >= 1");
  }
  if (cfg.M < 1) {
    throw ConfigValidationError("M", "M=" + std::to_string(cfg.M) +
                                         " violates M >= 1");
  }
  if (!(cfg.Ts > 0.0)) {
    throw ConfigValidationError("Ts", "Ts must be positive");
  }
  if (cfg.c < 1) {
    throw ConfigValidationError("c", "c must be at least 1");
  }
  if (cfg.w == 0.0) {
    throw ConfigValidationError("w", "w must be nonzero");
  }
  if (cfg.x0.size() != static_cast<std::size_t>(cfg.N) + 1) {
    throw ConfigValidationError(
        "x0", "x0 has " + std::to_string(cfg.x0.size()) + " entries, expected N+1 = " +
                  std::to_string(cfg.N + 1));
  }
  if (cfg.schedule.empty()) {
    throw ConfigValidationError("schedule", "schedule must have at least one entry");
  }
  int worst_degree = 0;
  std::set<int> sigmas;
  for (std::size_t i = 0; i < cfg.schedule.size(); ++i) {
    const int sigma = cfg.schedule[i].sigma;
    if (sigma < 1 || sigma > cfg.N) {
      throw ConfigValidationError(
          "schedule[" + std::to_string(i) + "].sigma",
          "schedule[" + std::to_string(i) + "].sigma=" + std::to_string(sigma) +
              " violates 1 <= sigma <= N (N=" + std::to_string(cfg.N) + ")");
    }
    sigmas.insert(sigma);
  }
  for (int sigma : sigmas) {
    worst_degree = std::max(worst_degree, build_family(cfg.N, sigma).max_in_degree());
  }
  if (cfg.quantized) {
    // Quantized inputs only see sign(u), so only the sign of the gain matters.
    if (!(cfg.k_fb > 0.0)) {
      throw ConfigValidationError("k_fb", "k_fb must be positive");
    }
  } else {
    const double bound = 1.0 / (worst_degree * std::abs(cfg.w));
    if (!(cfg.k_fb > 0.0) || !(cfg.k_fb < bound)) {
      std::ostringstream msg;
      msg << "k_fb=" << cfg.k_fb << " violates 0 < k_fb < " << bound
          << " (= 1/(max_degree*|w|) with max_degree=" << worst_degree
          << ", |w|=" << std::abs(cfg.w) << ")";
      throw ConfigValidationError("k_fb", msg.str());
    }
  }
}

void apply_override(nlohmann::json& j, const std::string& key_value) {
  const std::size_t eq = key_value.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigParseError("override must look like key=value: " + key_value);
  }
  const std::string key = key_value.substr(0, eq);
  const std::string value = key_value.substr(eq + 1);

  nlohmann::json* cur = &j;
  std::size_t pos = 0;
  while (pos <= key.size()) {
    const std::size_t dot = key.find('.', pos);
    const std::string token =
        key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (token.empty()) {
      throw ConfigParseError("override has an empty path segment: " + key);
    }
    const bool is_index = token.find_first_not_of("0123456789") == std::string::npos;
    const bool last = dot == std::string::npos;
    if (is_index && cur->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(token);
      } catch (const std::exception&) {
        throw ConfigParseError("override index out of range: " + key);
      }
      if (idx >= cur->size()) {
        throw ConfigParseError("override index out of range: " + key);
      }
      cur = &(*cur)[idx];
    } else {
      cur = &(*cur)[token];
    }
    if (last) {
      break;
    }
    pos = dot + 1;
  }
  nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
  *cur = parsed.is_discarded() ? nlohmann::json(value) : parsed;
}

}  // namespace thmas
