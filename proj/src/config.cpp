#include "kblink/config.hpp"

#include <fstream>
#include <sstream>

#include "kblink/errors.hpp"

namespace kblink {

using nlohmann::json;

namespace {

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

bool boolean(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError("config key '" + key + "' must be a boolean");
  return v.get<bool>();
}

}  // namespace

LinkerConfig parse_config(std::string_view json_text) {
  json obj = json::parse(json_text, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) throw ConfigError("config must be a JSON object");

  LinkerConfig cfg;
  for (const auto& [key, value] : obj.items()) {
    if (key == "lambda") {
      cfg.lambda = number(value, key);
    } else if (key == "nil_threshold") {
      cfg.nil_threshold = number(value, key);
    } else if (key == "context_window") {
      if (!value.is_number_unsigned()) throw ConfigError("config key 'context_window' must be a non-negative integer");
      cfg.context_window = value.get<std::size_t>();
    } else if (key == "smooth_idf") {
      cfg.smooth_idf = boolean(value, key);
    } else if (key == "normalizer") {
      auto p = value.is_string() ? parse_normalizer_profile(value.get<std::string>()) : std::nullopt;
      if (!p) throw ConfigError("config key 'normalizer' must be \"persian\" or \"identity\"");
      cfg.normalizer = *p;
    } else if (key == "filters") {
      if (!value.is_object()) throw ConfigError("config key 'filters' must be an object");
      for (const auto& [name, flag] : value.items()) {
        const std::string full = "filters." + name;
        if (name == "type") cfg.filters.type = boolean(flag, full);
        else if (name == "pos") cfg.filters.pos = boolean(flag, full);
        else if (name == "popularity") cfg.filters.popularity = boolean(flag, full);
        else if (name == "class") cfg.filters.class_penalty = boolean(flag, full);
        else throw ConfigError("unknown config key '" + full + "'");
      }
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  return cfg;
}

LinkerConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

nlohmann::ordered_json config_to_json(const LinkerConfig& cfg) {
  nlohmann::ordered_json j;
  j["lambda"] = cfg.lambda;
  j["nil_threshold"] = cfg.nil_threshold;
  j["filters"] = {{"type", cfg.filters.type},
                  {"pos", cfg.filters.pos},
                  {"popularity", cfg.filters.popularity},
                  {"class", cfg.filters.class_penalty}};
  j["normalizer"] = to_string(cfg.normalizer);
  j["context_window"] = cfg.context_window;
  j["smooth_idf"] = cfg.smooth_idf;
  return j;
}

}  // namespace kblink
