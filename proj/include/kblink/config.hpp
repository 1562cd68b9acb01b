#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "kblink/linker.hpp"

namespace kblink {

// Config file keys: lambda, nil_threshold, filters.{type,pos,popularity,class},
// normalizer (persian | identity), context_window, smooth_idf. Missing keys
// keep their defaults; unknown keys are rejected.
LinkerConfig parse_config(std::string_view json_text);
LinkerConfig load_config(const std::filesystem::path& path);

nlohmann::ordered_json config_to_json(const LinkerConfig& cfg);

}  // namespace kblink
