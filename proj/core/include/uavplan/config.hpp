#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "uavplan/scenario.hpp"

namespace uavplan {

// JSON document; absent keys keep their defaults, unknown keys are rejected.
// Relative file references (radio.cqi_table) resolve against base_dir.
SimConfig parse_config(std::string_view text, std::string_view source = "<config>",
                       const std::filesystem::path& base_dir = {});

SimConfig load_config(const std::filesystem::path& path);

// Canonical document with every field spelled out; parse_config(dump_config(c)) == c.
std::string dump_config(const SimConfig& c);

}  // namespace uavplan
