#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "adrcwave/closed_loop.hpp"

namespace adrcwave {

/// A scenario as read from a `[section]` / `key = value` document, together
/// with the optional `[sweep]` grid (`key = v1, v2, ...`).
struct ConfigDocument {
    ScenarioConfig scenario;
    std::vector<std::pair<std::string, std::vector<std::string>>> sweep;
};

/// Parses a config document; unknown sections or keys raise Error(Config).
ConfigDocument parse_config(const std::string& text);
ConfigDocument load_config(const std::filesystem::path& path);

/// Sets `section.key` to a textual value.
void set_option(ScenarioConfig& cfg, const std::string& key, const std::string& value);
std::string get_option(const ScenarioConfig& cfg, const std::string& key);

/// Every recognised `section.key`, in echo order.
const std::vector<std::string>& option_keys();

/// Fully resolved config in the same document format; parsing it back gives
/// an identical scenario.
std::string echo_config(const ScenarioConfig& cfg);

/// Copy with derived fields filled in (noise hold interval = dt).
ScenarioConfig resolve(const ScenarioConfig& cfg);

std::string format_double(double v);

}  // namespace adrcwave
