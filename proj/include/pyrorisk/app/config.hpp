// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>

namespace pyrorisk::app {

using Json = nlohmann::json;

/// Bad flags, missing inputs or an invalid config file.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kConfigEnv = "PYRORISK_CONFIG";
inline constexpr const char* kTokenEnv = "PYRORISK_WEATHER_TOKEN";

/// Every recognised key with its default value.
Json default_config();

using EnvLookup = std::function<std::optional<std::string>(const char* name)>;
EnvLookup process_env();

/// Layers defaults < config file < environment < flags. The config file is
/// `flags["config"]` when given, else $PYRORISK_CONFIG. Unknown keys and
/// type mismatches are usage errors.
Json resolve_config(const Json& flags, const EnvLookup& env);

/// Loads a JSON object from disk, checked against the known keys.
Json load_config_file(const std::string& path);

/// Copy safe to write to disk: the weather token is masked.
Json redacted(const Json& cfg);
void write_effective_config(const std::string& dir, const Json& cfg);

/// Typed read of `pointer` (e.g. "/augment/zoom"); usage error naming the
/// key on type mismatch.
template <typename T>
T get(const Json& cfg, const std::string& pointer) {
    try {
        return cfg.at(Json::json_pointer(pointer)).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config key '" + pointer.substr(1) + "': " + e.what());
    }
}

template <typename T>
std::optional<T> get_optional(const Json& cfg, const std::string& pointer) {
    const Json::json_pointer p(pointer);
    if (!cfg.contains(p) || cfg.at(p).is_null()) return std::nullopt;
    return get<T>(cfg, pointer);
}

}  // namespace pyrorisk::app
