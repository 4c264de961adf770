// SPDX-License-Identifier: Apache-2.0
#include "pyrorisk/app/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "pyrorisk/app/render.hpp"
#include "pyrorisk/fusion/fusion.hpp"

namespace pyrorisk::app {

namespace {

bool same_kind(const Json& a, const Json& b) {
    if (a.is_null() || b.is_null()) return true;
    if (a.is_number() && b.is_number()) return true;
    return a.type() == b.type();
}

/// Merges `layer` into `base`, recursing into objects.
void overlay(Json& base, const Json& layer, const Json& schema, const std::string& where) {
    if (!layer.is_object()) throw UsageError("config" + where + ": expected a JSON object");
    for (const auto& [key, value] : layer.items()) {
        const std::string path = where + "/" + key;
        if (!schema.contains(key)) throw UsageError("unknown config key '" + path.substr(1) + "'");
        const Json& expected = schema.at(key);
        if (expected.is_object()) {
            overlay(base[key], value, expected, path);
            continue;
        }
        if (!same_kind(expected, value)) {
            throw UsageError("config key '" + path.substr(1) + "' expects " + std::string(expected.type_name()) +
                             ", got " + std::string(value.type_name()));
        }
        base[key] = value;
    }
}

}  // namespace

Json default_config() {
    Json palette = Json::array();
    for (const auto& c : kDefaultPalette) palette.push_back(to_hex(c));
    return {
        {"config", ""},
        {"weights", ""},
        {"image", ""},
        {"weather_csv", ""},
        {"provider", ""},
        {"weather_token", ""},
        {"lat", nullptr},
        {"lon", nullptr},
        {"from", ""},
        {"to", ""},
        {"date", ""},
        {"latitude_band", ""},
        {"start", {{"ffmc", 85.0}, {"dmc", 6.0}, {"dc", 15.0}}},
        {"out", ""},
        {"seed", 0},
        {"threads", 0},
        {"strict", false},
        {"tile_size", 350},
        {"edge_policy", "pad-zero"},
        {"burn_class", nullptr},
        {"gamma", 1.0},
        {"tau", 0.0},
        {"thresholds", fusion::kDefaultThresholds},
        {"render", false},
        {"danger_csv", ""},
        {"overlay", ""},
        {"alpha", 0.5},
        {"palette", palette},
        {"dataset_root", ""},
        {"fractions", {0.70, 0.15, 0.15}},
        {"augment",
         {{"rotation_deg", 0.0},
          {"width_shift", 0.0},
          {"height_shift", 0.0},
          {"zoom", 0.0},
          {"horizontal_flip", false},
          {"fill", "zero"},
          {"interpolation", "nearest"},
          {"count", 1}}},
        {"regress",
         {{"data", ""},
          {"targets", {"ffmc", "dmc", "dc", "isi"}},
          {"features", Json::array()},
          {"k", 5},
          {"trees", 100},
          {"max_depth", 0},
          {"min_leaf", 1},
          {"test_fraction", 0.2}}},
    };
}

EnvLookup process_env() {
    return [](const char* name) -> std::optional<std::string> {
        const char* v = std::getenv(name);
        if (v == nullptr || *v == '\0') return std::nullopt;
        return std::string(v);
    };
}

Json load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open config file " + path);
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw UsageError("config file " + path + " is not valid JSON (byte " + std::to_string(e.byte) + ")");
    }
    Json scratch = default_config();
    overlay(scratch, doc, default_config(), "");
    return doc;
}

Json resolve_config(const Json& flags, const EnvLookup& env) {
    const Json schema = default_config();
    Json cfg = schema;

    std::string config_path;
    if (flags.contains("config")) {
        config_path = flags.at("config").get<std::string>();
    } else if (auto p = env(kConfigEnv)) {
        config_path = *p;
    }
    if (!config_path.empty()) {
        overlay(cfg, load_config_file(config_path), schema, "");
        cfg["config"] = config_path;
    }
    if (auto token = env(kTokenEnv)) cfg["weather_token"] = *token;
    overlay(cfg, flags, schema, "");
    return cfg;
}

Json redacted(const Json& cfg) {
    Json out = cfg;
    if (out.contains("weather_token") && !out["weather_token"].get<std::string>().empty()) {
        out["weather_token"] = "***";
    }
    return out;
}

void write_effective_config(const std::string& dir, const Json& cfg) {
    const auto path = std::filesystem::path(dir) / "effective_config.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path.string());
    out << redacted(cfg).dump(2) << '\n';
}

}  // namespace pyrorisk::app
