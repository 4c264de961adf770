// SPDX-License-Identifier: Apache-2.0
#include "pyrorisk/app/cli.hpp"

#include <CLI11.hpp>

#include <ostream>

#include "pyrorisk/app/weather.hpp"
#include "pyrorisk/cnn/cnnw.hpp"
#include "pyrorisk/common/csv.hpp"
#include "pyrorisk/common/error.hpp"

namespace pyrorisk::app {

namespace {

using Command = void (*)(const Json&, std::ostream&, std::ostream&);

/// Registers flags whose values are written into a JSON object at a
/// pointer, so only flags actually given override lower layers.
class FlagSink {
public:
    explicit FlagSink(Json& flags) : flags_(flags) {}

    template <typename T>
    void add(CLI::App* app, const std::string& name, const std::string& pointer, const std::string& help) {
        app->add_option_function<T>(
            name, [this, pointer](const T& v) { flags_[Json::json_pointer(pointer)] = v; }, help);
    }

    void flag(CLI::App* app, const std::string& name, const std::string& pointer, const std::string& help) {
        app->add_flag_callback(name, [this, pointer] { flags_[Json::json_pointer(pointer)] = true; }, help);
    }

    /// Comma-separated numbers stored as an array.
    void list(CLI::App* app, const std::string& name, const std::string& pointer, std::size_t count,
              const std::string& help) {
        app->add_option_function<std::string>(
            name,
            [this, pointer, count, name](const std::string& v) {
                Json arr = Json::array();
                for (const auto& cell : csv::split_line(v)) arr.push_back(csv::to_double(cell, name));
                if (count && arr.size() != count) {
                    throw CLI::ValidationError(name, "expected " + std::to_string(count) + " values");
                }
                flags_[Json::json_pointer(pointer)] = arr;
            },
            help);
    }

    void strings(CLI::App* app, const std::string& name, const std::string& pointer, const std::string& help) {
        app->add_option_function<std::string>(
            name,
            [this, pointer](const std::string& v) {
                Json arr = Json::array();
                for (const auto& cell : csv::split_line(v)) arr.push_back(cell);
                flags_[Json::json_pointer(pointer)] = arr;
            },
            help);
    }

private:
    Json& flags_;
};

void weather_flags(FlagSink& f, CLI::App* c) {
    f.add<std::string>(c, "--weather-csv", "/weather_csv", "Daily weather CSV (date,temp_c,rh_pct,wind_kmh,rain_mm)");
    f.add<std::string>(c, "--provider", "/provider", "Weather provider: fixture:<dir> or http://host[:port]");
    f.add<double>(c, "--lat", "/lat", "Latitude in degrees");
    f.add<double>(c, "--lon", "/lon", "Longitude in degrees");
    f.add<std::string>(c, "--from", "/from", "First day YYYY-MM-DD");
    f.add<std::string>(c, "--to", "/to", "Last day YYYY-MM-DD");
    f.add<std::string>(c, "--latitude-band", "/latitude_band", "n30-90, n10-30, equatorial, s10-30 or s30-90");
    f.add<double>(c, "--start-ffmc", "/start/ffmc", "Initial FFMC (default 85)");
    f.add<double>(c, "--start-dmc", "/start/dmc", "Initial DMC (default 6)");
    f.add<double>(c, "--start-dc", "/start/dc", "Initial DC (default 15)");
}

void model_flags(FlagSink& f, CLI::App* c) {
    f.add<std::string>(c, "--weights", "/weights", "CNNW weight file");
    f.add<std::string>(c, "--image", "/image", "Input PNG");
    f.add<long long>(c, "--tile-size", "/tile_size", "Tile edge in pixels (default 350)");
    f.add<std::string>(c, "--edge-policy", "/edge_policy", "pad-zero, pad-reflect or drop-partial");
    f.add<long long>(c, "--burn-class", "/burn_class", "Output unit holding the burn probability");
    f.add<long long>(c, "--threads", "/threads", "Worker threads for tile inference (0 = all cores)");
}

void fusion_flags(FlagSink& f, CLI::App* c) {
    f.add<double>(c, "--gamma", "/gamma", "Attenuation exponent (default 1)");
    f.add<double>(c, "--tau", "/tau", "Burn probability floor (default 0)");
    f.list(c, "--thresholds", "/thresholds", 5, "Five ascending FWI cut points");
}

std::string error_line(std::string_view kind, const std::string& message, const Json& extra = Json::object()) {
    Json j = extra;
    j["error"] = kind;
    j["message"] = message;
    return j.dump();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
    CLI::App app("Wildfire danger assessment from weather and imagery", "pyrorisk");
    app.require_subcommand(1);
    Json flags = Json::object();
    FlagSink f(flags);
    f.add<std::string>(&app, "--config", "/config", "JSON config file (overrides $PYRORISK_CONFIG)");
    f.add<std::string>(&app, "--out", "/out", "Output directory");
    f.add<std::uint64_t>(&app, "--seed", "/seed", "Seed for every random draw");
    f.flag(&app, "--strict", "/strict", "Fail on the first bad input record");

    std::vector<std::pair<CLI::App*, Command>> commands;
    auto sub = [&](const char* name, const char* help, Command cmd) {
        auto* c = app.add_subcommand(name, help);
        c->fallthrough();
        commands.emplace_back(c, cmd);
        return c;
    };

    auto* fwi_cmd = sub("fwi", "Run the daily fire weather chain", cmd_fwi);
    weather_flags(f, fwi_cmd);

    auto* reg = sub("eval-reg", "Fit RF and KNN regressors and report MAE", cmd_eval_reg);
    f.add<std::string>(reg, "--data", "/regress/data", "Numeric CSV with feature and target columns");
    f.strings(reg, "--targets", "/regress/targets", "Target columns (default ffmc,dmc,dc,isi)");
    f.strings(reg, "--features", "/regress/features", "Feature columns (default: all others but date)");
    f.add<long long>(reg, "--k", "/regress/k", "KNN neighbours (default 5)");
    f.add<long long>(reg, "--trees", "/regress/trees", "Random forest size (default 100)");
    f.add<long long>(reg, "--max-depth", "/regress/max_depth", "Tree depth limit (0 = none)");
    f.add<long long>(reg, "--min-leaf", "/regress/min_leaf", "Minimum samples per leaf");
    f.add<double>(reg, "--test-fraction", "/regress/test_fraction", "Held-out fraction (default 0.2)");

    auto* tile_cmd = sub("tile", "Cut an image into square tiles", cmd_tile);
    f.add<std::string>(tile_cmd, "--image", "/image", "Input PNG");
    f.add<long long>(tile_cmd, "--tile-size", "/tile_size", "Tile edge in pixels (default 350)");
    f.add<std::string>(tile_cmd, "--edge-policy", "/edge_policy", "pad-zero, pad-reflect or drop-partial");

    auto* infer = sub("infer", "Classify every tile of an image", cmd_infer);
    model_flags(f, infer);

    auto* assess = sub("assess", "Weather chain + tile classification + fusion into a danger map", cmd_assess);
    weather_flags(f, assess);
    model_flags(f, assess);
    fusion_flags(f, assess);
    f.add<std::string>(assess, "--date", "/date", "Scene date (default: last weather day)");
    f.flag(assess, "--render", "/render", "Also write danger_map.png");

    auto* split = sub("split", "Stratified train/test/val split of a class-per-directory dataset", cmd_split);
    f.add<std::string>(split, "--dataset", "/dataset_root", "Directory holding wildfire/ and nowildfire/");
    f.list(split, "--fractions", "/fractions", 3, "train,test,val (default 0.70,0.15,0.15)");

    auto* aug = sub("augment", "Write seeded random augmentations of an image", cmd_augment);
    f.add<std::string>(aug, "--image", "/image", "Input PNG");
    f.add<double>(aug, "--rotation", "/augment/rotation_deg", "Max rotation in degrees");
    f.add<double>(aug, "--width-shift", "/augment/width_shift", "Max horizontal shift as a fraction of width");
    f.add<double>(aug, "--height-shift", "/augment/height_shift", "Max vertical shift as a fraction of height");
    f.add<double>(aug, "--zoom", "/augment/zoom", "Zoom range: scale drawn from [1-z, 1+z]");
    f.flag(aug, "--hflip", "/augment/horizontal_flip", "Random horizontal flips");
    f.add<std::string>(aug, "--fill", "/augment/fill", "zero or nearest");
    f.add<std::string>(aug, "--interpolation", "/augment/interpolation", "nearest or bilinear");
    f.add<long long>(aug, "--count", "/augment/count", "Number of outputs");

    auto* render = sub("render", "Draw a danger map CSV as a PNG", cmd_render);
    f.add<std::string>(render, "--danger-csv", "/danger_csv", "danger_map.csv from assess");
    f.add<long long>(render, "--tile-size", "/tile_size", "Cell edge in pixels (default 350)");
    f.add<std::string>(render, "--overlay", "/overlay", "Blend over this PNG instead of a solid map");
    f.add<double>(render, "--alpha", "/alpha", "Overlay opacity (default 0.5)");
    f.strings(render, "--palette", "/palette", "Six #RRGGBB colours for levels 0..5");

    std::vector<const char*> argv{"pyrorisk"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const std::exception& e) {
        err << error_line("usage", e.what()) << '\n';
        return kExitUsage;
    }

    try {
        const Json cfg = resolve_config(flags, env);
        for (const auto& [c, cmd] : commands) {
            if (c->parsed()) {
                cmd(cfg, out, err);
                break;
            }
        }
        return kExitOk;
    } catch (const UsageError& e) {
        err << error_line("usage", e.what()) << '\n';
        return kExitUsage;
    } catch (const ProviderError& e) {
        Json extra = {{"kind", to_string(e.kind())}, {"retryable", e.retryable}, {"attempts", e.attempts}};
        if (e.offset) extra["offset"] = *e.offset;
        if (!e.pointer.empty()) extra["pointer"] = e.pointer;
        if (e.http_status) extra["http_status"] = e.http_status;
        if (e.next_backoff) extra["next_backoff_ms"] = e.next_backoff->count();
        err << error_line("provider", e.what(), extra) << '\n';
        return kExitProvider;
    } catch (const cnn::CnnwError& e) {
        err << error_line("data", e.what(), {{"cnnw_code", static_cast<int>(e.code())}}) << '\n';
        return kExitData;
    } catch (const DomainError& e) {
        err << error_line("data", e.what(), {{"field", e.field()}}) << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << error_line("internal", e.what()) << '\n';
        return kExitInternal;
    }
}

}  // namespace pyrorisk::app
