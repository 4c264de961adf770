// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "pyrorisk/app/cli.hpp"
#include "pyrorisk/app/render.hpp"
#include "pyrorisk/app/weather.hpp"
#include "pyrorisk/cnn/cnnw.hpp"
#include "pyrorisk/common/error.hpp"
#include "pyrorisk/common/parallel.hpp"
#include "pyrorisk/common/rng.hpp"
#include "pyrorisk/fusion/fusion.hpp"
#include "pyrorisk/imaging/augment.hpp"
#include "pyrorisk/imaging/manifest.hpp"
#include "pyrorisk/imaging/tile.hpp"
#include "pyrorisk/regress/evaluation.hpp"

namespace pyrorisk::app {

namespace fs = std::filesystem;

namespace {

std::string require_input(const Json& cfg, const std::string& key, const std::string& flag) {
    const auto path = get<std::string>(cfg, "/" + key);
    if (path.empty()) throw UsageError("missing required " + flag);
    if (!fs::exists(path)) throw UsageError(flag + ": no such file or directory: " + path);
    return path;
}

std::string output_dir(const Json& cfg, bool required) {
    const auto dir = get<std::string>(cfg, "/out");
    if (dir.empty()) {
        if (required) throw UsageError("missing required --out");
        return {};
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw UsageError("--out: cannot create directory " + dir);
    write_effective_config(dir, cfg);
    return dir;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    const auto path = fs::path(dir) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path.string());
    return f;
}

std::uint32_t tile_size(const Json& cfg) {
    const auto v = get<long long>(cfg, "/tile_size");
    if (v <= 0 || v > 65535) throw UsageError("--tile-size must be in [1, 65535]");
    return static_cast<std::uint32_t>(v);
}

std::size_t threads(const Json& cfg) {
    const auto v = get<long long>(cfg, "/threads");
    if (v < 0) throw UsageError("--threads must be >= 0");
    return static_cast<std::size_t>(v);
}

fusion::FusionConfig fusion_config(const Json& cfg) {
    fusion::FusionConfig f;
    const auto t = get<std::vector<double>>(cfg, "/thresholds");
    if (t.size() != 5) throw UsageError("thresholds: expected 5 values");
    std::copy(t.begin(), t.end(), f.thresholds.begin());
    f.gamma = get<double>(cfg, "/gamma");
    f.tau = get<double>(cfg, "/tau");
    try {
        f.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    return f;
}

Palette palette(const Json& cfg) {
    const auto colours = get<std::vector<std::string>>(cfg, "/palette");
    if (colours.size() != 6) throw UsageError("palette: expected 6 colours");
    Palette p{};
    try {
        for (std::size_t i = 0; i < 6; ++i) p[i] = parse_hex_color(colours[i]);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    return p;
}

std::string date_list(const std::vector<std::chrono::year_month_day>& days) {
    std::string s;
    for (const auto& d : days) s += (s.empty() ? "" : ",") + fwi::format_date(d);
    return s;
}

struct LoadedWeather {
    WeatherSeries series;
    fwi::FwiConfig fwi;
};

LoadedWeather load_weather(const Json& cfg, std::ostream& err) {
    LoadedWeather w;
    const auto csv_path = get<std::string>(cfg, "/weather_csv");
    const auto provider = get<std::string>(cfg, "/provider");
    if (!csv_path.empty() && !provider.empty()) throw UsageError("use either --weather-csv or --provider, not both");
    if (csv_path.empty() && provider.empty()) throw UsageError("missing weather input: --weather-csv or --provider");
    if (!csv_path.empty()) {
        w.series = read_weather_csv_file(require_input(cfg, "weather_csv", "--weather-csv"));
        if (auto lat = get_optional<double>(cfg, "/lat")) w.series.lat = lat;
    } else {
        const auto lat = get_optional<double>(cfg, "/lat");
        const auto lon = get_optional<double>(cfg, "/lon");
        const auto from = get<std::string>(cfg, "/from");
        const auto to = get<std::string>(cfg, "/to");
        if (!lat || !lon || from.empty() || to.empty()) {
            throw UsageError("--provider needs --lat, --lon, --from and --to");
        }
        ProviderSpec spec;
        DateRange range;
        try {
            spec = parse_provider(provider);
            range = {fwi::parse_date(from), fwi::parse_date(to)};
            range.validate();
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
        spec.token = get<std::string>(cfg, "/weather_token");
        auto source = make_provider(spec);
        auto result = source->fetch(*lat, *lon, range);
        if (!result.gaps.empty()) {
            err << "warning: " << result.gaps.size() << " day(s) missing from provider: " << date_list(result.gaps) << '\n';
            throw DomainError("weather", "provider data has gaps (" + date_list(result.gaps) +
                                             "); the daily chain needs every day");
        }
        w.series.lat = result.lat;
        w.series.lon = result.lon;
        w.series.days = std::move(result.observations);
    }
    const auto band = get<std::string>(cfg, "/latitude_band");
    if (!band.empty()) {
        try {
            w.fwi.band = fwi::parse_latitude_band(band);
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
    } else if (w.series.lat) {
        w.fwi.band = fwi::band_for_latitude(*w.series.lat);
    }
    return w;
}

fwi::FwiState start_state(const Json& cfg) {
    fwi::FwiState s;
    s.ffmc = get<double>(cfg, "/start/ffmc");
    s.dmc = get<double>(cfg, "/start/dmc");
    s.dc = get<double>(cfg, "/start/dc");
    try {
        fwi::validate(s);
    } catch (const DomainError& e) {
        throw UsageError(std::string("start state: ") + e.what());
    }
    return s;
}

std::optional<std::size_t> burn_class(const Json& cfg) {
    const auto v = get_optional<long long>(cfg, "/burn_class");
    if (!v) return std::nullopt;
    if (*v < 0) throw UsageError("--burn-class must be >= 0");
    return static_cast<std::size_t>(*v);
}

cnn::Network load_model(const Json& cfg, std::uint32_t size) {
    const auto path = require_input(cfg, "weights", "--weights");
    const auto bytes = cnn::read_binary_file(path);
    cnn::NetworkOptions options;
    options.name = fs::path(path).filename().string();
    return cnn::load_network(bytes, cnn::Shape{size, size, 3}, options);
}

imaging::EdgePolicy edge_policy(const Json& cfg) {
    try {
        return imaging::parse_edge_policy(get<std::string>(cfg, "/edge_policy"));
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

imaging::TileGrid tiles_for(const imaging::RasterImage& image, std::uint32_t size, imaging::EdgePolicy policy) {
    auto grid = imaging::tile(image, size, policy);
    if (grid.tiles.empty()) throw DomainError("image", "smaller than one tile under drop-partial");
    return grid;
}

std::vector<cnn::ClassScores> score_tiles(const cnn::Network& net, const imaging::TileGrid& grid, std::size_t max_threads) {
    std::vector<cnn::ClassScores> scores(grid.tiles.size());
    parallel_for(
        grid.tiles.size(), [&](std::size_t i) { scores[i] = net.forward(imaging::to_tensor(grid.tiles[i].image)); },
        max_threads);
    return scores;
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

}  // namespace

void cmd_fwi(const Json& cfg, std::ostream& out, std::ostream& err) {
    const auto w = load_weather(cfg, err);
    const auto reports = fwi::run_series(start_state(cfg), w.series.days, w.fwi);
    const auto dir = output_dir(cfg, false);
    if (dir.empty()) {
        write_fwi_report_csv(out, reports);
        return;
    }
    auto f = open_out(dir, "fwi_report.csv");
    write_fwi_report_csv(f, reports);
    out << "wrote " << reports.size() << " rows to " << (fs::path(dir) / "fwi_report.csv").string() << '\n';
}

void cmd_eval_reg(const Json& cfg, std::ostream& out, std::ostream&) {
    const auto data_path = get<std::string>(cfg, "/regress/data");
    if (data_path.empty()) throw UsageError("missing required --data");
    if (!fs::exists(data_path)) throw UsageError("--data: no such file: " + data_path);
    const auto targets = get<std::vector<std::string>>(cfg, "/regress/targets");
    const auto features = get<std::vector<std::string>>(cfg, "/regress/features");
    const auto data = regress::read_tabular_file(data_path, targets, features);

    regress::ExperimentConfig exp;
    exp.targets = targets;
    exp.seed = get<std::uint64_t>(cfg, "/seed");
    exp.test_fraction = get<double>(cfg, "/regress/test_fraction");
    regress::RandomForestParams rf;
    rf.n_trees = get<std::size_t>(cfg, "/regress/trees");
    rf.max_depth = get<std::size_t>(cfg, "/regress/max_depth");
    rf.min_leaf = get<std::size_t>(cfg, "/regress/min_leaf");
    rf.seed = exp.seed;
    regress::KnnParams knn;
    knn.k = get<std::size_t>(cfg, "/regress/k");
    exp.regressors = {{"RF", rf}, {"KNN", knn}};

    const auto table = regress::run_experiment(data, exp);
    const auto dir = output_dir(cfg, true);
    {
        auto f = open_out(dir, "mae.csv");
        regress::write_mae_csv(f, table);
    }
    {
        auto f = open_out(dir, "correlation.csv");
        regress::write_correlation_csv(f, regress::correlation_matrix(data, true));
    }
    regress::write_mae_csv(out, table);
}

void cmd_tile(const Json& cfg, std::ostream& out, std::ostream&) {
    const auto path = require_input(cfg, "image", "--image");
    const auto size = tile_size(cfg);
    const auto policy = edge_policy(cfg);
    const auto dir = output_dir(cfg, true);
    const auto image = imaging::read_png(path);
    const auto grid = imaging::tile(image, size, policy);
    const auto stem = stem_of(path);
    auto index = open_out(dir, "tiles.csv");
    index << "file,row,col,origin_x,origin_y,valid_width,valid_height\n";
    for (const auto& t : grid.tiles) {
        const auto name = imaging::tile_filename(stem, t.row, t.col);
        imaging::write_png((fs::path(dir) / name).string(), t.image);
        index << name << ',' << t.row << ',' << t.col << ',' << t.origin_x << ',' << t.origin_y << ',' << t.valid_width
              << ',' << t.valid_height << '\n';
    }
    out << "wrote " << grid.tiles.size() << " tiles (" << grid.rows << "x" << grid.cols << ") to " << dir << '\n';
}

void cmd_infer(const Json& cfg, std::ostream& out, std::ostream&) {
    const auto size = tile_size(cfg);
    const auto net = load_model(cfg, size);
    const auto image = imaging::read_png(require_input(cfg, "image", "--image"));
    const auto grid = tiles_for(image, size, edge_policy(cfg));
    const auto scores = score_tiles(net, grid, threads(cfg));
    const auto cls = burn_class(cfg);

    const auto dir = output_dir(cfg, false);
    std::ofstream file;
    if (!dir.empty()) file = open_out(dir, "scores.csv");
    std::ostream& sink = dir.empty() ? out : file;
    sink << "row,col,p_burn";
    for (std::size_t k = 0; k < net.class_count(); ++k) sink << ",score_" << k;
    sink << '\n';
    char buf[64];
    for (std::size_t i = 0; i < grid.tiles.size(); ++i) {
        sink << grid.tiles[i].row << ',' << grid.tiles[i].col;
        std::snprintf(buf, sizeof buf, ",%.6f", fusion::burn_probability(scores[i], cls));
        sink << buf;
        for (double p : scores[i].probabilities) {
            std::snprintf(buf, sizeof buf, ",%.6f", p);
            sink << buf;
        }
        sink << '\n';
    }
}

void cmd_assess(const Json& cfg, std::ostream& out, std::ostream& err) {
    const auto size = tile_size(cfg);
    const auto fcfg = fusion_config(cfg);
    const auto policy = edge_policy(cfg);
    const auto cls = burn_class(cfg);
    const auto net = load_model(cfg, size);
    const auto image_path = require_input(cfg, "image", "--image");
    const auto w = load_weather(cfg, err);
    const auto dir = output_dir(cfg, true);

    const auto reports = fwi::run_series(start_state(cfg), w.series.days, w.fwi);
    const auto date = get<std::string>(cfg, "/date");
    const fwi::FwiReport* report = &reports.back();
    if (!date.empty()) {
        const auto wanted = fwi::parse_date(date);
        const auto it = std::find_if(reports.begin(), reports.end(), [&](const auto& r) { return r.date == wanted; });
        if (it == reports.end()) throw DomainError("date", "no weather for " + date);
        report = &*it;
    }

    const auto grid = tiles_for(imaging::read_png(image_path), size, policy);
    const auto scores = score_tiles(net, grid, threads(cfg));
    std::vector<fusion::TileScore> tile_scores;
    tile_scores.reserve(grid.tiles.size());
    for (std::size_t i = 0; i < grid.tiles.size(); ++i) {
        tile_scores.push_back({grid.tiles[i].row, grid.tiles[i].col, fusion::burn_probability(scores[i], cls)});
    }
    const auto map = fusion::assess_grid(grid.rows, grid.cols, tile_scores, *report, fcfg);

    {
        auto f = open_out(dir, "danger_map.csv");
        fusion::write_danger_csv(f, map);
    }
    {
        auto f = open_out(dir, "fwi_report.csv");
        write_fwi_report_csv(f, reports);
    }
    Json summary = {
        {"date", fwi::format_date(report->date)},
        {"fwi", report->fwi},
        {"base_level", map.base_level},
        {"rows", map.rows},
        {"cols", map.cols},
        {"histogram", map.histogram},
        {"kernels", cnn::active_kernels().name},
    };
    {
        auto f = open_out(dir, "summary.json");
        f << summary.dump(2) << '\n';
    }
    if (get<bool>(cfg, "/render")) {
        imaging::write_png((fs::path(dir) / "danger_map.png").string(), render_danger_map(map, size, palette(cfg)));
    }
    out << "base level " << map.base_level << " (FWI " << report->fwi << " on " << fwi::format_date(report->date)
        << "), " << map.cells.size() << " tiles written to " << dir << '\n';
}

void cmd_split(const Json& cfg, std::ostream& out, std::ostream&) {
    const auto root = require_input(cfg, "dataset_root", "--dataset");
    const auto fr = get<std::vector<double>>(cfg, "/fractions");
    if (fr.size() != 3) throw UsageError("--fractions expects train,test,val");
    imaging::SplitFractions f{fr[0], fr[1], fr[2]};
    const auto manifest = imaging::split_dataset(imaging::scan_dataset(root), f, get<std::uint64_t>(cfg, "/seed"));
    const auto dir = output_dir(cfg, false);
    if (dir.empty()) {
        imaging::write_manifest(out, manifest);
        return;
    }
    auto file = open_out(dir, "manifest.csv");
    imaging::write_manifest(file, manifest);
    const auto counts = manifest.split_counts();
    out << "train=" << counts[0] << " test=" << counts[1] << " val=" << counts[2] << '\n';
}

void cmd_augment(const Json& cfg, std::ostream& out, std::ostream&) {
    const auto path = require_input(cfg, "image", "--image");
    imaging::AugmentConfig a;
    a.rotation_deg = get<double>(cfg, "/augment/rotation_deg");
    a.width_shift = get<double>(cfg, "/augment/width_shift");
    a.height_shift = get<double>(cfg, "/augment/height_shift");
    a.zoom = get<double>(cfg, "/augment/zoom");
    a.horizontal_flip = get<bool>(cfg, "/augment/horizontal_flip");
    const auto fill = get<std::string>(cfg, "/augment/fill");
    const auto interp = get<std::string>(cfg, "/augment/interpolation");
    if (fill != "zero" && fill != "nearest") throw UsageError("--fill must be zero or nearest");
    if (interp != "nearest" && interp != "bilinear") throw UsageError("--interpolation must be nearest or bilinear");
    a.fill = fill == "zero" ? imaging::FillMode::Zero : imaging::FillMode::Nearest;
    a.interpolation = interp == "nearest" ? imaging::Interpolation::Nearest : imaging::Interpolation::Bilinear;
    a.seed = get<std::uint64_t>(cfg, "/seed");
    try {
        a.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    const auto count = get<long long>(cfg, "/augment/count");
    if (count < 1) throw UsageError("--count must be >= 1");

    const auto dir = output_dir(cfg, true);
    const auto image = imaging::read_png(path);
    const auto stem = stem_of(path);
    Rng rng(a.seed);
    auto log = open_out(dir, "augment.csv");
    log << "file,flip,angle_deg,zoom,shift_x,shift_y\n";
    char buf[160];
    for (long long i = 0; i < count; ++i) {
        const auto p = imaging::draw_params(a, image.width, image.height, rng);
        const auto name = stem + "_aug" + std::to_string(i) + ".png";
        imaging::write_png((fs::path(dir) / name).string(), imaging::apply(image, p, a.fill, a.interpolation));
        std::snprintf(buf, sizeof buf, "%s,%d,%.6f,%.6f,%.0f,%.0f\n", name.c_str(), p.flip ? 1 : 0, p.angle_deg, p.zoom,
                      p.shift_x, p.shift_y);
        log << buf;
    }
    out << "wrote " << count << " augmented images to " << dir << '\n';
}

void cmd_render(const Json& cfg, std::ostream& out, std::ostream&) {
    const auto map = fusion::read_danger_csv_file(require_input(cfg, "danger_csv", "--danger-csv"));
    const auto size = tile_size(cfg);
    const auto pal = palette(cfg);
    const auto overlay_path = get<std::string>(cfg, "/overlay");
    const auto dir = output_dir(cfg, true);
    const auto target = (fs::path(dir) / "danger_map.png").string();
    if (overlay_path.empty()) {
        imaging::write_png(target, render_danger_map(map, size, pal));
    } else {
        const auto base = imaging::read_png(require_input(cfg, "overlay", "--overlay"));
        imaging::write_png(target, render_overlay(map, base, size, get<double>(cfg, "/alpha"), pal));
    }
    out << "wrote " << target << '\n';
}

}  // namespace pyrorisk::app
