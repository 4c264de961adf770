// SPDX-License-Identifier: Apache-2.0
#include "pyrorisk/fusion/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "pyrorisk/common/csv.hpp"
#include "pyrorisk/common/error.hpp"

namespace pyrorisk::fusion {

namespace {

void check_base(int base) {
    if (base < 0 || base > kMaxLevel) throw DomainError("base_level", "must be in [0, 5]");
}

int round_level(double v) { return static_cast<int>(std::round(v)); }

int to_int(std::string_view cell, std::string_view field) {
    const double v = csv::to_double(cell, field);
    if (v != std::floor(v)) throw DomainError(std::string(field), "expected an integer");
    return static_cast<int>(v);
}

}  // namespace

void FusionConfig::validate() const {
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (!std::isfinite(thresholds[i]) || thresholds[i] < 0.0) {
            throw DomainError("thresholds", "must be finite and non-negative");
        }
        if (i > 0 && !(thresholds[i] > thresholds[i - 1])) throw DomainError("thresholds", "must be strictly ascending");
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("gamma", "must be > 0");
    if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("tau", "must be in [0, 1]");
}

std::array<double, 5> parse_thresholds(std::string_view text) {
    const auto cells = csv::split_line(text);
    if (cells.size() != 5) throw DomainError("thresholds", "expected 5 comma-separated values");
    std::array<double, 5> out{};
    for (std::size_t i = 0; i < 5; ++i) out[i] = csv::to_double(cells[i], "thresholds");
    FusionConfig probe;
    probe.thresholds = out;
    probe.validate();
    return out;
}

int fwi_to_danger(double fwi, const FusionConfig& cfg) {
    cfg.validate();
    if (!(fwi >= 0.0) || !std::isfinite(fwi)) throw DomainError("fwi", "must be finite and >= 0");
    int level = 0;
    for (double t : cfg.thresholds) {
        if (fwi >= t) ++level;
    }
    return level;
}

DangerLevel fuse_binary(int base, double p_burn, const FusionConfig& cfg) {
    cfg.validate();
    check_base(base);
    if (!(p_burn >= 0.0 && p_burn <= 1.0)) throw DomainError("p_burn", "must be in [0, 1]");
    DangerLevel d;
    d.base_level = base;
    d.p_burn = p_burn;
    d.level = p_burn >= cfg.tau ? round_level(base * std::pow(1.0 - p_burn, cfg.gamma)) : base;
    d.level = std::clamp(d.level, 0, base);
    return d;
}

DangerLevel fuse_severity(int base, int severity, const FusionConfig& cfg) {
    cfg.validate();
    check_base(base);
    if (severity < 0 || severity > kMaxLevel) throw DomainError("severity", "must be in [0, 5]");
    DangerLevel d;
    d.base_level = base;
    d.severity = severity;
    d.level = std::clamp(round_level(base * (1.0 - severity / 5.0)), 0, base);
    return d;
}

double burn_probability(const cnn::ClassScores& scores, std::optional<std::size_t> burn_class) {
    const auto& p = scores.probabilities;
    if (p.empty()) throw DomainError("scores", "empty classifier output");
    const std::size_t idx = burn_class.value_or(p.size() >= 2 ? 1 : 0);
    if (idx >= p.size()) throw DomainError("burn_class", "index beyond classifier outputs");
    const double v = p[idx];
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("p_burn", "classifier output outside [0, 1]");
    return v;
}

DangerMap assess_grid(std::uint32_t rows, std::uint32_t cols, std::span<const TileScore> scores,
                      const fwi::FwiReport& report, const FusionConfig& cfg) {
    cfg.validate();
    if (std::size_t{rows} * cols != scores.size()) {
        throw DomainError("scores", "tile/score count mismatch: " + std::to_string(std::size_t{rows} * cols) +
                                        " tiles, " + std::to_string(scores.size()) + " scores");
    }
    DangerMap map;
    map.rows = rows;
    map.cols = cols;
    map.fwi = report.fwi;
    map.base_level = fwi_to_danger(report.fwi, cfg);
    map.cells.resize(scores.size());
    std::vector<bool> seen(scores.size(), false);
    for (const auto& s : scores) {
        if (s.row >= rows || s.col >= cols) throw DomainError("scores", "tile index outside grid");
        const std::size_t i = std::size_t{s.row} * cols + s.col;
        if (seen[i]) throw DomainError("scores", "duplicate tile index");
        seen[i] = true;
        DangerLevel d = fuse_binary(map.base_level, s.p_burn, cfg);
        d.row = s.row;
        d.col = s.col;
        map.cells[i] = d;
        ++map.histogram[static_cast<std::size_t>(d.level)];
    }
    return map;
}

void write_danger_csv(std::ostream& out, const DangerMap& map) {
    out << "row,col,base_level,p_burn,level\n";
    char buf[128];
    for (const auto& d : map.cells) {
        std::snprintf(buf, sizeof buf, "%u,%u,%d,%.6f,%d\n", d.row, d.col, d.base_level, d.p_burn, d.level);
        out << buf;
    }
}

void write_danger_csv_file(const std::string& path, const DangerMap& map) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_danger_csv(out, map);
    if (!out) throw std::runtime_error("write failed: " + path);
}

DangerMap read_danger_csv(std::istream& in) {
    const auto table = csv::read(in);
    const std::size_t c_row = table.column("row"), c_col = table.column("col"), c_base = table.column("base_level"),
                      c_p = table.column("p_burn"), c_level = table.column("level");
    DangerMap map;
    for (const auto& r : table.rows) {
        DangerLevel d;
        const int row = to_int(r[c_row], "row"), col = to_int(r[c_col], "col");
        if (row < 0 || col < 0) throw DomainError("row", "negative tile index");
        d.row = static_cast<std::uint32_t>(row);
        d.col = static_cast<std::uint32_t>(col);
        d.base_level = to_int(r[c_base], "base_level");
        d.p_burn = csv::to_double(r[c_p], "p_burn");
        d.level = to_int(r[c_level], "level");
        check_base(d.base_level);
        if (d.level < 0 || d.level > d.base_level) throw DomainError("level", "must be in [0, base_level]");
        map.rows = std::max(map.rows, d.row + 1);
        map.cols = std::max(map.cols, d.col + 1);
        map.base_level = std::max(map.base_level, d.base_level);
        ++map.histogram[static_cast<std::size_t>(d.level)];
        map.cells.push_back(d);
    }
    std::sort(map.cells.begin(), map.cells.end(),
              [](const auto& a, const auto& b) { return std::pair(a.row, a.col) < std::pair(b.row, b.col); });
    return map;
}

DangerMap read_danger_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_danger_csv(in);
}

}  // namespace pyrorisk::fusion
