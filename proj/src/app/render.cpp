// SPDX-License-Identifier: Apache-2.0
#include "pyrorisk/app/render.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "pyrorisk/common/csv.hpp"
#include "pyrorisk/common/error.hpp"

namespace pyrorisk::app {

namespace {

const Rgb& colour_for(const fusion::DangerLevel& d, const Palette& palette) {
    if (d.level < 0 || d.level > fusion::kMaxLevel) throw DomainError("level", "must be in [0, 5]");
    return palette[static_cast<std::size_t>(d.level)];
}

void check_cell(std::uint32_t cell_px) {
    if (cell_px == 0) throw DomainError("tile_size", "must be >= 1");
}

}  // namespace

Rgb parse_hex_color(std::string_view text) {
    if (!text.empty() && text.front() == '#') text.remove_prefix(1);
    if (text.size() != 6) throw DomainError("palette", "expected #RRGGBB, got '" + std::string(text) + "'");
    Rgb c{};
    for (std::size_t i = 0; i < 3; ++i) {
        const auto part = text.substr(i * 2, 2);
        unsigned v = 0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + 2, v, 16);
        if (ec != std::errc() || ptr != part.data() + 2) throw DomainError("palette", "bad hex colour '" + std::string(text) + "'");
        c[i] = static_cast<std::uint8_t>(v);
    }
    return c;
}

Palette parse_palette(std::string_view text) {
    const auto cells = csv::split_line(text);
    if (cells.size() != 6) throw DomainError("palette", "expected 6 colours");
    Palette p{};
    for (std::size_t i = 0; i < 6; ++i) p[i] = parse_hex_color(cells[i]);
    return p;
}

std::string to_hex(const Rgb& c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02X%02X%02X", c[0], c[1], c[2]);
    return buf;
}

imaging::RasterImage render_danger_map(const fusion::DangerMap& map, std::uint32_t cell_px, const Palette& palette) {
    check_cell(cell_px);
    if (map.rows == 0 || map.cols == 0) throw DomainError("danger_map", "empty map");
    imaging::RasterImage img(map.cols * cell_px, map.rows * cell_px);
    for (const auto& d : map.cells) {
        const Rgb& c = colour_for(d, palette);
        for (std::uint32_t y = d.row * cell_px; y < (d.row + 1) * cell_px; ++y) {
            for (std::uint32_t x = d.col * cell_px; x < (d.col + 1) * cell_px; ++x) {
                for (std::size_t ch = 0; ch < 3; ++ch) img.at(x, y, ch) = c[ch];
            }
        }
    }
    return img;
}

imaging::RasterImage render_overlay(const fusion::DangerMap& map, const imaging::RasterImage& base,
                                    std::uint32_t cell_px, double alpha, const Palette& palette) {
    check_cell(cell_px);
    base.validate();
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha", "must be in [0, 1]");
    imaging::RasterImage img = base;
    for (const auto& d : map.cells) {
        const Rgb& c = colour_for(d, palette);
        const std::uint32_t y1 = std::min<std::uint64_t>(std::uint64_t{d.row + 1} * cell_px, base.height);
        const std::uint32_t x1 = std::min<std::uint64_t>(std::uint64_t{d.col + 1} * cell_px, base.width);
        for (std::uint64_t y = std::uint64_t{d.row} * cell_px; y < y1; ++y) {
            for (std::uint64_t x = std::uint64_t{d.col} * cell_px; x < x1; ++x) {
                for (std::size_t ch = 0; ch < 3; ++ch) {
                    const double v = alpha * c[ch] + (1.0 - alpha) * base.at(x, y, ch);
                    img.at(x, y, ch) = static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
                }
            }
        }
    }
    return img;
}

}  // namespace pyrorisk::app
