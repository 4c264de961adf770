// SPDX-License-Identifier: Apache-2.0
#include "pyrorisk/imaging/tile.hpp"

#include <algorithm>

#include "pyrorisk/common/error.hpp"

namespace pyrorisk::imaging {

namespace {

// Mirror index into [0, n) without repeating the edge pixel.
std::uint32_t reflect(std::int64_t i, std::uint32_t n) {
    if (n == 1) return 0;
    const std::int64_t period = 2 * (std::int64_t{n} - 1);
    i %= period;
    if (i < 0) i += period;
    return static_cast<std::uint32_t>(i < n ? i : period - i);
}

}  // namespace

EdgePolicy parse_edge_policy(std::string_view name) {
    if (name == "pad-zero") return EdgePolicy::PadZero;
    if (name == "pad-reflect") return EdgePolicy::PadReflect;
    if (name == "drop-partial") return EdgePolicy::DropPartial;
    throw DomainError("edge_policy", "unknown policy '" + std::string(name) + "'");
}

std::string_view to_string(EdgePolicy policy) {
    switch (policy) {
        case EdgePolicy::PadZero: return "pad-zero";
        case EdgePolicy::PadReflect: return "pad-reflect";
        case EdgePolicy::DropPartial: return "drop-partial";
    }
    return "?";
}

TileGrid tile(const RasterImage& image, std::uint32_t size, EdgePolicy policy) {
    if (size == 0) throw DomainError("tile_size", "must be >= 1");
    image.validate();
    TileGrid grid;
    grid.source_width = image.width;
    grid.source_height = image.height;
    grid.tile_size = size;
    grid.policy = policy;
    if (policy == EdgePolicy::DropPartial) {
        grid.cols = image.width / size;
        grid.rows = image.height / size;
    } else {
        grid.cols = (image.width + size - 1) / size;
        grid.rows = (image.height + size - 1) / size;
    }
    grid.tiles.reserve(std::size_t{grid.rows} * grid.cols);
    for (std::uint32_t r = 0; r < grid.rows; ++r) {
        for (std::uint32_t c = 0; c < grid.cols; ++c) {
            Tile t;
            t.row = r;
            t.col = c;
            t.origin_x = c * size;
            t.origin_y = r * size;
            t.valid_width = std::min(size, image.width - t.origin_x);
            t.valid_height = std::min(size, image.height - t.origin_y);
            t.image = RasterImage(size, size);
            for (std::uint32_t y = 0; y < size; ++y) {
                const std::int64_t sy = std::int64_t{t.origin_y} + y;
                if (sy >= image.height && policy == EdgePolicy::PadZero) break;
                const auto src_y = sy < image.height ? static_cast<std::uint32_t>(sy) : reflect(sy, image.height);
                if (y < t.valid_height) {
                    // Fast path: one contiguous copy for the in-bounds span.
                    const auto* src = &image.pixels[(std::size_t{src_y} * image.width + t.origin_x) * 3];
                    std::copy_n(src, std::size_t{t.valid_width} * 3, &t.image.at(0, y, 0));
                }
                if (policy != EdgePolicy::PadReflect) continue;
                for (std::uint32_t x = (y < t.valid_height ? t.valid_width : 0); x < size; ++x) {
                    const auto src_x = reflect(std::int64_t{t.origin_x} + x, image.width);
                    for (std::size_t ch = 0; ch < 3; ++ch) t.image.at(x, y, ch) = image.at(src_x, src_y, ch);
                }
            }
            grid.tiles.push_back(std::move(t));
        }
    }
    return grid;
}

RasterImage reassemble(const TileGrid& grid) {
    std::uint32_t w = grid.source_width;
    std::uint32_t h = grid.source_height;
    if (grid.policy == EdgePolicy::DropPartial) {
        w = grid.cols * grid.tile_size;
        h = grid.rows * grid.tile_size;
    }
    RasterImage out(w, h);
    for (const auto& t : grid.tiles) {
        for (std::uint32_t y = 0; y < t.valid_height; ++y) {
            std::copy_n(t.image.pixels.begin() + std::size_t{y} * t.image.width * 3, std::size_t{t.valid_width} * 3, &out.at(t.origin_x, t.origin_y + y, 0));
        }
    }
    return out;
}

std::string tile_filename(std::string_view stem, std::uint32_t row, std::uint32_t col) {
    return std::string(stem) + "_r" + std::to_string(row) + "_c" + std::to_string(col) + ".png";
}

}  // namespace pyrorisk::imaging
