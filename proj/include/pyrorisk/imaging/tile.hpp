// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pyrorisk/imaging/raster.hpp"

namespace pyrorisk::imaging {

/// What to do with tiles that run past the right or bottom edge.
enum class EdgePolicy {
    PadZero,     // fill the missing area with black
    PadReflect,  // mirror the image across its edge (edge pixel not repeated)
    DropPartial, // emit only complete tiles
};

EdgePolicy parse_edge_policy(std::string_view name);
std::string_view to_string(EdgePolicy policy);

struct Tile {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    std::uint32_t origin_x = 0;  // pixel column of the tile's top-left in the source
    std::uint32_t origin_y = 0;
    std::uint32_t valid_width = 0;  // extent covered by source pixels
    std::uint32_t valid_height = 0;
    RasterImage image;  // always tile_size x tile_size
};

struct TileGrid {
    std::uint32_t source_width = 0;
    std::uint32_t source_height = 0;
    std::uint32_t tile_size = 350;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    EdgePolicy policy = EdgePolicy::PadZero;
    std::vector<Tile> tiles;  // row-major
};

/// Cuts `image` into size x size patches on a grid anchored at (0, 0).
/// Padding policies give ceil(W/size) * ceil(H/size) tiles; DropPartial
/// gives floor(W/size) * floor(H/size).
TileGrid tile(const RasterImage& image, std::uint32_t size = 350, EdgePolicy policy = EdgePolicy::PadZero);

/// Rebuilds the source from the unpadded region of every tile. With
/// DropPartial the result covers only the complete-tile area.
RasterImage reassemble(const TileGrid& grid);

/// `<stem>_r<row>_c<col>.png`
std::string tile_filename(std::string_view stem, std::uint32_t row, std::uint32_t col);

}  // namespace pyrorisk::imaging
