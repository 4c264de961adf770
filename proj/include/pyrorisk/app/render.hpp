// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "pyrorisk/fusion/fusion.hpp"
#include "pyrorisk/imaging/raster.hpp"

namespace pyrorisk::app {

using Rgb = std::array<std::uint8_t, 3>;
using Palette = std::array<Rgb, 6>;

/// Levels 0..5: #1A9850 #91CF60 #FEE08B #FC8D59 #D73027 #7F0000.
inline constexpr Palette kDefaultPalette{{
    {0x1A, 0x98, 0x50},
    {0x91, 0xCF, 0x60},
    {0xFE, 0xE0, 0x8B},
    {0xFC, 0x8D, 0x59},
    {0xD7, 0x30, 0x27},
    {0x7F, 0x00, 0x00},
}};

/// "#RRGGBB" (the '#' is optional).
Rgb parse_hex_color(std::string_view text);
/// Six comma-separated colours.
Palette parse_palette(std::string_view text);
std::string to_hex(const Rgb& c);

/// Solid map: every cell is a cell_px square filled with its level colour.
imaging::RasterImage render_danger_map(const fusion::DangerMap& map, std::uint32_t cell_px,
                                       const Palette& palette = kDefaultPalette);

/// Blends level colours over `base` with weight alpha; cells are cell_px
/// squares anchored at the top-left, clipped to the image.
imaging::RasterImage render_overlay(const fusion::DangerMap& map, const imaging::RasterImage& base,
                                    std::uint32_t cell_px, double alpha, const Palette& palette = kDefaultPalette);

}  // namespace pyrorisk::app
