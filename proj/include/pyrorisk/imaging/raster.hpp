// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pyrorisk/cnn/tensor.hpp"

namespace pyrorisk::imaging {

/// Geographic position of the image corners, when known.
struct GeoAnchor {
    double north_lat = 0.0;
    double west_lon = 0.0;
    double south_lat = 0.0;
    double east_lon = 0.0;

    bool operator==(const GeoAnchor&) const = default;
};

/// 8-bit RGB raster, row-major, 3 interleaved channels.
struct RasterImage {
    static constexpr std::size_t kChannels = 3;

    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint8_t> pixels;
    std::optional<GeoAnchor> anchor;

    RasterImage() = default;
    RasterImage(std::uint32_t w, std::uint32_t h, std::uint8_t fill = 0)
        : width(w), height(h), pixels(std::size_t{w} * h * kChannels, fill) {}

    std::uint8_t& at(std::size_t x, std::size_t y, std::size_t c) { return pixels[(y * width + x) * kChannels + c]; }
    std::uint8_t at(std::size_t x, std::size_t y, std::size_t c) const { return pixels[(y * width + x) * kChannels + c]; }

    /// Throws DomainError unless pixels.size() == W * H * 3.
    void validate() const;

    bool operator==(const RasterImage&) const = default;
};

/// Channel values divided by 255, shape (height, width, 3).
cnn::Tensor3 to_tensor(const RasterImage& image);

RasterImage read_png(const std::string& path);
void write_png(const std::string& path, const RasterImage& image);
std::vector<std::uint8_t> encode_png(const RasterImage& image);

}  // namespace pyrorisk::imaging
