// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "pyrorisk/common/rng.hpp"
#include "pyrorisk/imaging/raster.hpp"

namespace pyrorisk::imaging {

enum class FillMode { Zero, Nearest };
enum class Interpolation { Nearest, Bilinear };

/// Random geometric augmentation ranges. Each call draws
///   flip      with probability 1/2 when horizontal_flip
///   angle     uniform in [-rotation_deg, rotation_deg]
///   zoom      uniform in [1 - zoom, 1 + zoom] (source scale, < 1 zooms in)
///   dx, dy    uniform in [-width_shift, width_shift] * W (resp. height)
/// and applies them in the order flip -> rotate -> zoom -> shift as one
/// resampling pass.
struct AugmentConfig {
    double rotation_deg = 0.0;
    double width_shift = 0.0;
    double height_shift = 0.0;
    double zoom = 0.0;
    bool horizontal_flip = false;
    FillMode fill = FillMode::Zero;
    Interpolation interpolation = Interpolation::Nearest;
    std::uint64_t seed = 0;

    /// Throws DomainError on out-of-range fields.
    void validate() const;
    bool is_identity() const;
};

/// One concrete draw from an AugmentConfig.
struct AugmentParams {
    bool flip = false;
    double angle_deg = 0.0;
    double zoom = 1.0;
    double shift_x = 0.0;  // pixels, positive moves content right
    double shift_y = 0.0;  // pixels, positive moves content down
};

AugmentParams draw_params(const AugmentConfig& cfg, std::uint32_t width, std::uint32_t height, Rng& rng);

RasterImage apply(const RasterImage& image, const AugmentParams& params, FillMode fill = FillMode::Zero,
                  Interpolation interp = Interpolation::Nearest);

RasterImage augment(const RasterImage& image, const AugmentConfig& cfg, Rng& rng);
/// Uses a fresh generator seeded from cfg.seed.
RasterImage augment(const RasterImage& image, const AugmentConfig& cfg);

RasterImage hflip(const RasterImage& image);
/// Rotation about the image centre; positive angles turn content clockwise
/// on screen (y axis points down). Multiples of 90 degrees on square
/// images are exact permutations.
RasterImage rotate(const RasterImage& image, double angle_deg, FillMode fill = FillMode::Zero,
                   Interpolation interp = Interpolation::Nearest);
RasterImage zoom(const RasterImage& image, double factor, FillMode fill = FillMode::Zero,
                 Interpolation interp = Interpolation::Nearest);
RasterImage shift(const RasterImage& image, double dx, double dy, FillMode fill = FillMode::Zero);

}  // namespace pyrorisk::imaging
