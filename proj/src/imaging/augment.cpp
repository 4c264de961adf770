// SPDX-License-Identifier: Apache-2.0
#include "pyrorisk/imaging/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pyrorisk/common/error.hpp"

namespace pyrorisk::imaging {

namespace {

/// Maps a destination pixel centre to a source position.
struct InverseMap {
    double a = 1, b = 0, tx = 0;  // sx = a x + b y + tx
    double c = 0, d = 1, ty = 0;  // sy = c x + d y + ty

    /// Composition: applies *this, then next.
    InverseMap then(const InverseMap& next) const {
        InverseMap m;
        m.a = next.a * a + next.b * c;
        m.b = next.a * b + next.b * d;
        m.tx = next.a * tx + next.b * ty + next.tx;
        m.c = next.c * a + next.d * c;
        m.d = next.c * b + next.d * d;
        m.ty = next.c * tx + next.d * ty + next.ty;
        return m;
    }
};

// Snaps coordinates that are integral up to rounding noise so exact
// permutations (flips, quarter turns) stay exact.
double snap(double v) {
    const double r = std::round(v);
    return std::abs(v - r) < 1e-9 ? r : v;
}

std::int64_t nearest_index(double v) { return static_cast<std::int64_t>(std::floor(snap(v) + 0.5)); }

bool fetch(const RasterImage& img, std::int64_t x, std::int64_t y, FillMode fill, std::size_t ch, double& out) {
    if (x < 0 || y < 0 || x >= img.width || y >= img.height) {
        if (fill == FillMode::Zero) return false;
        x = std::clamp<std::int64_t>(x, 0, img.width - 1);
        y = std::clamp<std::int64_t>(y, 0, img.height - 1);
    }
    out = img.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y), ch);
    return true;
}

RasterImage resample(const RasterImage& img, const InverseMap& m, FillMode fill, Interpolation interp) {
    img.validate();
    RasterImage out(img.width, img.height);
    for (std::uint32_t y = 0; y < img.height; ++y) {
        for (std::uint32_t x = 0; x < img.width; ++x) {
            const double sx = snap(m.a * x + m.b * y + m.tx);
            const double sy = snap(m.c * x + m.d * y + m.ty);
            for (std::size_t ch = 0; ch < 3; ++ch) {
                double v = 0.0;
                if (interp == Interpolation::Nearest) {
                    if (!fetch(img, nearest_index(sx), nearest_index(sy), fill, ch, v)) v = 0.0;
                } else {
                    const double fx = std::floor(sx), fy = std::floor(sy);
                    const double wx = sx - fx, wy = sy - fy;
                    const auto x0 = static_cast<std::int64_t>(fx), y0 = static_cast<std::int64_t>(fy);
                    double acc = 0.0;
                    const double weights[4] = {(1 - wx) * (1 - wy), wx * (1 - wy), (1 - wx) * wy, wx * wy};
                    const std::int64_t xs[4] = {x0, x0 + 1, x0, x0 + 1};
                    const std::int64_t ys[4] = {y0, y0, y0 + 1, y0 + 1};
                    for (int k = 0; k < 4; ++k) {
                        double s = 0.0;
                        if (weights[k] != 0.0 && fetch(img, xs[k], ys[k], fill, ch, s)) acc += weights[k] * s;
                    }
                    v = acc;
                }
                out.at(x, y, ch) = static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
            }
        }
    }
    out.anchor = img.anchor;
    return out;
}

InverseMap flip_map(std::uint32_t w) { return {-1, 0, static_cast<double>(w) - 1.0, 0, 1, 0}; }

InverseMap rotate_map(double angle_deg, std::uint32_t w, std::uint32_t h) {
    const double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;
    const double t = angle_deg * std::numbers::pi / 180.0;
    double cs = std::cos(t), sn = std::sin(t);
    // Exact trig for quarter turns.
    const double quarters = angle_deg / 90.0;
    if (std::abs(quarters - std::round(quarters)) < 1e-12) {
        const auto q = ((static_cast<long long>(std::llround(quarters)) % 4) + 4) % 4;
        constexpr double kCos[4] = {1, 0, -1, 0};
        constexpr double kSin[4] = {0, 1, 0, -1};
        cs = kCos[q];
        sn = kSin[q];
    }
    // src = c + R(-t) (dst - c)
    return {cs, sn, cx - cs * cx - sn * cy, -sn, cs, cy + sn * cx - cs * cy};
}

InverseMap zoom_map(double factor, std::uint32_t w, std::uint32_t h) {
    const double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;
    return {factor, 0, cx - factor * cx, 0, factor, cy - factor * cy};
}

InverseMap shift_map(double dx, double dy) { return {1, 0, -dx, 0, 1, -dy}; }

}  // namespace

void AugmentConfig::validate() const {
    if (!(rotation_deg >= 0.0 && rotation_deg <= 180.0)) throw DomainError("rotation_deg", "must be in [0, 180]");
    if (!(width_shift >= 0.0 && width_shift < 1.0)) throw DomainError("width_shift", "must be in [0, 1)");
    if (!(height_shift >= 0.0 && height_shift < 1.0)) throw DomainError("height_shift", "must be in [0, 1)");
    if (!(zoom >= 0.0 && zoom < 1.0)) throw DomainError("zoom", "must be in [0, 1)");
}

bool AugmentConfig::is_identity() const {
    return rotation_deg == 0.0 && width_shift == 0.0 && height_shift == 0.0 && zoom == 0.0 && !horizontal_flip;
}

AugmentParams draw_params(const AugmentConfig& cfg, std::uint32_t width, std::uint32_t height, Rng& rng) {
    cfg.validate();
    AugmentParams p;
    // Draws happen in a fixed order regardless of which ranges are zero so a
    // seed means the same thing across configs.
    const double u_flip = rng.uniform();
    const double u_rot = rng.uniform();
    const double u_zoom = rng.uniform();
    const double u_dx = rng.uniform();
    const double u_dy = rng.uniform();
    p.flip = cfg.horizontal_flip && u_flip < 0.5;
    p.angle_deg = cfg.rotation_deg * (2.0 * u_rot - 1.0);
    p.zoom = 1.0 + cfg.zoom * (2.0 * u_zoom - 1.0);
    p.shift_x = std::round(cfg.width_shift * (2.0 * u_dx - 1.0) * width);
    p.shift_y = std::round(cfg.height_shift * (2.0 * u_dy - 1.0) * height);
    return p;
}

RasterImage apply(const RasterImage& image, const AugmentParams& p, FillMode fill, Interpolation interp) {
    image.validate();
    const auto w = image.width, h = image.height;
    // Forward order flip -> rotate -> zoom -> shift, so the inverse map
    // (destination to source) runs shift first and flip last.
    InverseMap m = shift_map(p.shift_x, p.shift_y);
    m = m.then(zoom_map(p.zoom, w, h));
    m = m.then(rotate_map(p.angle_deg, w, h));
    if (p.flip) m = m.then(flip_map(w));
    return resample(image, m, fill, interp);
}

RasterImage augment(const RasterImage& image, const AugmentConfig& cfg, Rng& rng) {
    const auto p = draw_params(cfg, image.width, image.height, rng);
    return apply(image, p, cfg.fill, cfg.interpolation);
}

RasterImage augment(const RasterImage& image, const AugmentConfig& cfg) {
    Rng rng(cfg.seed);
    return augment(image, cfg, rng);
}

RasterImage hflip(const RasterImage& image) { return resample(image, flip_map(image.width), FillMode::Zero, Interpolation::Nearest); }

RasterImage rotate(const RasterImage& image, double angle_deg, FillMode fill, Interpolation interp) {
    return resample(image, rotate_map(angle_deg, image.width, image.height), fill, interp);
}

RasterImage zoom(const RasterImage& image, double factor, FillMode fill, Interpolation interp) {
    if (!(factor > 0.0)) throw DomainError("zoom", "factor must be > 0");
    return resample(image, zoom_map(factor, image.width, image.height), fill, interp);
}

RasterImage shift(const RasterImage& image, double dx, double dy, FillMode fill) {
    return resample(image, shift_map(dx, dy), fill, Interpolation::Nearest);
}

}  // namespace pyrorisk::imaging
