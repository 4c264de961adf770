// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace pyrorisk::cnn {

/// Sliding-window geometry along one spatial axis.
struct ConvGeometry {
    std::uint32_t n_in = 0;   // input size
    std::uint32_t pad = 0;    // zero margin on each side
    std::uint32_t filter = 1;
    std::uint32_t stride = 1;
};

/// floor((n + 2p - f) / s) + 1. Throws DomainError when f > n + 2p, and in
/// strict mode also when (n + 2p - f) is not a multiple of s.
std::uint32_t out_size(const ConvGeometry& g, bool strict = false);

/// The window size that maps n_in to n_out: f = n + 2p - s (n_out - 1).
/// Throws DomainError when that is not a positive size.
std::uint32_t filter_size(std::uint32_t n_in, std::uint32_t pad, std::uint32_t stride, std::uint32_t n_out);

}  // namespace pyrorisk::cnn
