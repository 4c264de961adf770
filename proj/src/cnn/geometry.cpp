// SPDX-License-Identifier: Apache-2.0
#include "pyrorisk/cnn/geometry.hpp"

#include "pyrorisk/common/error.hpp"

namespace pyrorisk::cnn {

std::uint32_t out_size(const ConvGeometry& g, bool strict) {
    if (g.filter < 1) throw DomainError("filter", "must be >= 1");
    if (g.stride < 1) throw DomainError("stride", "must be >= 1");
    const std::int64_t span = std::int64_t{g.n_in} + 2 * std::int64_t{g.pad} - g.filter;
    if (span < 0) throw DomainError("filter", "window larger than padded input");
    if (strict && span % g.stride != 0) throw DomainError("stride", "(n + 2p - f) is not a multiple of the stride");
    return static_cast<std::uint32_t>(span / g.stride + 1);
}

std::uint32_t filter_size(std::uint32_t n_in, std::uint32_t pad, std::uint32_t stride, std::uint32_t n_out) {
    if (stride < 1) throw DomainError("stride", "must be >= 1");
    if (n_out < 1) throw DomainError("n_out", "must be >= 1");
    const std::int64_t f = std::int64_t{n_in} + 2 * std::int64_t{pad} - std::int64_t{stride} * (n_out - 1);
    if (f < 1) throw DomainError("filter", "no positive window size produces this output size");
    return static_cast<std::uint32_t>(f);
}

}  // namespace pyrorisk::cnn
