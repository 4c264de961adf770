// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace pyrorisk::cnn {

/// Finite-support discrete signal: samples[k] is x[start + k], zero elsewhere.
struct Signal1D {
    std::int64_t start = 0;
    std::vector<double> samples;

    bool operator==(const Signal1D&) const = default;
};

/// Full discrete convolution y[n] = sum_k x[k] h[n - k]; the result has
/// len(x) + len(h) - 1 samples starting at x.start + h.start.
Signal1D conv1d(const Signal1D& x, const Signal1D& h);

}  // namespace pyrorisk::cnn
