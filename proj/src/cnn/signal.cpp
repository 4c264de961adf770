// SPDX-License-Identifier: Apache-2.0
#include "pyrorisk/cnn/signal.hpp"

#include "pyrorisk/common/error.hpp"

namespace pyrorisk::cnn {

Signal1D conv1d(const Signal1D& x, const Signal1D& h) {
    if (x.samples.empty()) throw DomainError("x", "signal must be non-empty");
    if (h.samples.empty()) throw DomainError("h", "signal must be non-empty");
    Signal1D y;
    y.start = x.start + h.start;
    y.samples.assign(x.samples.size() + h.samples.size() - 1, 0.0);
    for (std::size_t i = 0; i < x.samples.size(); ++i) {
        for (std::size_t j = 0; j < h.samples.size(); ++j) y.samples[i + j] += x.samples[i] * h.samples[j];
    }
    return y;
}

}  // namespace pyrorisk::cnn
