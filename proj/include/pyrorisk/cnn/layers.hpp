// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "pyrorisk/cnn/activation.hpp"
#include "pyrorisk/cnn/kernels.hpp"
#include "pyrorisk/cnn/tensor.hpp"

namespace pyrorisk::cnn {

/// 2-D convolution layer with framework (cross-correlation) semantics:
/// out(i, j, o) = act(b[o] + sum_{a,b,c} in_pad(i*s + a, j*s + b, c) K(a, b, c, o)).
/// Kernel layout is (row, col, in-channel, out-channel), out-channel fastest.
struct Conv2D {
    std::uint32_t filter = 1;
    std::uint32_t in_channels = 1;
    std::uint32_t out_channels = 1;
    std::uint32_t stride = 1;
    std::uint32_t pad = 0;
    Activation activation;
    bool frozen = false;
    std::vector<float> kernel;  // filter*filter*in*out, may be empty for topology-only use
    std::vector<float> bias;    // out

    std::size_t kernel_size() const { return std::size_t{filter} * filter * in_channels * out_channels; }
    float& k(std::size_t a, std::size_t b, std::size_t c, std::size_t o) {
        return kernel[((a * filter + b) * in_channels + c) * out_channels + o];
    }
    float k(std::size_t a, std::size_t b, std::size_t c, std::size_t o) const {
        return kernel[((a * filter + b) * in_channels + c) * out_channels + o];
    }
    bool operator==(const Conv2D&) const = default;
};

/// Per-channel window maximum, no padding.
struct MaxPool {
    std::uint32_t filter = 2;
    std::uint32_t stride = 2;
    bool frozen = false;
    bool operator==(const MaxPool&) const = default;
};

/// Row-major reshape to 1 x 1 x (H*W*C).
struct Flatten {
    bool frozen = false;
    bool operator==(const Flatten&) const = default;
};

/// out = act(W^T v + b); weight layout (in, out), out fastest.
struct Dense {
    std::uint32_t in = 1;
    std::uint32_t out = 1;
    Activation activation;
    bool frozen = false;
    std::vector<float> weights;  // in*out
    std::vector<float> bias;     // out

    float& w(std::size_t i, std::size_t o) { return weights[i * out + o]; }
    float w(std::size_t i, std::size_t o) const { return weights[i * out + o]; }
    bool operator==(const Dense&) const = default;
};

using Layer = std::variant<Conv2D, MaxPool, Flatten, Dense>;

/// Output shape for `layer` applied to `in`; DomainError if incompatible.
Shape output_shape(const Layer& layer, const Shape& in, bool strict = false);

/// Weights plus biases, computed from the declared dimensions.
std::uint64_t param_count(const Layer& layer);
bool is_frozen(const Layer& layer);
const Activation& activation_of(const Layer& layer);

Tensor3 conv2d(const Tensor3& input, const Conv2D& layer, const KernelSet& kernels = active_kernels());

/// Mathematical 2-D convolution, S(i,j) = sum_m sum_n I(m,n) K(i-m, j-n):
/// conv2d with the kernel flipped in both spatial axes.
Tensor3 convolve2d(const Tensor3& input, const Conv2D& layer, const KernelSet& kernels = active_kernels());

/// `layer` with its kernel rotated by 180 degrees in the spatial plane.
Conv2D flip_kernel(const Conv2D& layer);

Tensor3 maxpool2d(const Tensor3& input, std::uint32_t filter, std::uint32_t stride,
                  const KernelSet& kernels = active_kernels());

std::vector<float> dense(std::span<const float> v, const Dense& layer, const KernelSet& kernels = active_kernels());

/// Applies one layer; Flatten and Dense outputs are 1 x 1 x N tensors.
Tensor3 apply_layer(const Tensor3& input, const Layer& layer, const KernelSet& kernels = active_kernels());

}  // namespace pyrorisk::cnn
