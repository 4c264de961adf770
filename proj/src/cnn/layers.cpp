// SPDX-License-Identifier: Apache-2.0
#include "pyrorisk/cnn/layers.hpp"

#include <algorithm>
#include <string>

#include "pyrorisk/cnn/geometry.hpp"
#include "pyrorisk/common/error.hpp"

namespace pyrorisk::cnn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const Activation kNoActivation{};

void require_conv_weights(const Conv2D& layer) {
    if (layer.kernel.size() != layer.kernel_size()) throw DomainError("kernel", "size differs from f*f*C_in*C_out");
    if (layer.bias.size() != layer.out_channels) throw DomainError("bias", "size differs from C_out");
}

void require_dense_weights(const Dense& layer) {
    if (layer.weights.size() != std::size_t{layer.in} * layer.out) throw DomainError("weights", "size differs from in*out");
    if (layer.bias.size() != layer.out) throw DomainError("bias", "size differs from out");
}

}  // namespace

Shape output_shape(const Layer& layer, const Shape& in, bool strict) {
    return std::visit(
        overloaded{
            [&](const Conv2D& c) {
                if (c.in_channels != in.channels) {
                    throw DomainError("in_channels", "conv expects " + std::to_string(c.in_channels) +
                                                         " channels, input " + in.str() + " has " +
                                                         std::to_string(in.channels));
                }
                if (c.out_channels < 1) throw DomainError("out_channels", "must be >= 1");
                return Shape{out_size({in.height, c.pad, c.filter, c.stride}, strict),
                             out_size({in.width, c.pad, c.filter, c.stride}, strict), c.out_channels};
            },
            [&](const MaxPool& p) {
                return Shape{out_size({in.height, 0, p.filter, p.stride}, strict),
                             out_size({in.width, 0, p.filter, p.stride}, strict), in.channels};
            },
            [&](const Flatten&) { return Shape{1, 1, static_cast<std::uint32_t>(in.elements())}; },
            [&](const Dense& d) {
                if (in.height != 1 || in.width != 1) throw DomainError("dense", "input " + in.str() + " must be flattened first");
                if (d.in != in.channels) {
                    throw DomainError("in", "dense expects " + std::to_string(d.in) + " inputs, got " + std::to_string(in.channels));
                }
                if (d.out < 1) throw DomainError("out", "must be >= 1");
                return Shape{1, 1, d.out};
            },
        },
        layer);
}

std::uint64_t param_count(const Layer& layer) {
    return std::visit(overloaded{
                          [](const Conv2D& c) -> std::uint64_t {
                              return std::uint64_t{c.filter} * c.filter * c.in_channels * c.out_channels + c.out_channels;
                          },
                          [](const MaxPool&) -> std::uint64_t { return 0; },
                          [](const Flatten&) -> std::uint64_t { return 0; },
                          [](const Dense& d) -> std::uint64_t { return std::uint64_t{d.in} * d.out + d.out; },
                      },
                      layer);
}

bool is_frozen(const Layer& layer) {
    return std::visit([](const auto& l) { return l.frozen; }, layer);
}

const Activation& activation_of(const Layer& layer) {
    if (const auto* c = std::get_if<Conv2D>(&layer)) return c->activation;
    if (const auto* d = std::get_if<Dense>(&layer)) return d->activation;
    return kNoActivation;
}

Tensor3 conv2d(const Tensor3& input, const Conv2D& layer, const KernelSet& kernels) {
    require_conv_weights(layer);
    const Shape out_shape = output_shape(layer, input.shape());
    Tensor3 out(out_shape);
    const auto f = layer.filter;
    const auto cin = layer.in_channels;
    const auto cout = layer.out_channels;
    const auto pad = static_cast<std::int64_t>(layer.pad);
    std::vector<double> acc(cout);
    for (std::uint32_t i = 0; i < out_shape.height; ++i) {
        for (std::uint32_t j = 0; j < out_shape.width; ++j) {
            std::fill(acc.begin(), acc.end(), 0.0);
            for (std::uint32_t a = 0; a < f; ++a) {
                const std::int64_t r = std::int64_t{i} * layer.stride + a - pad;
                if (r < 0 || r >= input.height()) continue;
                for (std::uint32_t b = 0; b < f; ++b) {
                    const std::int64_t c = std::int64_t{j} * layer.stride + b - pad;
                    if (c < 0 || c >= input.width()) continue;
                    const auto px = input.pixel(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
                    const float* w = layer.kernel.data() + (std::size_t{a} * f + b) * cin * cout;
                    for (std::uint32_t ch = 0; ch < cin; ++ch) kernels.axpy_f64(acc.data(), w + std::size_t{ch} * cout, px[ch], cout);
                }
            }
            auto dst = out.pixel(i, j);
            for (std::uint32_t o = 0; o < cout; ++o) dst[o] = static_cast<float>(acc[o] + layer.bias[o]);
            apply_activation(layer.activation, dst);
        }
    }
    return out;
}

Conv2D flip_kernel(const Conv2D& layer) {
    require_conv_weights(layer);
    Conv2D flipped = layer;
    const auto f = layer.filter;
    for (std::uint32_t a = 0; a < f; ++a)
        for (std::uint32_t b = 0; b < f; ++b)
            for (std::uint32_t c = 0; c < layer.in_channels; ++c)
                for (std::uint32_t o = 0; o < layer.out_channels; ++o) flipped.k(a, b, c, o) = layer.k(f - 1 - a, f - 1 - b, c, o);
    return flipped;
}

Tensor3 convolve2d(const Tensor3& input, const Conv2D& layer, const KernelSet& kernels) {
    return conv2d(input, flip_kernel(layer), kernels);
}

Tensor3 maxpool2d(const Tensor3& input, std::uint32_t filter, std::uint32_t stride, const KernelSet& kernels) {
    const Shape out_shape = output_shape(MaxPool{filter, stride}, input.shape());
    Tensor3 out(out_shape);
    const auto ch = input.channels();
    for (std::uint32_t i = 0; i < out_shape.height; ++i) {
        for (std::uint32_t j = 0; j < out_shape.width; ++j) {
            auto dst = out.pixel(i, j);
            const auto first = input.pixel(std::size_t{i} * stride, std::size_t{j} * stride);
            std::copy(first.begin(), first.end(), dst.begin());
            for (std::uint32_t a = 0; a < filter; ++a) {
                for (std::uint32_t b = 0; b < filter; ++b) {
                    const auto src = input.pixel(std::size_t{i} * stride + a, std::size_t{j} * stride + b);
                    kernels.max_f32(dst.data(), src.data(), ch);
                }
            }
        }
    }
    return out;
}

std::vector<float> dense(std::span<const float> v, const Dense& layer, const KernelSet& kernels) {
    require_dense_weights(layer);
    if (v.size() != layer.in) {
        throw DomainError("input", "dense expects " + std::to_string(layer.in) + " inputs, got " + std::to_string(v.size()));
    }
    std::vector<double> acc(layer.out, 0.0);
    for (std::uint32_t i = 0; i < layer.in; ++i) kernels.axpy_f64(acc.data(), layer.weights.data() + std::size_t{i} * layer.out, v[i], layer.out);
    std::vector<float> out(layer.out);
    for (std::uint32_t o = 0; o < layer.out; ++o) out[o] = static_cast<float>(acc[o] + layer.bias[o]);
    apply_activation(layer.activation, out);
    return out;
}

Tensor3 apply_layer(const Tensor3& input, const Layer& layer, const KernelSet& kernels) {
    return std::visit(overloaded{
                          [&](const Conv2D& c) { return conv2d(input, c, kernels); },
                          [&](const MaxPool& p) { return maxpool2d(input, p.filter, p.stride, kernels); },
                          [&](const Flatten&) {
                              return Tensor3({1, 1, static_cast<std::uint32_t>(input.shape().elements())}, flatten(input));
                          },
                          [&](const Dense& d) {
                              if (input.height() != 1 || input.width() != 1) {
                                  throw DomainError("dense", "input " + input.shape().str() + " must be flattened first");
                              }
                              return Tensor3({1, 1, d.out}, dense(input.data(), d, kernels));
                          },
                      },
                      layer);
}

}  // namespace pyrorisk::cnn
