// SPDX-License-Identifier: Apache-2.0
#include "pyrorisk/cnn/activation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pyrorisk/cnn/kernels.hpp"
#include "pyrorisk/common/error.hpp"

namespace pyrorisk::cnn {

std::string_view to_string(ActivationKind kind) {
    switch (kind) {
        case ActivationKind::None: return "none";
        case ActivationKind::ReLU: return "relu";
        case ActivationKind::LeakyReLU: return "leaky_relu";
        case ActivationKind::Tanh: return "tanh";
        case ActivationKind::Sigmoid: return "sigmoid";
        case ActivationKind::Softmax: return "softmax";
    }
    return "?";
}

ActivationKind parse_activation(std::string_view name) {
    for (auto k : {ActivationKind::None, ActivationKind::ReLU, ActivationKind::LeakyReLU, ActivationKind::Tanh,
                   ActivationKind::Sigmoid, ActivationKind::Softmax}) {
        if (to_string(k) == name) return k;
    }
    throw DomainError("activation", "unknown activation '" + std::string(name) + "'");
}

double relu(double x) { return x > 0.0 ? x : 0.0; }

double leaky_relu(double x, double alpha) { return x > 0.0 ? x : alpha * x; }

double tanh_act(double x) { return std::tanh(x); }

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

std::vector<double> softmax(std::span<const double> logits) {
    if (logits.empty()) return {};
    const double top = *std::max_element(logits.begin(), logits.end());
    std::vector<double> out(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - top);
        sum += out[i];
    }
    for (auto& v : out) v /= sum;
    return out;
}

void apply_activation(const Activation& act, std::span<float> values) {
    switch (act.kind) {
        case ActivationKind::None: return;
        case ActivationKind::ReLU: active_kernels().relu_f32(values.data(), values.size()); return;
        case ActivationKind::LeakyReLU:
            for (auto& v : values) v = static_cast<float>(leaky_relu(v, act.alpha));
            return;
        case ActivationKind::Tanh:
            for (auto& v : values) v = static_cast<float>(std::tanh(static_cast<double>(v)));
            return;
        case ActivationKind::Sigmoid:
            for (auto& v : values) v = static_cast<float>(sigmoid(v));
            return;
        case ActivationKind::Softmax: {
            std::vector<double> logits(values.begin(), values.end());
            const auto p = softmax(logits);
            for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<float>(p[i]);
            return;
        }
    }
}

}  // namespace pyrorisk::cnn
