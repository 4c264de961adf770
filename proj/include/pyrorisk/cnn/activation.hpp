// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace pyrorisk::cnn {

enum class ActivationKind : std::uint8_t {
    None = 0,
    ReLU = 1,
    LeakyReLU = 2,
    Tanh = 3,
    Sigmoid = 4,
    Softmax = 5,
};

struct Activation {
    ActivationKind kind = ActivationKind::None;
    float alpha = 0.0f;  // LeakyReLU negative slope; ignored otherwise

    bool operator==(const Activation&) const = default;
};

std::string_view to_string(ActivationKind kind);
ActivationKind parse_activation(std::string_view name);

double relu(double x);
double leaky_relu(double x, double alpha);
double tanh_act(double x);
/// Branches on sign so neither tail overflows.
double sigmoid(double x);
/// Max-subtracted softmax; entries in (0, 1) summing to 1.
std::vector<double> softmax(std::span<const double> logits);

/// Applies `act` to a vector of pre-activations. Softmax normalises the
/// whole span; everything else is element-wise.
void apply_activation(const Activation& act, std::span<float> values);

}  // namespace pyrorisk::cnn
