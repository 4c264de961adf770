// SPDX-License-Identifier: Apache-2.0
#include "pyrorisk/cnn/network.hpp"

#include "pyrorisk/common/error.hpp"

namespace pyrorisk::cnn {

ParamCount count_params(std::span<const Layer> layers) {
    ParamCount count;
    for (const auto& layer : layers) {
        const auto n = param_count(layer);
        count.total += n;
        if (!is_frozen(layer)) count.trainable += n;
    }
    return count;
}

std::vector<Shape> shape_chain(const Shape& input, std::span<const Layer> layers, bool strict) {
    if (input.elements() == 0) throw DomainError("input_shape", "dimensions must be positive");
    std::vector<Shape> shapes{input};
    for (std::size_t i = 0; i < layers.size(); ++i) {
        try {
            shapes.push_back(output_shape(layers[i], shapes.back(), strict));
        } catch (const DomainError& e) {
            throw DomainError("layer " + std::to_string(i), e.what());
        }
    }
    return shapes;
}

Network Network::build(std::vector<Layer> layers, Shape input, NetworkOptions options) {
    if (layers.empty()) throw DomainError("layers", "network has no layers");
    Network net;
    net.shapes_ = shape_chain(input, layers, options.strict_geometry);
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const auto& l = layers[i];
        const auto where = "layer " + std::to_string(i);
        if (const auto* c = std::get_if<Conv2D>(&l)) {
            if (c->kernel.size() != c->kernel_size() || c->bias.size() != c->out_channels) {
                throw DomainError(where, "conv weight arrays do not match declared dimensions");
            }
        } else if (const auto* d = std::get_if<Dense>(&l)) {
            if (d->weights.size() != std::size_t{d->in} * d->out || d->bias.size() != d->out) {
                throw DomainError(where, "dense weight arrays do not match declared dimensions");
            }
        }
    }
    const auto final_act = activation_of(layers.back()).kind;
    if (final_act == ActivationKind::Sigmoid) {
        net.head_ = HeadKind::Sigmoid;
    } else if (final_act == ActivationKind::Softmax) {
        net.head_ = HeadKind::Softmax;
    } else {
        throw DomainError("layers", "final layer must end in sigmoid or softmax");
    }
    if (!options.class_labels.empty() && options.class_labels.size() != net.shapes_.back().elements()) {
        throw DomainError("class_labels", "count differs from network outputs");
    }
    net.layers_ = std::move(layers);
    net.options_ = std::move(options);
    return net;
}

ClassScores Network::forward(const Tensor3& input, const KernelSet& kernels) const {
    if (!(input.shape() == input_shape())) {
        throw DomainError("input", "shape " + input.shape().str() + " differs from network input " + input_shape().str());
    }
    Tensor3 x = input;
    for (const auto& layer : layers_) x = apply_layer(x, layer, kernels);
    ClassScores scores;
    scores.head = head_;
    scores.probabilities.assign(x.data().begin(), x.data().end());
    scores.labels = options_.class_labels;
    return scores;
}

}  // namespace pyrorisk::cnn
