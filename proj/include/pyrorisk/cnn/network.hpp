// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pyrorisk/cnn/layers.hpp"
#include "pyrorisk/cnn/tensor.hpp"

namespace pyrorisk::cnn {

enum class HeadKind { Sigmoid, Softmax };

/// Final-layer probabilities. Softmax heads sum to 1; sigmoid heads give an
/// independent score per class.
struct ClassScores {
    HeadKind head = HeadKind::Softmax;
    std::vector<double> probabilities;
    std::vector<std::string> labels;
};

struct ParamCount {
    std::uint64_t total = 0;
    std::uint64_t trainable = 0;
    bool operator==(const ParamCount&) const = default;
};

ParamCount count_params(std::span<const Layer> layers);

/// Shapes after each layer, input first. Throws DomainError naming the
/// failing layer when any adjacent pair is incompatible.
std::vector<Shape> shape_chain(const Shape& input, std::span<const Layer> layers, bool strict = false);

struct NetworkOptions {
    bool strict_geometry = false;  // reject windows that do not tile the input exactly
    std::string name;
    std::vector<std::string> class_labels;
};

/// An immutable, validated layer stack bound to an input shape. Forward is
/// pure and reentrant; one Network may serve any number of threads.
class Network {
public:
    /// Validates weight sizes and the full shape chain; the last layer must
    /// end in a sigmoid or softmax activation.
    static Network build(std::vector<Layer> layers, Shape input, NetworkOptions options = {});

    ClassScores forward(const Tensor3& input, const KernelSet& kernels = active_kernels()) const;

    const std::vector<Layer>& layers() const { return layers_; }
    const Shape& input_shape() const { return shapes_.front(); }
    const std::vector<Shape>& shapes() const { return shapes_; }
    const NetworkOptions& options() const { return options_; }
    HeadKind head() const { return head_; }
    std::size_t class_count() const { return shapes_.back().elements(); }
    ParamCount params() const { return count_params(layers_); }

private:
    std::vector<Layer> layers_;
    std::vector<Shape> shapes_;
    NetworkOptions options_;
    HeadKind head_ = HeadKind::Softmax;
};

}  // namespace pyrorisk::cnn
