// SPDX-License-Identifier: Apache-2.0
#include "pyrorisk/cnn/tensor.hpp"

#include <cmath>

#include "pyrorisk/common/error.hpp"

namespace pyrorisk::cnn {

std::string Shape::str() const {
    return "(" + std::to_string(height) + "," + std::to_string(width) + "," + std::to_string(channels) + ")";
}

Tensor3::Tensor3(Shape shape, float fill) : shape_(shape), data_(shape.elements(), fill) {
    if (shape.height == 0 || shape.width == 0 || shape.channels == 0) throw DomainError("shape", "dimensions must be positive");
}

Tensor3::Tensor3(Shape shape, std::vector<float> data) : shape_(shape), data_(std::move(data)) {
    if (shape.height == 0 || shape.width == 0 || shape.channels == 0) throw DomainError("shape", "dimensions must be positive");
    if (data_.size() != shape.elements()) throw DomainError("data", "length differs from H*W*C of " + shape.str());
    for (float v : data_) {
        if (!std::isfinite(v)) throw DomainError("data", "tensor entries must be finite");
    }
}

std::vector<float> flatten(const Tensor3& input) { return {input.data().begin(), input.data().end()}; }

Tensor3 reshape(std::vector<float> values, Shape shape) { return Tensor3(shape, std::move(values)); }

}  // namespace pyrorisk::cnn
