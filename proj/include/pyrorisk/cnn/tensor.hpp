// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pyrorisk::cnn {

struct Shape {
    std::uint32_t height = 0;
    std::uint32_t width = 0;
    std::uint32_t channels = 0;

    std::size_t elements() const { return std::size_t{height} * width * channels; }
    bool operator==(const Shape&) const = default;
    std::string str() const;
};

/// H x W x C array of 32-bit reals stored row-major as (row, column,
/// channel): element (i, j, k) lives at (i * W + j) * C + k.
class Tensor3 {
public:
    Tensor3() = default;
    explicit Tensor3(Shape shape, float fill = 0.0f);
    Tensor3(Shape shape, std::vector<float> data);

    const Shape& shape() const { return shape_; }
    std::uint32_t height() const { return shape_.height; }
    std::uint32_t width() const { return shape_.width; }
    std::uint32_t channels() const { return shape_.channels; }

    float& at(std::size_t i, std::size_t j, std::size_t k) { return data_[(i * shape_.width + j) * shape_.channels + k]; }
    float at(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[(i * shape_.width + j) * shape_.channels + k];
    }

    /// The channel vector at pixel (i, j).
    std::span<float> pixel(std::size_t i, std::size_t j) {
        return {data_.data() + (i * shape_.width + j) * shape_.channels, shape_.channels};
    }
    std::span<const float> pixel(std::size_t i, std::size_t j) const {
        return {data_.data() + (i * shape_.width + j) * shape_.channels, shape_.channels};
    }

    std::span<float> data() { return data_; }
    std::span<const float> data() const { return data_; }
    std::vector<float> release() && { return std::move(data_); }

    bool operator==(const Tensor3&) const = default;

private:
    Shape shape_;
    std::vector<float> data_;
};

/// Row-major flattening; the inverse of reshape().
std::vector<float> flatten(const Tensor3& input);
Tensor3 reshape(std::vector<float> values, Shape shape);

}  // namespace pyrorisk::cnn
