// SPDX-License-Identifier: Apache-2.0
#include "pyrorisk/cnn/kernels.hpp"

namespace pyrorisk::cnn {

namespace {

void axpy_f64_scalar(double* acc, const float* w, float x, std::size_t n) {
    const double xd = x;
    for (std::size_t i = 0; i < n; ++i) acc[i] += xd * static_cast<double>(w[i]);
}

void max_f32_scalar(float* dst, const float* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = dst[i] > src[i] ? dst[i] : src[i];
}

void relu_f32_scalar(float* v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) v[i] = v[i] > 0.0f ? v[i] : 0.0f;
}

constexpr KernelSet kScalar{"scalar", axpy_f64_scalar, max_f32_scalar, relu_f32_scalar};

}  // namespace

const KernelSet& scalar_kernels() { return kScalar; }

}  // namespace pyrorisk::cnn
