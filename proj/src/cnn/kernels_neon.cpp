// SPDX-License-Identifier: Apache-2.0
#include <arm_neon.h>

#include "pyrorisk/cnn/kernels.hpp"

namespace pyrorisk::cnn {

namespace {

void axpy_f64_neon(double* acc, const float* w, float x, std::size_t n) {
    const float64x2_t xv = vdupq_n_f64(static_cast<double>(x));
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float32x4_t w4 = vld1q_f32(w + i);
        const float64x2_t lo = vcvt_f64_f32(vget_low_f32(w4));
        const float64x2_t hi = vcvt_high_f64_f32(w4);
        vst1q_f64(acc + i, vfmaq_f64(vld1q_f64(acc + i), xv, lo));
        vst1q_f64(acc + i + 2, vfmaq_f64(vld1q_f64(acc + i + 2), xv, hi));
    }
    const double xd = x;
    for (; i < n; ++i) acc[i] += xd * static_cast<double>(w[i]);
}

void max_f32_neon(float* dst, const float* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float32x4_t a = vld1q_f32(dst + i);
        const float32x4_t b = vld1q_f32(src + i);
        vst1q_f32(dst + i, vbslq_f32(vcgtq_f32(a, b), a, b));
    }
    for (; i < n; ++i) dst[i] = dst[i] > src[i] ? dst[i] : src[i];
}

void relu_f32_neon(float* v, std::size_t n) {
    const float32x4_t zero = vdupq_n_f32(0.0f);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float32x4_t a = vld1q_f32(v + i);
        vst1q_f32(v + i, vbslq_f32(vcgtq_f32(a, zero), a, zero));
    }
    for (; i < n; ++i) v[i] = v[i] > 0.0f ? v[i] : 0.0f;
}

constexpr KernelSet kNeon{"neon", axpy_f64_neon, max_f32_neon, relu_f32_neon};

}  // namespace

namespace detail {
const KernelSet* neon_kernels() { return &kNeon; }
}  // namespace detail

}  // namespace pyrorisk::cnn
