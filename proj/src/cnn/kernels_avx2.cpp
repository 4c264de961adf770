// SPDX-License-Identifier: Apache-2.0
// Built with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "pyrorisk/cnn/kernels.hpp"

namespace pyrorisk::cnn {

namespace {

void axpy_f64_avx2(double* acc, const float* w, float x, std::size_t n) {
    const __m256d xv = _mm256_set1_pd(static_cast<double>(x));
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 w8 = _mm256_loadu_ps(w + i);
        const __m256d lo = _mm256_cvtps_pd(_mm256_castps256_ps128(w8));
        const __m256d hi = _mm256_cvtps_pd(_mm256_extractf128_ps(w8, 1));
        _mm256_storeu_pd(acc + i, _mm256_fmadd_pd(xv, lo, _mm256_loadu_pd(acc + i)));
        _mm256_storeu_pd(acc + i + 4, _mm256_fmadd_pd(xv, hi, _mm256_loadu_pd(acc + i + 4)));
    }
    for (; i + 4 <= n; i += 4) {
        const __m256d wd = _mm256_cvtps_pd(_mm_loadu_ps(w + i));
        _mm256_storeu_pd(acc + i, _mm256_fmadd_pd(xv, wd, _mm256_loadu_pd(acc + i)));
    }
    const double xd = x;
    for (; i < n; ++i) acc[i] += xd * static_cast<double>(w[i]);
}

void max_f32_avx2(float* dst, const float* src, std::size_t n) {
    std::size_t i = 0;
    // maxps(a, b) returns b unless a > b, matching the scalar definition.
    for (; i + 8 <= n; i += 8) {
        _mm256_storeu_ps(dst + i, _mm256_max_ps(_mm256_loadu_ps(dst + i), _mm256_loadu_ps(src + i)));
    }
    for (; i < n; ++i) dst[i] = dst[i] > src[i] ? dst[i] : src[i];
}

void relu_f32_avx2(float* v, std::size_t n) {
    const __m256 zero = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) _mm256_storeu_ps(v + i, _mm256_max_ps(_mm256_loadu_ps(v + i), zero));
    for (; i < n; ++i) v[i] = v[i] > 0.0f ? v[i] : 0.0f;
}

constexpr KernelSet kAvx2{"avx2", axpy_f64_avx2, max_f32_avx2, relu_f32_avx2};

}  // namespace

namespace detail {
const KernelSet* avx2_kernels() { return &kAvx2; }
}  // namespace detail

}  // namespace pyrorisk::cnn
