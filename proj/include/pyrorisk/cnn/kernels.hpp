// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

/// Inner loops of the inference engine. Every routine has a scalar
/// reference implementation; SIMD variants (AVX2+FMA on x86-64, NEON on
/// AArch64) are compiled in separate translation units and picked at run
/// time from what the CPU reports. All variants produce bit-identical
/// results: float * float products are exact in double, so fused and
/// unfused accumulation round the same way, and max/relu are exact.
namespace pyrorisk::cnn {

struct KernelSet {
    std::string_view name;

    /// acc[i] += double(x) * double(w[i]) for i < n.
    void (*axpy_f64)(double* acc, const float* w, float x, std::size_t n);

    /// dst[i] = dst[i] > src[i] ? dst[i] : src[i].
    void (*max_f32)(float* dst, const float* src, std::size_t n);

    /// v[i] = v[i] > 0 ? v[i] : 0.
    void (*relu_f32)(float* v, std::size_t n);
};

const KernelSet& scalar_kernels();

/// Every variant this binary contains that the running CPU supports,
/// scalar first.
std::vector<const KernelSet*> available_kernels();

/// The widest supported variant, unless PYRORISK_SIMD names another one
/// ("scalar", "avx2", "neon"). Resolved once per process.
const KernelSet& active_kernels();

namespace detail {
const KernelSet* avx2_kernels();  // nullptr when not compiled in
const KernelSet* neon_kernels();
bool cpu_has_avx2_fma();
}  // namespace detail

}  // namespace pyrorisk::cnn
