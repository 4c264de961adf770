// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <string_view>

#include "pyrorisk/cnn/kernels.hpp"

namespace pyrorisk::cnn {

namespace detail {

#if !defined(PYRORISK_HAVE_AVX2)
const KernelSet* avx2_kernels() { return nullptr; }
#endif
#if !defined(PYRORISK_HAVE_NEON)
const KernelSet* neon_kernels() { return nullptr; }
#endif

bool cpu_has_avx2_fma() {
#if defined(PYRORISK_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

}  // namespace detail

std::vector<const KernelSet*> available_kernels() {
    std::vector<const KernelSet*> sets{&scalar_kernels()};
    if (const auto* k = detail::avx2_kernels(); k && detail::cpu_has_avx2_fma()) sets.push_back(k);
    // Advanced SIMD is mandatory on AArch64.
    if (const auto* k = detail::neon_kernels()) sets.push_back(k);
    return sets;
}

const KernelSet& active_kernels() {
    static const KernelSet& chosen = [] () -> const KernelSet& {
        const auto sets = available_kernels();
        if (const char* want = std::getenv("PYRORISK_SIMD")) {
            for (const auto* k : sets) {
                if (k->name == std::string_view(want)) return *k;
            }
        }
        return *sets.back();
    }();
    return chosen;
}

}  // namespace pyrorisk::cnn
