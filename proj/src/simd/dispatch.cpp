#include <cstdlib>

#include "pamap/simd.hpp"

namespace pamap::simd {

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_available() { return __builtin_cpu_supports("avx2"); }
#endif

const Kernels& kernels() {
    static const Kernels& selected = []() -> const Kernels& {
        const char* force = std::getenv("PAMAP_FORCE_SCALAR");
        if (force && force[0] == '1') return scalar_kernels();
#if defined(__x86_64__) || defined(_M_X64)
        if (avx2_available()) return avx2_kernels();
#endif
        return scalar_kernels();
    }();
    return selected;
}

}  // namespace pamap::simd
