#pragma once

#include <cstddef>

#include "pamap/plmap.hpp"

namespace pamap::simd {

// Double-precision inner loops for the sampling/rendering lane. Variants
// must agree bit-for-bit with the scalar reference: same IEEE operations in
// the same per-element order, no FMA contraction (the build sets
// -ffp-contract=off). Determinism of emitted artifacts depends on this.
struct Kernels {
    const char* name;
    // out[i] = f(x[i]) with x clamped to the domain
    void (*pl_eval)(const PLFlat& f, const double* x, double* out, std::size_t n);
    // in place: y[i] = delta*(x[i]-1/2) + delta2*y[i], then x[i] = f(x[i])
    void (*band_step)(const PLFlat& f, double delta, double delta2, double* xs, double* ys,
                      std::size_t n);
    // min over i of (qx-xs[i])^2 + (qy-ys[i])^2; +inf for empty input
    double (*min_sqdist)(double qx, double qy, const double* xs, const double* ys, std::size_t n);
};

const Kernels& scalar_kernels();

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_available();
const Kernels& avx2_kernels();
#endif

// Runtime selection: best available unless PAMAP_FORCE_SCALAR=1.
const Kernels& kernels();

}  // namespace pamap::simd
