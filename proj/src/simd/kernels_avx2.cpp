#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstdint>
#include <limits>

#include "pamap/simd.hpp"

namespace pamap::simd {

namespace {

// Segment lookup stays scalar per lane (integer work); the floating-point
// arithmetic is vectorized with mul+add kept separate so results match the
// scalar kernels bit-for-bit.
inline std::int32_t locate32(const PLFlat& f, double x) {
    std::size_t lo = 0, hi = f.xs.size();
    while (hi - lo > 1) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (f.xs[mid] <= x)
            lo = mid;
        else
            hi = mid;
    }
    if (lo + 1 >= f.xs.size()) lo = f.xs.size() - 2;
    return static_cast<std::int32_t>(lo);
}

inline __m256d eval4(const PLFlat& f, __m256d x) {
    const __m256d vlo = _mm256_set1_pd(f.lo);
    const __m256d vhi = _mm256_set1_pd(f.hi);
    x = _mm256_min_pd(_mm256_max_pd(x, vlo), vhi);
    alignas(32) double xb[4];
    _mm256_store_pd(xb, x);
    alignas(16) std::int32_t idx[4];
    for (int l = 0; l < 4; ++l) idx[l] = locate32(f, xb[l]);
    __m128i vi = _mm_load_si128(reinterpret_cast<const __m128i*>(idx));
    __m256d x0 = _mm256_i32gather_pd(f.xs.data(), vi, 8);
    __m256d y0 = _mm256_i32gather_pd(f.ys.data(), vi, 8);
    __m256d sl = _mm256_i32gather_pd(f.slopes.data(), vi, 8);
    return _mm256_add_pd(y0, _mm256_mul_pd(_mm256_sub_pd(x, x0), sl));
}

void pl_eval_avx2(const PLFlat& f, const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, eval4(f, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) {
        double xi = x[i];
        xi = xi < f.lo ? f.lo : xi;
        xi = xi > f.hi ? f.hi : xi;
        std::int32_t s = locate32(f, xi);
        out[i] = f.ys[s] + (xi - f.xs[s]) * f.slopes[s];
    }
}

void band_step_avx2(const PLFlat& f, double delta, double delta2, double* xs, double* ys,
                    std::size_t n) {
    const __m256d vd = _mm256_set1_pd(delta);
    const __m256d vd2 = _mm256_set1_pd(delta2);
    const __m256d vhalf = _mm256_set1_pd(0.5);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d x = _mm256_loadu_pd(xs + i);
        __m256d y = _mm256_loadu_pd(ys + i);
        __m256d a = _mm256_mul_pd(vd, _mm256_sub_pd(x, vhalf));
        __m256d b = _mm256_mul_pd(vd2, y);
        _mm256_storeu_pd(ys + i, _mm256_add_pd(a, b));
        _mm256_storeu_pd(xs + i, eval4(f, x));
    }
    for (; i < n; ++i) {
        double x = xs[i];
        double a = delta * (x - 0.5);
        double b = delta2 * ys[i];
        ys[i] = a + b;
        x = x < f.lo ? f.lo : x;
        x = x > f.hi ? f.hi : x;
        std::int32_t s = locate32(f, x);
        xs[i] = f.ys[s] + (x - f.xs[s]) * f.slopes[s];
    }
}

double min_sqdist_avx2(double qx, double qy, const double* xs, const double* ys, std::size_t n) {
    const __m256d vqx = _mm256_set1_pd(qx);
    const __m256d vqy = _mm256_set1_pd(qy);
    __m256d vbest = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d dx = _mm256_sub_pd(vqx, _mm256_loadu_pd(xs + i));
        __m256d dy = _mm256_sub_pd(vqy, _mm256_loadu_pd(ys + i));
        __m256d d = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        vbest = _mm256_min_pd(vbest, d);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vbest);
    double best = lanes[0];
    for (int l = 1; l < 4; ++l)
        if (lanes[l] < best) best = lanes[l];
    for (; i < n; ++i) {
        double dx = qx - xs[i];
        double dy = qy - ys[i];
        double d = dx * dx + dy * dy;
        if (d < best) best = d;
    }
    return best;
}

}  // namespace

const Kernels& avx2_kernels() {
    static const Kernels k{"avx2", pl_eval_avx2, band_step_avx2, min_sqdist_avx2};
    return k;
}

}  // namespace pamap::simd

#endif
