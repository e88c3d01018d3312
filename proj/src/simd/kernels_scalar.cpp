#include <limits>

#include "pamap/simd.hpp"

namespace pamap::simd {

namespace {

inline std::size_t locate(const PLFlat& f, double x) {
    // last i with xs[i] <= x, clamped to a segment start
    std::size_t lo = 0, hi = f.xs.size();
    while (hi - lo > 1) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (f.xs[mid] <= x)
            lo = mid;
        else
            hi = mid;
    }
    if (lo + 1 >= f.xs.size()) lo = f.xs.size() - 2;
    return lo;
}

void pl_eval_scalar(const PLFlat& f, const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double xi = x[i];
        xi = xi < f.lo ? f.lo : xi;
        xi = xi > f.hi ? f.hi : xi;
        std::size_t s = locate(f, xi);
        out[i] = f.ys[s] + (xi - f.xs[s]) * f.slopes[s];
    }
}

void band_step_scalar(const PLFlat& f, double delta, double delta2, double* xs, double* ys,
                      std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double x = xs[i];
        double a = delta * (x - 0.5);
        double b = delta2 * ys[i];
        ys[i] = a + b;
        x = x < f.lo ? f.lo : x;
        x = x > f.hi ? f.hi : x;
        std::size_t s = locate(f, x);
        xs[i] = f.ys[s] + (x - f.xs[s]) * f.slopes[s];
    }
}

double min_sqdist_scalar(double qx, double qy, const double* xs, const double* ys, std::size_t n) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double dx = qx - xs[i];
        double dy = qy - ys[i];
        double d = dx * dx + dy * dy;
        if (d < best) best = d;
    }
    return best;
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels k{"scalar", pl_eval_scalar, band_step_scalar, min_sqdist_scalar};
    return k;
}

}  // namespace pamap::simd
