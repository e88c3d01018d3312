#include "pamap/bbm.hpp"

#include <algorithm>
#include <cmath>

#include "pamap/errors.hpp"
#include "pamap/rng.hpp"
#include "pamap/simd.hpp"

namespace pamap {

namespace {

void require_delta(const Rational& delta) {
    if (!(delta > 0 && 2 * delta <= 1)) throw DomainError("band delta must satisfy 0 < delta <= 1/2");
}

}  // namespace

BandPointR band_map(const PLMap& f, const Rational& delta, const BandPointR& p) {
    require_delta(delta);
    if (p.x < 0 || p.x > 1 || p.y < -1 || p.y > 1)
        throw DomainError("band point outside [0,1] x [-1,1]");
    return BandPointR{f(p.x), delta * (p.x - rat(1, 2)) + delta * delta * p.y};
}

AttractorCloud attractor_cloud(const PLMap& f, const Rational& delta, int burn_in, int kept,
                               int seeds, std::uint64_t seed) {
    require_delta(delta);
    if (burn_in < 0 || kept < 1 || seeds < 1) throw DomainError("cloud budgets must be positive");
    AttractorCloud cloud;
    cloud.map_hash = content_hash(f);
    cloud.delta = delta;
    cloud.burn_in = burn_in;
    cloud.kept = kept;
    cloud.seeds = seeds;
    cloud.seed = seed;

    const double d = to_double(delta);
    const double d2 = d * d;
    PLFlat flat = flatten(f);
    const auto& k = simd::kernels();

    std::vector<double> xs(static_cast<std::size_t>(seeds)), ys(xs.size());
    for (int s = 0; s < seeds; ++s) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
        xs[static_cast<std::size_t>(s)] = rng.next_double();
        ys[static_cast<std::size_t>(s)] = 2.0 * rng.next_double() - 1.0;
    }
    for (int i = 0; i < burn_in; ++i) k.band_step(flat, d, d2, xs.data(), ys.data(), xs.size());
    cloud.xs.reserve(static_cast<std::size_t>(seeds) * static_cast<std::size_t>(kept));
    cloud.ys.reserve(cloud.xs.capacity());
    for (int i = 0; i < kept; ++i) {
        k.band_step(flat, d, d2, xs.data(), ys.data(), xs.size());
        cloud.xs.insert(cloud.xs.end(), xs.begin(), xs.end());
        cloud.ys.insert(cloud.ys.end(), ys.begin(), ys.end());
    }
    return cloud;
}

Raster attractor_raster(const AttractorCloud& cloud, int width, int height) {
    if (width < 1 || height < 1) throw DomainError("raster dimensions must be positive");
    Raster r;
    r.width = width;
    r.height = height;
    r.counts.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
    for (std::size_t i = 0; i < cloud.xs.size(); ++i) {
        double x = cloud.xs[i], y = cloud.ys[i];
        int px = static_cast<int>(std::floor(x * width));
        int py = static_cast<int>(std::floor((y + 1.0) * 0.5 * height));
        px = std::clamp(px, 0, width - 1);
        py = std::clamp(py, 0, height - 1);
        int row = height - 1 - py;  // row 0 = top of the band
        ++r.counts[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                   static_cast<std::size_t>(px)];
    }
    return r;
}

std::string raster_to_pgm(const Raster& r) {
    std::uint32_t maxc = 0;
    for (auto c : r.counts) maxc = std::max(maxc, c);
    std::string out = "P5\n" + std::to_string(r.width) + " " + std::to_string(r.height) + "\n255\n";
    out.reserve(out.size() + r.counts.size());
    for (auto c : r.counts) {
        unsigned byte = maxc ? static_cast<unsigned>((static_cast<std::uint64_t>(c) * 255) / maxc)
                             : 0;
        out.push_back(static_cast<char>(static_cast<unsigned char>(byte)));
    }
    return out;
}

namespace {

struct Grid {
    double x0, y0, cell;
    int nx, ny;
    // bucketed SoA copies for the simd min-distance kernel
    std::vector<std::vector<double>> bx, by;

    Grid(const std::vector<double>& xs, const std::vector<double>& ys, int target_buckets) {
        double xlo = xs[0], xhi = xs[0], ylo = ys[0], yhi = ys[0];
        for (std::size_t i = 0; i < xs.size(); ++i) {
            xlo = std::min(xlo, xs[i]);
            xhi = std::max(xhi, xs[i]);
            ylo = std::min(ylo, ys[i]);
            yhi = std::max(yhi, ys[i]);
        }
        double ext = std::max(xhi - xlo, yhi - ylo);
        if (ext <= 0) ext = 1e-12;
        int side = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(target_buckets))));
        cell = ext / side;
        x0 = xlo;
        y0 = ylo;
        nx = static_cast<int>((xhi - xlo) / cell) + 1;
        ny = static_cast<int>((yhi - ylo) / cell) + 1;
        bx.resize(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
        by.resize(bx.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            auto b = bucket(xs[i], ys[i]);
            bx[b].push_back(xs[i]);
            by[b].push_back(ys[i]);
        }
    }

    std::size_t bucket(double x, double y) const {
        int ix = std::clamp(static_cast<int>((x - x0) / cell), 0, nx - 1);
        int iy = std::clamp(static_cast<int>((y - y0) / cell), 0, ny - 1);
        return static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) +
               static_cast<std::size_t>(ix);
    }
};

double directed_hausdorff(const std::vector<double>& ax, const std::vector<double>& ay,
                          const Grid& g) {
    const auto& k = simd::kernels();
    double worst = 0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
        double qx = ax[i], qy = ay[i];
        int cx = std::clamp(static_cast<int>((qx - g.x0) / g.cell), 0, g.nx - 1);
        int cy = std::clamp(static_cast<int>((qy - g.y0) / g.cell), 0, g.ny - 1);
        double best = std::numeric_limits<double>::infinity();
        for (int ring = 0; ring < std::max(g.nx, g.ny); ++ring) {
            // ring distance lower bound: points outside the ring are at
            // least (ring-1)*cell away
            if (best < std::numeric_limits<double>::infinity()) {
                double lb = (ring - 1) * g.cell;
                if (lb > 0 && lb * lb > best) break;
            }
            bool any_cell = false;
            for (int iy = cy - ring; iy <= cy + ring; ++iy) {
                if (iy < 0 || iy >= g.ny) continue;
                for (int ix = cx - ring; ix <= cx + ring; ++ix) {
                    if (ix < 0 || ix >= g.nx) continue;
                    if (std::max(std::abs(ix - cx), std::abs(iy - cy)) != ring) continue;
                    any_cell = true;
                    std::size_t b = static_cast<std::size_t>(iy) * static_cast<std::size_t>(g.nx) +
                                    static_cast<std::size_t>(ix);
                    if (g.bx[b].empty()) continue;
                    double d = k.min_sqdist(qx, qy, g.bx[b].data(), g.by[b].data(), g.bx[b].size());
                    if (d < best) best = d;
                }
            }
            if (!any_cell && best < std::numeric_limits<double>::infinity()) break;
        }
        if (best > worst) worst = best;
    }
    return std::sqrt(worst);
}

}  // namespace

double hausdorff_distance(const AttractorCloud& A, const AttractorCloud& B) {
    if (A.xs.empty() || B.xs.empty()) throw DomainError("hausdorff_distance needs nonempty clouds");
    Grid gb(B.xs, B.ys, static_cast<int>(B.xs.size()));
    Grid ga(A.xs, A.ys, static_cast<int>(A.xs.size()));
    return std::max(directed_hausdorff(A.xs, A.ys, gb), directed_hausdorff(B.xs, B.ys, ga));
}

EdgeCertificate edge_dynamics_check(const PLMap& f, const Rational& delta) {
    require_delta(delta);
    EdgeCertificate cert;
    Rational f0 = f(rat(0)), f1 = f(rat(1));
    if (f0 == 0) {
        cert.kind = EdgeDynamics::fixed_edge;
        // y = -delta/2 + delta^2 y on the x=0 fiber
        cert.fixed_y = Rational(-(delta / 2) / (1 - delta * delta));
    } else if (f0 == 1 && f1 == 0) {
        cert.kind = EdgeDynamics::swapped_edges;
        Rational y0 = (delta / 2) / (1 + delta * delta);
        cert.period2_y = std::make_pair(y0, Rational(-y0));
    }
    return cert;
}

RotationEstimate estimate_boundary_rotation(const PLMap& f, const Rational& delta,
                                            int n_band_iters, int samples) {
    require_delta(delta);
    if (samples < 8) throw DomainError("too few boundary samples");
    if (n_band_iters < 1) throw DomainError("need at least one band iteration");

    // boundary loop of [0,1] x [-1,1], counterclockwise from (0,0)
    auto boundary_point = [](double s) {
        s -= std::floor(s);
        double per = 6.0, t = s * per;
        if (t < 1.0) return std::pair<double, double>(0.0, -t);            // down left edge
        t -= 1.0;
        if (t < 1.0) return std::pair<double, double>(t, -1.0);            // bottom
        t -= 1.0;
        if (t < 2.0) return std::pair<double, double>(1.0, -1.0 + t);      // right edge up
        t -= 2.0;
        if (t < 1.0) return std::pair<double, double>(1.0 - t, 1.0);       // top
        t -= 1.0;
        return std::pair<double, double>(0.0, 1.0 - t);                    // left edge down
    };

    const double d = to_double(delta), d2 = d * d;
    PLFlat flat = flatten(f);
    const auto& k = simd::kernels();
    std::vector<double> xs(static_cast<std::size_t>(samples)), ys(xs.size());
    for (int i = 0; i < samples; ++i) {
        auto [x, y] = boundary_point(static_cast<double>(i) / samples);
        xs[static_cast<std::size_t>(i)] = x;
        ys[static_cast<std::size_t>(i)] = y;
    }
    for (int i = 0; i < n_band_iters; ++i) k.band_step(flat, d, d2, xs.data(), ys.data(), xs.size());
    std::vector<double> qx = xs, qy = ys;
    k.band_step(flat, d, d2, qx.data(), qy.data(), qx.size());

    auto angle = [](double x, double y) { return std::atan2(y, x - 0.5); };
    auto wrap = [](double a) {
        const double pi = std::acos(-1.0);
        while (a <= -pi) a += 2 * pi;
        while (a > pi) a -= 2 * pi;
        return a;
    };

    // lift both curves continuously along the sample order
    std::vector<double> th(xs.size()), ph(xs.size());
    th[0] = angle(xs[0], ys[0]);
    ph[0] = th[0] + wrap(angle(qx[0], qy[0]) - angle(xs[0], ys[0]));
    for (std::size_t i = 1; i < xs.size(); ++i) {
        th[i] = th[i - 1] + wrap(angle(xs[i], ys[i]) - angle(xs[i - 1], ys[i - 1]));
        ph[i] = ph[i - 1] + wrap(angle(qx[i], qy[i]) - angle(qx[i - 1], qy[i - 1]));
    }
    double sc = 0, ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double disp = ph[i] - th[i];
        sc += std::cos(disp);
        ss += std::sin(disp);
    }
    const double pi = std::acos(-1.0);
    double turns = std::atan2(ss, sc) / (2 * pi);
    if (turns < 0) turns += 1.0;
    RotationEstimate est;
    est.turns = turns;
    return est;
}

}  // namespace pamap
