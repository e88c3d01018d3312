#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pamap/plmap.hpp"

namespace pamap {

// Band model of the smash-and-unwrap construction on B = [0,1] x [-1,1]:
// H(x, y) = (f(x), delta*(x - 1/2) + delta^2*y). First coordinates are
// exactly semiconjugate to f; fibers contract by delta^2.
struct BandPointR {
    Rational x, y;
};

BandPointR band_map(const PLMap& f, const Rational& delta, const BandPointR& p);

struct AttractorCloud {
    std::vector<double> xs, ys;
    std::uint64_t map_hash = 0;
    Rational delta;
    int burn_in = 0, kept = 0, seeds = 0;
    std::uint64_t seed = 0;
};

// Iterates the band map from `seeds` uniform starting points, discards
// burn_in images, then keeps `kept` tail snapshots per seed (points stored
// iteration-major, seed-minor; deterministic given the seed).
AttractorCloud attractor_cloud(const PLMap& f, const Rational& delta, int burn_in, int kept,
                               int seeds, std::uint64_t seed);

struct Raster {
    int width = 0, height = 0;
    std::vector<std::uint32_t> counts;  // row-major, row 0 = top of the band
};

Raster attractor_raster(const AttractorCloud& cloud, int width, int height);

// binary PGM (P5), counts affinely normalized to maxval 255; bit-exact for
// identical cloud and dimensions
std::string raster_to_pgm(const Raster& r);

// exact discrete Hausdorff distance with uniform-grid bucketing
double hausdorff_distance(const AttractorCloud& A, const AttractorCloud& B);

enum class EdgeDynamics { fixed_edge, swapped_edges, neither };

struct EdgeCertificate {
    EdgeDynamics kind = EdgeDynamics::neither;
    // fixed_edge: attracting fixed point on the x=0 fiber
    std::optional<Rational> fixed_y;
    // swapped_edges: exact period-2 fiber orbit, y at x=0 and at x=1
    std::optional<std::pair<Rational, Rational>> period2_y;
};

// Decided exactly from f(0), f(1): rotation-number-0 witness when f(0)=0,
// rotation-number-1/2 witness when f(0)=1 and f(1)=0.
EdgeCertificate edge_dynamics_check(const PLMap& f, const Rational& delta);

struct RotationEstimate {
    double turns = 0;  // in [0,1)
    std::string status = "experimental";
};

// Coarse prime-end rotation probe: samples the band boundary, pushes it
// n_band_iters steps forward, lifts angular coordinates continuously along
// the curve and circularly averages the one-step displacement about the
// band center (1/2, 0).
RotationEstimate estimate_boundary_rotation(const PLMap& f, const Rational& delta,
                                            int n_band_iters, int samples);

}  // namespace pamap
