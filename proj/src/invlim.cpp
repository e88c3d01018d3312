#include "pamap/invlim.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "pamap/errors.hpp"
#include "pamap/parallel.hpp"
#include "pamap/rng.hpp"
#include "pamap/simd.hpp"

namespace pamap {

BranchSet backward_branches(const PLMap& f, const Rational& y) {
    BranchSet out;
    out.total = 0;
    const std::size_t segs = f.segment_count();
    for (std::size_t i = 0; i < segs; ++i) {
        const Rational &y0 = f.node_y(i), &y1 = f.node_y(i + 1);
        if (f.slope(i) == 0) {
            if (y0 == y) throw UnsupportedError("plateau at sampled level " + rat_str(y));
            continue;
        }
        Rational lo = rat_min(y0, y1), hi = rat_max(y0, y1);
        if (y > lo && y < hi) {
            Rational x = f.node_x(i) + (y - y0) / f.slope(i);
            Rational w = 1 / rat_abs(f.slope(i));
            out.total += w;
            out.xs.push_back(std::move(x));
            out.weights.push_back(std::move(w));
        }
    }
    // node hits get averaged one-sided weights (the pointwise identity is
    // only claimed away from images of non-differentiability points)
    for (std::size_t i = 0; i < f.node_count(); ++i) {
        if (f.node_y(i) != y) continue;
        out.at_node = true;
        Rational w = 0;
        if (i > 0) w += 1 / rat_abs(f.slope(i - 1));
        if (i < segs) w += 1 / rat_abs(f.slope(i));
        w /= 2;
        out.total += w;
        out.xs.push_back(f.node_x(i));
        out.weights.push_back(std::move(w));
    }
    // keep branches ordered by position
    std::vector<std::size_t> idx(out.xs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return out.xs[a] < out.xs[b]; });
    BranchSet sorted;
    sorted.at_node = out.at_node;
    sorted.total = out.total;
    for (std::size_t i : idx) {
        sorted.xs.push_back(std::move(out.xs[i]));
        sorted.weights.push_back(std::move(out.weights[i]));
    }
    return sorted;
}

Rational exact_branch_weight_sum(const PLMap& f, const Rational& y) {
    return backward_branches(f, y).total;
}

BackwardOrbit shift_truncated(const PLMap& f, const BackwardOrbit& orbit) {
    if (orbit.map_id != content_hash(f))
        throw DomainError("orbit was generated by a different map");
    BackwardOrbit out = orbit;
    if (orbit.mode == OrbitMode::exact) {
        if (orbit.exact_coords.empty()) throw DomainError("empty orbit");
        out.exact_coords.insert(out.exact_coords.begin(), f(orbit.exact_coords.front()));
        out.exact_coords.pop_back();
    } else {
        if (orbit.float_coords.empty()) throw DomainError("empty orbit");
        PLFlat flat = flatten(f);
        double y;
        simd::scalar_kernels().pl_eval(flat, &orbit.float_coords.front(), &y, 1);
        out.float_coords.insert(out.float_coords.begin(), y);
        out.float_coords.pop_back();
    }
    return out;
}

BackwardOrbit sample_backward(const PLMap& f, const MeasureCertificate& cert, const Rational& x0,
                              int depth, std::uint64_t seed) {
    if (!cert.verdict)
        throw DomainError("sample_backward requires a passing measure certificate");
    if (depth < 0) throw DomainError("negative depth");
    BackwardOrbit orbit;
    orbit.mode = OrbitMode::exact;
    orbit.map_id = content_hash(f);
    orbit.exact_coords.reserve(static_cast<std::size_t>(depth) + 1);
    orbit.exact_coords.push_back(x0);
    Rng rng(seed);
    for (int i = 0; i < depth; ++i) {
        BranchSet br = backward_branches(f, orbit.exact_coords.back());
        if (br.xs.empty()) throw InvariantViolation("level with no preimage branch");
        if (!br.at_node && br.total != 1)
            throw InvariantViolation("branch weights sum to " + rat_str(br.total) +
                                     " != 1: map does not preserve measure");
        Rational u = rng.next_rational() * br.total;
        Rational acc = 0;
        std::size_t pick = br.xs.size() - 1;
        for (std::size_t j = 0; j < br.xs.size(); ++j) {
            acc += br.weights[j];
            if (u < acc) {
                pick = j;
                break;
            }
        }
        orbit.exact_coords.push_back(br.xs[pick]);
    }
    return orbit;
}

BackwardOrbit sample_backward_float(const PLMap& f, const MeasureCertificate& cert, double x0,
                                    int depth, std::uint64_t seed) {
    if (!cert.verdict)
        throw DomainError("sample_backward requires a passing measure certificate");
    if (depth < 0) throw DomainError("negative depth");
    BackwardOrbit orbit;
    orbit.mode = OrbitMode::floating;
    orbit.map_id = content_hash(f);
    orbit.float_coords.reserve(static_cast<std::size_t>(depth) + 1);
    orbit.float_coords.push_back(x0);
    Rng rng(seed);

    // float branch walk over the exact node structure
    const std::size_t segs = f.segment_count();
    std::vector<double> xs(f.node_count()), ys(f.node_count()), slopes(segs);
    for (std::size_t i = 0; i < f.node_count(); ++i) {
        xs[i] = to_double(f.node_x(i));
        ys[i] = to_double(f.node_y(i));
    }
    for (std::size_t i = 0; i < segs; ++i) slopes[i] = to_double(f.slope(i));

    for (int i = 0; i < depth; ++i) {
        double y = orbit.float_coords.back();
        double total = 0;
        std::vector<std::pair<double, double>> branches;  // (x, w)
        for (std::size_t s = 0; s < segs; ++s) {
            double lo = std::min(ys[s], ys[s + 1]), hi = std::max(ys[s], ys[s + 1]);
            if (y > lo && y < hi && slopes[s] != 0) {
                double w = 1.0 / std::fabs(slopes[s]);
                branches.emplace_back(xs[s] + (y - ys[s]) / slopes[s], w);
                total += w;
            }
        }
        if (branches.empty()) {
            // fall back to the nearest node (level at or beyond an extreme)
            std::size_t best = 0;
            double bd = std::fabs(ys[0] - y);
            for (std::size_t s = 1; s < ys.size(); ++s)
                if (std::fabs(ys[s] - y) < bd) {
                    bd = std::fabs(ys[s] - y);
                    best = s;
                }
            orbit.float_coords.push_back(xs[best]);
            continue;
        }
        std::sort(branches.begin(), branches.end());
        double u = rng.next_double() * total, acc = 0;
        double pick = branches.back().first;
        for (auto& [x, w] : branches) {
            acc += w;
            if (u < acc) {
                pick = x;
                break;
            }
        }
        orbit.float_coords.push_back(pick);
    }
    return orbit;
}

EmpiricalMeasure sample_mu_hat(const PLMap& f, const MeasureCertificate& cert, int depth, int m,
                               std::size_t count, std::uint64_t seed, int threads) {
    if (m < 1 || m > depth + 1) throw DomainError("projection width must lie in [1, depth+1]");
    EmpiricalMeasure out;
    out.dim = m;
    out.map_hash = content_hash(f);
    out.depth = depth;
    out.seed = seed;
    out.points.assign(count * static_cast<std::size_t>(m), 0.0);

    parallel_chunks(count, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            std::uint64_t s = derive_seed(seed, i);
            Rng rng(s);
            double x0 = rng.next_double();
            BackwardOrbit orbit = sample_backward_float(f, cert, x0, depth, derive_seed(s, 1));
            for (int j = 0; j < m; ++j)
                out.points[i * static_cast<std::size_t>(m) + static_cast<std::size_t>(j)] =
                    orbit.float_coords[static_cast<std::size_t>(j)];
        }
    });
    return out;
}

BirkhoffResult birkhoff_average(const PLMap& f, double x0, long steps, TestFn fn, double ind_a,
                                double ind_b) {
    if (steps < 1) throw DomainError("steps must be >= 1");
    BirkhoffResult res;
    res.steps = steps;
    PLFlat flat = flatten(f);
    const auto& k = simd::kernels();
    double x = x0, sum = 0;
    for (long i = 0; i < steps; ++i) {
        switch (fn) {
            case TestFn::id: sum += x; break;
            case TestFn::square: sum += x * x; break;
            case TestFn::indicator: sum += (x >= ind_a && x <= ind_b) ? 1.0 : 0.0; break;
        }
        double next;
        k.pl_eval(flat, &x, &next, 1);
        x = next;
    }
    res.average = sum / static_cast<double>(steps);
    switch (fn) {
        case TestFn::id: res.target = 0.5; break;
        case TestFn::square: res.target = 1.0 / 3.0; break;
        case TestFn::indicator: res.target = ind_b - ind_a; break;
    }
    return res;
}

double truncated_metric(const BackwardOrbit& o1, const BackwardOrbit& o2) {
    if (o1.depth() != o2.depth()) throw DomainError("orbit depth mismatch");
    auto coord = [](const BackwardOrbit& o, std::size_t i) {
        return o.mode == OrbitMode::exact ? to_double(o.exact_coords[i]) : o.float_coords[i];
    };
    double sum = 0, w = 1;
    for (std::size_t i = 0; i <= static_cast<std::size_t>(o1.depth()); ++i) {
        sum += w * std::fabs(coord(o1, i) - coord(o2, i));
        w *= 0.5;
    }
    return sum;
}

}  // namespace pamap
