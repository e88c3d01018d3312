#include "pamap/crooked.hpp"

#include <algorithm>
#include <mutex>

#include "pamap/errors.hpp"
#include "pamap/lambda_maps.hpp"
#include "pamap/parallel.hpp"
#include "pamap/rng.hpp"

namespace pamap {

std::string to_string(CrookedMode m) {
    switch (m) {
        case CrookedMode::exact_pair: return "exact_pair";
        case CrookedMode::value_grid: return "value_grid";
        case CrookedMode::sampled: return "sampled";
    }
    return "?";
}

namespace {

template <class Num>
struct PolyView {
    const Num* xs;
    const Num* ys;
    std::size_t n;
};

template <class Num>
Num num_abs(const Num& v) {
    return v < 0 ? Num(-v) : v;
}

template <class Num>
std::vector<Num> view_preimages(const PolyView<Num>& f, const Num& level) {
    std::vector<Num> out;
    for (std::size_t i = 0; i + 1 < f.n; ++i) {
        const Num &y0 = f.ys[i], &y1 = f.ys[i + 1];
        if (y0 == level) {
            if (out.empty() || out.back() != f.xs[i]) out.push_back(f.xs[i]);
        }
        Num lo = y0 < y1 ? y0 : y1, hi = y0 < y1 ? y1 : y0;
        if (level > lo && level < hi) {
            Num x = f.xs[i] + (level - y0) * (f.xs[i + 1] - f.xs[i]) / (y1 - y0);
            if (out.empty() || out.back() != x) out.push_back(std::move(x));
        }
    }
    if (f.ys[f.n - 1] == level && (out.empty() || out.back() != f.xs[f.n - 1]))
        out.push_back(f.xs[f.n - 1]);
    return out;
}

// Maximal open intervals where the value lies strictly inside (lo, hi).
// Components that only touch at a boundary-valued node stay separate, which
// realizes the tangential-touch exclusion.
template <class Num>
struct Components {
    std::vector<Num> s, e;
};

template <class Num>
Components<Num> band_components(const PolyView<Num>& f, const Num& lo, const Num& hi) {
    Components<Num> out;
    for (std::size_t i = 0; i + 1 < f.n; ++i) {
        const Num &x0 = f.xs[i], &x1 = f.xs[i + 1];
        const Num &y0 = f.ys[i], &y1 = f.ys[i + 1];
        Num xa, xb;
        bool have = false;
        if (y0 == y1) {
            if (y0 > lo && y0 < hi) {
                xa = x0;
                xb = x1;
                have = true;
            }
        } else {
            Num w = (x1 - x0) / (y1 - y0);
            if (y0 < y1) {
                if (y1 > lo && y0 < hi) {
                    xa = y0 >= lo ? x0 : Num(x0 + (lo - y0) * w);
                    xb = y1 <= hi ? x1 : Num(x0 + (hi - y0) * w);
                    have = xa < xb;
                }
            } else {
                if (y0 > lo && y1 < hi) {
                    xa = y0 <= hi ? x0 : Num(x0 + (hi - y0) * w);
                    xb = y1 >= lo ? x1 : Num(x0 + (lo - y0) * w);
                    have = xa < xb;
                }
            }
        }
        if (!have) continue;
        if (!out.e.empty() && out.e.back() == xa)
            out.e.back() = std::move(xb);
        else {
            out.s.push_back(std::move(xa));
            out.e.push_back(std::move(xb));
        }
    }
    return out;
}

template <class Num>
struct PairOutcome {
    bool ok = true;
    bool has_violation = false;
    Num vc{}, vd{};
    bool has_witness = false;
    Num window{}, wc{}, wd{}, wcp{}, wdp{};
};

// Decision for one (a,b): sweep preimages of a against the nearest preimage
// of b on each side. The first band-B entry e(c) after c is independent of
// d, and the d'-window (e(c), d) only grows with farther d, so the nearest
// d is the binding pair.
template <class Num>
PairOutcome<Num> decide_pair(const std::vector<Num>& A, const std::vector<Num>& B,
                             const Components<Num>& bandA, const Components<Num>& bandB) {
    PairOutcome<Num> out;
    auto note_witness = [&](Num window, const Num& c, const Num& d, const Num& cp, const Num& dp) {
        if (!out.has_witness || window < out.window) {
            out.has_witness = true;
            out.window = std::move(window);
            out.wc = c;
            out.wd = d;
            out.wcp = cp;
            out.wdp = dp;
        }
    };
    auto fail = [&](const Num& c, const Num& d) {
        out.ok = false;
        out.has_violation = true;
        out.vc = c;
        out.vd = d;
    };

    // direction c < d
    {
        std::size_t bi = 0, ei = 0;
        for (const Num& c : A) {
            while (bi < B.size() && !(B[bi] > c)) ++bi;
            if (bi == B.size()) break;
            const Num& d0 = B[bi];
            while (ei < bandB.s.size() && bandB.s[ei] < c) ++ei;
            if (ei == bandB.s.size() || !(bandB.s[ei] < d0)) {
                fail(c, d0);  // unreachable for a continuous polyline; fail safe
                return out;
            }
            const Num& entry = bandB.s[ei];
            std::size_t ai =
                std::upper_bound(bandA.e.begin(), bandA.e.end(), entry) - bandA.e.begin();
            if (ai == bandA.s.size() || !(bandA.s[ai] < d0)) {
                fail(c, d0);
                return out;
            }
            Num dp_lo = bandA.s[ai] > entry ? bandA.s[ai] : entry;
            Num dp_hi = bandA.e[ai] < d0 ? bandA.e[ai] : d0;
            Num dp = (dp_lo + dp_hi) / 2;
            Num cp_hi = bandB.e[ei] < dp ? bandB.e[ei] : dp;
            Num cp = (entry + cp_hi) / 2;
            note_witness(Num(d0 - entry), c, d0, cp, dp);
        }
    }

    // direction d < c (walking left from c)
    {
        std::size_t bi = B.size(), ei = bandB.e.size();
        for (std::size_t ci = A.size(); ci > 0; --ci) {
            const Num& c = A[ci - 1];
            while (bi > 0 && !(B[bi - 1] < c)) --bi;
            if (bi == 0) break;
            const Num& d0 = B[bi - 1];
            while (ei > 0 && bandB.e[ei - 1] > c) --ei;
            if (ei == 0 || !(bandB.e[ei - 1] > d0)) {
                fail(c, d0);
                return out;
            }
            const Num& entry = bandB.e[ei - 1];
            std::size_t ai =
                std::lower_bound(bandA.s.begin(), bandA.s.end(), entry) - bandA.s.begin();
            if (ai == 0 || !(bandA.e[ai - 1] > d0)) {
                fail(c, d0);
                return out;
            }
            --ai;
            Num dp_hi = bandA.e[ai] < entry ? bandA.e[ai] : entry;
            Num dp_lo = bandA.s[ai] > d0 ? bandA.s[ai] : d0;
            Num dp = (dp_lo + dp_hi) / 2;
            Num cp_lo = bandB.s[ei - 1] > dp ? bandB.s[ei - 1] : dp;
            Num cp = (cp_lo + entry) / 2;
            note_witness(Num(entry - d0), c, d0, cp, dp);
        }
    }
    return out;
}

template <class Num>
struct LevelData {
    std::vector<Num> preim;
    Components<Num> band;
};

template <class Num>
struct GridResult {
    bool found_violation = false;
    std::size_t pair_index = 0;  // for deterministic merging
    std::size_t ia = 0, ib = 0;  // violating levels
    PairOutcome<Num> detail;     // violation detail or tightest witness
    std::size_t tight_ia = 0, tight_ib = 0;
    std::size_t pairs_checked = 0;
};

// Levels are checked in lexicographic pair order; the smallest violating
// pair wins regardless of the thread schedule.
template <class Num>
GridResult<Num> grid_sweep(const PolyView<Num>& f, const std::vector<Num>& levels,
                           const Num& delta, const std::optional<Num>& max_gap, int threads) {
    std::vector<LevelData<Num>> data(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) {
        data[i].preim = view_preimages(f, levels[i]);
        data[i].band = band_components(f, Num(levels[i] - delta), Num(levels[i] + delta));
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t ia = 0; ia < levels.size(); ++ia)
        for (std::size_t ib = 0; ib < levels.size(); ++ib) {
            if (ia == ib) continue;
            Num gap = num_abs(Num(levels[ia] - levels[ib]));
            if (!(gap < delta) && (!max_gap || gap < *max_gap)) pairs.emplace_back(ia, ib);
        }

    int nt = effective_threads(threads);
    std::vector<GridResult<Num>> per_chunk(static_cast<std::size_t>(nt) + 1);
    std::mutex mu;
    parallel_chunks(pairs.size(), nt, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        GridResult<Num> local;
        for (std::size_t p = begin; p < end; ++p) {
            auto [ia, ib] = pairs[p];
            PairOutcome<Num> res =
                decide_pair(data[ia].preim, data[ib].preim, data[ia].band, data[ib].band);
            if (!res.ok) {
                local.found_violation = true;
                local.pair_index = p;
                local.ia = ia;
                local.ib = ib;
                local.detail = std::move(res);
                break;
            }
            if (res.has_witness && (!local.detail.has_witness || res.window < local.detail.window)) {
                local.detail = std::move(res);
                local.tight_ia = ia;
                local.tight_ib = ib;
            }
        }
        std::lock_guard<std::mutex> lock(mu);
        per_chunk[chunk] = std::move(local);
    });

    GridResult<Num> merged;
    merged.pairs_checked = pairs.size();
    for (auto& r : per_chunk) {
        if (r.found_violation &&
            (!merged.found_violation || r.pair_index < merged.pair_index)) {
            bool keep_count = true;
            auto count = merged.pairs_checked;
            merged = r;
            if (keep_count) merged.pairs_checked = count;
        }
    }
    if (!merged.found_violation) {
        for (auto& r : per_chunk) {
            if (r.detail.has_witness &&
                (!merged.detail.has_witness || r.detail.window < merged.detail.window)) {
                auto count = merged.pairs_checked;
                merged.detail = std::move(r.detail);
                merged.tight_ia = r.tight_ia;
                merged.tight_ib = r.tight_ib;
                merged.pairs_checked = count;
            }
        }
    }
    return merged;
}

void check_plateau(const PLMap& f, const Rational& level) {
    for (std::size_t i = 0; i < f.segment_count(); ++i)
        if (f.slope(i) == 0 && f.node_y(i) == level)
            throw UnsupportedError("plateau exactly at level " + rat_str(level));
}

PolyView<Rational> view_of(const PLMap& f) {
    return {f.xs().data(), f.ys().data(), f.node_count()};
}

std::vector<Rational> grid_levels(const PLMap& f, const Rational& step) {
    std::vector<Rational> levels;
    for (Rational v = f.codomain_lo(); v <= f.codomain_hi(); v += step) levels.push_back(v);
    if (levels.empty() || levels.back() != f.codomain_hi()) levels.push_back(f.codomain_hi());
    for (auto& cv : critical_values(f)) levels.push_back(cv);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    return levels;
}

}  // namespace

CrookedDecision is_crooked_between(const PLMap& f, const Rational& a, const Rational& b,
                                   const Rational& delta) {
    if (delta <= 0) throw DomainError("delta must be positive");
    check_plateau(f, a);
    check_plateau(f, b);
    CrookedDecision out;
    if (rat_abs(a - b) < delta) {  // bands swallow both endpoint values
        out.crooked = true;
        return out;
    }
    auto fv = view_of(f);
    auto A = view_preimages(fv, a);
    auto B = view_preimages(fv, b);
    auto bandA = band_components(fv, Rational(a - delta), Rational(a + delta));
    auto bandB = band_components(fv, Rational(b - delta), Rational(b + delta));
    auto res = decide_pair(A, B, bandA, bandB);
    out.crooked = res.ok;
    if (res.has_violation) out.violating_cd = std::make_pair(res.vc, res.vd);
    if (res.ok && res.has_witness)
        out.tightest_witness = CrookedWitness{res.wc, res.wd, res.wcp, res.wdp};
    return out;
}

CrookednessReport crookedness_grid_check(const PLMap& f, const Rational& delta,
                                         const Rational& step, int threads,
                                         std::optional<Rational> only_pairs_closer_than) {
    if (step <= 0) throw DomainError("grid step must be positive");
    for (std::size_t i = 0; i < f.segment_count(); ++i)
        if (f.slope(i) == 0)
            throw UnsupportedError("grid check unsupported for maps with plateaus");

    CrookednessReport rep;
    rep.delta = delta;
    rep.mode = CrookedMode::value_grid;
    rep.grid_step = step;

    auto levels = grid_levels(f, step);
    auto res = grid_sweep<Rational>(view_of(f), levels, delta, only_pairs_closer_than, threads);
    rep.verdict = !res.found_violation;
    if (res.found_violation)
        rep.worst_pair = WorstPair{levels[res.ia], levels[res.ib], res.detail.vc, res.detail.vd};
    return rep;
}

Rational crookedness_defect_estimate(const PLMap& f, int samples, std::uint64_t seed,
                                     int lattice_bits, int threads) {
    if (samples < 1) throw DomainError("samples must be >= 1");
    const Rational width = f.codomain_hi() - f.codomain_lo();
    std::vector<Rational> levels = critical_values(f);
    Rng rng(seed);
    for (int i = 0; i < samples; ++i)
        levels.push_back(f.codomain_lo() + width * rng.next_rational());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    auto fv = view_of(f);
    auto passes = [&](const Rational& delta) {
        return !grid_sweep<Rational>(fv, levels, delta, std::nullopt, threads).found_violation;
    };

    const long denom = 1L << lattice_bits;
    long lo = 1, hi = denom;  // delta = j/denom * width
    if (passes(Rational(width * lo / denom))) return width * lo / denom;
    if (!passes(Rational(width * hi / denom))) return width;
    while (hi - lo > 1) {
        long mid = lo + (hi - lo) / 2;
        if (passes(Rational(width * mid / denom)))
            hi = mid;
        else
            lo = mid;
    }
    return width * hi / denom;
}

SampledGridOutcome polyline_grid_check(const std::vector<double>& xs,
                                       const std::vector<double>& ys, double delta,
                                       const std::vector<double>& levels, int threads) {
    if (xs.size() != ys.size() || xs.size() < 2) throw DomainError("degenerate polyline");
    PolyView<double> fv{xs.data(), ys.data(), xs.size()};
    std::vector<double> lv = levels;
    std::sort(lv.begin(), lv.end());
    lv.erase(std::unique(lv.begin(), lv.end()), lv.end());

    auto res = grid_sweep<double>(fv, lv, delta, std::nullopt, threads);
    SampledGridOutcome out;
    out.pairs_checked = res.pairs_checked;
    out.verdict = !res.found_violation;
    if (res.found_violation) {
        out.violation =
            std::array<double, 4>{lv[res.ia], lv[res.ib], res.detail.vc, res.detail.vd};
    } else if (res.detail.has_witness) {
        out.tightest = SampledPairWitness{lv[res.tight_ia],   lv[res.tight_ib], res.detail.wc,
                                          res.detail.wd,      res.detail.wcp,   res.detail.wdp,
                                          res.detail.window};
    }
    return out;
}

MincUpdtReport verify_minc_updt(int n, int k, int trials, std::uint64_t seed, int threads) {
    MincUpdtReport rep;
    rep.n = n;
    rep.k = k;
    rep.trials = trials;
    const int nk1 = n + k - 1;
    rep.eps = rat(n - 1, nk1);
    rep.gamma = rat(1, nk1);

    PLMap lam = lambda_nk(n, k);
    PLMap id = PLMap::identity();

    rep.rho_id = sup_distance(lam, id);
    rep.rho_bound = rep.eps / 2 + rep.gamma;
    rep.part_i = rep.rho_id < rep.rho_bound;

    auto grid = crookedness_grid_check(lam, Rational(3 * rep.gamma), Rational(rep.gamma / 3),
                                       threads, rep.eps);
    rep.part_ii = grid.verdict;
    rep.part_ii_worst = grid.worst_pair;

    ImageOracle img(lam);
    Rng rng(seed);
    rep.part_iii_diam = rep.part_iii_a = rep.part_iii_b = rep.part_iii_c = true;
    for (int t = 0; t < trials; ++t) {
        Rational u = rng.next_rational(), v = rng.next_rational();
        Rational a = rat_min(u, v), b = rat_max(u, v);
        if (a == b) continue;
        if (t % 4 == 3) b = a + (b - a) / 64;  // exercise small diameters too
        auto [ilo, ihi] = img(a, b);
        Rational diam = b - a, idiam = ihi - ilo;
        if (idiam < diam) {
            rep.part_iii_diam = false;
            rep.failure_detail = "diam shrank on [" + rat_str(a) + "," + rat_str(b) + "]";
            break;
        }
        if (diam > rep.gamma) {
            if (!(idiam > rep.eps / 2)) {
                rep.part_iii_a = false;
                rep.failure_detail = "(iii)(a) failed on [" + rat_str(a) + "," + rat_str(b) + "]";
                break;
            }
            if (!(ilo <= a && b <= ihi)) {
                rep.part_iii_b = false;
                rep.failure_detail = "(iii)(b) failed on [" + rat_str(a) + "," + rat_str(b) + "]";
                break;
            }
            Rational r = rng.next_rational() / 2;
            Rational blo = rat_max(rat(0), Rational(a - r));
            Rational bhi = rat_min(rat(1), Rational(b + r));
            auto [jlo, jhi] = img(blo, bhi);
            if (!(ilo - jlo < r + rep.gamma && jhi - ihi < r + rep.gamma)) {
                rep.part_iii_c = false;
                rep.failure_detail =
                    "(iii)(c) failed on [" + rat_str(a) + "," + rat_str(b) + "], r=" + rat_str(r);
                break;
            }
        }
    }

    // first-maximum spacing across the strips I_1 .. I_{k+(n-1)/2}
    rep.maxima_spacing = true;
    const int strips = k + (n - 1) / 2;
    std::vector<Rational> argmax_x, max_v;
    for (int j = 1; j <= strips; ++j) {
        Rational lo = rat(j - 1, nk1), hi = rat(j, nk1);
        Rational bx = lo, bv = lam(lo);
        const auto& xs = lam.xs();
        std::size_t i = std::upper_bound(xs.begin(), xs.end(), lo) - xs.begin();
        std::size_t end = std::lower_bound(xs.begin(), xs.end(), hi) - xs.begin();
        for (; i < end; ++i)
            if (lam.node_y(i) > bv) {
                bv = lam.node_y(i);
                bx = lam.node_x(i);
            }
        if (lam(hi) > bv) {
            bv = lam(hi);
            bx = hi;
        }
        argmax_x.push_back(bx);
        max_v.push_back(bv);
    }
    for (int j = 1; j < strips; ++j) {
        if (argmax_x[j] - argmax_x[j - 1] != rep.gamma || max_v[j] - max_v[j - 1] != rep.gamma) {
            rep.maxima_spacing = false;
            rep.failure_detail = "maxima spacing failed between strips " + std::to_string(j) +
                                 " and " + std::to_string(j + 1);
            break;
        }
    }
    return rep;
}

}  // namespace pamap
