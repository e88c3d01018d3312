#include "pamap/measure.hpp"

#include <algorithm>
#include <map>

#include "pamap/errors.hpp"

namespace pamap {

namespace {

// Sweep over segment value-ranges: between consecutive distinct event
// values the set of covering branches is constant, so the branch sum is a
// function of the active slope multiset. Slopes repeat heavily (our maps
// have a handful of distinct slopes), hence counts per distinct slope.
struct BranchSweep {
    // events: (value, slope magnitude, +1/-1)
    struct Event {
        Rational value;
        Rational inv_abs_slope;
        int delta;
    };
    std::vector<Event> events;

    void add_segment(const Rational& y0, const Rational& y1, const Rational& slope) {
        Rational lo = rat_min(y0, y1), hi = rat_max(y0, y1);
        Rational w = 1 / rat_abs(slope);
        events.push_back({std::move(lo), w, +1});
        events.push_back({std::move(hi), std::move(w), -1});
    }

    // visit(gap_lo, gap_hi, branch_sum) for every nondegenerate gap between
    // consecutive distinct event values
    template <class Visit>
    void run(Visit&& visit) {
        std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
            if (a.value != b.value) return a.value < b.value;
            return a.delta > b.delta ? false : a.delta < b.delta;  // ends before starts at ties
        });
        std::map<Rational, long> active;  // inv_abs_slope -> count
        std::size_t i = 0;
        while (i < events.size()) {
            const Rational v = events[i].value;
            while (i < events.size() && events[i].value == v) {
                auto it = active.find(events[i].inv_abs_slope);
                if (events[i].delta > 0) {
                    if (it == active.end())
                        active.emplace(events[i].inv_abs_slope, 1);
                    else
                        ++it->second;
                } else {
                    --it->second;
                    if (it->second == 0) active.erase(it);
                }
                ++i;
            }
            if (i < events.size()) {
                Rational sum = 0;
                for (const auto& [w, count] : active) sum += w * count;
                visit(v, events[i].value, sum);
            }
        }
    }
};

}  // namespace

MeasureCertificate is_measure_preserving(const PLMap& f) {
    MeasureCertificate cert;
    if (f.domain_lo() != 0 || f.domain_hi() != 1) {
        cert.failing_value = f.domain_lo();
        return cert;
    }
    if (has_zero_slope(f)) {
        // a plateau pushes positive mass onto a single value
        for (std::size_t i = 0; i < f.segment_count(); ++i)
            if (f.slope(i) == 0) {
                cert.failing_value = f.node_y(i);
                return cert;
            }
    }
    auto [lo, hi] = f.value_hull();
    if (lo != 0 || hi != 1) {
        // non-surjective: some gap inside [0,1] has branch sum 0
        cert.failing_value = lo != 0 ? Rational(lo / 2) : Rational((hi + 1) / 2);
        return cert;
    }

    BranchSweep sweep;
    for (std::size_t i = 0; i < f.segment_count(); ++i)
        sweep.add_segment(f.node_y(i), f.node_y(i + 1), f.slope(i));

    bool ok = true;
    std::optional<Rational> bad;
    sweep.run([&](const Rational& glo, const Rational& ghi, const Rational& sum) {
        Rational mid = (glo + ghi) / 2;
        if (sum != 1 && ok) {
            ok = false;
            bad = mid;
        }
        cert.witnesses.emplace_back(std::move(mid), sum);
    });
    cert.verdict = ok;
    cert.failing_value = bad;
    return cert;
}

bool lambda_equivalent(const PLMap& f, const PLMap& g, const Rational& a, const Rational& b) {
    PLMap fr = restrict_map(f, a, b);
    PLMap gr = restrict_map(g, a, b);
    if (has_zero_slope(fr) || has_zero_slope(gr))
        throw UnsupportedError("lambda_equivalent: zero-slope piece in the window");

    // pooled node values define the gaps; on each gap both branch structures
    // are constant, so agreement at midpoints is agreement of the pullbacks
    std::vector<Rational> pool;
    pool.reserve(fr.node_count() + gr.node_count());
    for (const auto& y : fr.ys()) pool.push_back(y);
    for (const auto& y : gr.ys()) pool.push_back(y);
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

    auto branch_sum = [](const PLMap& m, const Rational& level) {
        Rational sum = 0;
        for (std::size_t i = 0; i < m.segment_count(); ++i) {
            Rational lo = rat_min(m.node_y(i), m.node_y(i + 1));
            Rational hi = rat_max(m.node_y(i), m.node_y(i + 1));
            if (level > lo && level < hi) sum += 1 / rat_abs(m.slope(i));
        }
        return sum;
    };

    for (std::size_t i = 0; i + 1 < pool.size(); ++i) {
        Rational mid = (pool[i] + pool[i + 1]) / 2;
        if (branch_sum(fr, mid) != branch_sum(gr, mid)) return false;
    }
    return true;
}

PLMap measure_conjugator(const std::vector<std::pair<Rational, Rational>>& density_breaks) {
    if (density_breaks.empty()) throw DomainError("empty density");
    std::vector<Node> nodes;
    nodes.push_back({rat(0), rat(0)});
    Rational x = 0, mass = 0;
    for (const auto& [end, density] : density_breaks) {
        if (density <= 0) throw DomainError("density must be positive");
        if (end <= x || end > 1) throw DomainError("density segments must advance through (0,1]");
        mass += density * (end - x);
        nodes.push_back({end, mass});
        x = end;
    }
    if (x != 1) throw DomainError("density segments must cover [0,1]");
    if (mass != 1) throw DomainError("density must integrate to exactly 1, got " + rat_str(mass));
    return PLMap::from_nodes(std::move(nodes), rat(0), rat(1));
}

}  // namespace pamap
