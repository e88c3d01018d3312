#include "pamap/plmap.hpp"

#include <algorithm>
#include <sstream>

namespace pamap {

namespace {

bool collinear(const Rational& x0, const Rational& y0, const Rational& x1, const Rational& y1,
               const Rational& x2, const Rational& y2) {
    return (y1 - y0) * (x2 - x1) == (y2 - y1) * (x1 - x0);
}

}  // namespace

PLMap PLMap::from_nodes(std::vector<Node> nodes, Rational codomain_lo, Rational codomain_hi) {
    if (nodes.size() < 2) throw InvariantViolation("PLMap needs at least two nodes");
    // drop zero-width duplicates; a jump (same x, different y) is invalid
    std::vector<Node> clean;
    clean.reserve(nodes.size());
    for (auto& n : nodes) {
        if (!clean.empty()) {
            if (n.x == clean.back().x) {
                if (n.y != clean.back().y)
                    throw InvariantViolation("discontinuity: two values at x=" + rat_str(n.x));
                continue;
            }
            if (n.x < clean.back().x)
                throw InvariantViolation("node x-coordinates not increasing at x=" + rat_str(n.x));
        }
        clean.push_back(std::move(n));
    }
    if (clean.size() < 2) throw InvariantViolation("PLMap degenerate after deduplication");

    PLMap f;
    f.xs_.reserve(clean.size());
    f.ys_.reserve(clean.size());
    for (auto& n : clean) {
        std::size_t k = f.xs_.size();
        if (k >= 2 && collinear(f.xs_[k - 2], f.ys_[k - 2], f.xs_[k - 1], f.ys_[k - 1], n.x, n.y)) {
            f.xs_[k - 1] = std::move(n.x);
            f.ys_[k - 1] = std::move(n.y);
        } else {
            f.xs_.push_back(std::move(n.x));
            f.ys_.push_back(std::move(n.y));
        }
    }
    f.slopes_.reserve(f.xs_.size() - 1);
    for (std::size_t i = 0; i + 1 < f.xs_.size(); ++i)
        f.slopes_.push_back((f.ys_[i + 1] - f.ys_[i]) / (f.xs_[i + 1] - f.xs_[i]));
    f.clo_ = std::move(codomain_lo);
    f.chi_ = std::move(codomain_hi);
    if (f.clo_ > f.chi_) throw InvariantViolation("empty codomain");
    for (auto& y : f.ys_)
        if (y < f.clo_ || y > f.chi_)
            throw InvariantViolation("node value " + rat_str(y) + " outside declared codomain");
    return f;
}

PLMap PLMap::from_nodes(std::vector<Node> nodes) {
    if (nodes.size() < 2) throw InvariantViolation("PLMap needs at least two nodes");
    Rational lo = nodes[0].y, hi = nodes[0].y;
    for (auto& n : nodes) {
        if (n.y < lo) lo = n.y;
        if (n.y > hi) hi = n.y;
    }
    return from_nodes(std::move(nodes), lo, hi);
}

PLMap PLMap::identity() { return identity(rat(0), rat(1)); }

PLMap PLMap::identity(const Rational& lo, const Rational& hi) {
    return from_nodes({{lo, lo}, {hi, hi}}, lo, hi);
}

std::pair<Rational, Rational> PLMap::value_hull() const {
    Rational lo = ys_[0], hi = ys_[0];
    for (const auto& y : ys_) {
        if (y < lo) lo = y;
        if (y > hi) hi = y;
    }
    return {lo, hi};
}

std::size_t PLMap::segment_index(const Rational& x) const {
    if (x < xs_.front() || x > xs_.back())
        throw DomainError("argument " + rat_str(x) + " outside domain [" + rat_str(xs_.front()) +
                          ", " + rat_str(xs_.back()) + "]");
    // last node with xs_[i] <= x, clamped to a valid segment start
    std::size_t i = std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin();
    if (i > 0) --i;
    if (i + 1 >= xs_.size()) i = xs_.size() - 2;
    return i;
}

Rational PLMap::operator()(const Rational& x) const {
    std::size_t i = segment_index(x);
    if (x == xs_[i]) return ys_[i];
    return ys_[i] + slopes_[i] * (x - xs_[i]);
}

bool PLMap::maps_into_self() const {
    auto [lo, hi] = value_hull();
    return lo >= domain_lo() && hi <= domain_hi();
}

PLMap compose(const PLMap& g, const PLMap& f) {
    auto [flo, fhi] = f.value_hull();
    if (flo < g.domain_lo() || fhi > g.domain_hi())
        throw CompositionError("range of inner map [" + rat_str(flo) + ", " + rat_str(fhi) +
                               "] not contained in outer domain");
    const auto& gx = g.xs();
    std::vector<Node> out;
    out.reserve(f.node_count() + g.node_count());
    for (std::size_t i = 0; i + 1 < f.node_count(); ++i) {
        const Rational& x0 = f.node_x(i);
        const Rational& y0 = f.node_y(i);
        const Rational& y1 = f.node_y(i + 1);
        out.push_back({x0, g(y0)});
        if (y0 == y1) continue;
        bool up = y1 > y0;
        const Rational& vlo = up ? y0 : y1;
        const Rational& vhi = up ? y1 : y0;
        // g-node x-coordinates strictly inside the value range of this piece
        std::size_t a = std::upper_bound(gx.begin(), gx.end(), vlo) - gx.begin();
        std::size_t b = std::lower_bound(gx.begin(), gx.end(), vhi) - gx.begin();
        if (up) {
            for (std::size_t j = a; j < b; ++j) {
                Rational x = x0 + (gx[j] - y0) / f.slope(i);
                out.push_back({std::move(x), g.node_y(j)});
            }
        } else {
            for (std::size_t j = b; j > a; --j) {
                Rational x = x0 + (gx[j - 1] - y0) / f.slope(i);
                out.push_back({std::move(x), g.node_y(j - 1)});
            }
        }
    }
    out.push_back({f.domain_hi(), g(f.node_y(f.node_count() - 1))});
    return PLMap::from_nodes(std::move(out), g.codomain_lo(), g.codomain_hi());
}

std::int64_t compose_node_bound(const PLMap& g, const PLMap& f) {
    const auto& gx = g.xs();
    std::int64_t total = static_cast<std::int64_t>(f.node_count());
    for (std::size_t i = 0; i + 1 < f.node_count(); ++i) {
        const Rational& y0 = f.node_y(i);
        const Rational& y1 = f.node_y(i + 1);
        if (y0 == y1) continue;
        const Rational& vlo = y0 < y1 ? y0 : y1;
        const Rational& vhi = y0 < y1 ? y1 : y0;
        std::size_t a = std::upper_bound(gx.begin(), gx.end(), vlo) - gx.begin();
        std::size_t b = std::lower_bound(gx.begin(), gx.end(), vhi) - gx.begin();
        total += static_cast<std::int64_t>(b > a ? b - a : 0);
    }
    return total;
}

PLMap iterate(const PLMap& f, int n, std::int64_t piece_budget) {
    if (n < 0) throw DomainError("negative iterate");
    if (n == 0) return PLMap::identity(f.domain_lo(), f.domain_hi());
    if (!f.maps_into_self()) throw CompositionError("map does not send its domain into itself");
    PLMap acc = f;
    for (int step = 2; step <= n; ++step) {
        std::int64_t bound = compose_node_bound(f, acc);
        if (bound > piece_budget)
            throw IterateBudgetError("piece budget " + std::to_string(piece_budget) +
                                         " exceeded at iterate " + std::to_string(step) +
                                         " (bound " + std::to_string(bound) + " nodes)",
                                     std::move(acc), bound, step - 1);
        acc = compose(f, acc);
    }
    return acc;
}

Rational sup_distance(const PLMap& f, const PLMap& g) {
    if (!f.same_domain(g)) throw DomainError("sup_distance requires identical domains");
    Rational best = rat_abs(f.node_y(0) - g.node_y(0));
    std::size_t i = 0, j = 0;
    // walk the union of node x-coordinates
    while (i < f.node_count() || j < g.node_count()) {
        const Rational* x = nullptr;
        if (i < f.node_count() && (j >= g.node_count() || f.node_x(i) <= g.node_x(j)))
            x = &f.node_x(i);
        else
            x = &g.node_x(j);
        Rational d = rat_abs(f(*x) - g(*x));
        if (d > best) best = d;
        while (i < f.node_count() && f.node_x(i) == *x) ++i;
        while (j < g.node_count() && g.node_x(j) == *x) ++j;
    }
    return best;
}

std::pair<Rational, Rational> image_of_interval(const PLMap& f, const Rational& a,
                                                const Rational& b) {
    if (a > b) throw DomainError("empty interval");
    Rational lo = f(a), hi = f(b);
    if (lo > hi) std::swap(lo, hi);
    const auto& xs = f.xs();
    std::size_t i = std::upper_bound(xs.begin(), xs.end(), a) - xs.begin();
    std::size_t end = std::lower_bound(xs.begin(), xs.end(), b) - xs.begin();
    for (; i < end; ++i) {
        const Rational& y = f.node_y(i);
        if (y < lo) lo = y;
        if (y > hi) hi = y;
    }
    return {lo, hi};
}

PLMap restrict_map(const PLMap& f, const Rational& a, const Rational& b) {
    if (a >= b) throw DomainError("degenerate restriction interval");
    std::vector<Node> nodes;
    nodes.push_back({a, f(a)});
    const auto& xs = f.xs();
    std::size_t i = std::upper_bound(xs.begin(), xs.end(), a) - xs.begin();
    std::size_t end = std::lower_bound(xs.begin(), xs.end(), b) - xs.begin();
    for (; i < end; ++i) nodes.push_back({f.node_x(i), f.node_y(i)});
    nodes.push_back({b, f(b)});
    return PLMap::from_nodes(std::move(nodes));
}

PLMap postcompose_affine(const PLMap& f, const Rational& scale, const Rational& offset) {
    std::vector<Node> nodes;
    nodes.reserve(f.node_count());
    for (std::size_t i = 0; i < f.node_count(); ++i)
        nodes.push_back({f.node_x(i), scale * f.node_y(i) + offset});
    Rational c0 = scale * f.codomain_lo() + offset, c1 = scale * f.codomain_hi() + offset;
    if (c0 > c1) std::swap(c0, c1);
    return PLMap::from_nodes(std::move(nodes), c0, c1);
}

PLMap inverse_homeo(const PLMap& h) {
    bool inc = h.slope(0) > 0;
    for (std::size_t i = 0; i < h.segment_count(); ++i) {
        if (h.slope(i) == 0 || (h.slope(i) > 0) != inc)
            throw DomainError("inverse requires a strictly monotone map");
    }
    std::vector<Node> nodes;
    nodes.reserve(h.node_count());
    if (inc) {
        for (std::size_t i = 0; i < h.node_count(); ++i) nodes.push_back({h.node_y(i), h.node_x(i)});
    } else {
        for (std::size_t i = h.node_count(); i > 0; --i)
            nodes.push_back({h.node_y(i - 1), h.node_x(i - 1)});
    }
    return PLMap::from_nodes(std::move(nodes), h.domain_lo(), h.domain_hi());
}

PLMap conjugate(const PLMap& f, const PLMap& h) {
    PLMap hinv = inverse_homeo(h);
    return compose(h, compose(f, hinv));
}

std::vector<Rational> preimages(const PLMap& f, const Rational& y) {
    std::vector<Rational> out;
    for (std::size_t i = 0; i < f.segment_count(); ++i) {
        const Rational& y0 = f.node_y(i);
        const Rational& y1 = f.node_y(i + 1);
        if (y0 == y) {
            if (out.empty() || out.back() != f.node_x(i)) out.push_back(f.node_x(i));
        }
        Rational lo = rat_min(y0, y1), hi = rat_max(y0, y1);
        if (y > lo && y < hi) {
            Rational x = f.node_x(i) + (y - y0) / f.slope(i);
            if (out.empty() || out.back() != x) out.push_back(std::move(x));
        }
    }
    const Rational& ylast = f.node_y(f.node_count() - 1);
    if (ylast == y && (out.empty() || out.back() != f.domain_hi())) out.push_back(f.domain_hi());
    return out;
}

std::vector<Rational> critical_values(const PLMap& f) {
    std::vector<Rational> vals;
    vals.push_back(f.node_y(0));
    for (std::size_t i = 1; i + 1 < f.node_count(); ++i) {
        if ((f.slope(i - 1) > 0) != (f.slope(i) > 0)) vals.push_back(f.node_y(i));
    }
    vals.push_back(f.node_y(f.node_count() - 1));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
}

Rational min_abs_slope(const PLMap& f) {
    Rational best = rat_abs(f.slope(0));
    for (const auto& s : f.slopes()) {
        Rational a = rat_abs(s);
        if (a < best) best = a;
    }
    return best;
}

Rational max_abs_slope(const PLMap& f) {
    Rational best = rat_abs(f.slope(0));
    for (const auto& s : f.slopes()) {
        Rational a = rat_abs(s);
        if (a > best) best = a;
    }
    return best;
}

bool has_zero_slope(const PLMap& f) {
    for (const auto& s : f.slopes())
        if (s == 0) return true;
    return false;
}

Rational min_segment_width(const PLMap& f) {
    Rational best = f.node_x(1) - f.node_x(0);
    for (std::size_t i = 1; i < f.segment_count(); ++i) {
        Rational w = f.node_x(i + 1) - f.node_x(i);
        if (w < best) best = w;
    }
    return best;
}

std::string serialize_plmap(const PLMap& f) {
    std::ostringstream os;
    os << "plmap v1 " << rat_str(f.domain_lo()) << ' ' << rat_str(f.domain_hi()) << ' '
       << rat_str(f.codomain_lo()) << ' ' << rat_str(f.codomain_hi()) << '\n';
    for (std::size_t i = 0; i < f.node_count(); ++i)
        os << rat_str(f.node_x(i)) << ' ' << rat_str(f.node_y(i)) << '\n';
    return os.str();
}

PLMap parse_plmap(const std::string& text) {
    std::istringstream is(text);
    std::string tag, ver;
    is >> tag >> ver;
    if (tag != "plmap" || ver != "v1") throw ParseError("not a plmap v1 document");
    std::string dlo, dhi, clo, chi;
    if (!(is >> dlo >> dhi >> clo >> chi)) throw ParseError("truncated plmap header");
    std::vector<Node> nodes;
    std::string xs, ys;
    while (is >> xs >> ys) nodes.push_back({parse_rational(xs), parse_rational(ys)});
    PLMap f = PLMap::from_nodes(std::move(nodes), parse_rational(clo), parse_rational(chi));
    if (f.domain_lo() != parse_rational(dlo) || f.domain_hi() != parse_rational(dhi))
        throw ParseError("plmap header domain disagrees with node list");
    return f;
}

std::uint64_t content_hash(const PLMap& f) { return fnv1a(serialize_plmap(f)); }

ImageOracle::ImageOracle(const PLMap& f) : f_(&f) {
    const auto n = static_cast<std::int32_t>(f.node_count());
    int levels = 1;
    while ((1 << levels) <= n) ++levels;
    min_idx_.assign(levels, {});
    max_idx_.assign(levels, {});
    min_idx_[0].resize(n);
    max_idx_[0].resize(n);
    for (std::int32_t i = 0; i < n; ++i) min_idx_[0][i] = max_idx_[0][i] = i;
    const auto& ys = f.ys();
    for (int l = 1; l < levels; ++l) {
        std::int32_t len = 1 << l;
        if (len > n) break;
        min_idx_[l].resize(n - len + 1);
        max_idx_[l].resize(n - len + 1);
        for (std::int32_t i = 0; i + len <= n; ++i) {
            std::int32_t a = min_idx_[l - 1][i], b = min_idx_[l - 1][i + len / 2];
            min_idx_[l][i] = ys[b] < ys[a] ? b : a;
            a = max_idx_[l - 1][i];
            b = max_idx_[l - 1][i + len / 2];
            max_idx_[l][i] = ys[b] > ys[a] ? b : a;
        }
    }
}

std::pair<int, int> ImageOracle::range_minmax(int lo, int hi) const {
    int len = hi - lo + 1;
    int l = 0;
    while ((2 << l) <= len) ++l;
    const auto& ys = f_->ys();
    int a = min_idx_[l][lo], b = min_idx_[l][hi - (1 << l) + 1];
    int mn = ys[b] < ys[a] ? b : a;
    a = max_idx_[l][lo];
    b = max_idx_[l][hi - (1 << l) + 1];
    int mx = ys[b] > ys[a] ? b : a;
    return {mn, mx};
}

std::pair<Rational, Rational> ImageOracle::operator()(const Rational& a, const Rational& b) const {
    const PLMap& f = *f_;
    Rational lo = f(a), hi = f(b);
    if (lo > hi) std::swap(lo, hi);
    const auto& xs = f.xs();
    auto i = static_cast<int>(std::upper_bound(xs.begin(), xs.end(), a) - xs.begin());
    auto e = static_cast<int>(std::lower_bound(xs.begin(), xs.end(), b) - xs.begin()) - 1;
    if (i <= e) {
        auto [mn, mx] = range_minmax(i, e);
        const auto& ys = f.ys();
        if (ys[mn] < lo) lo = ys[mn];
        if (ys[mx] > hi) hi = ys[mx];
    }
    return {lo, hi};
}

PLFlat flatten(const PLMap& f) {
    PLFlat flat;
    flat.xs.reserve(f.node_count());
    flat.ys.reserve(f.node_count());
    flat.slopes.reserve(f.segment_count());
    for (std::size_t i = 0; i < f.node_count(); ++i) {
        flat.xs.push_back(to_double(f.node_x(i)));
        flat.ys.push_back(to_double(f.node_y(i)));
    }
    for (std::size_t i = 0; i < f.segment_count(); ++i) flat.slopes.push_back(to_double(f.slope(i)));
    flat.lo = flat.xs.front();
    flat.hi = flat.xs.back();
    return flat;
}

}  // namespace pamap
