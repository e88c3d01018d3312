#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pamap/errors.hpp"
#include "pamap/rational.hpp"

namespace pamap {

struct Node {
    Rational x, y;
};

// Continuous piecewise-linear map with exact rational nodes.
//
// Canonical form: node x-coordinates strictly increasing, no three
// consecutive collinear nodes (merged on construction), per-segment slopes
// precomputed. Domain is [first x, last x]; the codomain is declared
// metadata and must envelope every node value.
class PLMap {
   public:
    static PLMap from_nodes(std::vector<Node> nodes, Rational codomain_lo, Rational codomain_hi);
    // codomain defaults to the tight value hull
    static PLMap from_nodes(std::vector<Node> nodes);
    static PLMap identity();  // id on [0,1]
    static PLMap identity(const Rational& lo, const Rational& hi);

    std::size_t node_count() const { return xs_.size(); }
    std::size_t segment_count() const { return xs_.size() - 1; }
    const Rational& node_x(std::size_t i) const { return xs_[i]; }
    const Rational& node_y(std::size_t i) const { return ys_[i]; }
    const Rational& slope(std::size_t i) const { return slopes_[i]; }
    const std::vector<Rational>& xs() const { return xs_; }
    const std::vector<Rational>& ys() const { return ys_; }
    const std::vector<Rational>& slopes() const { return slopes_; }

    const Rational& domain_lo() const { return xs_.front(); }
    const Rational& domain_hi() const { return xs_.back(); }
    const Rational& codomain_lo() const { return clo_; }
    const Rational& codomain_hi() const { return chi_; }

    // exact min/max attained value
    std::pair<Rational, Rational> value_hull() const;

    bool same_domain(const PLMap& other) const {
        return domain_lo() == other.domain_lo() && domain_hi() == other.domain_hi();
    }
    // structural equality of canonical forms (nodes and codomain)
    bool operator==(const PLMap& other) const {
        return xs_ == other.xs_ && ys_ == other.ys_ && clo_ == other.clo_ && chi_ == other.chi_;
    }

    Rational operator()(const Rational& x) const;

    // index of a segment containing x (ties resolved to the left segment)
    std::size_t segment_index(const Rational& x) const;

    bool maps_into_self() const;

   private:
    PLMap() = default;
    std::vector<Rational> xs_, ys_, slopes_;
    Rational clo_, chi_;
};

inline Rational eval(const PLMap& f, const Rational& x) { return f(x); }

// g after f; nodes of the result are f's nodes refined by all preimages of
// g's node x-coordinates under f. Throws CompositionError unless the exact
// range of f is contained in g's domain.
PLMap compose(const PLMap& g, const PLMap& f);

// Upper bound on the node count of compose(g, f) without building it
// (canonicalization can only shrink it). Lets budgeted callers bail out
// before allocating a hundred-million-node composition.
std::int64_t compose_node_bound(const PLMap& g, const PLMap& f);

struct IterateBudgetError : BudgetError {
    IterateBudgetError(std::string msg, PLMap reached_, std::int64_t pieces_, int steps_done_)
        : BudgetError(std::move(msg)),
          reached(std::move(reached_)),
          pieces(pieces_),
          steps_done(steps_done_) {}
    PLMap reached;       // last iterate that still fit the budget
    std::int64_t pieces;  // piece count that broke the budget
    int steps_done;
};

// exact f^n; aborts with IterateBudgetError when an intermediate composition
// exceeds piece_budget segments
PLMap iterate(const PLMap& f, int n, std::int64_t piece_budget);

// metric of uniform convergence; exact (the difference is PL, extremal at
// the union of node sets)
Rational sup_distance(const PLMap& f, const PLMap& g);

// exact min/max of f over [a,b]
std::pair<Rational, Rational> image_of_interval(const PLMap& f, const Rational& a,
                                                const Rational& b);

// f restricted to [a,b] (codomain = tight hull of the restriction)
PLMap restrict_map(const PLMap& f, const Rational& a, const Rational& b);

// y -> scale*y + offset on every node, codomain transformed accordingly
PLMap postcompose_affine(const PLMap& f, const Rational& scale, const Rational& offset);

// exact PL inverse of a strictly monotone map
PLMap inverse_homeo(const PLMap& h);

// h∘f∘h⁻¹ for a PL homeomorphism h
PLMap conjugate(const PLMap& f, const PLMap& h);

// sorted solutions of f(x) = y (turning points that touch y included once)
std::vector<Rational> preimages(const PLMap& f, const Rational& y);

// values at slope sign changes plus the two endpoint values, sorted unique
std::vector<Rational> critical_values(const PLMap& f);

Rational min_abs_slope(const PLMap& f);
bool has_zero_slope(const PLMap& f);
Rational min_segment_width(const PLMap& f);
// exact Lipschitz constant (max |slope|)
Rational max_abs_slope(const PLMap& f);

// `plmap v1` text format; round-trips bit-exactly
std::string serialize_plmap(const PLMap& f);
PLMap parse_plmap(const std::string& text);
std::uint64_t content_hash(const PLMap& f);

// Sparse-table min/max over node values for fast repeated exact interval
// images (covering-time iteration does thousands of these).
class ImageOracle {
   public:
    explicit ImageOracle(const PLMap& f);
    std::pair<Rational, Rational> operator()(const Rational& a, const Rational& b) const;

   private:
    std::pair<int, int> range_minmax(int lo, int hi) const;  // inclusive node range
    const PLMap* f_;
    std::vector<std::vector<std::int32_t>> min_idx_, max_idx_;
};

// Double-precision shadow of a PLMap for the sampling/rendering lane.
struct PLFlat {
    std::vector<double> xs, ys, slopes;
    double lo = 0.0, hi = 1.0;
};

PLFlat flatten(const PLMap& f);

}  // namespace pamap
