#include <doctest.h>

#include "pamap/measure.hpp"
#include "pamap/plmap.hpp"
#include "pamap/rng.hpp"
#include "pamap/sigma.hpp"
#include "test_util.hpp"

using namespace pamap;
using testutil::tent;

TEST_CASE("rational parsing and printing round-trip") {
    CHECK(rat_str(rat(3, 6)) == "1/2");
    CHECK(rat_str(rat(-4, 2)) == "-2/1");
    CHECK(parse_rational("3/5") == rat(3, 5));
    CHECK(parse_rational("-12/8") == rat(-3, 2));
    CHECK(parse_rational("0.125") == rat(1, 8));
    CHECK(parse_rational("2") == rat(2));
    CHECK(parse_rational(rat_str(rat(22, 7))) == rat(22, 7));
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
}

TEST_CASE("canonicalization merges collinear nodes") {
    PLMap f = PLMap::from_nodes(
        {{rat(0), rat(0)}, {rat(1, 4), rat(1, 4)}, {rat(1, 2), rat(1, 2)}, {rat(1), rat(0)}});
    CHECK(f.node_count() == 3);  // the middle of the identity run merges away
    CHECK(f == PLMap::from_nodes({{rat(0), rat(0)}, {rat(1, 2), rat(1, 2)}, {rat(1), rat(0)}}));
    CHECK_THROWS_AS(
        PLMap::from_nodes({{rat(0), rat(0)}, {rat(0), rat(1)}, {rat(1), rat(0)}}),
        InvariantViolation);
}

TEST_CASE("eval: identity and sigma_5 figure nodes") {
    CHECK(PLMap::identity()(rat(1, 3)) == rat(1, 3));
    PLMap s5 = sigma(5);
    CHECK(s5(rat(12, 29)) == rat(4, 5));
    CHECK(s5(rat(2, 29)) == rat(2, 5));
    CHECK_THROWS_AS(s5(rat(3, 2)), DomainError);
}

TEST_CASE("compose: identity is neutral, node-identical") {
    PLMap s7 = sigma(7);
    CHECK(compose(PLMap::identity(), s7) == s7);
    CHECK(compose(s7, PLMap::identity()) == s7);
}

TEST_CASE("compose equals pointwise composition on 257 random rationals") {
    PLMap s3 = sigma(3);
    PLMap c = compose(s3, s3);
    Rng rng(20240817);
    for (int i = 0; i < 257; ++i) {
        Rational x = rng.next_rational();
        CHECK(c(x) == s3(s3(x)));
    }
}

TEST_CASE("compose piece count bounded by pieces(f) + crossings, brute force") {
    PLMap s3 = sigma(3);
    // brute-force crossing count of every interior node value of the outer map
    long crossings = 0;
    for (std::size_t j = 1; j + 1 < s3.node_count(); ++j) {
        const Rational& level = s3.node_x(j);
        for (std::size_t i = 0; i < s3.segment_count(); ++i) {
            Rational lo = rat_min(s3.node_y(i), s3.node_y(i + 1));
            Rational hi = rat_max(s3.node_y(i), s3.node_y(i + 1));
            if (level > lo && level < hi) ++crossings;
        }
    }
    PLMap c = compose(s3, s3);
    CHECK(static_cast<long>(c.segment_count()) <=
          static_cast<long>(s3.segment_count()) + crossings);
    CHECK(compose_node_bound(s3, s3) >= static_cast<std::int64_t>(c.node_count()));
}

TEST_CASE("iterate: zero, one, tent cube") {
    PLMap t = tent();
    CHECK(iterate(t, 0, 1000) == PLMap::identity());
    CHECK(iterate(t, 1, 1000) == t);
    PLMap t3 = iterate(t, 3, 1000);
    CHECK(t3.segment_count() == 8);
    for (std::size_t i = 0; i < t3.segment_count(); ++i) CHECK(rat_abs(t3.slope(i)) == rat(8));
    CHECK_THROWS_AS(iterate(t, 12, 100), IterateBudgetError);
    try {
        iterate(t, 12, 100);
    } catch (const IterateBudgetError& e) {
        CHECK(e.reached.segment_count() <= 100);
        CHECK(e.pieces > 100);
        CHECK(e.steps_done >= 1);
    }
}

TEST_CASE("sup_distance: exact node sweep") {
    PLMap id = PLMap::identity();
    PLMap s5 = sigma(5);
    CHECK(sup_distance(s5, s5) == 0);
    // witnessed lower bound from the (2/29, 2/5) node; exact max at (24/29, 2/5)
    Rational d = sup_distance(s5, id);
    CHECK(d >= rat(2, 5) - rat(2, 29));
    CHECK(d >= rat(2, 5));
    CHECK(d == rat(24, 29) - rat(2, 5));
    CHECK(sup_distance(id, s5) == d);
}

TEST_CASE("sup_distance metric properties on sampled triples") {
    PLMap a = sigma(3), b = sigma(4), c = sigma(5);
    CHECK(sup_distance(a, b) == sup_distance(b, a));
    CHECK(sup_distance(a, c) <= sup_distance(a, b) + sup_distance(b, c));
    CHECK(sup_distance(a, a) == 0);
    PLMap a2 = parse_plmap(serialize_plmap(a));
    CHECK(sup_distance(a, a2) == 0);
    CHECK(a == a2);
}

TEST_CASE("image_of_interval exact extremes and monotonicity") {
    PLMap id = PLMap::identity();
    auto [lo, hi] = image_of_interval(id, rat(1, 4), rat(1, 2));
    CHECK(lo == rat(1, 4));
    CHECK(hi == rat(1, 2));
    PLMap s5 = sigma(5);
    auto im = image_of_interval(s5, rat(0), rat(2, 29));
    CHECK(im.first == rat(0));
    CHECK(im.second == rat(2, 5));
    // A inside B implies image(A) inside image(B)
    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        Rational u = rng.next_rational(), v = rng.next_rational();
        Rational a = rat_min(u, v), b = rat_max(u, v);
        if (a == b) continue;
        Rational mid = (a + b) / 2;
        auto inner = image_of_interval(s5, a, mid);
        auto outer = image_of_interval(s5, a, b);
        CHECK(outer.first <= inner.first);
        CHECK(inner.second <= outer.second);
    }
}

TEST_CASE("ImageOracle agrees with the direct scan") {
    PLMap s6 = sigma(6);
    ImageOracle img(s6);
    Rng rng(99);
    for (int i = 0; i < 200; ++i) {
        Rational u = rng.next_rational(), v = rng.next_rational();
        Rational a = rat_min(u, v), b = rat_max(u, v);
        CHECK(img(a, b) == image_of_interval(s6, a, b));
    }
}

TEST_CASE("conjugate: identity, pointwise oracle, piece count") {
    PLMap t = tent();
    CHECK(conjugate(t, PLMap::identity()) == t);
    // PL stand-in for x^2: 3 nodes
    PLMap h = PLMap::from_nodes(
        {{rat(0), rat(0)}, {rat(1, 2), rat(1, 4)}, {rat(1), rat(1)}}, rat(0), rat(1));
    PLMap c = conjugate(t, h);
    PLMap hinv = inverse_homeo(h);
    Rng rng(4242);
    for (int i = 0; i < 200; ++i) {
        Rational x = rng.next_rational();
        CHECK(c(x) == h(t(hinv(x))));
    }
    CHECK(c.segment_count() >= t.segment_count());
    // conjugation by a homeomorphism preserves the number of monotone pieces
    auto monotone_pieces = [](const PLMap& f) {
        std::size_t n = 1;
        for (std::size_t i = 1; i < f.segment_count(); ++i)
            if ((f.slope(i) > 0) != (f.slope(i - 1) > 0)) ++n;
        return n;
    };
    CHECK(monotone_pieces(c) == monotone_pieces(t));
    // round-trip through h then h^{-1}
    PLMap back = conjugate(conjugate(t, h), hinv);
    CHECK(sup_distance(back, t) == 0);
}

TEST_CASE("serialization round-trips bit-exactly") {
    for (int n : {1, 3, 5, 7}) {
        PLMap s = sigma(n);
        std::string text = serialize_plmap(s);
        PLMap back = parse_plmap(text);
        CHECK(back == s);
        CHECK(serialize_plmap(back) == text);
    }
    CHECK_THROWS_AS(parse_plmap("nonsense"), ParseError);
}

TEST_CASE("preimages and critical values") {
    PLMap t = tent();
    auto pre = preimages(t, rat(1, 2));
    REQUIRE(pre.size() == 2);
    CHECK(pre[0] == rat(1, 4));
    CHECK(pre[1] == rat(3, 4));
    auto top = preimages(t, rat(1));
    REQUIRE(top.size() == 1);
    CHECK(top[0] == rat(1, 2));
    auto cv = critical_values(t);
    REQUIRE(cv.size() == 2);
    CHECK(cv[0] == rat(0));
    CHECK(cv[1] == rat(1));
    CHECK(min_abs_slope(t) == rat(2));
    CHECK(max_abs_slope(t) == rat(2));
}
