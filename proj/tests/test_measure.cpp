#include <doctest.h>

#include "pamap/markov.hpp"
#include "pamap/measure.hpp"
#include "pamap/rng.hpp"
#include "pamap/sigma.hpp"
#include "pamap/window.hpp"
#include "test_util.hpp"

using namespace pamap;
using testutil::tent;

TEST_CASE("measure certificate: identity, tent, non-surjective") {
    auto id_cert = is_measure_preserving(PLMap::identity());
    CHECK(id_cert.verdict);
    for (auto& [mid, sum] : id_cert.witnesses) CHECK(sum == 1);

    CHECK(is_measure_preserving(tent()).verdict);

    // x/2 folded into [0,1] non-surjectively: mass escapes [0,1/2]
    PLMap half = PLMap::from_nodes({{rat(0), rat(0)}, {rat(1), rat(1, 2)}}, rat(0), rat(1));
    auto cert = is_measure_preserving(half);
    CHECK_FALSE(cert.verdict);
    REQUIRE(cert.failing_value.has_value());
    CHECK(*cert.failing_value > rat(1, 2));

    // plateau fails fast
    PLMap flat = PLMap::from_nodes(
        {{rat(0), rat(0)}, {rat(1, 4), rat(1, 2)}, {rat(1, 2), rat(1, 2)}, {rat(1), rat(1)}},
        rat(0), rat(1));
    CHECK_FALSE(is_measure_preserving(flat).verdict);

    // surjective zigzag that is not measure-preserving: every gap checked
    PLMap zig = PLMap::from_nodes(
        {{rat(0), rat(0)}, {rat(1, 2), rat(1)}, {rat(3, 4), rat(1, 2)}, {rat(1), rat(1)}});
    auto zcert = is_measure_preserving(zig);
    CHECK_FALSE(zcert.verdict);
}

TEST_CASE("lambda_equivalent: reflexive, window perturbation, id vs tent") {
    PLMap t = tent();
    CHECK(lambda_equivalent(t, t, rat(0), rat(1)));
    CHECK(lambda_equivalent(t, t, rat(1, 8), rat(5, 8)));

    auto wp = window_perturbation(t, rat(1, 8), rat(3, 8), 3);
    CHECK_FALSE(wp.discontinuity_at.has_value());
    CHECK(lambda_equivalent(t, wp.map, rat(1, 8), rat(3, 8)));

    // On the full interval two measure-preserving maps pull back Lebesgue
    // measure identically; a proper window distinguishes them.
    CHECK(lambda_equivalent(PLMap::identity(), t, rat(0), rat(1)));
    CHECK_FALSE(lambda_equivalent(PLMap::identity(), t, rat(0), rat(1, 2)));
}

TEST_CASE("measure_conjugator: uniform density, two-piece density, monotonicity") {
    PLMap h0 = measure_conjugator({{rat(1), rat(1)}});
    CHECK(h0 == PLMap::identity());

    PLMap h = measure_conjugator({{rat(1, 4), rat(2)}, {rat(1), rat(2, 3)}});
    CHECK(h(rat(1, 4)) == rat(1, 2));
    CHECK(h(rat(0)) == rat(0));
    CHECK(h(rat(1)) == rat(1));
    for (std::size_t i = 0; i < h.segment_count(); ++i) CHECK(h.slope(i) > 0);

    CHECK_THROWS_AS(measure_conjugator({{rat(1), rat(1, 2)}}), DomainError);  // mass 1/2
    CHECK_THROWS_AS(measure_conjugator({{rat(1, 2), rat(-1)}, {rat(1), rat(3)}}), DomainError);
}

TEST_CASE("window perturbation: m=1 identity, fig pattern, even-m flag") {
    PLMap t = tent();
    CHECK(window_perturbation(t, rat(1, 4), rat(1, 2), 1).map == t);

    // 3-fold window over [7/16, 5/8] on the fold: 3 compressed copies,
    // interior slopes tripled
    auto wp = window_perturbation(t, rat(7, 16), rat(5, 8), 3);
    CHECK_FALSE(wp.discontinuity_at.has_value());
    const PLMap& h = wp.map;
    CHECK(h(rat(7, 16)) == t(rat(7, 16)));
    CHECK(h(rat(5, 8)) == t(rat(5, 8)));
    int sixes = 0;
    for (std::size_t i = 0; i < h.segment_count(); ++i) {
        if (h.node_x(i) >= rat(7, 16) && h.node_x(i + 1) <= rat(5, 8)) {
            CHECK(rat_abs(h.slope(i)) == rat(6));
            ++sixes;
        }
    }
    CHECK(sixes == 6);  // 3 copies x 2 monotone legs of the folded window
    CHECK(is_measure_preserving(h).verdict);
    CHECK(lambda_equivalent(t, h, rat(7, 16), rat(5, 8)));

    // even m on mismatched endpoints is flagged, not silently joined
    auto even = window_perturbation(t, rat(1, 8), rat(3, 8), 2);
    REQUIRE(even.discontinuity_at.has_value());
    CHECK(*even.discontinuity_at == rat(3, 8));
}

TEST_CASE("window perturbation preserves the measure verdict for odd m") {
    Rng rng(555);
    PLMap t = tent();
    for (int trial = 0; trial < 20; ++trial) {
        Rational u = rng.next_rational(), v = rng.next_rational();
        Rational a = rat_min(u, v), b = rat_max(u, v);
        if (b - a < rat(1, 50)) continue;
        int m = 2 * static_cast<int>(rng.next_below(4)) + 3;
        auto wp = window_perturbation(t, a, b, m);
        CHECK(is_measure_preserving(wp.map).verdict);
    }
}

TEST_CASE("markov_analysis: tent, identity") {
    auto ms = markov_analysis(tent());
    REQUIRE(ms.is_markov);
    REQUIRE(ms.transition.size() == 2);
    CHECK(ms.transition[0][0] == 1);
    CHECK(ms.transition[0][1] == 1);
    CHECK(ms.transition[1][0] == 1);
    CHECK(ms.transition[1][1] == 1);
    CHECK(ms.is_leo);
    CHECK(ms.min_slope == rat(2));

    auto id_ms = markov_analysis(PLMap::identity());
    CHECK(id_ms.is_markov);
    CHECK_FALSE(id_ms.is_leo);
}

TEST_CASE("matrix primitivity") {
    CHECK(matrix_primitive({{1, 1}, {1, 1}}));
    CHECK(matrix_primitive({{0, 1}, {1, 1}}));
    CHECK_FALSE(matrix_primitive({{1, 0}, {0, 1}}));
    CHECK_FALSE(matrix_primitive({{0, 1}, {1, 0}}));  // periodic, not primitive
}
