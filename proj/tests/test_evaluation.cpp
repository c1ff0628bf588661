#include "takagi/evaluation.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace takagi;

namespace {

Rational random_rational(std::mt19937_64& rng, long long den_bound) {
    long long d = static_cast<long long>(rng() % static_cast<unsigned long long>(den_bound)) + 1;
    long long n = static_cast<long long>(rng() % static_cast<unsigned long long>(d + 1));
    return rat(n, d);
}

}  // namespace

TEST_CASE("phi is the distance to the nearest integer") {
    CHECK(phi(rat(1, 2)) == rat(1, 2));
    CHECK(phi(rat(7, 3)) == rat(1, 3));
    CHECK(phi(Rational(5)) == 0);
    CHECK(phi(rat(-1, 4)) == rat(1, 4));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        Rational x = random_rational(rng, 400) - rat(1, 2);
        REQUIRE(phi(x) == phi(x + 1));
        REQUIRE(phi(-x) == phi(x));
        REQUIRE(phi(x) >= 0);
        REQUIRE(phi(x) <= rat(1, 2));
    }
}

TEST_CASE("distance to radix levels matches the phi closed form") {
    std::mt19937_64 rng(5);
    for (int r : {2, 3, 10}) {
        auto d = build_radix(r, 8);
        for (int i = 0; i < 60; ++i) {
            Rational x = random_rational(rng, 3000);
            for (int n = 0; n <= 8; ++n) {
                Rational rn = pow(Integer(r), static_cast<unsigned>(n));
                REQUIRE(g(d, n, x) == phi(x * rn) / rn);
            }
        }
    }
    CHECK(g(build_radix(2, 2), 1, rat(3, 8)) == rat(1, 8));
    CHECK_THROWS_AS(g(build_radix(2, 2), 1, Rational(2)), std::invalid_argument);
}

TEST_CASE("partial sums of the classical Takagi function") {
    GeneralizedTakagi t(build_radix(2, 24), WeightSequence::constant(1));
    SECTION("D_0 = {0,1} base case") {
        GeneralizedTakagi t0(build_radix(2, 1), WeightSequence::constant(1));
        CHECK(partial_sum(t0, 0, rat(1, 2)) == rat(1, 2));
    }
    SECTION("terms beyond level 1 vanish at 1/4") {
        // oracle: direct exact summation
        for (int N = 1; N <= 10; ++N) {
            Rational direct(0);
            for (int k = 0; k <= N; ++k) direct += t.decomposition().distance(k, rat(1, 4));
            CHECK(direct == rat(1, 2));
            CHECK(partial_sum(t, N, rat(1, 4)) == rat(1, 2));
        }
    }
    SECTION("closed form at 1/3") {
        for (int N = 0; N <= 20; ++N) {
            Rational expected = rat(2, 3) * (1 - Rational(1, Integer(1) << (N + 1)));
            CHECK(partial_sum(t, N, rat(1, 3)) == expected);
        }
    }
}

TEST_CASE("tail bounds certify the weighted alpha series") {
    SECTION("Takagi: 2^-N") {
        GeneralizedTakagi t(build_radix(2, 20), WeightSequence::constant(1));
        for (int N = 0; N <= 12; ++N)
            CHECK(tail_bound(t, N) == Rational(1, Integer(1) << N));
    }
    SECTION("any geometric majorant dominates the true tail") {
        for (int r : {2, 3, 5}) {
            GeneralizedTakagi t(build_radix(r, 18), WeightSequence::constant(1));
            for (int N = 0; N <= 10; ++N) {
                Rational truth(0);
                for (int k = N + 1; k <= 18; ++k)
                    truth += t.decomposition().alpha(k);
                CHECK(tail_bound(t, N) >= truth);
            }
        }
    }
    SECTION("counterexample pair bound") {
        GeneralizedTakagi t(build_counterexample(6, false), WeightSequence::alternating(1));
        REQUIRE(t.pair_certified());
        for (int m = 0; m <= 5; ++m) {
            Rational expected = Rational(1, 2 * pow(Integer(3), static_cast<unsigned>(m + 1)));
            CHECK(tail_bound(t, 2 * m + 1) == expected);
        }
        // |H_n(x)| <= 3^-(n+1) on a dense grid, and the plateau value at 0
        auto grid = t.decomposition().level_points(7);
        for (int n = 0; n <= 3; ++n) {
            Rational bound(1, pow(Integer(3), static_cast<unsigned>(n + 1)));
            for (const auto& z : grid) REQUIRE(rational_abs(pair_sum(t, n, z)) <= bound);
            CHECK(pair_sum(t, n, Rational(0)) == bound);
            // plateau interval from the construction
            Rational edge = Rational(1, Integer(1) << n) - bound;
            CHECK(pair_sum(t, n, edge) == bound);
            CHECK(pair_sum(t, n, -edge) == bound);
        }
        CHECK_THROWS_AS(pair_sum(GeneralizedTakagi(build_radix(2, 4), WeightSequence::constant(1)), 1,
                                 Rational(0)),
                        std::invalid_argument);
    }
    SECTION("uncertifiable instances are rejected at construction") {
        auto expl = make_explicit(0, 1, {{Rational(0), Rational(1)}});
        CHECK_THROWS_AS(GeneralizedTakagi(expl, WeightSequence::constant(1)), UncertifiedTailError);
        CHECK_THROWS_AS(
            GeneralizedTakagi(build_radix(2, 4), WeightSequence::geometric(1, Rational(3))),
            UncertifiedTailError);
        // a declared majorant refuted by a stored level is rejected
        CHECK_THROWS_AS(GeneralizedTakagi(expl, WeightSequence::constant(1),
                                          GeometricTail{rat(1, 10), rat(1, 2), 0}),
                        UncertifiedTailError);
    }
}

TEST_CASE("evaluate returns nested certified enclosures") {
    GeneralizedTakagi t(build_radix(2, 30), WeightSequence::constant(1));
    SECTION("exact at 1/2 from level 1 on") {
        auto v = evaluate(t, rat(1, 2), rat(1, 1000));
        CHECK(v.contains(rat(1, 2)));
        CHECK(v.width() <= rat(2, 1000));
    }
    SECTION("shrinks onto 2/3 at 1/3") {
        Rational eps(1, 1000000);
        auto v = evaluate(t, rat(1, 3), eps);
        CHECK(v.contains(rat(2, 3)));
        CHECK(v.width() <= 2 * eps);
    }
    SECTION("zero weights give [0,0]") {
        GeneralizedTakagi z(build_radix(2, 6), WeightSequence::constant(0));
        CHECK(evaluate(z, rat(1, 3), rat(1, 1000)) == RatInterval(Rational(0), Rational(0)));
    }
    SECTION("nesting under smaller eps, containing the exact value") {
        std::mt19937_64 rng(17);
        for (int i = 0; i < 40; ++i) {
            Rational x = random_rational(rng, 4000);
            Rational eps(1, 4096);
            auto outer = evaluate(t, x, eps);
            auto inner = evaluate(t, x, eps / 10);
            REQUIRE(outer.contains(inner));
            auto exact = exact_value(t, x, 8192);  // orbit period can approach the denominator
            REQUIRE(exact.has_value());
            REQUIRE(outer.contains(*exact));
            REQUIRE(inner.contains(*exact));
        }
    }
    SECTION("insufficient depth reports the achievable eps") {
        GeneralizedTakagi shallow(build_radix(2, 4), WeightSequence::constant(1));
        try {
            evaluate(shallow, rat(1, 3), rat(1, 1000000));
            FAIL("expected DepthError");
        } catch (const DepthError& e) {
            CHECK(e.achievable == rat(1, 16));
        }
    }
}

TEST_CASE("exact values via orbit summation") {
    GeneralizedTakagi t(build_radix(2, 20), WeightSequence::constant(1));
    CHECK(*exact_value(t, rat(1, 3)) == rat(2, 3));
    CHECK(*exact_value(t, rat(5, 6)) == rat(1, 2));
    CHECK(*exact_value(t, Rational(0)) == 0);
    CHECK(*exact_value(t, rat(1, 4)) == rat(1, 2));
    SECTION("agrees with enclosures on random rationals") {
        std::mt19937_64 rng(23);
        for (int i = 0; i < 50; ++i) {
            Rational x = random_rational(rng, 120);
            auto ex = exact_value(t, x);
            REQUIRE(ex.has_value());
            REQUIRE(evaluate(t, x, rat(1, 100000)).contains(*ex));
        }
    }
    SECTION("alternating and geometric weights") {
        GeneralizedTakagi ta(build_radix(2, 20), WeightSequence::alternating(1));
        // sum (-1)^k 2^-k phi-orbit at 1/3: all phi = 1/3 -> (1/3) sum(-1/2)^k = 2/9
        CHECK(*exact_value(ta, rat(1, 3)) == rat(2, 9));
        GeneralizedTakagi tg(build_radix(2, 20), WeightSequence::geometric(1, rat(1, 2)));
        // (1/3) sum 4^-k = 4/9
        CHECK(*exact_value(tg, rat(1, 3)) == rat(4, 9));
    }
    SECTION("chains with non-uniform ratios fall back") {
        GeneralizedTakagi tc(build_divisor_chain({1, 2, 6, 12, 24, 48}), WeightSequence::constant(1));
        CHECK(!exact_value(tc, rat(1, 5)).has_value());
        CHECK(exact_value(tc, rat(1, 2)).has_value());  // membership path still works
    }
}

TEST_CASE("g is 1-Lipschitz and refines monotonically") {
    std::mt19937_64 rng(29);
    auto d = build_radix(3, 10);
    for (int i = 0; i < 80; ++i) {
        Rational x = random_rational(rng, 2000);
        Rational y = random_rational(rng, 2000);
        for (int n : {0, 2, 5}) {
            REQUIRE(rational_abs(g(d, n, x) - g(d, n, y)) <= rational_abs(x - y));
        }
        for (int n = 0; n < 10; ++n) REQUIRE(g(d, n + 1, x) <= d.alpha(n + 1));
    }
}

TEST_CASE("radix instances equal the weighted phi series") {
    // f_{r,w}(x) = sum w_n phi(r^n x)/r^n, checked per partial sum
    std::mt19937_64 rng(31);
    for (int r : {2, 3}) {
        GeneralizedTakagi t(build_radix(r, 12), WeightSequence::alternating(rat(3, 2)));
        for (int i = 0; i < 30; ++i) {
            Rational x = random_rational(rng, 500);
            Rational direct(0);
            for (int n = 0; n <= 12; ++n) {
                Rational rn = pow(Integer(r), static_cast<unsigned>(n));
                direct += t.weights().at(n) * phi(rn * x) / rn;
            }
            REQUIRE(partial_sum(t, 12, x) == direct);
        }
    }
}

TEST_CASE("weight rules expose flags, parsing, and closed forms") {
    auto c1 = WeightSequence::constant(1);
    CHECK(!c1.in_c0());
    CHECK(!c1.in_l1());
    CHECK(c1.nonnegative());
    auto alt = WeightSequence::alternating(1);
    CHECK(!alt.in_c0());
    CHECK(alt.at(0) == 1);
    CHECK(alt.at(1) == -1);
    auto geo = WeightSequence::geometric(1, rat(1, 2));
    CHECK(geo.in_c0());
    CHECK(geo.in_l1());
    auto tri = WeightSequence::triple();
    CHECK(!tri.in_c0());
    CHECK(tri.at(0) == 0);
    CHECK(tri.at(1) == 1);
    CHECK(tri.at(2) == -1);
    CHECK(tri.at(3) == rat(-1, 2));
    CHECK(tri.at(6) == rat(1, 4));
    CHECK(tri.at(9) == rat(1, 8));

    auto parsed = WeightSequence::parse("prefix [0,1/2] then alt 1");
    CHECK(parsed.at(0) == 0);
    CHECK(parsed.at(1) == rat(1, 2));
    CHECK(parsed.at(2) == 1);   // absolute parity
    CHECK(parsed.at(3) == -1);
    CHECK(WeightSequence::parse("geom 1 1/2").at(2) == rat(1, 4));
    CHECK_THROWS_AS(WeightSequence::parse("bogus 1"), std::invalid_argument);
    CHECK_THROWS_AS(WeightSequence::parse("const"), std::invalid_argument);

    auto neg = c1.negated();
    CHECK(neg.at(5) == -1);
    CHECK(!neg.nonnegative());
    auto z = c1.zeroed_below(3);
    CHECK(z.at(0) == 0);
    CHECK(z.at(2) == 0);
    CHECK(z.at(3) == 1);

    SECTION("closed-form running-sum limits") {
        auto lims = alt.closed_form_sum_limits(0);
        REQUIRE(lims);
        CHECK(lims->liminf.value == 0);
        CHECK(lims->limsup.value == 1);
        auto zl = WeightSequence::constant(0).closed_form_sum_limits(0);
        REQUIRE(zl);
        CHECK(zl->liminf.value == 0);
        CHECK(zl->limsup.value == 0);
        auto tl = tri.closed_form_sum_limits(0);
        REQUIRE(tl);
        CHECK(tl->liminf.value == 0);  // block sums -2^-K rise to 0
        CHECK(tl->limsup.value == 1);
        auto cl = c1.closed_form_sum_limits(0);
        REQUIRE(cl);
        CHECK(cl->liminf.kind == WeightSequence::SumLimit::Kind::diverges_pos);
    }
}
