#include "takagi/rational.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace takagi;

TEST_CASE("construction reduces to canonical form") {
    CHECK(rat(2, 4) == rat(1, 2));
    CHECK(num(rat(2, 4)) == 1);
    CHECK(den(rat(2, 4)) == 2);
    CHECK(rat(3, -6) == rat(-1, 2));
    CHECK(den(rat(3, -6)) == 2);
    CHECK(num(rat(3, -6)) == -1);
    CHECK(rat(0, 5) == Rational(0));
    CHECK(den(rat(0, 5)) == 1);
    CHECK_THROWS_AS(rat(1, 0), std::invalid_argument);
}

TEST_CASE("parsing and printing round-trip canonically") {
    CHECK(parse_rational("-1/2") == rat(-1, 2));
    CHECK(parse_rational("3") == Rational(3));
    CHECK(parse_rational("0.25") == rat(1, 4));
    CHECK(parse_rational("-0.5") == rat(-1, 2));
    CHECK_THROWS_AS(parse_rational("2."), std::invalid_argument);
    CHECK(format_rational(rat(-1, 2)) == "-1/2");
    CHECK(format_rational(Rational(0)) == "0");
    CHECK(format_rational(Rational(3)) == "3");
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        Rational r = rat(static_cast<long long>(rng() % 20011) - 10000,
                         static_cast<long long>(rng() % 999) + 1);
        CHECK(parse_rational(format_rational(r)) == r);
    }
}

TEST_CASE("floor and ceil agree with integer arithmetic") {
    CHECK(rational_floor(rat(7, 3)) == 2);
    CHECK(rational_floor(rat(-7, 3)) == -3);
    CHECK(rational_ceil(rat(7, 3)) == 3);
    CHECK(rational_ceil(rat(-7, 3)) == -2);
    CHECK(rational_floor(Rational(5)) == 5);
}

TEST_CASE("field laws hold exactly on random inputs") {
    std::mt19937_64 rng(42);
    auto rnd = [&] {
        return rat(static_cast<long long>(rng() % 4001) - 2000, static_cast<long long>(rng() % 500) + 1);
    };
    for (int i = 0; i < 300; ++i) {
        Rational a = rnd(), b = rnd(), c = rnd();
        REQUIRE((a + b) + c == a + (b + c));
        REQUIRE(a * (b + c) == a * b + a * c);
        if (b != 0) REQUIRE(a / b * b == a);
    }
}

TEST_CASE("interval operations") {
    RatInterval iv(rat(-2, 1), rat(-1, 1));
    CHECK(iv.negated() == RatInterval(Rational(1), Rational(2)));
    auto cap = intersect(RatInterval(Rational(0), Rational(1)), RatInterval(Rational(1), Rational(2)));
    REQUIRE(cap.has_value());
    CHECK(*cap == RatInterval(Rational(1), Rational(1)));
    CHECK(!intersect(RatInterval(Rational(0), Rational(1)), RatInterval(Rational(2), Rational(3))));
    CHECK(RatInterval(rat(1, 3), rat(2, 3)).width() == rat(1, 3));
    CHECK(RatInterval(rat(1, 3), rat(2, 3)).midpoint() == rat(1, 2));
    CHECK(RatInterval(Rational(0), Rational(2)).contains(rat(3, 2)));
    CHECK(RatInterval(Rational(0), Rational(2)).translated(Rational(1)) ==
          RatInterval(Rational(1), Rational(3)));
    CHECK_THROWS_AS(RatInterval(Rational(1), Rational(0)), std::invalid_argument);

    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        Rational a = rat(static_cast<long long>(rng() % 2001) - 1000, 97);
        Rational b = a + rat(static_cast<long long>(rng() % 1000), 53);
        RatInterval v(a, b);
        REQUIRE(v.negated().negated() == v);
    }
}

TEST_CASE("interval arithmetic used by enclosure propagation") {
    RatInterval a(Rational(1), Rational(2)), b(rat(1, 2), Rational(1));
    CHECK((a - b) == RatInterval(Rational(0), rat(3, 2)));
    CHECK((a + b) == RatInterval(rat(3, 2), Rational(3)));
    CHECK(a.divided_by(Rational(-2)) == RatInterval(Rational(-1), rat(-1, 2)));
    CHECK_THROWS_AS(a.divided_by(Rational(0)), std::invalid_argument);
}
