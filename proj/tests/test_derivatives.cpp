#include "takagi/derivatives.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace takagi;

namespace {
Rational pow_rat(const Rational& b, int e) {
    Rational r(1);
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}
}  // namespace

TEST_CASE("point classification") {
    auto d2 = build_radix(2, 10);
    auto c1 = classify(d2, rat(3, 8));
    CHECK(c1.kind == PointClass::Kind::in_d);
    CHECK(*c1.n0 == 3);
    auto c2 = classify(build_radix(3, 8), rat(1, 2));
    CHECK(c2.kind == PointClass::Kind::in_d_tilde);
    CHECK(c2.tilde_levels.size() == 9);  // midpoint at every stored level
    auto c3 = classify(d2, rat(1, 3));
    CHECK(c3.kind == PointClass::Kind::generic);
    CHECK(c3.tilde_levels.empty());
    // dyadic midpoints sit in ~D_k just below their membership level
    auto c4 = classify(d2, rat(1, 4));
    CHECK(c4.kind == PointClass::Kind::in_d);
    CHECK(*c4.n0 == 2);
    CHECK(c4.tilde_levels == std::vector<int>{1});
}

TEST_CASE("dini windows") {
    SECTION("zero weights pin 0 on both sides") {
        GeneralizedTakagi z(build_radix(2, 12), WeightSequence::constant(0));
        auto est = dini(z, rat(1, 3), 8, rat(1, 64));
        CHECK(est.d_plus.contains(Rational(0)));
        CHECK(est.D_minus.contains(Rational(0)));
        CHECK(est.d_plus.width() == 0);  // zero tail, exact kink values
    }
    SECTION("Takagi at 1/3 keeps a unit oscillation gap") {
        GeneralizedTakagi t(build_radix(2, 30), WeightSequence::constant(1));
        auto est = dini(t, rat(1, 3), 20, rat(1, 64));
        CHECK(est.D_minus.lo() - est.d_plus.hi() >= 1);
    }
    SECTION("counterexample instance pins 0 at the origin") {
        auto d = build_counterexample(9, false);
        GeneralizedTakagi t(d, WeightSequence::alternating(1));
        int horizon = 12;
        auto est = dini(t, Rational(0), horizon, rat(1, 64));
        // window annuli live below |h| = alpha_{horizon/2}; the quotient bound
        // at dyadic scale m is 2 (2/3)^m, so bound by the shallowest window scale
        Rational outer = d.alpha(horizon / 2);
        int m = 0;
        while (Rational(1, Integer(1) << (m + 1)) >= outer) ++m;
        Rational bound = 2 * pow_rat(Rational(2, 3), m) + rat(1, 16);
        CHECK(est.d_plus.lo() >= -bound);
        CHECK(est.d_plus.hi() <= bound);
        CHECK(est.D_minus.lo() >= -bound);
        CHECK(est.D_minus.hi() <= bound);
    }
    SECTION("horizon must stay within the stored depth") {
        GeneralizedTakagi t(build_radix(2, 6), WeightSequence::constant(1));
        CHECK_THROWS_AS(dini(t, rat(1, 3), 7, rat(1, 64)), std::out_of_range);
    }
}

TEST_CASE("local minimum witnesses") {
    GeneralizedTakagi t(build_radix(2, 16), WeightSequence::constant(1));
    SECTION("zeta = 0 at 1/2 passes immediately") {
        auto cert = local_min_witness(t, rat(1, 2), Rational(0));
        CHECK(cert.passed);
        CHECK(cert.threshold_level == 1);
        CHECK(cert.radius == rat(1, 6));  // rho alpha_1 / 3
    }
    SECTION("zeta = 3 needs the level-4 margin") {
        auto cert = local_min_witness(t, rat(1, 2), Rational(3));
        CHECK(cert.threshold_level == 4);  // least n with sum_{k=1}^n 1 > 3
        CHECK(cert.passed);
    }
    SECTION("negative weights are rejected") {
        GeneralizedTakagi ta(build_radix(2, 8), WeightSequence::alternating(1));
        CHECK_THROWS_AS(local_min_witness(ta, rat(1, 2), Rational(0)), std::invalid_argument);
    }
    SECTION("l^1 weights are rejected") {
        GeneralizedTakagi tg(build_radix(2, 8), WeightSequence::geometric(1, rat(1, 2)));
        CHECK_THROWS_AS(local_min_witness(tg, rat(1, 2), Rational(0)), std::invalid_argument);
    }
    SECTION("insufficient depth is reported") {
        GeneralizedTakagi shallow(build_radix(2, 3), WeightSequence::constant(1));
        CHECK_THROWS_AS(local_min_witness(shallow, rat(1, 2), Rational(10)), std::runtime_error);
    }
}

TEST_CASE("subdifferential verdicts") {
    SECTION("nonnegative non-l1 weights at a D-point: all of R") {
        GeneralizedTakagi t(build_radix(2, 16), WeightSequence::constant(1));
        auto rep = subdifferential_estimate(t, rat(1, 2), 12);
        CHECK(rep.verdict == SubdifferentialReport::Verdict::all_r_evidence);
    }
    SECTION("Takagi at 1/3: empty certified at many depths") {
        GeneralizedTakagi t(build_radix(2, 24), WeightSequence::constant(1));
        auto rep = subdifferential_estimate(t, rat(1, 3), 15);
        CHECK(rep.verdict == SubdifferentialReport::Verdict::empty_certified);
        CHECK(rep.certificate_levels.size() >= 10);
    }
    SECTION("nonnegative non-c0 weights: empty at a grid of generic points") {
        GeneralizedTakagi t(build_radix(2, 24), WeightSequence::constant(1));
        for (const Rational& x :
             {rat(1, 3), rat(2, 3), rat(1, 5), rat(2, 5), rat(3, 7), rat(5, 6), rat(1, 11)}) {
            REQUIRE(classify(t.decomposition(), x).kind == PointClass::Kind::generic);
            auto rep = subdifferential_estimate(t, x, 14);
            INFO("x = " << format_rational(x));
            CHECK(rep.verdict == SubdifferentialReport::Verdict::empty_certified);
        }
    }
    SECTION("zero weights: derivative candidate {0}") {
        GeneralizedTakagi z(build_radix(2, 10), WeightSequence::constant(0));
        auto rep = subdifferential_estimate(z, rat(1, 3), 8);
        CHECK(rep.verdict == SubdifferentialReport::Verdict::derivative_candidate);
        REQUIRE(rep.interval);
        CHECK(*rep.interval == RatInterval(Rational(0), Rational(0)));
    }
}

TEST_CASE("superdifferential mirrors the negated subdifferential") {
    GeneralizedTakagi z(build_radix(2, 10), WeightSequence::constant(0));
    auto rep = superdifferential_estimate(z, rat(1, 3), 8);
    REQUIRE(rep.interval);
    CHECK(*rep.interval == RatInterval(Rational(0), Rational(0)));

    GeneralizedTakagi t(build_radix(2, 16), WeightSequence::constant(1));
    // definition-level identity on the estimates
    auto sup = superdifferential_estimate(t, rat(5, 6), 10);
    auto sub_neg = subdifferential_estimate(t.negated(), rat(5, 6), 10);
    CHECK(sup.verdict == sub_neg.verdict);
    CHECK(sup.estimate.d_plus == sub_neg.estimate.D_minus.negated());
    CHECK(sup.estimate.D_minus == sub_neg.estimate.d_plus.negated());
    if (sub_neg.interval) CHECK(*sup.interval == sub_neg.interval->negated());
}

TEST_CASE("binary expansions and the closed-form superdifferential") {
    SECTION("the alternating-tail point 5/6") {
        auto e = BinaryExpansion::parse("11010(10)");
        CHECK(e.value() == rat(5, 6));
        CHECK(e.alternating_tail());
        CHECK(e.m() == 1);
        CHECK(e.digit(2) == 1);
        auto iv = takagi_superdiff_formula(e);
        CHECK(iv == RatInterval(Rational(-2), Rational(-1)));
        CHECK(iv.negated() == RatInterval(Rational(1), Rational(2)));
    }
    SECTION("1/3 = (01) repeating") {
        auto e = BinaryExpansion({}, {0, 1});
        CHECK(e.value() == rat(1, 3));
        CHECK(e.m() == 1);
        CHECK(takagi_superdiff_formula(e) == RatInterval(Rational(0), Rational(1)));
    }
    SECTION("2/3 = (10) repeating") {
        auto e = BinaryExpansion({}, {1, 0});
        CHECK(e.value() == rat(2, 3));
        CHECK(e.m() == 1);
        CHECK(takagi_superdiff_formula(e) == RatInterval(Rational(-1), Rational(0)));
    }
    SECTION("width is always exactly 1 with integer endpoints") {
        std::mt19937_64 rng(97);
        for (int i = 0; i < 50; ++i) {
            std::vector<int> prefix;
            int len = static_cast<int>(rng() % 8);
            for (int j = 0; j < len; ++j) prefix.push_back(static_cast<int>(rng() % 2));
            BinaryExpansion e(prefix, rng() % 2 ? std::vector<int>{1, 0} : std::vector<int>{0, 1});
            auto iv = takagi_superdiff_formula(e);
            REQUIRE(iv.width() == 1);
            REQUIRE(is_integer(iv.lo()));
        }
    }
    SECTION("non-alternating tails are rejected") {
        BinaryExpansion e({1, 0}, {1, 1, 0});
        CHECK(!e.alternating_tail());
        CHECK_THROWS_AS(takagi_superdiff_formula(e), std::domain_error);
        CHECK_THROWS_AS(BinaryExpansion({}, {}), std::invalid_argument);
        CHECK_THROWS_AS(BinaryExpansion::parse("11012(10)"), std::invalid_argument);
    }
    SECTION("formula agrees with dini windows of -T") {
        GeneralizedTakagi negT(build_radix(2, 30), WeightSequence::constant(1).negated());
        // partial f = -T: the formula gives the superdifferential of T, i.e.
        // the negated subdifferential interval [D^-(-T), d_+(-T)]
        struct Case {
            const char* digits;
            Rational x;
        } cases[] = {{"11010(10)", rat(5, 6)}, {"(01)", rat(1, 3)}, {"(10)", rat(2, 3)}};
        for (const auto& cs : cases) {
            auto e = BinaryExpansion::parse(cs.digits);
            REQUIRE(e.value() == cs.x);
            RatInterval sub = takagi_superdiff_formula(e).negated();  // = partial(-T)(x)
            auto est = dini(negT, cs.x, 20, rat(1, 64));
            CHECK(est.D_minus.contains(sub.lo()));
            CHECK(est.d_plus.contains(sub.hi()));
        }
    }
}

TEST_CASE("running-sum limit estimates") {
    auto [li, ls] = partial_sum_liminf_limsup(WeightSequence::alternating(1), 40);
    CHECK(li.kind == SumLimitEstimate::Kind::exact);
    CHECK(li.value == RatInterval(Rational(0), Rational(0)));
    CHECK(ls.value == RatInterval(Rational(1), Rational(1)));
    auto [lz, sz] = partial_sum_liminf_limsup(WeightSequence::constant(0), 40);
    CHECK(lz.value == RatInterval(Rational(0), Rational(0)));
    CHECK(sz.value == RatInterval(Rational(0), Rational(0)));
    auto [lt, st] = partial_sum_liminf_limsup(WeightSequence::triple(), 60);
    CHECK(lt.kind == SumLimitEstimate::Kind::exact);
    CHECK(lt.value == RatInterval(Rational(0), Rational(0)));
    CHECK(st.value == RatInterval(Rational(1), Rational(1)));
    auto [lc, sc] = partial_sum_liminf_limsup(WeightSequence::constant(1), 40);
    CHECK(lc.kind == SumLimitEstimate::Kind::diverges_pos);
    CHECK(sc.kind == SumLimitEstimate::Kind::diverges_pos);
}

TEST_CASE("shifted-sum co-occurrence test") {
    SECTION("radix 4 at 1/2 with unit weights diverges upward") {
        GeneralizedTakagi t(build_radix(4, 12), WeightSequence::constant(1));
        auto rep = shifted_sum_test(t, rat(1, 2), 10);
        CHECK(rep.n0 == 1);
        CHECK(rep.shifted_liminf.kind == SumLimitEstimate::Kind::diverges_pos);
        CHECK(rep.consistent);
        CHECK(rep.subdiff_verdict == SubdifferentialReport::Verdict::all_r_evidence);
    }
    SECTION("alternating weights give an exact finite value") {
        GeneralizedTakagi t(build_radix(4, 10), WeightSequence::alternating(1));
        auto rep = shifted_sum_test(t, rat(1, 2), 10);
        CHECK(rep.shifted_liminf.kind == SumLimitEstimate::Kind::exact);
        // liminf sum_{k=1}^n w_k = -1, prefix w_0 = 1: shifted value -2
        CHECK(rep.shifted_liminf.value == RatInterval(Rational(-2), Rational(-2)));
        CHECK(rep.consistent);
    }
    SECTION("premise violations are rejected") {
        GeneralizedTakagi t(build_radix(4, 10), WeightSequence::constant(1));
        CHECK_THROWS_AS(shifted_sum_test(t, rat(1, 3), 10), std::invalid_argument);
        // radix 2 sits exactly on the alpha_{n+1} = rho alpha_n / 2 boundary: allowed
        GeneralizedTakagi t2(build_radix(2, 12), WeightSequence::constant(1));
        CHECK_NOTHROW(shifted_sum_test(t2, rat(1, 2), 10));
        // radix 3 violates the half-rho ladder: 1/3 > 1/6... no: 1/3 alpha vs rho/2 = 1/2:
        // alpha ratio 1/3 <= 1/2 holds, so use a chain with ratio 3 at the last step? no:
        // every grid with beta >= 2 satisfies it; an explicit two-level store does not.
        auto d = make_explicit(0, 1,
                               {{Rational(0), Rational(1)},
                                {Rational(0), rat(1, 2), Rational(1)},
                                {Rational(0), rat(1, 4), rat(1, 2), rat(3, 4), Rational(1)}},
                               {{}, Rational(rat(3, 4)), {}}, rat(1, 3));
        GeneralizedTakagi te(d, WeightSequence::constant(1), GeometricTail{2, rat(1, 2), 0});
        CHECK_THROWS_AS(shifted_sum_test(te, rat(1, 2), 4), std::invalid_argument);
    }
}
