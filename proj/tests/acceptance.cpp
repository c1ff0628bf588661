// Acceptance suite: nine exact finite criteria binding the library to the
// identities and bounds it is supposed to reproduce. Each criterion prints a
// single pass/fail line; the exit status is the number of failures.

#include "takagi/harness.hpp"

#include <chrono>
#include <iostream>
#include <random>
#include <string>
#include <vector>

using namespace takagi;

namespace {

int failures = 0;

struct Criterion {
    std::string label;
    std::chrono::steady_clock::time_point start;
    bool ok = true;
    std::string note;
    double limit_ms;

    Criterion(std::string l, double limit_ms_ = 0)
        : label(std::move(l)), start(std::chrono::steady_clock::now()), limit_ms(limit_ms_) {}

    void require(bool cond, const std::string& why) {
        if (!cond && ok) {
            ok = false;
            note = why;
        }
    }

    void finish() {
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                        .count();
        if (limit_ms > 0 && ms > limit_ms) {
            ok = false;
            note = "runtime " + std::to_string(static_cast<long>(ms)) + " ms exceeds " +
                   std::to_string(static_cast<long>(limit_ms)) + " ms";
        }
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << label << " (" << static_cast<long>(ms) << " ms)";
        if (!ok) std::cout << " -- " << note;
        std::cout << '\n';
        if (!ok) ++failures;
    }
};

void criterion1() {
    Criterion c("criterion 1: adjacent-quotient partial-sum identity, radix {2,3,10}, depth 20", 5000);
    for (int r : {2, 3, 10}) {
        Decomposition d = build_radix(r, 21);
        for (bool alternate : {false, true}) {
            WeightSequence w =
                alternate ? WeightSequence::alternating(1) : WeightSequence::constant(1);
            GeneralizedTakagi t(d, w);
            for (int k = 1; k < r; ++k) {
                Rational x(k, r);  // the points of D_1 \ D_0
                auto red = reduce_to_d1(t, x);
                c.require(red.n0 == 1, "x not in D_1 \\ D_0");
                auto trace = delta_trace(red.instance, x, Side::right, 20);
                for (const auto& row : trace.rows)
                    c.require(row.quotient == w.partial_sum(1, row.level - 1),
                              "Delta_" + std::to_string(row.level) + " mismatch at r=" +
                                  std::to_string(r) + ", x=" + format_rational(x));
            }
        }
    }
    c.finish();
}

void criterion2() {
    Criterion c("criterion 2: overlap bookkeeping vs secant oracle, depth 15", 10000);
    {
        GeneralizedTakagi t(build_divisor_chain({1, 2, 6, 12, 24}, 16), WeightSequence::constant(1));
        auto r = check_overlap_expansion(t, Rational(1, 2), 15);
        c.require(r.status == CheckStatus::pass,
                  "chain check: " + std::string(r.witnesses.empty() ? "inapplicable"
                                                                    : r.witnesses.front()));
    }
    for (int radix : {2, 3}) {
        GeneralizedTakagi t(build_radix(radix, 16), WeightSequence::alternating(1));
        auto r = check_overlap_expansion(t, Rational(1, radix), 15);
        c.require(r.status == CheckStatus::pass,
                  "radix " + std::to_string(radix) + ": " +
                      (r.witnesses.empty() ? "inapplicable" : r.witnesses.front()));
    }
    c.finish();
}

void criterion3() {
    Criterion c("criterion 3: midpoint chord identity, radix 3 at 1/2, depth 15");
    GeneralizedTakagi t(build_radix(3, 16), WeightSequence::constant(1));
    GeneralizedTakagi t0 = t.with_weights(t.weights().zeroed_below(1));
    auto ct = chord_trace(t0, Rational(1, 2), 15, ChordMode::right);
    c.require(!ct.rows.empty(), "no chords produced");
    for (const auto& row : ct.rows) {
        if (row.level == 0) continue;
        c.require(row.quotient == Rational(-row.level),
                  "chord quotient at n=" + std::to_string(row.level) + " is " +
                      format_rational(row.quotient));
        c.require(row.ratio <= 1, "ratio bound 1/rho = 1 violated");
    }
    c.finish();
}

void criterion4() {
    Criterion c("criterion 4: derivability at 0 for the no-rho example, scales 1..10", 30000);
    auto r = check_origin_derivative(10, false, 20240901);
    c.require(r.status == CheckStatus::pass,
              r.witnesses.empty() ? "check not applicable" : r.witnesses.front());
    c.require(r.asserted >= 10 * 6 * 2, "fewer probe assertions than 6 per scale");
    c.finish();
}

void criterion5() {
    Criterion c("criterion 5: c_0-failure example, cancellation and laterals, K = 12");
    auto r = check_duplicate_level_example(12);
    c.require(r.status == CheckStatus::pass,
              r.witnesses.empty() ? "check not applicable" : r.witnesses.front());
    c.finish();
}

void criterion6() {
    Criterion c("criterion 6: superdifferential formula at 11010(10)^inf");
    auto r = check_superdiff_example();
    c.require(r.status == CheckStatus::pass,
              r.witnesses.empty() ? "check not applicable" : r.witnesses.front());
    c.finish();
}

void criterion7() {
    Criterion c("criterion 7: nonnegative-weight witnesses and empty-subdifferential pairs");
    const std::vector<Rational> zetas{Rational(0), Rational(1), Rational(-1), Rational(10),
                                      Rational(-10)};
    auto allr = check_positive_weights_all_r(16, zetas);
    c.require(allr.status == CheckStatus::pass,
              allr.witnesses.empty() ? "all-R check failed" : allr.witnesses.front());
    auto empty = check_positive_weights_empty(15);
    c.require(empty.status == CheckStatus::pass,
              empty.witnesses.empty() ? "empty check failed" : empty.witnesses.front());
    c.finish();
}

void criterion8() {
    Criterion c("criterion 8: enclosure soundness on 100 random rationals", 10000);
    GeneralizedTakagi t(build_radix(2, 30), WeightSequence::constant(1));
    std::mt19937_64 rng(20240901);
    Rational eps(1, 4096);
    for (int i = 0; i < 100; ++i) {
        long long den = static_cast<long long>(rng() % 999983) + 1;
        long long nm = static_cast<long long>(rng() % static_cast<unsigned long long>(den + 1));
        Rational x(nm, den);
        RatInterval outer = evaluate(t, x, eps);
        RatInterval inner = evaluate(t, x, eps / 10);
        c.require(outer.contains(inner), "enclosures not nested at x=" + format_rational(x));
        Rational s30 = partial_sum(t, 30, x);
        Rational tau30 = tail_bound(t, 30);
        RatInterval truth(s30 - tau30, s30 + tau30);
        c.require(outer.contains(truth) && inner.contains(truth),
                  "depth-30 reference escapes the enclosure at x=" + format_rational(x));
        c.require(outer.width() <= 2 * eps && inner.width() <= eps / 5,
                  "width contract violated at x=" + format_rational(x));
    }
    c.finish();
}

void criterion9() {
    Criterion c("criterion 9: full harness at depth 15 (counterexample pairs 10)", 60000);
    auto summary = run_suite("", 15, 10, 20240901);
    for (const auto& r : summary.results)
        c.require(r.status != CheckStatus::fail,
                  r.id + ": " + (r.witnesses.empty() ? "failed" : r.witnesses.front()));
    c.require(summary.passes > 0, "no checks ran");
    c.finish();
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    if (failures == 0)
        std::cout << "all acceptance criteria hold\n";
    else
        std::cout << failures << " criterion(s) failed\n";
    return failures;
}
