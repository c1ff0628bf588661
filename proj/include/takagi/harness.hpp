#pragma once

#include "takagi/derivatives.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace takagi {

enum class CheckStatus { pass, fail, inapplicable };

inline const char* status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        default: return "inapplicable";
    }
}

/// One named, runnable check per claimed identity. Failures always carry an exact
/// counterwitness; inapplicable results name the violated precondition.
struct CheckResult {
    std::string id;
    std::string instance;
    int depth = 0;
    CheckStatus status = CheckStatus::inapplicable;
    long asserted = 0;  // pass requires at least one asserted index
    std::vector<std::string> witnesses;
    std::uint64_t seed = 0;
    double wall_ms = 0.0;
};

namespace detail {

struct GateFailure {
    std::string reason;
};

class Check {
public:
    Check(std::string id, std::string instance, int depth, std::uint64_t seed = 0) {
        result_.id = std::move(id);
        result_.instance = std::move(instance);
        result_.depth = depth;
        result_.seed = seed;
        start_ = std::chrono::steady_clock::now();
    }

    void gate(bool ok, const std::string& reason) {
        if (!ok) throw GateFailure{reason};
    }

    void expect(bool ok, const std::string& witness) {
        ++result_.asserted;
        if (!ok) {
            failed_ = true;
            if (result_.witnesses.size() < 8) result_.witnesses.push_back(witness);
        }
    }

    void expect_eq(const Rational& got, const Rational& want, const std::string& label) {
        expect(got == want, label + ": got " + format_rational(got) + ", want " + format_rational(want));
    }

    CheckResult finish() {
        auto stop = std::chrono::steady_clock::now();
        result_.wall_ms = std::chrono::duration<double, std::milli>(stop - start_).count();
        if (failed_)
            result_.status = CheckStatus::fail;
        else if (result_.asserted > 0)
            result_.status = CheckStatus::pass;
        else {
            result_.status = CheckStatus::inapplicable;
            result_.witnesses.push_back("no applicable indices");
        }
        return result_;
    }

    CheckResult finish_inapplicable(const std::string& reason) {
        auto stop = std::chrono::steady_clock::now();
        result_.wall_ms = std::chrono::duration<double, std::milli>(stop - start_).count();
        result_.status = CheckStatus::inapplicable;
        result_.witnesses.push_back(reason);
        return result_;
    }

private:
    CheckResult result_;
    bool failed_ = false;
    std::chrono::steady_clock::time_point start_;
};

inline Rational pow_rational(const Rational& b, int e) {
    Rational r(1);
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

}  // namespace detail

/// Delta_n = sum_{k=n0}^{n-1} w_k along the right y-sequence (and its mirror
/// image on the left), exactly, for decompositions meeting the refinement
/// conditions. Outside c_0 the quotient oscillation must persist.
inline CheckResult check_adjacent_quotients(const Decomposition& d, const WeightSequence& w,
                                       const Rational& x, int depth,
                                       std::optional<GeometricTail> majorant = std::nullopt) {
    detail::Check c("delta-sums", w.to_string() + " at x=" + format_rational(x), depth);
    try {
        auto rep = validate(d);
        c.gate(rep.satisfies_refinement_conditions(d.depth()),
               "decomposition fails both refinement conditions at some level");
        GeneralizedTakagi t(d, w, majorant);
        auto red = reduce_to_d1(t, x);
        int n0 = red.n0;
        for (Side side : {Side::right, Side::left}) {
            auto trace = delta_trace(red.instance, x, side, depth);
            Rational sgn = side == Side::right ? 1 : -1;
            for (const auto& row : trace.rows) {
                if (row.level == n0) continue;  // empty sum
                c.expect_eq(row.quotient, Rational(sgn * w.partial_sum(n0, row.level - 1)),
                            std::string(side == Side::right ? "right" : "left") + " Delta_" +
                                std::to_string(row.level));
            }
            if (!w.in_c0() && trace.rows.size() >= 4) {
                std::size_t from = trace.rows.size() / 2;
                Rational mn = trace.rows[from].quotient, mx = trace.rows[from].quotient;
                for (std::size_t i = from; i < trace.rows.size(); ++i) {
                    mn = std::min(mn, trace.rows[i].quotient);
                    mx = std::max(mx, trace.rows[i].quotient);
                }
                c.expect(mx - mn >= w.persistent_gap(),
                         "window oscillation " + format_rational(mx - mn) + " below persistent gap " +
                             format_rational(w.persistent_gap()));
            }
        }
        return c.finish();
    } catch (const detail::GateFailure& g) {
        return c.finish_inapplicable(g.reason);
    }
}

/// Overlap bookkeeping: extracted overlap coefficients lie in [rho, 1], the
/// Gamma expansion holds where both coefficients drop below 1, and every
/// Delta/Gamma matches the independent secant oracle exactly.
inline CheckResult check_overlap_expansion(const GeneralizedTakagi& t, const Rational& x, int depth) {
    const auto& d = t.decomposition();
    detail::Check c("overlap", t.weights().to_string() + " at x=" + format_rational(x), depth);
    try {
        c.gate(d.rho_declared().has_value(), "needs a declared rho");
        auto rep = validate(d);
        c.gate(*d.rho_declared() == 1 ||
                   rep.all_yes(&LevelHypotheses::alpha_ratio_le_rho_over_1mrho, d.depth()),
               "alpha_{n+1} <= rho/(1-rho) alpha_n fails at some stored level");
        auto red = reduce_to_d1(t, x);
        for (Side side : {Side::right, Side::left}) {
            auto trace = gamma_trace(red.instance, x, side, depth);
            c.expect(trace.nearest_point_guard_ok, "impossible nearest-point configuration appeared");
            c.expect(trace.gamma_expansion_ok, "Gamma expansion mismatch");
            for (std::size_t i = 0; i < trace.rows.size(); ++i) {
                const auto& row = trace.rows[i];
                if (row.overlap_in_range)
                    c.expect(*row.overlap_in_range, "delta_" + std::to_string(row.level) + " = " +
                                                        format_rational(*row.overlap_coeff) +
                                                        " outside [rho, 1]");
                auto oracle = exact_secant(red.instance, x, row.point);
                c.expect(oracle && *oracle == row.quotient,
                         "Delta_" + std::to_string(row.level) + " disagrees with secant oracle");
                if (row.consecutive && i + 1 < trace.rows.size()) {
                    auto g = exact_secant(red.instance, trace.rows[i + 1].point, row.point);
                    c.expect(g && *g == *row.consecutive,
                             "Gamma_" + std::to_string(row.level) + " disagrees with secant oracle");
                }
            }
        }
        return c.finish();
    } catch (const detail::GateFailure& g) {
        return c.finish_inapplicable(g.reason);
    }
}

/// The recursive weight inequality behind the D-point argument, case-dispatched on
/// the overlap coefficients, plus non-Cauchy quotients outside c_0.
inline CheckResult check_weight_recursion(const GeneralizedTakagi& t, const Rational& x, int depth,
                                      const Rational& cauchy_tol = Rational(1, 1000000)) {
    const auto& d = t.decomposition();
    detail::Check c("weight-recursion", t.weights().to_string() + " at x=" + format_rational(x), depth);
    try {
        c.gate(d.rho_declared().has_value(), "needs a declared rho");
        auto rep = validate(d);
        c.gate(rep.all_yes(&LevelHypotheses::cond2a, d.depth()),
               "some component of F_n misses D_{n+1}");
        c.gate(rep.rho_gt_half || rep.all_yes(&LevelHypotheses::alpha_ratio_le_rho, d.depth()),
               "needs rho > 1/2 or alpha_{n+1} <= rho alpha_n");
        const Rational& rho = *d.rho_declared();
        auto red = reduce_to_d1(t, x);
        const auto& w = red.instance.weights();
        for (Side side : {Side::right, Side::left}) {
            auto trace = gamma_trace(red.instance, x, side, depth);
            for (std::size_t i = 1; i < trace.rows.size(); ++i) {
                const auto& row = trace.rows[i];
                const auto& prev = trace.rows[i - 1];
                if (!prev.overlap_coeff || !row.overlap_coeff || !row.increment) continue;
                int n = row.level;
                Rational wn = rational_abs(w.at(n)), wn1 = rational_abs(w.at(n - 1));
                Rational eta = rational_abs(*row.increment);
                std::string label = "weight inequality at n=" + std::to_string(n);
                if (*prev.overlap_coeff == 1) {
                    c.expect(wn <= eta / rho, label + " (delta_{n-1}=1)");
                } else if (*row.overlap_coeff == 1) {
                    c.expect(wn <= eta + (1 - rho) * wn1, label + " (delta_n=1)");
                } else if (row.quotient_gap) {
                    Rational lambda = rational_abs(*row.quotient_gap);
                    c.expect(wn <= lambda + (1 - rho / 2) * wn1, label + " (both < 1)");
                }
            }
            if (!t.weights().in_c0() && trace.rows.size() >= 4) {
                std::size_t from = trace.rows.size() / 2;
                Rational gap(0);
                for (std::size_t i = from; i < trace.rows.size(); ++i)
                    for (std::size_t j = i + 1; j < trace.rows.size(); ++j)
                        gap = std::max(gap,
                                       rational_abs(trace.rows[i].quotient - trace.rows[j].quotient));
                c.expect(gap > cauchy_tol, "quotients Cauchy within tolerance despite w outside c_0");
            }
        }
        return c.finish();
    } catch (const detail::GateFailure& g) {
        return c.finish_inapplicable(g.reason);
    }
}

/// The duplicated-level example with D_{3k-2} = D_{3k-1}: pairwise cancellation,
/// the telescoped rewriting of T_w, lateral-derivative partial values within
/// 2^-K of zero, and contracting Dini windows at x in D_1.
inline CheckResult check_duplicate_level_example(int K) {
    if (K < 2) K = 2;
    detail::Check c("duplicate-levels", "triple weights, duplicated dyadic levels, K=" + std::to_string(K),
                    3 * K);
    // D_{3k-2} = D_{3k-1} and D_{3k} = D_{3k-1} with its midpoints inserted:
    // level n holds the dyadic grid of order n/3 + 1 (order 0 at n = 0)
    std::vector<std::vector<Rational>> levels;
    for (int n = 0; n <= 3 * K; ++n) {
        int j = n == 0 ? 0 : n / 3 + 1;
        std::vector<Rational> pts;
        Integer q = Integer(1) << static_cast<unsigned>(j);
        for (Integer i = 0; i <= q; ++i) pts.emplace_back(i, q);
        levels.push_back(std::move(pts));
    }
    Decomposition d = make_explicit(0, 1, std::move(levels), {}, Rational(1));
    WeightSequence w = WeightSequence::triple();
    GeneralizedTakagi t(d, w, GeometricTail{1, Rational(4, 5), 0});

    // the same function through the cancelled, telescoped weights on the plain
    // dyadic grid: level 3k holds the order-(k+1) grid, so u_2 = -1/2 and
    // u_j = 2^-(j-1) for j >= 3
    GeneralizedTakagi equiv(build_radix(2, K + 2),
                            WeightSequence::geometric(2, Rational(1, 2))
                                .with_prefix({Rational(0), Rational(0), Rational(-1, 2)}));

    // the realization satisfies the stated level equalities
    for (int k = 1; k <= K; ++k) {
        c.expect(d.level_points(3 * k - 2) == d.level_points(3 * k - 1),
                 "levels " + std::to_string(3 * k - 2) + " and " + std::to_string(3 * k - 1) +
                     " differ");
        auto with_mid = d.level_points(3 * k - 1);
        auto geo = geometry(d, 3 * k - 1);
        with_mid.insert(with_mid.end(), geo.midpoints.begin(), geo.midpoints.end());
        std::sort(with_mid.begin(), with_mid.end());
        c.expect(d.level_points(3 * k) == with_mid,
                 "level " + std::to_string(3 * k) + " is not the midpoint refinement");
    }

    auto grid = d.level_points(std::min(3 * K, 16));
    for (int k = 1; k <= K; ++k) {
        for (const auto& z : grid) {
            Rational pair = w.at(3 * k - 2) * d.distance(3 * k - 2, z) +
                            w.at(3 * k - 1) * d.distance(3 * k - 1, z);
            c.expect(pair == 0, "pair " + std::to_string(k) + " fails to cancel at z=" +
                                    format_rational(z));
        }
    }
    for (const auto& z : grid) {
        Rational rewritten = Rational(-1, 2) * d.distance(3, z);
        for (int k = 2; k <= K; ++k)
            rewritten += Rational(1, Integer(1) << static_cast<unsigned>(k)) * d.distance(3 * k, z);
        c.expect_eq(partial_sum(t, 3 * K, z), rewritten, "rewriting at z=" + format_rational(z));
        c.expect_eq(partial_sum(equiv, K + 1, z), rewritten,
                    "telescoped instance differs at z=" + format_rational(z));
    }
    Rational x(1, 2);
    for (int Kp = 2; Kp <= K; ++Kp) {
        Rational right(0), left(0);
        for (int k = 1; k <= 3 * Kp; ++k) {
            right += w.at(k) * right_slope(d, k, x);
            left += w.at(k) * left_slope(d, k, x);
        }
        Rational target(1, Integer(1) << static_cast<unsigned>(Kp));
        c.expect_eq(right, Rational(-target), "right lateral partial at K=" + std::to_string(Kp));
        c.expect_eq(left, target, "left lateral partial at K=" + std::to_string(Kp));
        c.expect(rational_abs(right) <= target && rational_abs(left) <= target,
                 "lateral partials exceed 2^-K at K=" + std::to_string(Kp));
    }
    // Dini windows via the telescoped instance (same function, and its tail
    // certificate sees the pair cancellation). The window at horizon h starts
    // at annulus h/2, where the quotient magnitude is at most 2^-(h/2 - 2);
    // deeper horizons must contract accordingly, on both sides.
    for (int h : {K / 2 + 3, K + 1}) {
        auto est = dini(equiv, x, h, Rational(1, 64));
        Rational rate = Rational(4, Integer(1) << static_cast<unsigned>(h / 2)) + Rational(1, 32);
        for (const auto& iv : {est.d_plus, est.D_minus}) {
            c.expect(iv.lo() >= -rate && iv.hi() <= rate,
                     "Dini window " + format_interval(iv) + " misses the contraction rate " +
                         format_rational(rate) + " at horizon " + std::to_string(h));
        }
    }
    return c.finish();
}

/// Nowhere-derivability identities: the midpoint-branch chord value and the
/// three generic-branch chord identities, with their chord ratio bounds.
/// Runs on the w_0-zeroed instance (the standing normalization for these sums).
inline CheckResult check_chord_identities(const GeneralizedTakagi& t, const Rational& x, int depth) {
    const auto& d = t.decomposition();
    detail::Check c("chords", t.weights().to_string() + " at x=" + format_rational(x), depth);
    try {
        c.gate(d.rho_declared().has_value(), "needs a declared rho");
        auto rep = validate(d);
        c.gate(rep.satisfies_refinement_conditions(d.depth()),
               "decomposition fails both refinement conditions at some level");
        auto pc = classify(d, x);
        c.gate(pc.kind != PointClass::Kind::in_d, "x lies in D: covered by the D-point checks");
        const Rational rho_inv = 1 / *d.rho_declared();
        GeneralizedTakagi t0 = t.with_weights(t.weights().zeroed_below(1));
        const auto& w0 = t0.weights();
        auto nb = neighbors(d, x, depth);

        if (pc.kind == PointClass::Kind::in_d_tilde) {
            int j = pc.tilde_levels.front();
            auto ct = chord_trace(t0, x, depth, ChordMode::right);
            for (const auto& row : ct.rows) {
                if (row.level < j) continue;
                Rational want(0);
                for (int k = 1; k <= row.level; ++k) want += w0.at(k) * right_slope(d, k, x);
                c.expect_eq(row.quotient, want, "midpoint chord at n=" + std::to_string(row.level));
                c.expect(row.ratio <= rho_inv, "ratio " + format_rational(row.ratio) + " exceeds 1/rho");
            }
            return c.finish();
        }

        for (int n = 1; n <= depth; ++n) {
            const auto& lvl = nb.levels[static_cast<std::size_t>(n)];
            bool chain = false;
            Rational chain_mid;
            for (int k = 0; k < n; ++k) {
                const auto& ck = nb.levels[static_cast<std::size_t>(k)].c;
                if (lvl.a < ck && ck < lvl.b) {
                    if (!chain) {
                        chain = true;
                        chain_mid = ck;
                    } else {
                        c.expect(ck == chain_mid, "midpoint chain broken at level " + std::to_string(k));
                    }
                }
            }
            Rational want(0);
            if (!chain) {
                for (int k = 1; k < n; ++k) want += w0.at(k) * right_slope(d, k, x);
                Rational q = (*exact_value(t0, lvl.b) - *exact_value(t0, lvl.a)) / (lvl.b - lvl.a);
                c.expect_eq(q, want, "straddle chord at n=" + std::to_string(n));
                continue;
            }
            c.expect(lvl.c == chain_mid, "gap midpoint differs from the chain midpoint at n=" +
                                             std::to_string(n));
            const auto& up = nb.levels[static_cast<std::size_t>(n - 1)];
            if (lvl.c < x) {
                if (up.b == lvl.b) continue;
                for (int k = 1; k < n; ++k) want += w0.at(k) * right_slope(d, k, x);
                Rational q = (*exact_value(t0, up.b) - *exact_value(t0, lvl.b)) / (up.b - lvl.b);
                c.expect_eq(q, want, "right chord at n=" + std::to_string(n));
                c.expect((lvl.b - x) / (up.b - lvl.b) <= rho_inv,
                         "right-chord ratio exceeds 1/rho at n=" + std::to_string(n));
            } else {
                if (up.a == lvl.a) continue;
                for (int k = 1; k < n; ++k) want += w0.at(k) * left_slope(d, k, x);
                Rational q = (*exact_value(t0, lvl.a) - *exact_value(t0, up.a)) / (lvl.a - up.a);
                c.expect_eq(q, want, "left chord at n=" + std::to_string(n));
                c.expect((x - up.a) / (lvl.a - up.a) <= rho_inv + 1,
                         "left-chord ratio exceeds 1/rho + 1 at n=" + std::to_string(n));
            }
        }
        return c.finish();
    } catch (const detail::GateFailure& g) {
        return c.finish_inapplicable(g.reason);
    }
}

/// Derivability at 0 for the collapsing-rho example: plateau identities
/// H_k(0) = H_k(h) and the exact quotient bound 2 (2/3)^n at six probes per
/// scale, plus the collapse of the measured uniformity ratio rho_n.
inline CheckResult check_origin_derivative(int pair_depth, bool with_zero,
                                                   std::uint64_t seed) {
    detail::Check c("origin-derivative", std::string("alt 1 on [-1,1]") + (with_zero ? ", 0 in D_0" : ""),
                    pair_depth, seed);
    Decomposition d = build_counterexample(pair_depth, with_zero);
    GeneralizedTakagi t(d, WeightSequence::alternating(1));
    std::mt19937_64 rng(seed);
    Rational x0(0);
    int scales = std::max(1, pair_depth);
    for (int n = 1; n <= scales; ++n) {
        Rational lo(1, Integer(1) << static_cast<unsigned>(n + 1));
        std::vector<Rational> probes;
        probes.push_back(lo);                                      // scale endpoint
        probes.push_back(2 * lo * Rational(511, 512));             // just below the upper end
        Rational u(static_cast<long long>(rng() % 4096), 4096);    // recorded-seed random offset
        probes.push_back(lo * (1 + u));
        std::size_t m = probes.size();
        for (std::size_t i = 0; i < m; ++i) probes.push_back(-probes[i]);
        // the variant with 0 in D_0 loses the plateau at the boundary pair
        // n-1, but the 2 (2/3)^n bound survives with the sum taken from there
        int first_free = with_zero ? n - 1 : n;
        for (const auto& h : probes) {
            Rational ah = rational_abs(h);
            c.expect(lo <= ah && ah < 2 * lo, "probe outside scale at n=" + std::to_string(n));
            for (int k = 0; k < first_free && 2 * k + 1 <= d.depth(); ++k) {
                Rational plateau = pair_sum(t, k, h);
                c.expect_eq(plateau, pair_sum(t, k, x0),
                            "plateau H_" + std::to_string(k) + " at h=" + format_rational(h));
                if (!with_zero)
                    c.expect_eq(plateau,
                                Rational(1, pow(Integer(3), static_cast<unsigned>(k + 1))),
                                "plateau value H_" + std::to_string(k));
            }
            Rational diff(0);
            for (int k = std::max(first_free, 0); 2 * k + 1 <= d.depth(); ++k)
                diff += pair_sum(t, k, h) - pair_sum(t, k, x0);
            Rational beyond(1, pow(Integer(3), static_cast<unsigned>(pair_depth + 1)));
            Rational bound = 2 * detail::pow_rational(Rational(2, 3), n) * ah;
            c.expect(rational_abs(diff) + beyond <= bound,
                     "quotient bound fails at n=" + std::to_string(n) + ", h=" + format_rational(h));
        }
    }
    if (!with_zero && d.depth() >= 8) {
        auto rep = validate(d);
        c.expect(rep.levels[8].rho_measured < Rational(1, 10),
                 "rho_8 = " + format_rational(rep.levels[8].rho_measured) + " not below 1/10");
    }
    return c.finish();
}

/// The closing example: formula value [-2,-1] at x = 11010(10)..., negation
/// [1,2], and Dini windows of -T at 5/6 pinning both endpoints.
inline CheckResult check_superdiff_example() {
    detail::Check c("superdiff-formula", "classical Takagi at x = 11010(10)^inf = 5/6", 20);
    auto e = BinaryExpansion::parse("11010(10)");
    c.expect_eq(e.value(), Rational(5, 6), "expansion value");
    auto f = takagi_superdiff_formula(e);
    c.expect(f == RatInterval(Rational(-2), Rational(-1)),
             "formula gave " + format_interval(f) + ", want [-2,-1]");
    auto neg = f.negated();
    c.expect(neg == RatInterval(Rational(1), Rational(2)),
             "negation gave " + format_interval(neg) + ", want [1,2]");
    GeneralizedTakagi t(build_radix(2, 34), WeightSequence::constant(1));
    auto est = dini(t.negated(), Rational(5, 6), 20, Rational(1, 64));
    c.expect(est.d_plus.contains(Rational(2)) && est.d_plus.width() <= Rational(1, 4),
             "d_+ window " + format_interval(est.d_plus) + " misses 2 or is too wide");
    c.expect(est.D_minus.contains(Rational(1)) && est.D_minus.width() <= Rational(1, 4),
             "D^- window " + format_interval(est.D_minus) + " misses 1 or is too wide");
    return c.finish();
}

/// Nonnegative weights outside l^1 at D-points: T_w(z) - zeta z has a
/// local-minimum grid certificate for every tested zeta.
inline CheckResult check_positive_weights_all_r(int depth, const std::vector<Rational>& zetas) {
    detail::Check c("positives.allR", "Takagi at x in {1/2, 1/4, 3/4}", depth);
    GeneralizedTakagi t(build_radix(2, depth), WeightSequence::constant(1));
    for (const Rational& x : {Rational(1, 2), Rational(1, 4), Rational(3, 4)}) {
        for (const auto& z : zetas) {
            try {
                auto cert = local_min_witness(t, x, z);
                c.expect(cert.passed, "witness fails at x=" + format_rational(x) +
                                          ", zeta=" + format_rational(z) +
                                          (cert.failing_point
                                               ? ", h=" + format_rational(*cert.failing_point)
                                               : ""));
            } catch (const std::exception& e) {
                c.expect(false, std::string("witness error: ") + e.what());
            }
        }
        auto rep = subdifferential_estimate(t, x, std::min(depth, 12), zetas);
        c.expect(rep.verdict == SubdifferentialReport::Verdict::all_r_evidence,
                 std::string("verdict at x=") + format_rational(x) + " is " +
                     verdict_name(rep.verdict));
    }
    return c.finish();
}

/// Empty subdifferential at a generic point: exact left-right secant
/// separation at many depths for the classical Takagi function at 1/3.
inline CheckResult check_positive_weights_empty(int depth) {
    detail::Check c("positives.empty", "Takagi at x = 1/3", depth);
    GeneralizedTakagi t(build_radix(2, std::max(depth, 22)), WeightSequence::constant(1));
    auto rep = subdifferential_estimate(t, Rational(1, 3), std::max(depth, 15));
    c.expect(rep.verdict == SubdifferentialReport::Verdict::empty_certified,
             std::string("verdict is ") + verdict_name(rep.verdict));
    c.expect(rep.certificate_levels.size() >= 10,
             "only " + std::to_string(rep.certificate_levels.size()) + " separation depths");
    c.expect(rep.estimate.D_minus.lo() - rep.estimate.d_plus.hi() >= 1,
             "Dini gap below 1: D^-=" + format_interval(rep.estimate.D_minus) +
                 ", d_+=" + format_interval(rep.estimate.d_plus));
    return c.finish();
}

// ---------------------------------------------------------------------------
// Suite
// ---------------------------------------------------------------------------

struct SuiteSummary {
    std::vector<CheckResult> results;
    int passes = 0, fails = 0, inapplicables = 0;
    bool unknown_filter = false;
    bool all_pass() const { return fails == 0; }
};

/// The asymmetric-split decomposition: x = 1/2's right gap is always divided
/// at its 3/5 point while every other gap halves, so the overlap coefficients
/// equal 2/3 along the special chain. The halving chains shrink faster than
/// the special one, so a uniform rho = 3/8 only survives to depth 5.
inline Decomposition build_asymmetric_demo(int depth = 5) {
    std::vector<std::vector<Rational>> levels;
    levels.push_back({Rational(0), Rational(1)});
    std::vector<std::pair<Rational, Rational>> gaps{{Rational(0), Rational(1)}};
    Rational special(1, 2);  // left endpoint of the slowly-refined gap
    for (int n = 1; n <= depth; ++n) {
        std::vector<std::pair<Rational, Rational>> next;
        std::vector<Rational> pts = levels.back();
        for (const auto& [a, b] : gaps) {
            Rational split = (a == special && n > 1) ? a + Rational(3, 5) * (b - a) : (a + b) / 2;
            pts.push_back(split);
            next.emplace_back(a, split);
            next.emplace_back(split, b);
        }
        std::sort(pts.begin(), pts.end());
        levels.push_back(pts);
        gaps = std::move(next);
    }
    return make_explicit(0, 1, std::move(levels), {}, Rational(3, 8));
}

inline SuiteSummary run_suite(const std::string& filter, int depth, int counter_depth,
                              std::uint64_t seed) {
    using Entry = std::pair<std::string, std::function<CheckResult()>>;
    const std::vector<Rational> zetas{Rational(0), Rational(1), Rational(-1), Rational(10),
                                      Rational(-10)};
    auto takagi_like = [&](int r, const WeightSequence& w, Rational x) {
        return [=] { return check_adjacent_quotients(build_radix(r, depth + 1), w, x, depth); };
    };
    std::vector<Entry> registry;
    auto add = [&](std::string id, std::function<CheckResult()> fn) {
        registry.emplace_back(std::move(id), std::move(fn));
    };
    add("delta-sums.radix2.const1", takagi_like(2, WeightSequence::constant(1), Rational(1, 2)));
    add("delta-sums.radix2.alt1", takagi_like(2, WeightSequence::alternating(1), Rational(1, 2)));
    add("delta-sums.radix3.const1", takagi_like(3, WeightSequence::constant(1), Rational(1, 3)));
    add("delta-sums.radix3.alt1", takagi_like(3, WeightSequence::alternating(1), Rational(2, 3)));
    add("delta-sums.radix10.const1", takagi_like(10, WeightSequence::constant(1), Rational(1, 10)));
    add("delta-sums.chain-1-2-6-12.const1", [&] {
        return check_adjacent_quotients(build_divisor_chain({1, 2, 6, 12}, depth + 1),
                                   WeightSequence::constant(1), Rational(1, 2), depth);
    });
    add("delta-sums.counterexample.gate", [&] {
        return check_adjacent_quotients(build_counterexample(std::min(counter_depth, 5), false),
                                   WeightSequence::constant(1), Rational(2, 3),
                                   std::min(counter_depth, 5), GeometricTail{2, Rational(4, 5), 0});
    });
    add("overlap.radix2.const1", [&] {
        GeneralizedTakagi t(build_radix(2, depth + 1), WeightSequence::constant(1));
        return check_overlap_expansion(t, Rational(1, 2), depth);
    });
    add("overlap.radix2.alt1", [&] {
        GeneralizedTakagi t(build_radix(2, depth + 1), WeightSequence::alternating(1));
        return check_overlap_expansion(t, Rational(1, 2), depth);
    });
    add("overlap.chain-1-2-6-12-24.const1", [&] {
        GeneralizedTakagi t(build_divisor_chain({1, 2, 6, 12, 24}, depth + 1),
                            WeightSequence::constant(1));
        return check_overlap_expansion(t, Rational(1, 2), depth);
    });
    add("overlap.asymmetric.const1", [&] {
        GeneralizedTakagi t(build_asymmetric_demo(5), WeightSequence::constant(1),
                            GeometricTail{Rational(5, 3), Rational(3, 5), 0});
        return check_overlap_expansion(t, Rational(1, 2), 5);
    });
    add("weight-recursion.radix2.alt1", [&] {
        GeneralizedTakagi t(build_radix(2, depth + 1), WeightSequence::alternating(1));
        return check_weight_recursion(t, Rational(1, 2), depth);
    });
    add("weight-recursion.radix3.const1", [&] {
        GeneralizedTakagi t(build_radix(3, depth + 1), WeightSequence::constant(1));
        return check_weight_recursion(t, Rational(1, 3), depth);
    });
    add("weight-recursion.radix2.geom", [&] {
        GeneralizedTakagi t(build_radix(2, depth + 1),
                            WeightSequence::geometric(1, Rational(1, 2)));
        return check_weight_recursion(t, Rational(1, 2), depth);
    });
    add("duplicate-levels.triple", [&] { return check_duplicate_level_example(std::min(depth, 12)); });
    add("chords.radix3.midpoint", [&] {
        GeneralizedTakagi t(build_radix(3, depth + 1), WeightSequence::constant(1));
        return check_chord_identities(t, Rational(1, 2), depth);
    });
    add("chords.radix2.straddle", [&] {
        GeneralizedTakagi t(build_radix(2, depth + 1), WeightSequence::constant(1));
        return check_chord_identities(t, Rational(1, 3), depth);
    });
    add("chords.radix3.generic", [&] {
        GeneralizedTakagi t(build_radix(3, depth + 1), WeightSequence::constant(1));
        return check_chord_identities(t, Rational(1, 4), depth);
    });
    add("origin-derivative", [&] {
        return check_origin_derivative(counter_depth, false, seed);
    });
    add("origin-derivative.with-zero", [&] {
        return check_origin_derivative(counter_depth, true, seed);
    });
    add("superdiff.formula", [] { return check_superdiff_example(); });
    add("positives.allR", [&] { return check_positive_weights_all_r(16, zetas); });
    add("positives.empty", [&] { return check_positive_weights_empty(depth); });

    SuiteSummary summary;
    bool matched = false;
    for (auto& [id, fn] : registry) {
        if (!filter.empty() && id.find(filter) == std::string::npos) continue;
        matched = true;
        CheckResult r = fn();
        r.id = id;  // keep the registry id (includes the instance qualifier)
        switch (r.status) {
            case CheckStatus::pass: ++summary.passes; break;
            case CheckStatus::fail: ++summary.fails; break;
            case CheckStatus::inapplicable: ++summary.inapplicables; break;
        }
        summary.results.push_back(std::move(r));
    }
    summary.unknown_filter = !filter.empty() && !matched;
    return summary;
}

inline void write_summary_text(std::ostream& os, const SuiteSummary& summary) {
    if (summary.unknown_filter) {
        os << "warning: filter matched no checks\n";
        return;
    }
    for (const auto& r : summary.results) {
        os << "[" << status_name(r.status) << "] " << r.id << " (" << r.instance << ", depth "
           << r.depth << ", " << r.asserted << " assertions, " << static_cast<long>(r.wall_ms)
           << " ms)\n";
        for (const auto& w : r.witnesses) os << "    " << w << '\n';
    }
    os << summary.passes << " passed, " << summary.fails << " failed, " << summary.inapplicables
       << " inapplicable\n";
}

/// Byte-deterministic CSV (timings are reported only in the text summary).
inline void write_summary_csv(std::ostream& os, const SuiteSummary& summary) {
    os << "check_id,instance,depth,status,asserted,seed,witness\n";
    for (const auto& r : summary.results) {
        std::string witness = r.witnesses.empty() ? "" : r.witnesses.front();
        for (auto& ch : witness)
            if (ch == ',') ch = ';';
        os << r.id << ",\"" << r.instance << "\"," << r.depth << ',' << status_name(r.status) << ','
           << r.asserted << ',' << r.seed << ',' << witness << '\n';
    }
}

}  // namespace takagi
