#pragma once

#include "takagi/evaluation.hpp"

#include <optional>
#include <vector>

namespace takagi {

enum class Side { left, right };

/// One-sided slope of g_k at x; always +1 or -1 (distance functions to finite
/// sets are piecewise linear with unit slopes). At a point of D_k the right
/// slope is +1 and the left slope is -1; at a gap midpoint they disagree.
inline int right_slope(const Decomposition& d, int k, const Rational& x) {
    if (d.member(k, x)) return +1;
    auto a = d.prev(k, x), b = d.next(k, x);
    if (!a || !b) throw std::invalid_argument("right_slope: x outside the interior of the carrier");
    Rational mid = (*a + *b) / 2;
    return x < mid ? +1 : -1;
}

inline int left_slope(const Decomposition& d, int k, const Rational& x) {
    if (d.member(k, x)) return -1;
    auto a = d.prev(k, x), b = d.next(k, x);
    if (!a || !b) throw std::invalid_argument("left_slope: x outside the interior of the carrier");
    Rational mid = (*a + *b) / 2;
    return x <= mid ? +1 : -1;
}

struct NeighborLevel {
    int level = 0;
    bool member = false;            // x in D_n
    Rational a, b;                  // strict neighbors: max{y<x}, min{y>x}
    Rational c;                     // midpoint of (a,b); the gap midpoint when x not in D_n
};

struct NeighborSequence {
    Rational base;
    std::vector<NeighborLevel> levels;
};

/// Strict neighbor points per level. Requires x strictly inside the carrier.
/// When x is in D_n, a and b are the adjacent points (the y-sequences).
inline NeighborSequence neighbors(const Decomposition& d, const Rational& x, int depth) {
    if (!(d.lo() < x && x < d.hi()))
        throw std::invalid_argument("neighbors: x must lie strictly inside the carrier");
    if (depth > d.depth()) throw std::out_of_range("neighbors: depth beyond stored levels");
    NeighborSequence seq;
    seq.base = x;
    for (int n = 0; n <= depth; ++n) {
        NeighborLevel row;
        row.level = n;
        row.member = d.member(n, x);
        row.a = *d.prev(n, x);
        row.b = *d.next(n, x);
        row.c = (row.a + row.b) / 2;
        seq.levels.push_back(std::move(row));
    }
    return seq;
}

/// Enclosure of (T_w(v) - T_w(u)) / (v - u), width <= 2*eps/|v-u|.
inline RatInterval secant(const GeneralizedTakagi& t, const Rational& u, const Rational& v,
                          const Rational& eps) {
    if (u == v) throw std::invalid_argument("secant: u and v must differ");
    RatInterval fu = best_enclosure(t, u, eps / 2);
    RatInterval fv = best_enclosure(t, v, eps / 2);
    return (fv - fu).divided_by(v - u);
}

/// Exact secant when both endpoints admit exact values.
inline std::optional<Rational> exact_secant(const GeneralizedTakagi& t, const Rational& u,
                                            const Rational& v) {
    auto fu = exact_value(t, u), fv = exact_value(t, v);
    if (!fu || !fv) return std::nullopt;
    return (*fv - *fu) / (v - u);
}

struct TraceError : std::runtime_error {
    explicit TraceError(const std::string& what) : std::runtime_error(what) {}
};

struct TraceRow {
    int level = 0;                 // n
    Rational point;                // y_n, in original coordinates
    Rational quotient;             // Delta_n = (T(y_n)-T(x))/(y_n-x), exact
    std::optional<Rational> consecutive;     // Gamma_n = (T(y_n)-T(y_{n+1}))/(y_n-y_{n+1})
    std::optional<Rational> overlap_coeff;   // delta_n, extracted against w_n
    std::optional<bool> overlap_in_range;    // delta_n in [rho, 1] (when rho is declared)
    std::optional<Rational> increment;       // eta_n = Delta_{n+1} - Delta_n
    std::optional<Rational> quotient_gap;    // lambda_n = Delta_n - Gamma_n
    int partial_sum_level = 0;
    Rational enclosure_width;      // always 0: these quotients are exact
};

struct QuotientTrace {
    Rational base;
    Side side = Side::right;
    int n0 = 0;                    // least level containing the base point
    std::vector<TraceRow> rows;    // levels n0 .. depth
    bool nearest_point_guard_ok = true;   // the "impossible" nearest-point configuration never appeared
    bool gamma_expansion_ok = true;
    int gamma_expansion_checked = 0;
};

namespace detail {

/// Right-side trace worker. `with_gamma` also fills Gamma/eta/lambda and
/// validates the Gamma expansion wherever both overlap coefficients are < 1.
inline QuotientTrace build_right_trace(const GeneralizedTakagi& t, const Rational& x, int depth,
                                       bool with_gamma) {
    const auto& d = t.decomposition();
    const auto& w = t.weights();
    if (depth > d.depth()) throw std::out_of_range("trace: depth beyond stored levels");
    auto n0opt = d.first_membership_level(x);
    if (!n0opt) throw TraceError("trace base point not in D up to stored depth");
    int n0 = *n0opt;
    for (int k = 0; k < n0; ++k)
        if (w.at(k) != 0)
            throw TraceError("weights below the membership level must be zero; reduce via reduce_to_d1");
    if (!(x < d.hi())) throw TraceError("no right neighbors: base point at the carrier boundary");

    std::vector<Rational> y;  // y[i] = adjacent D_{n0+i} point on the right
    for (int n = n0; n <= depth; ++n) {
        auto b = d.next(n, x);
        if (!b) throw TraceError("no right neighbor at level " + std::to_string(n));
        if (!y.empty() && *b >= y.back())
            throw TraceError("y-sequence not strictly decreasing at level " + std::to_string(n));
        y.push_back(*b);
    }

    QuotientTrace trace;
    trace.base = x;
    trace.side = Side::right;
    trace.n0 = n0;

    bool ladder_ok = true;  // alpha_{n+1} <= rho/(1-rho) alpha_n (vacuous at rho = 1)
    if (d.rho_declared() && *d.rho_declared() < 1) {
        const Rational& rho = *d.rho_declared();
        for (int n = 0; n < d.depth(); ++n)
            if (d.alpha(n + 1) > rho / (1 - rho) * d.alpha(n)) ladder_ok = false;
    } else if (!d.rho_declared()) {
        ladder_ok = false;
    }

    std::vector<Rational> delta;  // Delta_n, index i = n - n0
    for (int n = n0; n <= depth; ++n) {
        Rational yn = y[static_cast<std::size_t>(n - n0)];
        delta.push_back(partial_sum(t, n - 1, yn) / (yn - x));
    }

    for (int n = n0; n <= depth; ++n) {
        std::size_t i = static_cast<std::size_t>(n - n0);
        TraceRow row;
        row.level = n;
        row.point = y[i];
        row.quotient = delta[i];
        row.partial_sum_level = n - 1;
        row.enclosure_width = 0;
        // delta_n from Delta_{n+1} = sum_{k=n0}^{n-1} w_k + delta_n w_n
        if (n + 1 <= depth && w.at(n) != 0) {
            Rational coeff = (delta[i + 1] - w.partial_sum(n0, n - 1)) / w.at(n);
            row.overlap_coeff = coeff;
            if (d.rho_declared())
                row.overlap_in_range = *d.rho_declared() <= coeff && coeff <= 1;
        }
        if (n + 1 <= depth) row.increment = delta[i + 1] - delta[i];
        trace.rows.push_back(std::move(row));
    }

    // Nearest-point exclusion guard: under the alpha ladder, the nearest
    // D_{n-2} point to y_n is never y_{n-2} strictly.
    if (ladder_ok) {
        for (int n = n0 + 2; n <= depth; ++n) {
            const Rational& yn = y[static_cast<std::size_t>(n - n0)];
            const Rational& ynm2 = y[static_cast<std::size_t>(n - n0 - 2)];
            if (ynm2 - yn < yn - x) trace.nearest_point_guard_ok = false;
        }
    }

    if (with_gamma) {
        for (int n = n0; n < depth; ++n) {
            std::size_t i = static_cast<std::size_t>(n - n0);
            const Rational& yn = y[i];
            const Rational& yn1 = y[i + 1];
            Rational gamma = (partial_sum(t, n, yn) - partial_sum(t, n, yn1)) / (yn - yn1);
            trace.rows[i].consecutive = gamma;
            trace.rows[i].quotient_gap = delta[i] - gamma;
            bool prev_lt_1 = trace.rows[i].overlap_coeff &&
                             i > 0 && trace.rows[i - 1].overlap_coeff &&
                             *trace.rows[i - 1].overlap_coeff < 1 && *trace.rows[i].overlap_coeff < 1;
            if (prev_lt_1 && n >= n0 + 1) {
                const Rational& ynm1 = y[i - 1];
                Rational expansion = w.partial_sum(n0, n - 2) +
                                     (ynm1 - yn - (yn1 - x)) / (yn - yn1) * w.at(n - 1) - w.at(n);
                ++trace.gamma_expansion_checked;
                if (expansion != gamma) trace.gamma_expansion_ok = false;
            }
        }
    }
    return trace;
}

inline QuotientTrace mirror_trace(QuotientTrace trace, const Rational& lo, const Rational& hi,
                                  const Rational& original_base) {
    Rational s = lo + hi;
    trace.base = original_base;
    trace.side = Side::left;
    for (auto& row : trace.rows) {
        row.point = s - row.point;
        row.quotient = -row.quotient;
        if (row.consecutive) row.consecutive = -*row.consecutive;
        if (row.increment) row.increment = -*row.increment;
        if (row.quotient_gap) row.quotient_gap = -*row.quotient_gap;
        // overlap_coeff stays: it is a ratio of distances, side-invariant
    }
    return trace;
}

}  // namespace detail

/// Difference quotients Delta_n from x toward the side-adjacent D_n points.
/// Requires x in D (within stored depth) and zero weights below its level.
inline QuotientTrace delta_trace(const GeneralizedTakagi& t, const Rational& x, Side side, int depth) {
    if (side == Side::right) return detail::build_right_trace(t, x, depth, false);
    auto refl = t.reflected_instance();
    Rational xr = t.decomposition().lo() + t.decomposition().hi() - x;
    auto trace = detail::build_right_trace(refl, xr, depth, false);
    return detail::mirror_trace(std::move(trace), t.decomposition().lo(), t.decomposition().hi(), x);
}

/// delta_trace plus Gamma_n, eta_n, lambda_n and the Gamma-expansion validation.
inline QuotientTrace gamma_trace(const GeneralizedTakagi& t, const Rational& x, Side side, int depth) {
    if (side == Side::right) return detail::build_right_trace(t, x, depth, true);
    auto refl = t.reflected_instance();
    Rational xr = t.decomposition().lo() + t.decomposition().hi() - x;
    auto trace = detail::build_right_trace(refl, xr, depth, true);
    return detail::mirror_trace(std::move(trace), t.decomposition().lo(), t.decomposition().hi(), x);
}

enum class ChordMode { straddle, right, left };

struct ChordRow {
    int level = 0;
    Rational u, v;        // chord endpoints, u < v
    Rational quotient;    // (T(v)-T(u))/(v-u), exact (endpoints lie in D)
    Rational ratio;       // the chord ratio for the mode
};

struct ChordTrace {
    Rational base;
    ChordMode mode = ChordMode::straddle;
    std::vector<ChordRow> rows;
};

/// Chords between neighbor points:
///   straddle: (a_n, b_n), ratio (x-a_n)/(b_n-a_n)
///   right:    (b_{n+1}, b_n), ratio (b_{n+1}-x)/(b_n-b_{n+1})
///   left:     (a_{n-1}, a_n), ratio (x-a_{n-1})/(a_n-a_{n-1})
/// Quotients are exact: endpoints lie in D so their T values are finite sums.
inline ChordTrace chord_trace(const GeneralizedTakagi& t, const Rational& x, int depth, ChordMode mode) {
    auto seq = neighbors(t.decomposition(), x, depth);
    ChordTrace out;
    out.base = x;
    out.mode = mode;
    auto value = [&](const Rational& p) { return *exact_value(t, p); };
    for (int n = 0; n <= depth; ++n) {
        const auto& row = seq.levels[static_cast<std::size_t>(n)];
        ChordRow cr;
        cr.level = n;
        if (mode == ChordMode::straddle) {
            cr.u = row.a;
            cr.v = row.b;
            cr.ratio = (x - row.a) / (row.b - row.a);
        } else if (mode == ChordMode::right) {
            if (n + 1 > depth) break;
            const auto& nxt = seq.levels[static_cast<std::size_t>(n + 1)];
            if (nxt.b == row.b) continue;  // no strict refinement on this side
            cr.u = nxt.b;
            cr.v = row.b;
            cr.ratio = (nxt.b - x) / (row.b - nxt.b);
        } else {
            if (n == 0) continue;
            const auto& prv = seq.levels[static_cast<std::size_t>(n - 1)];
            if (prv.a == row.a) continue;
            cr.u = prv.a;
            cr.v = row.a;
            cr.ratio = (x - prv.a) / (row.a - prv.a);
        }
        cr.quotient = (value(cr.v) - value(cr.u)) / (cr.v - cr.u);
        out.rows.push_back(std::move(cr));
    }
    return out;
}

struct Reduction {
    GeneralizedTakagi instance;  // weights below n0 forced to zero
    int n0 = 0;
    Rational right_slope_sum;    // G'^+_{n0-1}(x) = sum_{k<n0} w_k g'^+_k(x)
    Rational left_slope_sum;     // G'^-_{n0-1}(x)
};

/// Reduction for x in D: split off G_{n0-1} (smooth at x, with
/// exact one-sided slopes) and keep the residual instance with zeroed prefix.
inline Reduction reduce_to_d1(const GeneralizedTakagi& t, const Rational& x) {
    auto n0 = t.decomposition().first_membership_level(x);
    if (!n0) throw std::invalid_argument("reduce_to_d1: x not in D up to stored depth");
    Rational rs(0), ls(0);
    for (int k = 0; k < *n0; ++k) {
        Rational wk = t.weights().at(k);
        if (wk == 0) continue;
        rs += wk * right_slope(t.decomposition(), k, x);
        ls += wk * left_slope(t.decomposition(), k, x);
    }
    return Reduction{t.with_weights(t.weights().zeroed_below(*n0)), *n0, std::move(rs), std::move(ls)};
}

}  // namespace takagi
