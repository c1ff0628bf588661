#pragma once

#include "takagi/sequences.hpp"

#include <optional>
#include <string>
#include <vector>

namespace takagi {

struct PointClass {
    enum class Kind { in_d, in_d_tilde, generic } kind = Kind::generic;
    std::optional<int> n0;           // least level with x in D_{n0}
    std::vector<int> tilde_levels;   // stored levels with x in ~D_k
};

/// Exact membership classification of x up to the stored depth.
inline PointClass classify(const Decomposition& d, const Rational& x) {
    if (x < d.lo() || x > d.hi()) throw std::invalid_argument("classify: point outside carrier");
    PointClass pc;
    pc.n0 = d.first_membership_level(x);
    int top = pc.n0 ? *pc.n0 : d.depth() + 1;
    for (int k = 0; k < top && k <= d.depth(); ++k) {
        if (d.member(k, x)) continue;
        auto a = d.prev(k, x), b = d.next(k, x);
        if (a && b && (*a + *b) / 2 == x) pc.tilde_levels.push_back(k);
    }
    if (pc.n0)
        pc.kind = PointClass::Kind::in_d;
    else if (!pc.tilde_levels.empty())
        pc.kind = PointClass::Kind::in_d_tilde;
    else
        pc.kind = PointClass::Kind::generic;
    return pc;
}

struct DiniEstimate {
    RatInterval d_plus;    // finite-horizon enclosure of the right liminf proxy
    RatInterval D_minus;   // finite-horizon enclosure of the left limsup proxy
    int horizon = 0;
    long samples = 0;
};

namespace detail {

/// Rigorous inf (right side) or sup (left side) of the difference quotient
/// (T(z)-T(x))/(z-x) over one annulus at scale alpha_n. The truncated sum is
/// piecewise linear, so extrema over the annulus closure are attained on the
/// kink grid; the tail inflates each value by tail_bound(N)/dist.
struct AnnulusBound {
    RatInterval value{Rational(0), Rational(0)};
    bool empty = true;
    long samples = 0;
};

inline AnnulusBound annulus_extremum(const GeneralizedTakagi& t, const Rational& x,
                                     const RatInterval& anchor, int n, bool right_side,
                                     const Rational& eps, std::size_t budget) {
    const auto& d = t.decomposition();
    Rational inner = d.alpha(n + 1), outer = d.alpha(n);
    Rational zlo = right_side ? x + inner : x - outer;
    Rational zhi = right_side ? x + outer : x - inner;
    zlo = std::max(zlo, d.lo());
    zhi = std::min(zhi, d.hi());
    AnnulusBound out;
    if (right_side ? (zlo <= x || zlo >= zhi) : (zhi >= x || zlo >= zhi)) {
        if (!(zlo < zhi)) return out;
        if (right_side && zlo <= x) return out;
        if (!right_side && zhi >= x) return out;
    }

    // evaluation level: tail slack at most eps * inner radius, within budget
    int N = d.depth();
    for (int cand = n + 1; cand <= d.depth(); ++cand) {
        if (tail_bound(t, cand) <= eps * inner) {
            N = cand;
            break;
        }
    }
    std::vector<Rational> pts;
    for (;; --N) {
        try {
            pts = d.kink_grid(N, zlo, zhi, budget);
            break;
        } catch (const std::length_error&) {
            if (N <= n + 1) {
                pts = d.kink_grid(n + 1, zlo, zhi, budget);
                break;
            }
        }
    }
    pts.push_back(zlo);
    pts.push_back(zhi);
    Rational tau = tail_bound(t, N);
    bool first = true;
    Rational best_lo(0), best_hi(0);
    for (const auto& z : pts) {
        if (z <= d.lo() || z >= d.hi()) {
            if (z < d.lo() || z > d.hi()) continue;
        }
        if (right_side ? z <= x : z >= x) continue;
        if (z < zlo || z > zhi) continue;
        Rational s = partial_sum(t, N, z);
        Rational dz = z - x;
        // numerator range: [s - tau - anchor.hi, s + tau - anchor.lo]
        Rational qa = (s - tau - anchor.hi()) / dz;
        Rational qb = (s + tau - anchor.lo()) / dz;
        if (dz < 0) std::swap(qa, qb);
        ++out.samples;
        if (first) {
            best_lo = qa;
            best_hi = qb;
            first = false;
            continue;
        }
        if (right_side) {  // track the minimum (liminf proxy)
            best_lo = std::min(best_lo, qa);
            best_hi = std::min(best_hi, qb);
        } else {  // track the maximum (limsup proxy)
            best_lo = std::max(best_lo, qa);
            best_hi = std::max(best_hi, qb);
        }
    }
    if (first) return out;
    out.empty = false;
    out.value = RatInterval(best_lo, best_hi);
    return out;
}

}  // namespace detail

/// Finite-horizon Dini-derivative estimate. Per annulus (alpha_{n+1}, alpha_n]
/// around x, computes a rigorous enclosure of the quotient infimum (right) or
/// supremum (left); the reported pair combines the deep-half window
/// [horizon/2, horizon). No claim is made about the true limits.
inline DiniEstimate dini(const GeneralizedTakagi& t, const Rational& x, int horizon,
                         const Rational& eps, std::size_t budget = 2048) {
    const auto& d = t.decomposition();
    if (horizon < 1 || horizon > d.depth())
        throw std::out_of_range("dini: horizon must lie in [1, stored depth]");
    RatInterval anchor = best_enclosure(t, x, eps * d.alpha(horizon));
    DiniEstimate est;
    est.horizon = horizon;
    std::optional<RatInterval> dplus, dminus;
    auto fold_min = [](std::optional<RatInterval>& acc, const RatInterval& v) {
        if (!acc)
            acc = v;
        else
            acc = RatInterval(std::min(acc->lo(), v.lo()), std::min(acc->hi(), v.hi()));
    };
    auto fold_max = [](std::optional<RatInterval>& acc, const RatInterval& v) {
        if (!acc)
            acc = v;
        else
            acc = RatInterval(std::max(acc->lo(), v.lo()), std::max(acc->hi(), v.hi()));
    };
    for (int n = horizon / 2; n < horizon; ++n) {
        auto r = detail::annulus_extremum(t, x, anchor, n, true, eps, budget);
        est.samples += r.samples;
        if (!r.empty) fold_min(dplus, r.value);
        auto l = detail::annulus_extremum(t, x, anchor, n, false, eps, budget);
        est.samples += l.samples;
        if (!l.empty) fold_max(dminus, l.value);
    }
    // fall back to shallower annuli when the window was clipped away entirely
    for (int n = horizon / 2 - 1; n >= 0 && (!dplus || !dminus); --n) {
        if (!dplus) {
            auto r = detail::annulus_extremum(t, x, anchor, n, true, eps, budget);
            est.samples += r.samples;
            if (!r.empty) fold_min(dplus, r.value);
        }
        if (!dminus) {
            auto l = detail::annulus_extremum(t, x, anchor, n, false, eps, budget);
            est.samples += l.samples;
            if (!l.empty) fold_max(dminus, l.value);
        }
    }
    if (!dplus || !dminus)
        throw std::invalid_argument("dini: no usable annuli inside the carrier around x");
    est.d_plus = *dplus;
    est.D_minus = *dminus;
    return est;
}

struct LocalMinCertificate {
    int threshold_level = 0;  // least n with the partial-sum margin over |zeta|
    Rational radius;          // rho * alpha_n / 3
    long grid_points = 0;
    bool passed = false;
    std::optional<Rational> failing_point;
};

/// Grid certificate that T_w(z) - zeta z has a local minimum at x in D.
/// Requires nonnegative weights outside l^1 and a declared rho. The truncated
/// sum is verified on its kink grid; dropped tail terms are nonnegative and
/// vanish at x, so the certificate bounds the full function. Verification
/// uses the deepest level whose kink grid fits the budget (never below the
/// threshold level, where the margin argument needs every term).
inline LocalMinCertificate local_min_witness(const GeneralizedTakagi& t, const Rational& x,
                                             const Rational& zeta, std::size_t budget = 1u << 17) {
    const auto& d = t.decomposition();
    const auto& w = t.weights();
    if (!w.nonnegative()) throw std::invalid_argument("local_min_witness: weights must be nonnegative");
    if (w.in_l1()) throw std::invalid_argument("local_min_witness: weights must lie outside l^1");
    if (!d.rho_declared()) throw std::invalid_argument("local_min_witness: needs a declared rho");
    auto n0 = d.first_membership_level(x);
    if (!n0) throw std::invalid_argument("local_min_witness: x not in D up to stored depth");

    Rational target = w.partial_sum(1, *n0 - 1) + rational_abs(zeta);
    std::optional<int> threshold;
    for (int n = *n0; n <= d.depth(); ++n) {
        if (w.partial_sum(*n0, n) > target) {
            threshold = n;
            break;
        }
    }
    if (!threshold)
        throw std::runtime_error("local_min_witness: stored depth " + std::to_string(d.depth()) +
                                 " never reaches the partial-sum margin for zeta = " +
                                 format_rational(zeta));

    LocalMinCertificate cert;
    cert.threshold_level = *threshold;
    cert.radius = *d.rho_declared() * d.alpha(*threshold) / 3;
    Rational a = std::max(Rational(x - cert.radius), d.lo());
    Rational b = std::min(Rational(x + cert.radius), d.hi());
    int M = d.depth() - 1;  // verify S_M; terms beyond are nonnegative and vanish at x
    std::vector<Rational> grid;
    for (;; --M) {
        try {
            grid = d.kink_grid(M, a, b, budget);
            break;
        } catch (const std::length_error&) {
            if (M <= *threshold)
                throw std::runtime_error("local_min_witness: window too dense even at the threshold");
        }
    }
    grid.push_back(a);
    grid.push_back(b);
    Rational sx = partial_sum(t, M, x);
    cert.passed = true;
    for (const auto& z : grid) {
        if (z < a || z > b) continue;
        ++cert.grid_points;
        Rational lhs = partial_sum(t, M, z) - sx - zeta * (z - x);
        if (lhs < 0) {
            cert.passed = false;
            cert.failing_point = z;
            break;
        }
    }
    return cert;
}

struct SumLimitEstimate {
    enum class Kind { exact, window_proxy, diverges_pos, diverges_neg } kind = Kind::window_proxy;
    RatInterval value;  // point interval for exact limits; window range for proxies
};

/// Finite-horizon liminf/limsup of the running sums sum_{k=start}^n w_k,
/// exact (closed form) for the periodic rules, window proxies otherwise.
inline std::pair<SumLimitEstimate, SumLimitEstimate> partial_sum_liminf_limsup(
    const WeightSequence& w, int horizon, int start = 0) {
    if (auto cf = w.closed_form_sum_limits(start)) {
        auto conv = [](const WeightSequence::SumLimit& sl) {
            SumLimitEstimate e;
            switch (sl.kind) {
                case WeightSequence::SumLimit::Kind::exact:
                    e.kind = SumLimitEstimate::Kind::exact;
                    e.value = RatInterval::point(sl.value);
                    break;
                case WeightSequence::SumLimit::Kind::diverges_pos:
                    e.kind = SumLimitEstimate::Kind::diverges_pos;
                    break;
                case WeightSequence::SumLimit::Kind::diverges_neg:
                    e.kind = SumLimitEstimate::Kind::diverges_neg;
                    break;
            }
            return e;
        };
        return {conv(cf->liminf), conv(cf->limsup)};
    }
    Rational s(0);
    std::optional<Rational> wmin, wmax;
    int lo = std::max(start, start + horizon / 2);
    for (int n = start; n <= start + horizon; ++n) {
        s += w.at(n);
        if (n < lo) continue;
        if (!wmin || s < *wmin) wmin = s;
        if (!wmax || s > *wmax) wmax = s;
    }
    SumLimitEstimate li, ls;
    li.kind = ls.kind = SumLimitEstimate::Kind::window_proxy;
    li.value = RatInterval::point(*wmin);
    ls.value = RatInterval::point(*wmax);
    return {li, ls};
}

struct SubdifferentialReport {
    enum class Verdict { empty_certified, candidate_interval, all_r_evidence, derivative_candidate };
    Verdict verdict = Verdict::candidate_interval;
    std::optional<RatInterval> interval;
    int horizon = 0;
    std::vector<int> certificate_levels;  // levels with exact left secant > right secant
    DiniEstimate estimate;
    std::string detail;
};

inline const char* verdict_name(SubdifferentialReport::Verdict v) {
    using V = SubdifferentialReport::Verdict;
    switch (v) {
        case V::empty_certified: return "empty-certified";
        case V::candidate_interval: return "candidate-interval";
        case V::all_r_evidence: return "all-R-evidence";
        default: return "derivative-candidate";
    }
}

/// Finite-horizon subdifferential verdict; see the verdict enum. Emptiness
/// evidence is a strict separation of exact anchored secants (left above
/// right) at a matched level; all-R evidence is the local-minimum witness
/// sweep over the zeta test set.
inline SubdifferentialReport subdifferential_estimate(
    const GeneralizedTakagi& t, const Rational& x, int depth,
    const std::vector<Rational>& zetas = {Rational(0), Rational(1), Rational(-1), Rational(10),
                                          Rational(-10)},
    const Rational& eps = Rational(1, 64)) {
    const auto& d = t.decomposition();
    SubdifferentialReport rep;
    rep.horizon = depth;
    PointClass pc = classify(d, x);

    if (pc.kind == PointClass::Kind::in_d && t.weights().nonnegative() && !t.weights().in_l1() &&
        d.rho_declared()) {
        bool all = true;
        for (const auto& z : zetas) {
            try {
                if (!local_min_witness(t, x, z).passed) {
                    all = false;
                    break;
                }
            } catch (const std::runtime_error&) {  // depth never reached the margin
                all = false;
                break;
            }
        }
        if (all) {
            rep.verdict = SubdifferentialReport::Verdict::all_r_evidence;
            rep.detail = "local-minimum witness passed for all " + std::to_string(zetas.size()) +
                         " tested slopes";
            rep.estimate = dini(t, x, depth, eps);
            return rep;
        }
    }

    RatInterval anchor = best_enclosure(t, x, eps * d.alpha(depth));
    for (int n = 1; n <= depth; ++n) {
        auto a = d.prev(n, x), b = d.next(n, x);
        if (!a || !b) continue;
        auto fa = exact_value(t, *a), fb = exact_value(t, *b);
        if (!fa || !fb) continue;
        RatInterval sl = (RatInterval::point(*fa) - anchor).divided_by(*a - x);
        RatInterval sr = (RatInterval::point(*fb) - anchor).divided_by(*b - x);
        if (sl.lo() > sr.hi()) rep.certificate_levels.push_back(n);
    }
    rep.estimate = dini(t, x, depth, eps);
    // emptiness evidence must persist into the deep half of the horizon; a
    // transient shallow separation says nothing about the limit behaviour
    bool deep_separation = false;
    for (int n : rep.certificate_levels)
        if (n > depth / 2) deep_separation = true;
    if (deep_separation) {
        rep.verdict = SubdifferentialReport::Verdict::empty_certified;
        rep.detail = "left secant exceeds right secant at " +
                     std::to_string(rep.certificate_levels.size()) + " levels";
        return rep;
    }
    rep.certificate_levels.clear();
    if (rep.estimate.D_minus.lo() <= rep.estimate.d_plus.hi()) {
        RatInterval hull(rep.estimate.D_minus.lo(), rep.estimate.d_plus.hi());
        rep.interval = hull;
        rep.verdict = hull.width() == 0 ? SubdifferentialReport::Verdict::derivative_candidate
                                        : SubdifferentialReport::Verdict::candidate_interval;
        rep.detail = "candidate [D^-, d_+] hull at horizon";
    } else {
        rep.verdict = SubdifferentialReport::Verdict::candidate_interval;
        rep.interval = std::nullopt;
        rep.detail = "estimates cross but no exact separation pair was found";
    }
    return rep;
}

/// Superdifferential via the identity with the negated instance; the interval
/// is mirrored back.
inline SubdifferentialReport superdifferential_estimate(
    const GeneralizedTakagi& t, const Rational& x, int depth,
    const std::vector<Rational>& zetas = {Rational(0), Rational(1), Rational(-1), Rational(10),
                                          Rational(-10)},
    const Rational& eps = Rational(1, 64)) {
    auto rep = subdifferential_estimate(t.negated(), x, depth, zetas, eps);
    if (rep.interval) rep.interval = rep.interval->negated();
    RatInterval dp = rep.estimate.d_plus, dm = rep.estimate.D_minus;
    rep.estimate.d_plus = dm.negated();
    rep.estimate.D_minus = dp.negated();
    return rep;
}

/// Binary expansion with an eventually periodic tail: digits eps_1 eps_2 ...
/// given as a finite prefix plus a repeating period.
class BinaryExpansion {
public:
    BinaryExpansion(std::vector<int> prefix, std::vector<int> period)
        : prefix_(std::move(prefix)), period_(std::move(period)) {
        if (period_.empty()) throw std::invalid_argument("BinaryExpansion: empty period");
        for (int d : prefix_)
            if (d != 0 && d != 1) throw std::invalid_argument("BinaryExpansion: digits must be 0/1");
        for (int d : period_)
            if (d != 0 && d != 1) throw std::invalid_argument("BinaryExpansion: digits must be 0/1");
    }

    /// "11010(10)" -> prefix 11010, period 10.
    static BinaryExpansion parse(const std::string& s) {
        auto open = s.find('('), close = s.find(')');
        if (open == std::string::npos || close != s.size() - 1 || close < open)
            throw std::invalid_argument("BinaryExpansion: expected digits(period)");
        auto digits = [](const std::string& part) {
            std::vector<int> out;
            for (char c : part) {
                if (c != '0' && c != '1') throw std::invalid_argument("BinaryExpansion: bad digit");
                out.push_back(c - '0');
            }
            return out;
        };
        return BinaryExpansion(digits(s.substr(0, open)), digits(s.substr(open + 1, close - open - 1)));
    }

    /// eps_n, 1-indexed.
    int digit(int n) const {
        if (n < 1) throw std::invalid_argument("digit index starts at 1");
        int p = static_cast<int>(prefix_.size());
        if (n <= p) return prefix_[static_cast<std::size_t>(n - 1)];
        return period_[static_cast<std::size_t>((n - p - 1) % static_cast<int>(period_.size()))];
    }

    /// True when eps_n + eps_{n+1} = 1 for all large n.
    bool alternating_tail() const {
        int P = static_cast<int>(period_.size());
        for (int i = 0; i < P; ++i)
            if (period_[static_cast<std::size_t>(i)] + period_[static_cast<std::size_t>((i + 1) % P)] != 1)
                return false;
        return true;
    }

    /// Least m >= 1 with eps_n + eps_{n+1} = 1 for every n > m.
    int m() const {
        if (!alternating_tail()) throw std::domain_error("expansion tail is not alternating");
        int last_violation = 0;
        int scan = static_cast<int>(prefix_.size()) + 1;
        for (int n = 1; n <= scan; ++n)
            if (digit(n) + digit(n + 1) != 1) last_violation = n;
        return std::max(1, last_violation);
    }

    Rational value() const {
        Rational v(0);
        int p = static_cast<int>(prefix_.size());
        for (int n = 1; n <= p; ++n)
            if (prefix_[static_cast<std::size_t>(n - 1)]) v += Rational(1, Integer(1) << n);
        Rational period_val(0);
        int P = static_cast<int>(period_.size());
        for (int i = 1; i <= P; ++i)
            if (period_[static_cast<std::size_t>(i - 1)]) period_val += Rational(1, Integer(1) << i);
        Rational tail = period_val / (1 - Rational(1, Integer(1) << P));
        return v + tail / (Integer(1) << p);
    }

    const std::vector<int>& prefix_digits() const { return prefix_; }
    const std::vector<int>& period_digits() const { return period_; }

private:
    std::vector<int> prefix_;
    std::vector<int> period_;
};

/// Closed-form superdifferential of the classical Takagi function at points
/// with eventually alternating binary digits:
///   m - 2 sum_{k<=m} eps_k + [-1,0]  if eps_{m+1} = 1,  else + [0,1].
inline RatInterval takagi_superdiff_formula(const BinaryExpansion& e) {
    if (!e.alternating_tail())
        throw std::domain_error("takagi_superdiff_formula: inapplicable, tail not alternating");
    int m = e.m();
    Rational base(m);
    for (int k = 1; k <= m; ++k) base -= 2 * e.digit(k);
    if (e.digit(m + 1) == 1) return RatInterval(base - 1, base);
    return RatInterval(base, base + 1);
}

struct ShiftedSumReport {
    int n0 = 0;
    Rational prefix_sum;               // sum_{k=0}^{n0-1} w_k
    SumLimitEstimate shifted_liminf;   // liminf sum_{k=n0}^n w_k  -  prefix_sum
    SubdifferentialReport::Verdict subdiff_verdict;
    bool consistent = true;  // a definitively negative liminf demands empty evidence
};

/// The displayed quantity of the D-and-~D propositions: evaluates
/// liminf_n sum_{k=n0}^n w_k - sum_{k<n0} w_k and reports whether its sign
/// co-occurs with the subdifferential verdict as the D-and-midpoint claim requires.
inline ShiftedSumReport shifted_sum_test(const GeneralizedTakagi& t, const Rational& x, int horizon) {
    const auto& d = t.decomposition();
    PointClass pc = classify(d, x);
    if (pc.kind != PointClass::Kind::in_d)
        throw std::invalid_argument("shifted_sum_test: x must lie in D");
    int n0 = *pc.n0;
    for (int k = 0; k < n0; ++k) {
        bool found = false;
        for (int lvl : pc.tilde_levels)
            if (lvl == k) found = true;
        if (!found)
            throw std::invalid_argument("shifted_sum_test: x must be a midpoint at every level below " +
                                        std::to_string(n0));
    }
    if (!d.rho_declared()) throw std::invalid_argument("shifted_sum_test: needs a declared rho");
    auto rep = validate(d);
    if (!rep.all_yes(&LevelHypotheses::alpha_ratio_le_half_rho, d.depth()))
        throw std::invalid_argument("shifted_sum_test: needs alpha_{n+1} <= rho alpha_n / 2 at every level");

    ShiftedSumReport out;
    out.n0 = n0;
    out.prefix_sum = t.weights().partial_sum(0, n0 - 1);
    auto [li, ls] = partial_sum_liminf_limsup(t.weights(), horizon, n0);
    (void)ls;
    out.shifted_liminf = li;
    if (li.kind == SumLimitEstimate::Kind::exact)
        out.shifted_liminf.value = RatInterval::point(li.value.lo() - out.prefix_sum);
    else if (li.kind == SumLimitEstimate::Kind::window_proxy)
        out.shifted_liminf.value = RatInterval::point(li.value.lo() - out.prefix_sum);
    auto sub = subdifferential_estimate(t, x, std::min(horizon, d.depth()));
    out.subdiff_verdict = sub.verdict;
    bool definitively_negative =
        (out.shifted_liminf.kind == SumLimitEstimate::Kind::exact &&
         out.shifted_liminf.value.hi() < 0) ||
        out.shifted_liminf.kind == SumLimitEstimate::Kind::diverges_neg;
    out.consistent = !definitively_negative ||
                     sub.verdict == SubdifferentialReport::Verdict::empty_certified;
    return out;
}

struct ChordLimitReport {
    bool applicable = true;        // the chord ratio stayed within its bound
    Rational max_ratio;
    std::optional<Rational> ratio_bound;  // 1/rho (right), 1/rho + 1 (left)
    bool cauchy = false;
    Rational max_window_gap;       // max pairwise quotient gap over the deep window
    long compared = 0;
};

/// Checks whether a chord trace's quotients are Cauchy within `tol` over the
/// deep half of the trace, under the chord ratio condition for its mode.
inline ChordLimitReport chord_limit_check(const ChordTrace& trace, const std::optional<Rational>& rho,
                                          const Rational& tol) {
    ChordLimitReport rep;
    if (trace.rows.empty()) {
        rep.applicable = false;
        return rep;
    }
    rep.max_ratio = trace.rows[0].ratio;
    for (const auto& r : trace.rows) rep.max_ratio = std::max(rep.max_ratio, r.ratio);
    if (rho) {
        if (trace.mode == ChordMode::right) rep.ratio_bound = 1 / *rho;
        if (trace.mode == ChordMode::left) rep.ratio_bound = 1 / *rho + 1;
        if (rep.ratio_bound && rep.max_ratio > *rep.ratio_bound) {
            rep.applicable = false;
            return rep;
        }
    }
    std::size_t from = trace.rows.size() / 2;
    rep.max_window_gap = 0;
    for (std::size_t i = from; i < trace.rows.size(); ++i) {
        for (std::size_t j = i + 1; j < trace.rows.size(); ++j) {
            Rational gap = rational_abs(trace.rows[i].quotient - trace.rows[j].quotient);
            rep.max_window_gap = std::max(rep.max_window_gap, gap);
            ++rep.compared;
        }
    }
    rep.cauchy = rep.max_window_gap <= tol;
    return rep;
}

}  // namespace takagi
