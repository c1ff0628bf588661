#pragma once

#include "takagi/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace takagi {

enum class Flag { no, yes, unknown };

inline const char* flag_name(Flag f) {
    switch (f) {
        case Flag::no: return "no";
        case Flag::yes: return "yes";
        default: return "unknown";
    }
}

/// Uniform nested grids D_n = { k/q_n } on [0,1], with q_n | q_{n+1}.
/// Covers the r-adic and divisor-chain families; all level queries are
/// closed-form, so deep levels never have to be materialized.
struct GridRule {
    std::vector<Integer> divisors;  // q_0 = 1, q_n | q_{n+1}, strictly increasing
};

struct ExplicitStore {
    std::vector<std::vector<Rational>> levels;  // sorted, strictly increasing
};

struct GeneratorTag {
    enum class Kind { none, radix, chain, counterexample } kind = Kind::none;
    Integer radix = 0;
    std::vector<Integer> chain;
    int depth = 0;
    bool with_zero = false;
};

class Decomposition {
public:
    Decomposition(Rational lo, Rational hi, GridRule rule, std::optional<Rational> rho,
                  GeneratorTag tag)
        : lo_(std::move(lo)), hi_(std::move(hi)), rho_(std::move(rho)), tag_(std::move(tag)),
          store_(std::move(rule)) {
        check_grid();
    }

    Decomposition(Rational lo, Rational hi, ExplicitStore store,
                  std::vector<std::optional<Rational>> declared_alpha, std::optional<Rational> rho,
                  GeneratorTag tag)
        : lo_(std::move(lo)), hi_(std::move(hi)), rho_(std::move(rho)), tag_(std::move(tag)),
          store_(std::move(store)), declared_alpha_(std::move(declared_alpha)) {
        check_explicit();
    }

    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }
    const std::optional<Rational>& rho_declared() const { return rho_; }
    const GeneratorTag& generator() const { return tag_; }

    /// Deepest stored/known level index.
    int depth() const {
        if (auto* g = std::get_if<GridRule>(&store_)) return static_cast<int>(g->divisors.size()) - 1;
        return static_cast<int>(std::get<ExplicitStore>(store_).levels.size()) - 1;
    }

    bool is_grid() const { return std::holds_alternative<GridRule>(store_); }
    const GridRule* grid() const { return std::get_if<GridRule>(&store_); }

    /// alpha_n: declared value when present, else the computed max gap.
    Rational alpha(int n) const {
        require_level(n);
        if (n < static_cast<int>(declared_alpha_.size()) && declared_alpha_[n]) return *declared_alpha_[n];
        return alpha_computed(n);
    }

    Rational alpha_computed(int n) const {
        require_level(n);
        if (auto* g = std::get_if<GridRule>(&store_)) return Rational(1, g->divisors[n]);
        return max_gap_explicit(n);
    }

    Rational min_gap(int n) const {
        require_level(n);
        if (auto* g = std::get_if<GridRule>(&store_)) return Rational(1, g->divisors[n]);
        const auto& pts = std::get<ExplicitStore>(store_).levels[n];
        Rational best = pts[1] - pts[0];
        for (std::size_t i = 2; i < pts.size(); ++i) best = std::min(best, Rational(pts[i] - pts[i - 1]));
        return best;
    }

    bool member(int n, const Rational& x) const {
        require_level(n);
        if (x < lo_ || x > hi_) return false;
        if (auto* g = std::get_if<GridRule>(&store_)) return is_integer(x * g->divisors[n]);
        const auto& pts = std::get<ExplicitStore>(store_).levels[n];
        return std::binary_search(pts.begin(), pts.end(), x);
    }

    /// Least level containing x, if any within the stored depth.
    std::optional<int> first_membership_level(const Rational& x) const {
        for (int n = 0; n <= depth(); ++n)
            if (member(n, x)) return n;
        return std::nullopt;
    }

    /// max{ y in D_n : y < x }
    std::optional<Rational> prev(int n, const Rational& x) const {
        require_level(n);
        if (auto* g = std::get_if<GridRule>(&store_)) {
            const Integer& q = g->divisors[n];
            Rational t = x * q;
            Integer k = rational_floor(t);
            if (Rational(k) == t) --k;
            if (k < 0) return std::nullopt;
            if (Rational(k, q) > hi_) k = rational_floor(hi_ * q);  // clamp (x beyond carrier)
            return Rational(k, q);
        }
        const auto& pts = std::get<ExplicitStore>(store_).levels[n];
        auto it = std::lower_bound(pts.begin(), pts.end(), x);
        if (it == pts.begin()) return std::nullopt;
        return *(it - 1);
    }

    /// min{ y in D_n : x < y }
    std::optional<Rational> next(int n, const Rational& x) const {
        require_level(n);
        if (auto* g = std::get_if<GridRule>(&store_)) {
            const Integer& q = g->divisors[n];
            Rational t = x * q;
            Integer k = rational_ceil(t);
            if (Rational(k) == t) ++k;
            if (k > q) return std::nullopt;
            return Rational(k, q);
        }
        const auto& pts = std::get<ExplicitStore>(store_).levels[n];
        auto it = std::upper_bound(pts.begin(), pts.end(), x);
        if (it == pts.end()) return std::nullopt;
        return *it;
    }

    /// g_n(x) = dist(x, D_n). Requires x in the carrier interval.
    Rational distance(int n, const Rational& x) const {
        require_level(n);
        if (x < lo_ || x > hi_) throw std::invalid_argument("distance: point outside carrier interval");
        if (auto* g = std::get_if<GridRule>(&store_)) {
            // nearest grid point to x in [0,1] is itself in [0,1]
            Rational t = x * g->divisors[n];
            Rational fl = t - Rational(rational_floor(t));
            Rational d = std::min(fl, Rational(1 - fl));
            return d / g->divisors[n];
        }
        const auto& pts = std::get<ExplicitStore>(store_).levels[n];
        auto it = std::lower_bound(pts.begin(), pts.end(), x);
        Rational best(-1);
        if (it != pts.end()) best = *it - x;
        if (it != pts.begin()) {
            Rational d = x - *(it - 1);
            if (best < 0 || d < best) best = d;
        }
        return best;
    }

    Integer level_count(int n) const {
        require_level(n);
        if (auto* g = std::get_if<GridRule>(&store_)) return g->divisors[n] + 1;
        return Integer(std::get<ExplicitStore>(store_).levels[n].size());
    }

    /// Materialized sorted level; throws when the level is too large to list.
    std::vector<Rational> level_points(int n, std::size_t cap = 1u << 22) const {
        require_level(n);
        if (auto* g = std::get_if<GridRule>(&store_)) {
            if (g->divisors[n] + 1 > cap)
                throw std::length_error("level_points: level too large to materialize");
            std::vector<Rational> pts;
            long long count = g->divisors[n].convert_to<long long>();
            pts.reserve(static_cast<std::size_t>(count) + 1);
            for (long long k = 0; k <= count; ++k) pts.emplace_back(Integer(k), g->divisors[n]);
            return pts;
        }
        return std::get<ExplicitStore>(store_).levels[n];
    }

    /// Sorted superset of the kinks of sum_{k<=N} w_k g_k inside [a,b]:
    /// every point of D_k and every midpoint of F_k, k <= N, that lies in [a,b].
    std::vector<Rational> kink_grid(int N, const Rational& a, const Rational& b,
                                    std::size_t cap = 1u << 22) const {
        require_level(N);
        Rational left = std::max(a, lo_), right = std::min(b, hi_);
        if (left > right) return {};
        if (auto* g = std::get_if<GridRule>(&store_)) {
            Integer q2 = g->divisors[N] * 2;  // kinks live on the half-step grid
            Integer klo = rational_ceil(left * q2);
            Integer khi = rational_floor(right * q2);
            if (khi < klo) return {};
            if (Integer(khi - klo + 1) > cap) throw std::length_error("kink_grid: window too dense");
            std::vector<Rational> pts;
            pts.reserve((khi - klo + 1).convert_to<std::size_t>());
            for (Integer k = klo; k <= khi; ++k) pts.emplace_back(k, q2);
            return pts;
        }
        std::set<Rational> acc;
        const auto& levels = std::get<ExplicitStore>(store_).levels;
        for (int k = 0; k <= N; ++k) {
            const auto& pts = levels[k];
            auto it = std::lower_bound(pts.begin(), pts.end(), left);
            for (; it != pts.end() && *it <= right; ++it) acc.insert(*it);
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
                Rational mid = (pts[i] + pts[i + 1]) / 2;
                if (left <= mid && mid <= right) acc.insert(mid);
            }
            if (acc.size() > cap) throw std::length_error("kink_grid: window too dense");
        }
        return std::vector<Rational>(acc.begin(), acc.end());
    }

    /// Mirror image around the carrier midpoint. Grid rules are self-symmetric.
    Decomposition reflected() const {
        if (is_grid()) return *this;
        const auto& levels = std::get<ExplicitStore>(store_).levels;
        ExplicitStore out;
        out.levels.reserve(levels.size());
        Rational s = lo_ + hi_;
        for (const auto& lvl : levels) {
            std::vector<Rational> m;
            m.reserve(lvl.size());
            for (auto it = lvl.rbegin(); it != lvl.rend(); ++it) m.push_back(s - *it);
            out.levels.push_back(std::move(m));
        }
        GeneratorTag tag = tag_;
        if (tag.kind != GeneratorTag::Kind::counterexample) tag.kind = GeneratorTag::Kind::none;
        return Decomposition(lo_, hi_, std::move(out), declared_alpha_, rho_, std::move(tag));
    }

private:
    void require_level(int n) const {
        if (n < 0 || n > depth()) throw std::out_of_range("level index out of stored depth");
    }

    Rational max_gap_explicit(int n) const {
        const auto& pts = std::get<ExplicitStore>(store_).levels[n];
        Rational best = pts[1] - pts[0];
        for (std::size_t i = 2; i < pts.size(); ++i) best = std::max(best, Rational(pts[i] - pts[i - 1]));
        return best;
    }

    void check_grid() {
        const auto& q = std::get<GridRule>(store_).divisors;
        if (q.empty() || q[0] != 1) throw std::invalid_argument("grid rule must start with divisor 1");
        if (!(lo_ == 0 && hi_ == 1)) throw std::invalid_argument("grid rules live on [0,1]");
        for (std::size_t i = 1; i < q.size(); ++i) {
            if (q[i] <= q[i - 1])
                throw std::invalid_argument("grid divisors must be strictly increasing");
            if (q[i] % q[i - 1] != 0)
                throw std::invalid_argument("divisor " + q[i - 1].str() + " does not divide " + q[i].str());
        }
    }

    void check_explicit() {
        const auto& levels = std::get<ExplicitStore>(store_).levels;
        if (levels.empty()) throw std::invalid_argument("decomposition needs at least level 0");
        if (lo_ >= hi_) throw std::invalid_argument("carrier interval is empty");
        for (std::size_t n = 0; n < levels.size(); ++n) {
            const auto& pts = levels[n];
            if (pts.size() < 2) throw std::invalid_argument("level " + std::to_string(n) + " has fewer than 2 points");
            for (std::size_t i = 0; i + 1 < pts.size(); ++i)
                if (pts[i] >= pts[i + 1])
                    throw std::invalid_argument("level " + std::to_string(n) + " not strictly increasing");
            if (pts.front() < lo_ || pts.back() > hi_)
                throw std::invalid_argument("level " + std::to_string(n) + " leaves the carrier interval");
        }
        const auto& l0 = levels[0];
        if (!std::binary_search(l0.begin(), l0.end(), lo_) || !std::binary_search(l0.begin(), l0.end(), hi_))
            throw std::invalid_argument("carrier endpoints must belong to D_0");
        for (std::size_t n = 0; n + 1 < levels.size(); ++n) {
            for (const auto& p : levels[n])
                if (!std::binary_search(levels[n + 1].begin(), levels[n + 1].end(), p))
                    throw std::invalid_argument("levels not nested: point " + format_rational(p) +
                                                " of level " + std::to_string(n) + " missing from level " +
                                                std::to_string(n + 1));
        }
        for (std::size_t n = 0; n < levels.size(); ++n) {
            if (n < declared_alpha_.size() && declared_alpha_[n]) {
                Rational mg = max_gap_explicit(static_cast<int>(n));
                if (*declared_alpha_[n] < mg)
                    throw std::invalid_argument("declared alpha_" + std::to_string(n) + " = " +
                                                format_rational(*declared_alpha_[n]) + " below max gap " +
                                                format_rational(mg));
            }
        }
        if (rho_) {
            if (*rho_ <= 0 || *rho_ > 1) throw std::invalid_argument("rho must lie in (0,1]");
            for (std::size_t n = 0; n < levels.size(); ++n) {
                Rational bound = *rho_ * alpha(static_cast<int>(n));
                const auto& pts = levels[n];
                for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
                    if (pts[i + 1] - pts[i] < bound)
                        throw std::invalid_argument(
                            "declared rho violated at level " + std::to_string(n) + ": gap (" +
                            format_rational(pts[i]) + ", " + format_rational(pts[i + 1]) + ") has width " +
                            format_rational(pts[i + 1] - pts[i]) + " < rho*alpha = " + format_rational(bound));
                }
            }
        }
    }

    Rational lo_, hi_;
    std::optional<Rational> rho_;
    GeneratorTag tag_;
    std::variant<GridRule, ExplicitStore> store_;
    std::vector<std::optional<Rational>> declared_alpha_;
};

/// r-adic decomposition: D_n = { k r^-n } on [0,1], alpha_n = r^-n, rho = 1.
inline Decomposition build_radix(int r, int depth) {
    if (r < 2) throw std::invalid_argument("build_radix: r must be >= 2");
    if (depth < 0) throw std::invalid_argument("build_radix: depth must be >= 0");
    GridRule rule;
    Integer q = 1;
    for (int n = 0; n <= depth; ++n) {
        rule.divisors.push_back(q);
        q *= r;
    }
    GeneratorTag tag;
    tag.kind = GeneratorTag::Kind::radix;
    tag.radix = r;
    tag.depth = depth;
    return Decomposition(Rational(0), Rational(1), std::move(rule), Rational(1), std::move(tag));
}

/// Divisor-chain decomposition: D_n = { k / r_n } with r_n | r_{n+1}, r_0 = 1.
/// When depth exceeds the sequence length the last ratio is repeated.
inline Decomposition build_divisor_chain(std::vector<Integer> rseq, int depth = -1) {
    if (rseq.empty() || rseq[0] != 1)
        throw std::invalid_argument("build_divisor_chain: sequence must start with 1");
    for (std::size_t i = 1; i < rseq.size(); ++i) {
        if (rseq[i] <= rseq[i - 1])
            throw std::invalid_argument("build_divisor_chain: sequence must be strictly increasing at (" +
                                        rseq[i - 1].str() + ", " + rseq[i].str() + ")");
        if (rseq[i] % rseq[i - 1] != 0)
            throw std::invalid_argument("build_divisor_chain: " + rseq[i - 1].str() + " does not divide " +
                                        rseq[i].str());
    }
    if (depth < 0) depth = static_cast<int>(rseq.size()) - 1;
    GridRule rule;
    rule.divisors = rseq;
    while (static_cast<int>(rule.divisors.size()) <= depth) {
        std::size_t m = rule.divisors.size();
        Integer beta = m >= 2 ? rule.divisors[m - 1] / rule.divisors[m - 2] : Integer(2);
        rule.divisors.push_back(rule.divisors.back() * beta);
    }
    rule.divisors.resize(static_cast<std::size_t>(depth) + 1);
    GeneratorTag tag;
    tag.kind = GeneratorTag::Kind::chain;
    tag.chain = rseq;
    tag.depth = depth;
    return Decomposition(Rational(0), Rational(1), std::move(rule), Rational(1), std::move(tag));
}

/// The collapsing-rho construction on [-1,1]: D+_0 = {1} (or {0,1}),
/// D+_1 = {2/3, 1}, D+_{2n} adds the 2^-n grid, D+_{2n+1} adds the grid
/// shifted left by 3^-(n+1); D_n is the symmetric closure. `pair_depth`
/// controls how many (g_{2n}, g_{2n+1}) pairs exist: levels 0..2*pair_depth+1.
inline Decomposition build_counterexample(int pair_depth, bool include_zero_in_d0,
                                          std::optional<Rational> declared_rho = std::nullopt) {
    if (pair_depth < 0) throw std::invalid_argument("build_counterexample: depth must be >= 0");
    std::vector<std::set<Rational>> plus;
    std::set<Rational> d0{Rational(1)};
    if (include_zero_in_d0) d0.insert(Rational(0));
    plus.push_back(d0);
    std::set<Rational> d1 = d0;
    d1.insert(Rational(2, 3));
    plus.push_back(d1);
    int levels = 2 * pair_depth + 2;
    for (int n = 1; static_cast<int>(plus.size()) < levels; ++n) {
        std::set<Rational> even = plus.back();
        Integer q = Integer(1) << n;
        for (Integer k = 1; k <= q; ++k) even.insert(Rational(k, q));
        plus.push_back(even);
        if (static_cast<int>(plus.size()) >= levels) break;
        std::set<Rational> odd = plus.back();
        Rational shift(1, pow(Integer(3), static_cast<unsigned>(n + 1)));
        for (Integer k = 1;; ++k) {
            Rational v = Rational(k, q) - shift;
            if (v > 1) break;
            if (v > 0) odd.insert(v);
        }
        plus.push_back(odd);
    }
    ExplicitStore store;
    for (const auto& p : plus) {
        std::set<Rational> full;
        for (const auto& x : p) {
            full.insert(x);
            full.insert(Rational(-x));
        }
        store.levels.emplace_back(full.begin(), full.end());
    }
    GeneratorTag tag;
    tag.kind = GeneratorTag::Kind::counterexample;
    tag.depth = pair_depth;
    tag.with_zero = include_zero_in_d0;
    return Decomposition(Rational(-1), Rational(1), std::move(store), {}, std::move(declared_rho),
                         std::move(tag));
}

inline Decomposition make_explicit(Rational lo, Rational hi, std::vector<std::vector<Rational>> levels,
                                   std::vector<std::optional<Rational>> declared_alpha = {},
                                   std::optional<Rational> rho = std::nullopt) {
    ExplicitStore store;
    store.levels = std::move(levels);
    return Decomposition(std::move(lo), std::move(hi), std::move(store), std::move(declared_alpha),
                         std::move(rho), GeneratorTag{});
}

/// Connected components of [lo,hi] \ D_n and their midpoints (F_n and ~D_n).
struct LevelGeometry {
    std::vector<std::pair<Rational, Rational>> components;
    std::vector<Rational> midpoints;
};

inline LevelGeometry geometry(const Decomposition& d, int n, std::size_t cap = 1u << 22) {
    auto pts = d.level_points(n, cap);
    LevelGeometry out;
    out.components.reserve(pts.size() - 1);
    out.midpoints.reserve(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        out.components.emplace_back(pts[i], pts[i + 1]);
        out.midpoints.push_back((pts[i] + pts[i + 1]) / 2);
    }
    return out;
}

struct LevelHypotheses {
    int level = 0;
    Rational alpha;           // declared-or-computed bound used by the checks
    Rational max_gap;
    Rational min_gap;
    Rational rho_measured;    // min_gap / alpha
    Flag axiom3 = Flag::unknown;
    Flag axiom4 = Flag::unknown;                 // unknown when no rho is declared
    Flag cond1 = Flag::unknown;                  // ~D_n subset of D_{n+1}
    Flag cond2a = Flag::unknown;                 // every component meets D_{n+1}
    Flag cond2b = Flag::unknown;                 // ~D_n subset of ~D_{n+1}
    Flag alpha_ratio_le_rho = Flag::unknown;     // alpha_{n+1} <= rho alpha_n
    Flag alpha_ratio_le_half_rho = Flag::unknown;
    Flag alpha_ratio_le_rho_over_1mrho = Flag::unknown;  // auto-yes at rho = 1
    std::optional<std::string> witness;          // exact witness for the first false flag
};

struct HypothesisReport {
    std::vector<LevelHypotheses> levels;
    bool rho_gt_half = false;
    Rational rho_inf;  // inf over stored levels of measured rho_n

    /// Refinement gate: cond1 or (cond2a and cond2b) at every level below `up_to`.
    bool satisfies_refinement_conditions(int up_to) const {
        for (const auto& l : levels) {
            if (l.level >= up_to) break;
            bool ok = l.cond1 == Flag::yes || (l.cond2a == Flag::yes && l.cond2b == Flag::yes);
            if (!ok) return false;
        }
        return true;
    }

    bool all_yes(Flag LevelHypotheses::*field, int up_to) const {
        for (const auto& l : levels) {
            if (l.level >= up_to) break;
            if (l.*field != Flag::yes) return false;
        }
        return true;
    }
};

inline HypothesisReport validate(const Decomposition& d, std::size_t cap = 1u << 22) {
    HypothesisReport rep;
    int depth = d.depth();
    rep.rho_gt_half = d.rho_declared() && *d.rho_declared() > Rational(1, 2);
    for (int n = 0; n <= depth; ++n) {
        LevelHypotheses row;
        row.level = n;
        row.alpha = d.alpha(n);
        row.max_gap = d.alpha_computed(n);
        row.min_gap = d.min_gap(n);
        row.rho_measured = row.min_gap / row.alpha;
        row.axiom3 = row.max_gap <= row.alpha ? Flag::yes : Flag::no;
        if (d.rho_declared()) {
            row.axiom4 = row.min_gap >= *d.rho_declared() * row.alpha ? Flag::yes : Flag::no;
            if (row.axiom4 == Flag::no && !row.witness)
                row.witness = "min gap " + format_rational(row.min_gap) + " < rho*alpha = " +
                              format_rational(*d.rho_declared() * row.alpha);
        }
        bool last = n == depth;
        if (!last) {
            const Rational a_next = d.alpha(n + 1);
            if (d.rho_declared()) {
                const Rational& rho = *d.rho_declared();
                row.alpha_ratio_le_rho = a_next <= rho * row.alpha ? Flag::yes : Flag::no;
                row.alpha_ratio_le_half_rho = a_next <= rho * row.alpha / 2 ? Flag::yes : Flag::no;
                if (rho == 1)
                    row.alpha_ratio_le_rho_over_1mrho = Flag::yes;  // bound is vacuous at rho = 1
                else
                    row.alpha_ratio_le_rho_over_1mrho =
                        a_next <= rho / (1 - rho) * row.alpha ? Flag::yes : Flag::no;
            }
            if (d.is_grid()) {
                const auto& q = d.grid()->divisors;
                Integer beta = q[n + 1] / q[n];
                bool even = beta % 2 == 0;
                row.cond1 = even ? Flag::yes : Flag::no;
                row.cond2a = Flag::yes;  // beta >= 2 always inserts interior points
                row.cond2b = even ? Flag::no : Flag::yes;
                if (row.cond1 == Flag::no && !row.witness)
                    row.witness = "midpoint 1/" + (q[n] * 2).str() + " not in D_" + std::to_string(n + 1);
                if (row.cond2b == Flag::no && !row.witness)
                    row.witness = "midpoint 1/" + (q[n] * 2).str() + " not a level-" + std::to_string(n + 1) +
                                  " midpoint";
            } else {
                auto cur = d.level_points(n, cap);
                auto nxt = d.level_points(n + 1, cap);
                std::vector<Rational> next_mid;
                next_mid.reserve(nxt.size());
                for (std::size_t i = 0; i + 1 < nxt.size(); ++i) next_mid.push_back((nxt[i] + nxt[i + 1]) / 2);
                row.cond1 = Flag::yes;
                row.cond2a = Flag::yes;
                row.cond2b = Flag::yes;
                for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
                    Rational mid = (cur[i] + cur[i + 1]) / 2;
                    if (!std::binary_search(nxt.begin(), nxt.end(), mid)) {
                        if (row.cond1 == Flag::yes) {
                            row.cond1 = Flag::no;
                            if (!row.witness)
                                row.witness = "midpoint " + format_rational(mid) + " of level " +
                                              std::to_string(n) + " not in level " + std::to_string(n + 1);
                        }
                    }
                    auto it = std::upper_bound(nxt.begin(), nxt.end(), cur[i]);
                    if (it == nxt.end() || *it >= cur[i + 1]) row.cond2a = Flag::no;
                    if (!std::binary_search(next_mid.begin(), next_mid.end(), mid)) row.cond2b = Flag::no;
                }
            }
        }
        rep.levels.push_back(std::move(row));
    }
    rep.rho_inf = rep.levels[0].rho_measured;
    for (const auto& l : rep.levels) rep.rho_inf = std::min(rep.rho_inf, l.rho_measured);
    return rep;
}

// ---------------------------------------------------------------------------
// Textual decomposition format.
//
//   interval <lo> <hi>
//   rho <p/q>                         (optional)
//   radix <r> depth <d>               (generator shorthand)  -- or --
//   chain <r1,r2,...> depth <d>
//   counterexample depth <d> [with-zero]
//   level <n> alpha <p/q> : <p1/q1> <p2/q2> ...
// ---------------------------------------------------------------------------

inline void save_decomposition(const Decomposition& d, std::ostream& os) {
    os << "interval " << format_rational(d.lo()) << ' ' << format_rational(d.hi()) << '\n';
    if (d.rho_declared()) os << "rho " << format_rational(*d.rho_declared()) << '\n';
    const auto& tag = d.generator();
    switch (tag.kind) {
        case GeneratorTag::Kind::radix:
            os << "radix " << tag.radix.str() << " depth " << tag.depth << '\n';
            return;
        case GeneratorTag::Kind::chain: {
            os << "chain ";
            for (std::size_t i = 0; i < tag.chain.size(); ++i) {
                if (i) os << ',';
                os << tag.chain[i].str();
            }
            os << " depth " << tag.depth << '\n';
            return;
        }
        case GeneratorTag::Kind::counterexample:
            os << "counterexample depth " << tag.depth << (tag.with_zero ? " with-zero" : "") << '\n';
            return;
        case GeneratorTag::Kind::none: break;
    }
    for (int n = 0; n <= d.depth(); ++n) {
        os << "level " << n << " alpha " << format_rational(d.alpha(n)) << " :";
        for (const auto& p : d.level_points(n)) os << ' ' << format_rational(p);
        os << '\n';
    }
}

inline void save_decomposition(const Decomposition& d, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    save_decomposition(d, os);
}

namespace detail {

struct ParseCursor {
    int line = 0;
    std::size_t col = 0;
    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("line " + std::to_string(line) + ", col " + std::to_string(col + 1) +
                                    ": " + msg);
    }
};

inline std::vector<std::pair<std::string, std::size_t>> tokenize(const std::string& line) {
    std::vector<std::pair<std::string, std::size_t>> toks;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size()) break;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        toks.emplace_back(line.substr(start, i - start), start);
    }
    return toks;
}

}  // namespace detail

inline Decomposition load_decomposition(std::istream& is) {
    using detail::ParseCursor;
    std::optional<Rational> lo, hi, rho;
    std::optional<Decomposition> generated;
    std::vector<std::vector<Rational>> levels;
    std::vector<std::optional<Rational>> alphas;
    std::string line;
    ParseCursor cur;
    auto parse_rat_at = [&](const std::pair<std::string, std::size_t>& tok) {
        cur.col = tok.second;
        try {
            return parse_rational(tok.first);
        } catch (const std::exception& e) {
            cur.fail(e.what());
        }
    };
    while (std::getline(is, line)) {
        ++cur.line;
        cur.col = 0;
        auto toks = detail::tokenize(line);
        if (toks.empty() || toks[0].first[0] == '#') continue;
        const std::string& head = toks[0].first;
        if (head == "interval") {
            if (toks.size() != 3) cur.fail("expected: interval <lo> <hi>");
            lo = parse_rat_at(toks[1]);
            hi = parse_rat_at(toks[2]);
        } else if (head == "rho") {
            if (toks.size() != 2) cur.fail("expected: rho <p/q>");
            rho = parse_rat_at(toks[1]);
        } else if (head == "radix") {
            if (toks.size() != 4 || toks[2].first != "depth") cur.fail("expected: radix <r> depth <d>");
            generated = build_radix(std::stoi(toks[1].first), std::stoi(toks[3].first));
        } else if (head == "chain") {
            if (toks.size() != 4 || toks[2].first != "depth")
                cur.fail("expected: chain <r1,r2,...> depth <d>");
            std::vector<Integer> rseq;
            std::stringstream ss(toks[1].first);
            std::string item;
            while (std::getline(ss, item, ',')) rseq.emplace_back(item);
            cur.col = toks[1].second;
            try {
                generated = build_divisor_chain(std::move(rseq), std::stoi(toks[3].first));
            } catch (const std::exception& e) {
                cur.fail(e.what());
            }
        } else if (head == "counterexample") {
            if (toks.size() < 3 || toks[1].first != "depth")
                cur.fail("expected: counterexample depth <d> [with-zero]");
            bool with_zero = toks.size() > 3 && toks[3].first == "with-zero";
            generated = build_counterexample(std::stoi(toks[2].first), with_zero);
        } else if (head == "level") {
            if (toks.size() < 6 || toks[2].first != "alpha" || toks[4].first != ":")
                cur.fail("expected: level <n> alpha <p/q> : <points...>");
            std::size_t n = std::stoul(toks[1].first);
            if (n != levels.size()) cur.fail("levels must appear in order starting at 0");
            alphas.push_back(parse_rat_at(toks[3]));
            std::vector<Rational> pts;
            for (std::size_t i = 5; i < toks.size(); ++i) pts.push_back(parse_rat_at(toks[i]));
            levels.push_back(std::move(pts));
        } else {
            cur.fail("unknown directive '" + head + "'");
        }
    }
    cur.col = 0;
    if (generated) {
        if (!levels.empty()) cur.fail("generator shorthand cannot be mixed with explicit levels");
        if (rho && generated->is_grid() && *rho != *generated->rho_declared())
            cur.fail("grid generators have rho = 1");
        if (generated->generator().kind == GeneratorTag::Kind::counterexample && rho) {
            const auto& t = generated->generator();
            return build_counterexample(t.depth, t.with_zero, rho);
        }
        return *std::move(generated);
    }
    if (!lo || !hi) cur.fail("missing 'interval' header");
    if (levels.empty()) cur.fail("no levels given");
    try {
        return make_explicit(*lo, *hi, std::move(levels), std::move(alphas), std::move(rho));
    } catch (const std::exception& e) {
        cur.fail(e.what());
    }
}

inline Decomposition load_decomposition(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return load_decomposition(is);
}

}  // namespace takagi
