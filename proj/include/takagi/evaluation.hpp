#pragma once

#include "takagi/decomposition.hpp"
#include "takagi/rational.hpp"
#include "takagi/weights.hpp"

#include <map>
#include <optional>
#include <variant>

namespace takagi {

/// Distance from x to the nearest integer. Periodic, even, values in [0, 1/2].
inline Rational phi(const Rational& x) {
    Rational t = x - Rational(rational_floor(x));
    return std::min(t, Rational(1 - t));
}

struct UncertifiedTailError : std::runtime_error {
    explicit UncertifiedTailError(const std::string& what) : std::runtime_error(what) {}
};

struct DepthError : std::runtime_error {
    DepthError(const std::string& what, Rational achievable_eps)
        : std::runtime_error(what), achievable(std::move(achievable_eps)) {}
    Rational achievable;
};

/// |w_k| alpha_k <= scale * ratio^k for all k >= from, ratio in (0,1).
struct GeometricTail {
    Rational scale;
    Rational ratio;
    int from = 0;
};

/// Counterexample instances: |w_{2m} g_{2m} + w_{2m+1} g_{2m+1}| <= A 3^-(m+1).
struct PairTail {
    Rational pair_scale;  // A = |a| of the alternating rule
};

using TailCertificate = std::variant<GeometricTail, PairTail>;

/// A decomposition paired with a weight rule; T_w = sum w_n g_n. Construction
/// derives (and where possible verifies) a tail certificate for sum |w_k| alpha_k;
/// it throws UncertifiedTailError when no certificate can be established.
class GeneralizedTakagi {
public:
    GeneralizedTakagi(Decomposition d, WeightSequence w,
                      std::optional<GeometricTail> declared_majorant = std::nullopt)
        : d_(std::move(d)), w_(std::move(w)) {
        cert_ = build_certificate(declared_majorant);
    }

    const Decomposition& decomposition() const { return d_; }
    const WeightSequence& weights() const { return w_; }
    const TailCertificate& certificate() const { return cert_; }
    bool pair_certified() const { return std::holds_alternative<PairTail>(cert_); }

    GeneralizedTakagi negated() const { return GeneralizedTakagi(d_, w_.negated(), declared_); }
    GeneralizedTakagi with_weights(WeightSequence w) const {
        return GeneralizedTakagi(d_, std::move(w), declared_);
    }
    /// Instance mirrored around the carrier midpoint; left-derivative traces
    /// run right-side traces of this.
    GeneralizedTakagi reflected_instance() const {
        return GeneralizedTakagi(d_.reflected(), w_, declared_);
    }

private:
    TailCertificate build_certificate(std::optional<GeometricTail> declared) {
        declared_ = declared;
        bool zero_prefix_only = true;
        for (const auto& p : w_.prefix())
            if (p != 0) zero_prefix_only = false;
        if (d_.generator().kind == GeneratorTag::Kind::counterexample &&
            w_.kind() == WeightSequence::Kind::alternating && zero_prefix_only) {
            // zeroed prefixes only shrink the pair sums, so the bound survives
            verify_pair_bound();
            return PairTail{rational_abs(w_.param_a())};
        }
        if (declared) {
            if (declared->ratio <= 0 || declared->ratio >= 1)
                throw UncertifiedTailError("declared tail ratio must lie in (0,1)");
            for (int k = declared->from; k <= d_.depth(); ++k) {
                Rational lhs = rational_abs(w_.at(k)) * d_.alpha(k);
                if (lhs > declared->scale * pow_rat(declared->ratio, k))
                    throw UncertifiedTailError("declared tail majorant violated at stored level " +
                                               std::to_string(k));
            }
            return *declared;
        }
        if (d_.is_grid()) {
            auto wm = w_.magnitude_majorant();
            const auto& q = d_.grid()->divisors;
            // alpha_k = 1/q_k and q_{k+1}/q_k >= beta_min, so
            // alpha_k <= (beta_min^F / q_F) beta_min^-k for k >= F.
            Integer beta_min = 0;
            for (std::size_t i = 1; i < q.size(); ++i) {
                Integer b = q[i] / q[i - 1];
                if (beta_min == 0 || b < beta_min) beta_min = b;
            }
            if (beta_min == 0) beta_min = 2;  // single stored level: extension doubles
            Rational ratio = wm.ratio / beta_min;
            if (ratio >= 1)
                throw UncertifiedTailError("weight growth " + format_rational(wm.ratio) +
                                           " outruns grid refinement " + beta_min.str());
            int F = std::min(wm.from, d_.depth());
            Rational scale = wm.scale * pow_rat(Rational(beta_min), F) / Rational(q[F]);
            return GeometricTail{scale, ratio, wm.from};
        }
        throw UncertifiedTailError(
            "no tail certificate: explicit decompositions need a declared majorant");
    }

    // Exhaustively verifies |g_{2m} - g_{2m+1}| <= 3^-(m+1) at all stored pairs.
    // The difference is piecewise linear, so checking its kinks suffices.
    void verify_pair_bound() {
        int pairs = (d_.depth() - 1) / 2;
        for (int m = 0; m <= pairs; ++m) {
            Rational bound(1, pow(Integer(3), static_cast<unsigned>(m + 1)));
            auto kinks = d_.kink_grid(2 * m + 1, d_.lo(), d_.hi());
            for (const auto& z : kinks) {
                Rational h = d_.distance(2 * m, z) - d_.distance(2 * m + 1, z);
                if (rational_abs(h) > bound)
                    throw UncertifiedTailError("pair bound fails at level pair " + std::to_string(m) +
                                               ", point " + format_rational(z));
            }
        }
    }

    static Rational pow_rat(const Rational& b, int e) {
        Rational r(1);
        for (int i = 0; i < e; ++i) r *= b;
        return r;
    }

    Decomposition d_;
    WeightSequence w_;
    TailCertificate cert_{GeometricTail{0, Rational(1, 2), 0}};
    std::optional<GeometricTail> declared_;
};

/// g_n(x), checked against the carrier interval.
inline Rational g(const Decomposition& d, int n, const Rational& x) { return d.distance(n, x); }

/// Exact sum_{k=0}^{N} w_k g_k(x).
inline Rational partial_sum(const GeneralizedTakagi& t, int N, const Rational& x) {
    if (N < 0) return 0;
    if (N > t.decomposition().depth()) throw std::out_of_range("partial_sum: N beyond stored depth");
    Rational s(0);
    for (int k = 0; k <= N; ++k) {
        Rational wk = t.weights().at(k);
        if (wk == 0) continue;
        s += wk * t.decomposition().distance(k, x);
    }
    return s;
}

/// Certified upper bound for |sum_{k>N} w_k g_k(x)|, valid for every x.
inline Rational tail_bound(const GeneralizedTakagi& t, int N) {
    if (N < 0) N = -1;
    if (auto* geo = std::get_if<GeometricTail>(&t.certificate())) {
        auto powr = [](const Rational& b, int e) {
            Rational r(1);
            for (int i = 0; i < e; ++i) r *= b;
            return r;
        };
        Rational bound(0);
        int k0 = N + 1;
        if (k0 < geo->from) {
            for (int k = k0; k < geo->from; ++k)
                bound += rational_abs(t.weights().at(k)) * t.decomposition().alpha(k);
            k0 = geo->from;
        }
        bound += geo->scale * powr(geo->ratio, k0) / (1 - geo->ratio);
        return bound;
    }
    const auto& pair = std::get<PairTail>(t.certificate());
    auto pair_tail = [&](int m) {  // sum_{j>m} A 3^-(j+1) = A 3^-(m+1) / 2
        return pair.pair_scale / (2 * pow(Integer(3), static_cast<unsigned>(m + 1)));
    };
    Rational bound = (N % 2 == 1 || N < 0)
                         ? pair_tail((N - 1) / 2)
                         : pair.pair_scale * t.decomposition().alpha(N + 1) + pair_tail(N / 2);
    // a zeroed prefix of odd length leaves one half pair whose surviving term
    // is only bounded by its alpha
    int P = static_cast<int>(t.weights().prefix().size());
    if (P % 2 == 1 && N < P && P <= t.decomposition().depth())
        bound += pair.pair_scale * t.decomposition().alpha(P);
    return bound;
}

/// Enclosure of T_w(x) of width <= 2*eps: partial_sum(N, x) +- tail_bound(N)
/// for the least stored N with tail_bound(N) <= eps.
inline RatInterval evaluate(const GeneralizedTakagi& t, const Rational& x, const Rational& eps) {
    if (eps <= 0) throw std::invalid_argument("evaluate: eps must be positive");
    int depth = t.decomposition().depth();
    int step = t.pair_certified() ? 2 : 1;
    int start = t.pair_certified() ? 1 : 0;  // pair sums truncate at odd indices
    Rational achievable(-1);
    for (int N = start; N <= depth; N += step) {
        Rational bound = tail_bound(t, N);
        if (achievable < 0 || bound < achievable) achievable = bound;
        if (bound <= eps) {
            Rational s = partial_sum(t, N, x);
            return RatInterval(s - bound, s + bound);
        }
    }
    throw DepthError("evaluate: stored depth " + std::to_string(depth) +
                         " only certifies eps = " + format_rational(achievable),
                     achievable);
}

/// H_n(x) = w_{2n} g_{2n}(x) + w_{2n+1} g_{2n+1}(x) for counterexample instances.
inline Rational pair_sum(const GeneralizedTakagi& t, int n, const Rational& x) {
    if (!t.pair_certified())
        throw std::invalid_argument("pair_sum: instance is not a counterexample pairing");
    const auto& d = t.decomposition();
    if (2 * n + 1 > d.depth()) throw std::out_of_range("pair_sum: pair index beyond stored depth");
    return t.weights().at(2 * n) * d.distance(2 * n, x) + t.weights().at(2 * n + 1) * d.distance(2 * n + 1, x);
}

/// Exact value of T_w(x) when the series terminates or telescopes:
///  - x in D: the tail vanishes and the value is a finite sum;
///  - uniform radix grids with const/alt/geom weights: the orbit of x under
///    multiplication by r is eventually periodic, giving exact geometric tails.
inline std::optional<Rational> exact_value(const GeneralizedTakagi& t, const Rational& x,
                                           int orbit_cap = 128) {
    const auto& d = t.decomposition();
    if (x < d.lo() || x > d.hi()) throw std::invalid_argument("exact_value: point outside carrier");
    if (auto n0 = d.first_membership_level(x)) return partial_sum(t, *n0 - 1, x);
    if (!d.is_grid()) return std::nullopt;
    const auto& q = d.grid()->divisors;
    if (q.size() < 2) return std::nullopt;
    Integer r = q[1] / q[0];
    for (std::size_t i = 1; i < q.size(); ++i)
        if (q[i] != q[i - 1] * r) return std::nullopt;  // not a uniform radix
    auto kind = t.weights().kind();
    if (kind == WeightSequence::Kind::triple) return std::nullopt;
    if (kind == WeightSequence::Kind::geometric && rational_abs(t.weights().param_q()) >= r)
        return std::nullopt;

    // orbit of x under z -> frac(r z)
    std::vector<Rational> orbit;
    std::map<Rational, int> seen;
    Rational y = x;
    int cycle_start = -1;
    for (int k = 0; k < orbit_cap; ++k) {
        auto it = seen.find(y);
        if (it != seen.end()) {
            cycle_start = it->second;
            break;
        }
        seen[y] = k;
        orbit.push_back(y);
        y = y * r;
        y -= Rational(rational_floor(y));
    }
    if (cycle_start < 0) return std::nullopt;
    int period = static_cast<int>(orbit.size()) - cycle_start;
    int head = std::max(cycle_start, static_cast<int>(t.weights().prefix().size()));
    int block = period;
    if (kind == WeightSequence::Kind::alternating && block % 2 != 0) block *= 2;

    auto powr = [](Rational b, int e) {
        Rational s(1);
        for (int i = 0; i < e; ++i) s *= b;
        return s;
    };
    auto orbit_at = [&](int k) -> const Rational& {
        if (k < static_cast<int>(orbit.size())) return orbit[static_cast<std::size_t>(k)];
        return orbit[static_cast<std::size_t>(cycle_start + (k - cycle_start) % period)];
    };
    Rational rinv(1, r);
    Rational value(0);
    for (int k = 0; k < head; ++k) {
        Rational wk = t.weights().at(k);
        if (wk == 0) continue;
        value += wk * phi(orbit_at(k)) * powr(rinv, k);
    }
    // tail classes j = 0..block-1 starting at `head`, each a geometric series
    Rational step_ratio = powr(rinv, block);
    if (kind == WeightSequence::Kind::geometric) step_ratio *= powr(t.weights().param_q(), block);
    for (int j = 0; j < block; ++j) {
        int k = head + j;
        Rational first = t.weights().at(k) * phi(orbit_at(k)) * powr(rinv, k);
        value += first / (1 - step_ratio);
    }
    return value;
}

/// Width-0 interval when an exact value is available, else a certified enclosure.
inline RatInterval best_enclosure(const GeneralizedTakagi& t, const Rational& x, const Rational& eps) {
    if (auto v = exact_value(t, x)) return RatInterval::point(*v);
    return evaluate(t, x, eps);
}

}  // namespace takagi
