#pragma once

#include "takagi/rational.hpp"

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace takagi {

/// Weight rules are closed-form generators, not stored lists, so membership
/// in c_0 / l^1, tail majorants, and partial-sum limits stay decidable.
///
/// Textual syntax: `const c`, `alt a`, `geom c q`, `triple`,
/// `prefix [w0,w1,...] then <rule>`.
class WeightSequence {
public:
    enum class Kind { constant, alternating, geometric, triple };

    static WeightSequence constant(Rational c) { return WeightSequence(Kind::constant, std::move(c), 0); }
    static WeightSequence alternating(Rational a) {
        return WeightSequence(Kind::alternating, std::move(a), 0);
    }
    static WeightSequence geometric(Rational c, Rational q) {
        return WeightSequence(Kind::geometric, std::move(c), std::move(q));
    }
    /// Duplicated-level example weights:
    /// w_0 = 0, w_{3k-2} = 1, w_{3k-1} = -1, w_3 = -1/2, w_{3k} = 2^-k for k > 1.
    static WeightSequence triple() { return WeightSequence(Kind::triple, 0, 0); }

    WeightSequence with_prefix(std::vector<Rational> values) const {
        WeightSequence w = *this;
        w.prefix_ = std::move(values);
        return w;
    }

    Rational at(int n) const {
        if (n < 0) throw std::invalid_argument("weight index must be >= 0");
        if (n < static_cast<int>(prefix_.size()))
            return sign_ > 0 ? prefix_[n] : Rational(-prefix_[n]);
        Rational v = base_at(n);
        return sign_ > 0 ? v : Rational(-v);
    }

    Rational partial_sum(int from, int to) const {
        Rational s(0);
        for (int k = from; k <= to; ++k) s += at(k);
        return s;
    }

    bool in_c0() const {
        switch (kind_) {
            case Kind::constant: return a_ == 0;
            case Kind::alternating: return a_ == 0;
            case Kind::geometric: return a_ == 0 || rational_abs(q_) < 1;
            case Kind::triple: return false;
        }
        return false;
    }

    bool in_l1() const {
        switch (kind_) {
            case Kind::constant: return a_ == 0;
            case Kind::alternating: return a_ == 0;
            case Kind::geometric: return a_ == 0 || rational_abs(q_) < 1;
            case Kind::triple: return false;
        }
        return false;
    }

    bool nonnegative() const {
        for (const auto& p : prefix_)
            if ((sign_ > 0 ? p : Rational(-p)) < 0) return false;
        switch (kind_) {
            case Kind::constant: return sign_ > 0 ? a_ >= 0 : a_ <= 0;
            case Kind::alternating: return a_ == 0;
            case Kind::geometric: return a_ == 0 || (q_ >= 0 && (sign_ > 0 ? a_ >= 0 : a_ <= 0));
            case Kind::triple: return false;
        }
        return false;
    }

    WeightSequence negated() const {
        WeightSequence w = *this;
        w.sign_ = -w.sign_;
        return w;
    }

    /// Same rule with indices below n0 forced to zero (the w_0 = 0 reduction
    /// for traces; later indices keep their absolute parity).
    WeightSequence zeroed_below(int n0) const {
        WeightSequence w = *this;
        if (static_cast<int>(w.prefix_.size()) < n0) {
            std::vector<Rational> p = w.prefix_;
            for (int k = static_cast<int>(p.size()); k < n0; ++k) p.push_back(base_at(k));
            w.prefix_ = std::move(p);
        }
        for (int k = 0; k < n0 && k < static_cast<int>(w.prefix_.size()); ++k) w.prefix_[k] = 0;
        return w;
    }

    /// (C, s, from): |w_k| <= C s^k for every k >= from, exact.
    struct Majorant {
        Rational scale;
        Rational ratio;
        int from;
    };
    Majorant magnitude_majorant() const {
        int from = static_cast<int>(prefix_.size());
        switch (kind_) {
            case Kind::constant: return {rational_abs(a_), 1, from};
            case Kind::alternating: return {rational_abs(a_), 1, from};
            case Kind::geometric: return {rational_abs(a_), rational_abs(q_), from};
            case Kind::triple: return {1, 1, from};  // |w_k| <= 1 for every k
        }
        return {0, 1, from};
    }

    /// Persistent oscillation of consecutive weights for rules outside c_0;
    /// 0 when the rule decays.
    Rational persistent_gap() const {
        switch (kind_) {
            case Kind::constant: return rational_abs(a_);
            case Kind::alternating: return rational_abs(a_);
            case Kind::geometric: return rational_abs(q_) >= 1 ? rational_abs(a_) : Rational(0);
            case Kind::triple: return 1;
        }
        return 0;
    }

    /// liminf / limsup of the running sums S_n = sum_{k=start}^n w_k.
    struct SumLimit {
        enum class Kind { exact, diverges_pos, diverges_neg } kind;
        Rational value;  // meaningful for `exact`
    };
    struct SumLimits {
        SumLimit liminf, limsup;
    };
    std::optional<SumLimits> closed_form_sum_limits(int start = 0) const {
        auto exact = [](Rational v) { return SumLimit{SumLimit::Kind::exact, std::move(v)}; };
        auto pos = SumLimit{SumLimit::Kind::diverges_pos, 0};
        auto neg = SumLimit{SumLimit::Kind::diverges_neg, 0};
        int P = static_cast<int>(prefix_.size());
        switch (kind_) {
            case Kind::constant: {
                Rational c = at(std::max(start, P));  // steady-state value
                if (c == 0) {
                    Rational s = partial_sum(start, std::max(start, P));
                    return SumLimits{exact(s), exact(s)};
                }
                return c > 0 ? SumLimits{pos, pos} : SumLimits{neg, neg};
            }
            case Kind::alternating: {
                if (a_ == 0) {
                    Rational s = partial_sum(start, std::max(start, P));
                    return SumLimits{exact(s), exact(s)};
                }
                // running sums are eventually 2-periodic
                int base = std::max(start, P);
                base += (base - start) % 2 == 0 ? 0 : 1;  // align on an even count
                Rational s0 = partial_sum(start, base);
                Rational s1 = s0 + at(base + 1);
                return SumLimits{exact(std::min(s0, s1)), exact(std::max(s0, s1))};
            }
            case Kind::geometric: {
                if (a_ == 0) {
                    Rational s = partial_sum(start, std::max(start, P));
                    return SumLimits{exact(s), exact(s)};
                }
                Rational aq = rational_abs(q_);
                if (aq < 1) {
                    int M = std::max(start, P);
                    Rational head = partial_sum(start, M);
                    // sum_{k>M} s*a q^k = s*a q^{M+1}/(1-q)
                    Rational qa = q_;
                    Rational tailsum = Rational(sign_) * a_ * pow_rat(qa, M + 1) / (1 - qa);
                    Rational L = head + tailsum;
                    return SumLimits{exact(L), exact(L)};
                }
                return std::nullopt;  // divergent, sign pattern depends on q
            }
            case Kind::triple: {
                // complete blocks telescope: S_{3K} converges; S_{3K+1} sits one
                // unit weight above it
                int M = std::max({start, P, 6});
                M += (3 - M % 3) % 3;
                Rational head = partial_sum(start, M);
                // remaining multiples of three contribute sum_{j>M/3} 2^-j = 2^-(M/3)
                Rational block_tail = Rational(1, Integer(1) << static_cast<unsigned>(M / 3));
                Rational L0 = head + Rational(sign_) * block_tail;
                Rational up = sign_ > 0 ? Rational(1) : Rational(-1);
                Rational lim_even = L0, lim_odd = L0 + up;
                return SumLimits{exact(std::min(lim_even, lim_odd)), exact(std::max(lim_even, lim_odd))};
            }
        }
        return std::nullopt;
    }

    Kind kind() const { return kind_; }
    const Rational& param_a() const { return a_; }
    const Rational& param_q() const { return q_; }
    const std::vector<Rational>& prefix() const { return prefix_; }
    int sign() const { return sign_; }

    std::string to_string() const {
        std::string base;
        switch (kind_) {
            case Kind::constant: base = "const " + format_rational(a_); break;
            case Kind::alternating: base = "alt " + format_rational(a_); break;
            case Kind::geometric:
                base = "geom " + format_rational(a_) + " " + format_rational(q_);
                break;
            case Kind::triple: base = "triple"; break;
        }
        std::string s = base;
        if (!prefix_.empty()) {
            std::string list;
            for (std::size_t i = 0; i < prefix_.size(); ++i) {
                if (i) list += ',';
                list += format_rational(prefix_[i]);
            }
            s = "prefix [" + list + "] then " + base;
        }
        if (sign_ < 0) s = "neg(" + s + ")";
        return s;
    }

    static WeightSequence parse(const std::string& text);

private:
    WeightSequence(Kind k, Rational a, Rational q) : kind_(k), a_(std::move(a)), q_(std::move(q)) {}

    static Rational pow_rat(const Rational& base, int e) {
        Rational r(1);
        for (int i = 0; i < e; ++i) r *= base;
        return r;
    }

    Rational base_at(int n) const {
        switch (kind_) {
            case Kind::constant: return a_;
            case Kind::alternating: return n % 2 == 0 ? a_ : Rational(-a_);
            case Kind::geometric: return a_ * pow_rat(q_, n);
            case Kind::triple: {
                if (n == 0) return 0;
                switch (n % 3) {
                    case 1: return 1;
                    case 2: return -1;
                    default: {
                        int k = n / 3;
                        if (k == 1) return Rational(-1, 2);
                        return Rational(1, Integer(1) << static_cast<unsigned>(k));
                    }
                }
            }
        }
        return 0;
    }

    Kind kind_;
    Rational a_, q_;
    std::vector<Rational> prefix_;
    int sign_ = 1;
};

inline WeightSequence WeightSequence::parse(const std::string& text) {
    std::istringstream is(text);
    std::string word;
    if (!(is >> word)) throw std::invalid_argument("empty weight rule");
    auto rest_rule = [&](auto&& self) -> WeightSequence {
        if (word == "const" || word == "alt") {
            std::string v;
            if (!(is >> v)) throw std::invalid_argument("weight rule '" + word + "' needs a value");
            Rational a = parse_rational(v);
            return word == "const" ? WeightSequence::constant(a) : WeightSequence::alternating(a);
        }
        if (word == "geom") {
            std::string c, q;
            if (!(is >> c >> q)) throw std::invalid_argument("weight rule 'geom' needs two values");
            return WeightSequence::geometric(parse_rational(c), parse_rational(q));
        }
        if (word == "triple") return WeightSequence::triple();
        if (word == "prefix") {
            std::string list;
            if (!(is >> list) || list.size() < 2 || list.front() != '[' || list.back() != ']')
                throw std::invalid_argument("prefix rule needs a [w0,w1,...] list");
            std::vector<Rational> values;
            std::stringstream ss(list.substr(1, list.size() - 2));
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) values.push_back(parse_rational(item));
            std::string then;
            if (!(is >> then) || then != "then")
                throw std::invalid_argument("prefix rule needs 'then <rule>'");
            if (!(is >> word)) throw std::invalid_argument("prefix rule needs a base rule");
            WeightSequence base = self(self);
            return base.with_prefix(std::move(values));
        }
        throw std::invalid_argument("unknown weight rule '" + word + "'");
    };
    WeightSequence w = rest_rule(rest_rule);
    std::string extra;
    if (is >> extra) throw std::invalid_argument("trailing tokens in weight rule: '" + extra + "'");
    return w;
}

}  // namespace takagi
