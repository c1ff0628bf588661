#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace takagi {

using Integer =
    boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;

/// Exact arbitrary-precision rational. Always kept in canonical form:
/// positive denominator, gcd(|num|, den) = 1. All arithmetic is exact.
using Rational = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

inline Rational rat(Integer num, Integer den) {
    if (den == 0) throw std::invalid_argument("rat: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Rational(std::move(num), std::move(den));
}

inline Rational rat(long long num, long long den = 1) {
    return rat(Integer(num), Integer(den));
}

inline Integer num(const Rational& r) { return numerator(r); }
inline Integer den(const Rational& r) { return denominator(r); }

inline Rational rational_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

/// Largest integer <= r.
inline Integer rational_floor(const Rational& r) {
    Integer q = numerator(r) / denominator(r);
    if (numerator(r) < 0 && q * denominator(r) != numerator(r)) --q;
    return q;
}

inline Integer rational_ceil(const Rational& r) { return -rational_floor(-r); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

/// Canonical printing: "p/q" with positive q, or just "p" for integers.
inline std::string format_rational(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) {
        s += '/';
        s += denominator(r).str();
    }
    return s;
}

/// Parses "p/q", plain integers and decimal strings ("-1/2", "3", "0.25").
/// Throws std::invalid_argument on malformed input or zero denominator.
inline Rational parse_rational(std::string_view text) {
    auto bad = [&] { throw std::invalid_argument("parse_rational: bad input '" + std::string(text) + "'"); };
    if (text.empty()) bad();
    std::size_t slash = text.find('/');
    try {
        if (slash != std::string_view::npos) {
            Integer n(std::string(text.substr(0, slash)));
            Integer d(std::string(text.substr(slash + 1)));
            return rat(std::move(n), std::move(d));
        }
        std::size_t dot = text.find('.');
        if (dot == std::string_view::npos) return Rational(Integer(std::string(text)));
        std::string_view head = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        if (frac.empty()) bad();
        for (char c : frac)
            if (c < '0' || c > '9') bad();
        bool negative = !head.empty() && head[0] == '-';
        if (head.empty() || head == "-" || head == "+") head = "";
        Integer whole = head.empty() ? Integer(0) : Integer(std::string(head));
        Integer scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        Integer digits{std::string(frac)};
        Rational r = Rational(whole) + (negative ? -Rational(digits, scale) : Rational(digits, scale));
        return r;
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        bad();
    }
    return Rational(0);  // unreachable
}

/// Closed rational interval [lo, hi]. Used for enclosures of function values
/// and for subdifferential/superdifferential intervals.
class RatInterval {
public:
    RatInterval() : lo_(0), hi_(0) {}
    RatInterval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (lo_ > hi_) throw std::invalid_argument("RatInterval: lo > hi");
    }
    static RatInterval point(Rational v) { return RatInterval(v, v); }

    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }
    Rational midpoint() const { return (lo_ + hi_) / 2; }
    Rational width() const { return hi_ - lo_; }

    bool contains(const Rational& v) const { return lo_ <= v && v <= hi_; }
    bool contains(const RatInterval& other) const { return lo_ <= other.lo_ && other.hi_ <= hi_; }

    /// -[a,b] = [-b,-a]
    RatInterval negated() const { return RatInterval(-hi_, -lo_); }
    RatInterval translated(const Rational& t) const { return RatInterval(lo_ + t, hi_ + t); }

    RatInterval operator+(const RatInterval& o) const { return RatInterval(lo_ + o.lo_, hi_ + o.hi_); }
    RatInterval operator-(const RatInterval& o) const { return RatInterval(lo_ - o.hi_, hi_ - o.lo_); }

    /// Division by an exact nonzero scalar.
    RatInterval divided_by(const Rational& s) const {
        if (s == 0) throw std::invalid_argument("RatInterval: division by zero");
        if (s > 0) return RatInterval(lo_ / s, hi_ / s);
        return RatInterval(hi_ / s, lo_ / s);
    }

    bool operator==(const RatInterval& o) const { return lo_ == o.lo_ && hi_ == o.hi_; }
    bool operator!=(const RatInterval& o) const { return !(*this == o); }

private:
    Rational lo_, hi_;
};

/// Intersection; empty result is signalled by nullopt ([0,1] cap [1,2] = [1,1] is nonempty).
inline std::optional<RatInterval> intersect(const RatInterval& a, const RatInterval& b) {
    Rational lo = a.lo() > b.lo() ? a.lo() : b.lo();
    Rational hi = a.hi() < b.hi() ? a.hi() : b.hi();
    if (lo > hi) return std::nullopt;
    return RatInterval(std::move(lo), std::move(hi));
}

inline std::string format_interval(const RatInterval& iv) {
    return "[" + format_rational(iv.lo()) + ", " + format_rational(iv.hi()) + "]";
}

}  // namespace takagi
