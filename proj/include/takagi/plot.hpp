#pragma once

#include "takagi/derivatives.hpp"

#include <cstdio>
#include <ostream>
#include <string>

namespace takagi {

/// Decimal with 12 significant digits; the only place core rationals are
/// rounded, used for SVG coordinates.
inline std::string decimal12(const Rational& r) {
    double v = numerator(r).convert_to<double>() / denominator(r).convert_to<double>();
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// CSV rows (x, lower, upper) of T_w enclosures on a uniform rational grid.
inline void write_function_csv(std::ostream& os, const GeneralizedTakagi& t, int resolution,
                               const Rational& eps) {
    if (resolution < 2) throw std::invalid_argument("plot: resolution must be >= 2");
    os << "x,lower,upper\n";
    const auto& d = t.decomposition();
    Rational span = d.hi() - d.lo();
    for (int i = 0; i < resolution; ++i) {
        Rational x = d.lo() + span * Rational(i, resolution - 1);
        RatInterval v = best_enclosure(t, x, eps);
        os << format_rational(x) << ',' << format_rational(v.lo()) << ',' << format_rational(v.hi())
           << '\n';
    }
}

namespace detail {

struct SvgFrame {
    double width = 840, height = 520, margin = 40;
    double xlo, xhi, ylo, yhi;
    double px(double x) const { return margin + (x - xlo) / (xhi - xlo) * (width - 2 * margin); }
    double py(double y) const {
        return height - margin - (y - ylo) / (yhi - ylo) * (height - 2 * margin);
    }
};

inline void svg_header(std::ostream& os, const SvgFrame& f) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\""
       << f.height << "\" viewBox=\"0 0 " << f.width << ' ' << f.height << "\">\n"
       << "<rect x=\"" << f.margin << "\" y=\"" << f.margin << "\" width=\"" << f.width - 2 * f.margin
       << "\" height=\"" << f.height - 2 * f.margin
       << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n";
}

inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace detail

/// SVG polyline through the enclosure midpoints.
inline void write_function_svg(std::ostream& os, const GeneralizedTakagi& t, int resolution,
                               const Rational& eps) {
    if (resolution < 2) throw std::invalid_argument("plot: resolution must be >= 2");
    const auto& d = t.decomposition();
    std::vector<std::pair<double, double>> pts;
    Rational span = d.hi() - d.lo();
    double ylo = 0, yhi = 0;
    for (int i = 0; i < resolution; ++i) {
        Rational x = d.lo() + span * Rational(i, resolution - 1);
        Rational y = best_enclosure(t, x, eps).midpoint();
        double xd = numerator(x).convert_to<double>() / denominator(x).convert_to<double>();
        double yd = numerator(y).convert_to<double>() / denominator(y).convert_to<double>();
        ylo = std::min(ylo, yd);
        yhi = std::max(yhi, yd);
        pts.emplace_back(xd, yd);
    }
    if (yhi == ylo) yhi = ylo + 1;
    detail::SvgFrame f;
    f.xlo = numerator(d.lo()).convert_to<double>() / denominator(d.lo()).convert_to<double>();
    f.xhi = numerator(d.hi()).convert_to<double>() / denominator(d.hi()).convert_to<double>();
    f.ylo = ylo;
    f.yhi = yhi;
    detail::svg_header(os, f);
    os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1\" points=\"";
    for (const auto& [x, y] : pts) os << detail::fmt12(f.px(x)) << ',' << detail::fmt12(f.py(y)) << ' ';
    os << "\"/>\n</svg>\n";
}

/// Trace CSV, exact rationals as p/q. Empty cells where a column is undefined.
inline void write_trace_csv(std::ostream& os, const QuotientTrace& trace) {
    os << "n,y_n,Delta_n,Gamma_n,delta_n,eta_n,lambda_n,partial_sum_level,enclosure_width\n";
    auto opt = [](const std::optional<Rational>& v) { return v ? format_rational(*v) : std::string(); };
    for (const auto& r : trace.rows) {
        os << r.level << ',' << format_rational(r.point) << ',' << format_rational(r.quotient) << ','
           << opt(r.consecutive) << ',' << opt(r.overlap_coeff) << ',' << opt(r.increment) << ','
           << opt(r.quotient_gap) << ',' << r.partial_sum_level << ','
           << format_rational(r.enclosure_width) << '\n';
    }
}

/// Chord-trace CSV (straddle and one-sided chords).
inline void write_chord_csv(std::ostream& os, const ChordTrace& trace) {
    os << "n,a_n,b_n,Delta_n,ratio,partial_sum_level,enclosure_width\n";
    for (const auto& r : trace.rows)
        os << r.level << ',' << format_rational(r.u) << ',' << format_rational(r.v) << ','
           << format_rational(r.quotient) << ',' << format_rational(r.ratio) << ",,0\n";
}

/// Quotient-divergence SVG: level n against the trace quotient.
inline void write_quotient_svg(std::ostream& os, const std::vector<std::pair<int, Rational>>& points) {
    if (points.empty()) throw std::invalid_argument("quotient plot: no points");
    detail::SvgFrame f;
    f.xlo = points.front().first;
    f.xhi = points.back().first;
    if (f.xhi == f.xlo) f.xhi = f.xlo + 1;
    double ylo = 0, yhi = 0;
    for (const auto& [n, q] : points) {
        double v = numerator(q).convert_to<double>() / denominator(q).convert_to<double>();
        ylo = std::min(ylo, v);
        yhi = std::max(yhi, v);
    }
    if (yhi == ylo) yhi = ylo + 1;
    f.ylo = ylo;
    f.yhi = yhi;
    detail::svg_header(os, f);
    os << "<polyline fill=\"none\" stroke=\"#9c1f1f\" stroke-width=\"1\" points=\"";
    for (const auto& [n, q] : points) {
        double v = numerator(q).convert_to<double>() / denominator(q).convert_to<double>();
        os << detail::fmt12(f.px(n)) << ',' << detail::fmt12(f.py(v)) << ' ';
    }
    os << "\"/>\n</svg>\n";
}

/// Machine-readable verdict report row.
inline void write_verdict_csv(std::ostream& os, const Rational& x, const PointClass& pc,
                              const SubdifferentialReport& rep) {
    os << "point,classification,horizon,d_plus_lo,d_plus_hi,D_minus_lo,D_minus_hi,verdict\n";
    const char* cls = pc.kind == PointClass::Kind::in_d
                          ? "in_D"
                          : (pc.kind == PointClass::Kind::in_d_tilde ? "in_D_tilde" : "generic");
    os << format_rational(x) << ',' << cls << ',' << rep.horizon << ','
       << format_rational(rep.estimate.d_plus.lo()) << ',' << format_rational(rep.estimate.d_plus.hi())
       << ',' << format_rational(rep.estimate.D_minus.lo()) << ','
       << format_rational(rep.estimate.D_minus.hi()) << ',' << verdict_name(rep.verdict) << '\n';
}

}  // namespace takagi
