// Command-line laboratory for generalized Takagi functions: build and
// validate decompositions, evaluate T_w with certified enclosures, dump
// difference-quotient traces, estimate Dini derivatives and subdifferentials,
// run the verification suite, and export plot data.
//
// Exit codes: 0 success, 1 check/validation failure, 2 usage or parse error.

#include "takagi/harness.hpp"
#include "takagi/plot.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace takagi;

struct InstanceOptions {
    int radix = 0;
    std::string chain;
    bool counterexample = false;
    bool with_zero = false;
    std::string decomp_file;
    int depth = 15;
    std::string weights = "const 1";
    std::string majorant;  // "C q" for explicit decompositions without one
};

void add_instance_flags(CLI::App* cmd, InstanceOptions& opt, bool with_weights = true) {
    cmd->add_option("--radix", opt.radix, "r-adic decomposition on [0,1], r >= 2");
    cmd->add_option("--chain", opt.chain, "divisor chain, e.g. 1,2,6,12");
    cmd->add_flag("--counterexample", opt.counterexample,
                  "the [-1,1] decomposition without a uniform rho");
    cmd->add_flag("--with-zero", opt.with_zero, "counterexample variant with 0 in D_0");
    cmd->add_option("--decomp", opt.decomp_file, "decomposition file to load");
    cmd->add_option("--depth", opt.depth, "stored depth (pair depth for the counterexample)");
    if (with_weights) {
        cmd->add_option("--weights", opt.weights,
                        "weight rule: 'const c' | 'alt a' | 'geom c q' | 'triple' | "
                        "'prefix [w0,...] then <rule>'");
        cmd->add_option("--majorant", opt.majorant,
                        "declared tail majorant 'C q' (|w_k| alpha_k <= C q^k)");
    }
}

Decomposition make_decomposition(const InstanceOptions& opt) {
    int sources = (opt.radix > 0) + !opt.chain.empty() + opt.counterexample + !opt.decomp_file.empty();
    if (sources != 1)
        throw CLI::ValidationError("exactly one of --radix/--chain/--counterexample/--decomp");
    if (opt.radix > 0) return build_radix(opt.radix, opt.depth);
    if (!opt.chain.empty()) {
        std::vector<Integer> rseq;
        std::stringstream ss(opt.chain);
        std::string item;
        while (std::getline(ss, item, ',')) rseq.emplace_back(item);
        return build_divisor_chain(std::move(rseq), opt.depth);
    }
    if (opt.counterexample) return build_counterexample(opt.depth, opt.with_zero);
    return load_decomposition(opt.decomp_file);
}

GeneralizedTakagi make_instance(const InstanceOptions& opt) {
    Decomposition d = make_decomposition(opt);
    WeightSequence w = WeightSequence::parse(opt.weights);
    std::optional<GeometricTail> majorant;
    if (!opt.majorant.empty()) {
        std::stringstream ss(opt.majorant);
        std::string c, q;
        if (!(ss >> c >> q)) throw CLI::ValidationError("--majorant expects 'C q'");
        majorant = GeometricTail{parse_rational(c), parse_rational(q), 0};
    }
    return GeneralizedTakagi(std::move(d), std::move(w), majorant);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    return os;
}

int cmd_build(const InstanceOptions& opt, const std::string& out) {
    Decomposition d = make_decomposition(opt);
    if (out.empty()) {
        save_decomposition(d, std::cout);
    } else {
        auto os = open_out(out);
        save_decomposition(d, os);
    }
    return 0;
}

int cmd_validate(const InstanceOptions& opt) {
    std::optional<Decomposition> loaded;
    try {
        loaded = make_decomposition(opt);
    } catch (const CLI::Error&) {
        throw;
    } catch (const std::exception& e) {
        std::cout << "invalid: " << e.what() << '\n';
        return 1;
    }
    const Decomposition& d = *loaded;
    auto rep = validate(d);
    std::cout << "interval [" << format_rational(d.lo()) << ", " << format_rational(d.hi()) << "], "
              << d.depth() + 1 << " levels";
    if (d.rho_declared()) std::cout << ", declared rho " << format_rational(*d.rho_declared());
    std::cout << "\nmeasured inf rho_n = " << format_rational(rep.rho_inf) << '\n';
    std::cout << "level  alpha        rho_n        ax3 ax4 cond1 cond2a cond2b a<=ra a<=ra/2\n";
    for (const auto& l : rep.levels) {
        std::cout << l.level << "  " << format_rational(l.alpha) << "  "
                  << format_rational(l.rho_measured) << "  " << flag_name(l.axiom3) << ' '
                  << flag_name(l.axiom4) << ' ' << flag_name(l.cond1) << ' ' << flag_name(l.cond2a)
                  << ' ' << flag_name(l.cond2b) << ' ' << flag_name(l.alpha_ratio_le_rho) << ' '
                  << flag_name(l.alpha_ratio_le_half_rho) << '\n';
        if (l.witness) std::cout << "    witness: " << *l.witness << '\n';
    }
    std::cout << (rep.satisfies_refinement_conditions(d.depth()) ? "refinement conditions: satisfied"
                                                           : "refinement conditions: NOT satisfied")
              << '\n';
    return 0;
}

int cmd_eval(const InstanceOptions& opt, const std::string& xs, const std::string& epss) {
    auto t = make_instance(opt);
    Rational x = parse_rational(xs), eps = parse_rational(epss);
    RatInterval v = evaluate(t, x, eps);
    std::cout << "T_w(" << xs << ") in " << format_interval(v) << "  (width "
              << format_rational(v.width()) << ")\n";
    if (auto ex = exact_value(t, x)) std::cout << "exact value: " << format_rational(*ex) << '\n';
    return 0;
}

int cmd_trace(const InstanceOptions& opt, const std::string& xs, const std::string& side_str,
              int depth, const std::string& out) {
    auto t = make_instance(opt);
    Rational x = parse_rational(xs);
    Side side = side_str == "left" ? Side::left : Side::right;
    auto pc = classify(t.decomposition(), x);
    if (pc.kind == PointClass::Kind::in_d) {
        auto red = reduce_to_d1(t, x);
        if (red.n0 > 0)
            std::cout << "reduced at n0=" << red.n0 << ": G'^+ = " << format_rational(red.right_slope_sum)
                      << ", G'^- = " << format_rational(red.left_slope_sum) << '\n';
        auto trace = gamma_trace(red.instance, x, side, depth);
        if (out.empty()) {
            write_trace_csv(std::cout, trace);
        } else {
            auto os = open_out(out);
            write_trace_csv(os, trace);
            std::cout << trace.rows.size() << " rows -> " << out << '\n';
        }
    } else {
        // perpetual midpoints get the consecutive-neighbor chords of the
        // midpoint branch; other points the straddle chords
        ChordMode mode = pc.kind == PointClass::Kind::in_d_tilde
                             ? (side == Side::left ? ChordMode::left : ChordMode::right)
                             : ChordMode::straddle;
        auto trace = chord_trace(t, x, depth, mode);
        if (out.empty()) {
            write_chord_csv(std::cout, trace);
        } else {
            auto os = open_out(out);
            write_chord_csv(os, trace);
            std::cout << trace.rows.size() << " chord rows -> " << out << '\n';
        }
    }
    return 0;
}

int cmd_dini(const InstanceOptions& opt, const std::string& xs, int horizon, const std::string& epss) {
    auto t = make_instance(opt);
    Rational x = parse_rational(xs);
    auto est = dini(t, x, horizon, parse_rational(epss));
    std::cout << "d_+ window:  " << format_interval(est.d_plus) << '\n'
              << "D^- window:  " << format_interval(est.D_minus) << '\n'
              << "horizon " << est.horizon << ", " << est.samples << " samples\n";
    return 0;
}

int cmd_subdiff(const InstanceOptions& opt, const std::string& xs, int depth, bool super,
                const std::string& zeta_list, const std::string& out) {
    auto t = make_instance(opt);
    Rational x = parse_rational(xs);
    std::vector<Rational> zetas;
    std::stringstream ss(zeta_list);
    std::string item;
    while (std::getline(ss, item, ',')) zetas.push_back(parse_rational(item));
    auto rep = super ? superdifferential_estimate(t, x, depth, zetas)
                     : subdifferential_estimate(t, x, depth, zetas);
    auto pc = classify(t.decomposition(), x);
    std::cout << (super ? "superdifferential" : "subdifferential") << " at " << xs << ": "
              << verdict_name(rep.verdict) << " (horizon " << rep.horizon << ")\n";
    if (rep.interval) std::cout << "candidate interval: " << format_interval(*rep.interval) << '\n';
    if (!rep.certificate_levels.empty()) {
        std::cout << "separation depths:";
        for (int n : rep.certificate_levels) std::cout << ' ' << n;
        std::cout << '\n';
    }
    std::cout << "d_+ window " << format_interval(rep.estimate.d_plus) << ", D^- window "
              << format_interval(rep.estimate.D_minus) << '\n'
              << rep.detail << '\n';
    if (!out.empty()) {
        auto os = open_out(out);
        write_verdict_csv(os, x, pc, rep);
    }
    return 0;
}

int cmd_verify(const std::string& filter, int depth, int counter_depth, std::uint64_t seed,
               const std::string& report, const std::string& csv) {
    auto summary = run_suite(filter, depth, counter_depth, seed);
    write_summary_text(std::cout, summary);
    if (!report.empty()) {
        auto os = open_out(report);
        write_summary_text(os, summary);
    }
    if (!csv.empty()) {
        auto os = open_out(csv);
        write_summary_csv(os, summary);
    }
    return summary.all_pass() ? 0 : 1;
}

int cmd_plot(const InstanceOptions& opt, int resolution, const std::string& epss,
             const std::string& xs, const std::string& out_prefix) {
    auto t = make_instance(opt);
    Rational eps = parse_rational(epss);
    {
        auto os = open_out(out_prefix + ".csv");
        write_function_csv(os, t, resolution, eps);
    }
    {
        auto os = open_out(out_prefix + ".svg");
        write_function_svg(os, t, resolution, eps);
    }
    std::cout << out_prefix << ".csv, " << out_prefix << ".svg";
    if (!xs.empty()) {
        Rational x = parse_rational(xs);
        std::vector<std::pair<int, Rational>> pts;
        auto pc = classify(t.decomposition(), x);
        if (pc.kind == PointClass::Kind::in_d) {
            auto red = reduce_to_d1(t, x);
            auto trace = delta_trace(red.instance, x, Side::right, t.decomposition().depth());
            for (const auto& r : trace.rows) pts.emplace_back(r.level, r.quotient);
        } else {
            auto trace = chord_trace(t, x, t.decomposition().depth(), ChordMode::straddle);
            for (const auto& r : trace.rows) pts.emplace_back(r.level, r.quotient);
        }
        {
            auto os = open_out(out_prefix + "_quotients.csv");
            os << "n,Delta_n\n";
            for (const auto& [n, q] : pts) os << n << ',' << format_rational(q) << '\n';
        }
        {
            auto os = open_out(out_prefix + "_quotients.svg");
            write_quotient_svg(os, pts);
        }
        std::cout << ", " << out_prefix << "_quotients.csv, " << out_prefix << "_quotients.svg";
    }
    std::cout << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact-arithmetic laboratory for generalized Takagi functions"};
    app.require_subcommand(1);

    InstanceOptions opt;
    std::string x, eps = "1/1000000", side = "right", out, filter, zetas = "0,1,-1,10,-10";
    std::string report_path, csv_path;
    int depth = 15, counter_depth = 10, horizon = 12, resolution = 257;
    std::uint64_t seed = 20240901;
    bool all = false, super = false;

    auto* build = app.add_subcommand("build", "construct a decomposition and write it out");
    add_instance_flags(build, opt, false);
    build->add_option("--out", out, "output file (stdout when omitted)");

    auto* val = app.add_subcommand("validate", "per-level axiom and hypothesis report");
    add_instance_flags(val, opt, false);

    auto* ev = app.add_subcommand("eval", "certified enclosure of T_w(x)");
    add_instance_flags(ev, opt);
    ev->add_option("--x", x, "evaluation point")->required();
    ev->add_option("--eps", eps, "enclosure half-width target");

    auto* tr = app.add_subcommand("trace", "difference-quotient trace toward x");
    add_instance_flags(tr, opt);
    tr->add_option("--x", x, "base point")->required();
    tr->add_option("--side", side, "left|right (D-points only)");
    tr->add_option("--trace-depth", horizon, "deepest level to trace");
    tr->add_option("--out", out, "CSV output (stdout when omitted)");

    auto* di = app.add_subcommand("dini", "finite-horizon Dini-derivative windows");
    add_instance_flags(di, opt);
    di->add_option("--x", x, "base point")->required();
    di->add_option("--horizon", horizon, "annulus horizon");
    di->add_option("--eps", eps, "per-annulus tail slack");

    auto* sub = app.add_subcommand("subdiff", "subdifferential / superdifferential verdict");
    add_instance_flags(sub, opt);
    sub->add_option("--x", x, "base point")->required();
    sub->add_option("--verdict-depth", horizon, "search depth");
    sub->add_flag("--super", super, "estimate the superdifferential instead");
    sub->add_option("--zeta", zetas, "comma-separated slopes for the local-minimum sweep");
    sub->add_option("--out", out, "verdict CSV");

    auto* ver = app.add_subcommand("verify", "run the verification suite");
    ver->add_flag("--all", all, "run every check");
    ver->add_option("--filter", filter, "run checks whose id contains this substring");
    ver->add_option("--depth", depth, "trace depth for radix/chain instances");
    ver->add_option("--counter-depth", counter_depth, "pair depth for the counterexample checks");
    ver->add_option("--seed", seed, "seed for random probe points");
    ver->add_option("--report", report_path, "write the text summary here too");
    ver->add_option("--csv", csv_path, "write the machine-readable results here");

    auto* pl = app.add_subcommand("plot", "CSV + SVG of T_w (and quotients at --x)");
    add_instance_flags(pl, opt);
    pl->add_option("--resolution", resolution, "grid points, >= 2");
    pl->add_option("--eps", eps, "enclosure half-width target");
    pl->add_option("--x", x, "also plot the quotient trace toward this point");
    pl->add_option("--out", out, "output path prefix")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (build->parsed()) return cmd_build(opt, out);
        if (val->parsed()) return cmd_validate(opt);
        if (ev->parsed()) return cmd_eval(opt, x, eps);
        if (tr->parsed()) return cmd_trace(opt, x, side, horizon, out);
        if (di->parsed()) return cmd_dini(opt, x, horizon, eps);
        if (sub->parsed()) return cmd_subdiff(opt, x, horizon, super, zetas, out);
        if (ver->parsed()) {
            if (!all && filter.empty())
                throw CLI::ValidationError("verify needs --all or --filter");
            return cmd_verify(filter, depth, counter_depth, seed, report_path, csv_path);
        }
        if (pl->parsed()) return cmd_plot(opt, resolution, eps, x, out);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
