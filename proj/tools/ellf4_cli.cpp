// Command line front end: run verification suites, evaluate individual
// special functions and integrals.

#include <CLI11.hpp>

#include <array>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ellf4/beta.hpp"
#include "ellf4/errors.hpp"
#include "ellf4/quadrature.hpp"
#include "ellf4/series.hpp"
#include "ellf4/special.hpp"
#include "ellf4/verify.hpp"

namespace {

using ellf4::Complex;

// Accepts "re" or "re,im".
Complex parse_complex(const std::string& text) {
    size_t comma = text.find(',');
    try {
        if (comma == std::string::npos) return {std::stod(text), 0.0};
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError("expected a number re or a pair re,im: " + text);
    }
}

std::string show(Complex v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g %s %.15gi", v.real(), v.imag() < 0 ? "-" : "+",
                  std::abs(v.imag()));
    return buf;
}

void print_value(Complex value, double err_estimate) {
    std::printf("value: %s\n", show(value).c_str());
    std::printf("error estimate: %.2e\n", err_estimate);
}

void print_series(const ellf4::SeriesResult& r) {
    print_value(r.value, r.tail_estimate);
    std::printf("terms used: %d%s\n", r.terms_used, r.terminated ? " (terminating)" : "");
}

struct VerifyArgs {
    std::string suite;
    int points = 0;
    bool points_given = false;
    std::uint64_t seed = 0;
    bool seed_given = false;
    double tol = 0.0;
    bool tol_given = false;
    std::string json_path;
    std::string p_text, q_text;
};

int run_verify(const VerifyArgs& a) {
    ellf4::SuiteSpec spec = ellf4::default_spec(a.suite);
    if (a.points_given) spec.n_points = a.points;
    if (a.seed_given) spec.seed = a.seed;
    if (a.tol_given)
        for (auto& [identity, tol] : spec.tolerances) tol = a.tol;
    if (!a.p_text.empty()) spec.fixed_p = parse_complex(a.p_text);
    if (!a.q_text.empty()) spec.fixed_q = parse_complex(a.q_text);

    ellf4::VerificationReport report = ellf4::run_suite(spec);

    std::string json_dest = a.json_path;
    if (json_dest.empty()) {
        if (const char* dir = std::getenv("ELLF4_REPORT_DIR"))
            json_dest = std::string(dir) + "/" + a.suite + ".json";
    }
    // --json - claims stdout for the JSON body; the text rendering yields.
    if (json_dest != "-") ellf4::emit_report(report, ellf4::ReportFormat::Text, "-");
    if (!json_dest.empty()) {
        ellf4::emit_report(report, ellf4::ReportFormat::Json, json_dest);
        if (json_dest != "-") std::fprintf(stderr, "json report: %s\n", json_dest.c_str());
    }
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Elliptic beta integrals with F4 symmetry: verification and evaluation"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list-suites", "Print the registered suite names");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run one identity suite and report");
    verify->add_option("suite", va.suite, "Suite name (see list-suites)")->required();
    auto* points_opt = verify->add_option("--points", va.points, "Number of sample points");
    auto* seed_opt = verify->add_option("--seed", va.seed, "RNG seed");
    auto* tol_opt = verify->add_option("--tol", va.tol, "Override every identity tolerance");
    verify->add_option("--json", va.json_path,
                       "Write the JSON report here ('-' for stdout); default honors "
                       "ELLF4_REPORT_DIR");
    verify->add_option("--p", va.p_text, "Pin the nome p (re or re,im)");
    verify->add_option("--q", va.q_text, "Pin the nome q (re or re,im)");

    auto* eval = app.add_subcommand("eval", "Evaluate one function or integral");
    eval->require_subcommand(1);
    struct {
        std::string x, p, q, z, a, b;
        std::vector<std::string> as, bs, ts;
        std::string route = "explicit";
    } ea;

    auto* gamma = eval->add_subcommand("gamma", "Elliptic gamma(x; p, q)");
    gamma->add_option("--x", ea.x)->required();
    gamma->add_option("--p", ea.p)->required();
    gamma->add_option("--q", ea.q)->required();

    auto* theta_cmd = eval->add_subcommand("theta", "theta(x; q)");
    theta_cmd->add_option("--x", ea.x)->required();
    theta_cmd->add_option("--q", ea.q)->required();

    auto* phi = eval->add_subcommand("phi", "Basic hypergeometric r+1_phi_r");
    phi->add_option("--a", ea.as, "Numerator parameters")->required();
    phi->add_option("--b", ea.bs, "Denominator parameters");
    phi->add_option("--q", ea.q)->required();
    phi->add_option("--z", ea.z)->required();

    auto* w = eval->add_subcommand("w", "Very well poised r+1_W_r(a; b...; q, z)");
    w->add_option("--a", ea.a)->required();
    w->add_option("--b", ea.bs, "Free parameters b_1..b_{r-2}");
    w->add_option("--q", ea.q)->required();
    w->add_option("--z", ea.z)->required();

    auto* e0 = eval->add_subcommand("e0", "Order-zero elliptic beta integral");
    e0->add_option("--t", ea.ts, "5 leading parameters (6th balanced) or all 6")->required();
    e0->add_option("--p", ea.p)->required();
    e0->add_option("--q", ea.q)->required();

    auto* ef4 = eval->add_subcommand("ef4", "F4-symmetric integral E(b; t)");
    ef4->add_option("--b", ea.b)->required();
    ef4->add_option("--t", ea.ts, "The 4 parameters t_1..t_4")->required()->expected(4);
    ef4->add_option("--p", ea.p)->required();
    ef4->add_option("--q", ea.q)->required();
    ef4->add_option("--route", ea.route, "explicit (default) or def")
        ->check(CLI::IsMember({"explicit", "def"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (list->parsed()) {
            for (const auto& name : ellf4::suite_names()) std::printf("%s\n", name.c_str());
            return 0;
        }
        if (verify->parsed()) {
            va.points_given = points_opt->count() > 0;
            va.seed_given = seed_opt->count() > 0;
            va.tol_given = tol_opt->count() > 0;
            return run_verify(va);
        }

        // eval subcommands
        if (gamma->parsed()) {
            ellf4::EllipticBase base(parse_complex(ea.p), parse_complex(ea.q));
            Complex v = ellf4::elliptic_gamma(parse_complex(ea.x), base);
            print_value(v, 1e-14 * std::abs(v));
            return 0;
        }
        if (theta_cmd->parsed()) {
            Complex v = ellf4::theta(parse_complex(ea.x), parse_complex(ea.q));
            print_value(v, 1e-14 * std::abs(v));
            return 0;
        }
        if (phi->parsed()) {
            ellf4::PhiSeriesSpec spec;
            for (const auto& t : ea.as) spec.numerators.push_back(parse_complex(t));
            for (const auto& t : ea.bs) spec.denominators.push_back(parse_complex(t));
            spec.q = parse_complex(ea.q);
            spec.z = parse_complex(ea.z);
            print_series(ellf4::sum_phi(spec));
            return 0;
        }
        if (w->parsed()) {
            std::vector<Complex> bs;
            for (const auto& t : ea.bs) bs.push_back(parse_complex(t));
            print_series(ellf4::sum_vwp_w(parse_complex(ea.a), bs, parse_complex(ea.q),
                                          parse_complex(ea.z)));
            return 0;
        }
        if (e0->parsed()) {
            if (ea.ts.size() != 5 && ea.ts.size() != 6)
                throw CLI::ValidationError("--t takes 5 or 6 values");
            ellf4::EllipticBase base(parse_complex(ea.p), parse_complex(ea.q));
            std::vector<Complex> t;
            for (const auto& s : ea.ts) t.push_back(parse_complex(s));
            ellf4::BetaParams params =
                t.size() == 5 ? ellf4::BetaParams::balanced(0, t, base)
                              : ellf4::BetaParams{0, t};
            ellf4::reset_sample_tally();
            Complex v = ellf4::e_m(params, base);
            print_value(v, ellf4::error_tally() * std::abs(v));
            std::printf("samples: %ld\n", ellf4::sample_tally());
            return 0;
        }
        if (ef4->parsed()) {
            ellf4::F4IntegralParams params{
                parse_complex(ea.b),
                {parse_complex(ea.ts[0]), parse_complex(ea.ts[1]), parse_complex(ea.ts[2]),
                 parse_complex(ea.ts[3])},
                ellf4::EllipticBase(parse_complex(ea.p), parse_complex(ea.q))};
            ellf4::reset_sample_tally();
            Complex v = ea.route == "def" ? ellf4::e_f4_def(params)
                                          : ellf4::e_f4_explicit(params);
            print_value(v, ellf4::error_tally() * std::abs(v));
            std::printf("samples: %ld\n", ellf4::sample_tally());
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const ellf4::Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return e.code() == ellf4::ErrorCode::UnknownSuite ||
                       e.code() == ellf4::ErrorCode::Domain ||
                       e.code() == ellf4::ErrorCode::Io
                   ? 2
                   : 1;
    }
    return 2;
}
