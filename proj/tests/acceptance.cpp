// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "ellf4/beta.hpp"
#include "ellf4/verify.hpp"

using namespace ellf4;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("criterion %2d: %s  %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct SuiteOutcome {
    bool all_pass;
    int n_cases;
    double max_rel;
};

SuiteOutcome run(const std::string& name) {
    VerificationReport r = run_suite(default_spec(name));
    return {r.all_pass(), r.summary.n_cases, r.summary.max_rel_err};
}

std::string detail(const std::vector<SuiteOutcome>& outs, double wall, double budget) {
    int n = 0;
    double max_rel = 0.0;
    for (const auto& o : outs) {
        n += o.n_cases;
        max_rel = std::max(max_rel, o.max_rel);
    }
    char buf[160];
    if (budget > 0.0)
        std::snprintf(buf, sizeof buf, "(%d checks, max rel %.2e, %.2fs of %.0fs)", n, max_rel,
                      wall, budget);
    else
        std::snprintf(buf, sizeof buf, "(%d checks, max rel %.2e, %.2fs)", n, max_rel, wall);
    return buf;
}

void suites_criterion(int criterion, const std::vector<std::string>& names, double budget) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<SuiteOutcome> outs;
    bool ok = true;
    for (const auto& name : names) {
        outs.push_back(run(name));
        ok = ok && outs.back().all_pass;
    }
    double wall = seconds_since(t0);
    if (budget > 0.0 && wall >= budget) ok = false;
    report(criterion, ok, detail(outs, wall, budget));
}

double rel(Complex got, Complex want) { return std::abs(got - want) / std::abs(want); }

// Elliptic evaluations at p = 1e-2, 1e-3, 1e-4 must approach the limit with
// strictly decreasing error, the last one at most 1e-2.
bool trend_ok(Complex b, const std::array<Complex, 4>& t, Complex q, const LimitExponents& e,
              double* final_err) {
    Complex lim = limit_value(b, t, q, e);
    double prev = 1e300;
    for (double p : {1e-2, 1e-3, 1e-4}) {
        double err = rel(e_f4_at_exponents(b, t, e, EllipticBase(p, q)), lim);
        if (err >= prev) return false;
        prev = err;
    }
    *final_err = prev;
    return prev <= 1e-2;
}

void limits_criterion() {
    const Complex I(0.0, 1.0);
    const Complex edge_t = I * std::sqrt(0.1 / 0.45);  // zeroes t + (q/b)/t
    struct Fixture {
        const char* label;
        Complex b;
        std::array<Complex, 4> t;
        Complex q;
        LimitExponents e;
    };
    const Fixture fixtures[] = {
        {"apex", 0.5, {0.55, 0.5, 0.45, 0.52}, 0.15, {1.0, {0, 0, 0, 0}}},
        {"mid-a", 0.3, {0.5, -0.5, 0.4, -0.4}, 0.05, {0.5, {0, 0.5, 0, 0.5}}},
        {"mid-b", 0.3, {0.5, -0.5, 0.4, -0.4}, 0.05, {0.5, {0.25, 0.25, 0.25, 0.75}}},
        {"mid-c", 0.3, {0.5, -0.5, 0.4, -0.4}, 0.05, {0.5, {0.25, 0.25, 0.25, -0.25}}},
        {"mid-d", 0.3, {0.45, 0.45 * I, -0.45, -0.45 * I}, 0.05,
         {0.5, {0.325, 0.175, 0.325, 0.175}}},
        {"interior", 0.45, {0.5, -0.5, 0.45, 0.55}, 0.1, {0.0, {0, 0, 0.5, 0.5}}},
        {"edge", 0.45, {0.5, 0.45, -0.45, edge_t}, 0.1, {0.0, {-0.25, 0.5, 0.5, 0.5}}},
    };
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string summary;
    for (const auto& f : fixtures) {
        double final_err = 1e300;
        bool this_ok = false;
        try {
            this_ok = trend_ok(f.b, f.t, f.q, f.e, &final_err);
        } catch (const Error&) {
        }
        ok = ok && this_ok;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s%s %.1e", summary.empty() ? "" : ", ", f.label,
                      final_err);
        summary += buf;
    }
    char buf[240];
    std::snprintf(buf, sizeof buf, "(final errors: %s; %.2fs)", summary.c_str(),
                  seconds_since(t0));
    report(7, ok, buf);
}

// The two integral routes must agree on seeded generic parameters.
void routes_criterion() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(7);
    auto unit = [&] { return double(rng() >> 11) * 0x1.0p-53; };
    auto draw = [&](double lo, double hi) {
        double m = lo * std::exp(unit() * std::log(hi / lo));
        return std::polar(m, 2.0 * 3.14159265358979324 * unit());
    };
    bool ok = true;
    double max_rel = 0.0;
    for (int i = 0; i < 10; ++i) {
        F4IntegralParams P{draw(0.45, 0.7),
                           {draw(0.45, 0.7), draw(0.45, 0.7), draw(0.45, 0.7), draw(0.45, 0.7)},
                           EllipticBase(draw(0.2, 0.4), draw(0.2, 0.4))};
        double r = 1e300;
        try {
            r = rel(e_f4_def(P), e_f4_explicit(P));
        } catch (const Error&) {
        }
        max_rel = std::max(max_rel, r);
        ok = ok && r <= 1e-8;
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "(10 points, max rel %.2e, %.2fs)", max_rel,
                  seconds_since(t0));
    report(10, ok, buf);
}

}  // namespace

int main() {
    suites_criterion(1, {"GAMMA_RELATIONS", "DUPLICATION"}, 10.0);
    suites_criterion(2, {"E0_EVAL"}, 60.0);
    suites_criterion(3, {"E7_MOVE"}, 120.0);

    // The main transformation: 20 seeded moves plus the pinned self-dual point,
    // which must come back exactly.
    {
        auto t0 = std::chrono::steady_clock::now();
        VerificationReport r = run_suite(default_spec("F4_MAIN"));
        double wall = seconds_since(t0);
        bool ok = r.all_pass() && r.summary.n_cases == 21 && wall < 120.0 &&
                  !r.cases.empty() && r.cases[0].identity == "main-move-proof-point" &&
                  r.cases[0].rel_err == 0.0;
        report(4, ok, detail({{r.all_pass(), r.summary.n_cases, r.summary.max_rel_err}}, wall,
                             120.0));
    }

    suites_criterion(5, {"F4_ORBIT"}, 0.0);
    suites_criterion(6, {"GROUP_FACTS"}, 5.0);
    limits_criterion();
    suites_criterion(8, {"SERIES_REPS"}, 0.0);
    suites_criterion(9, {"THETA_ADDITION"}, 0.0);
    routes_criterion();

    if (g_failures == 0) {
        std::printf("acceptance: all 10 criteria pass\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return 1;
}
