#include "ellf4/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "ellf4/beta.hpp"
#include "ellf4/quadrature.hpp"
#include "ellf4/series.hpp"
#include "ellf4/special.hpp"
#include "ellf4/weyl.hpp"

namespace ellf4 {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Deterministic draws built from raw mt19937_64 bits so that a fixed seed
// yields the same stream on every standard library.
class Sampler {
  public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double unit() { return double(rng_() >> 11) * 0x1.0p-53; }  // [0, 1)
    double log_uniform(double lo, double hi) {
        return lo * std::exp(unit() * std::log(hi / lo));
    }
    Complex annulus(double lo, double hi) {
        double r = log_uniform(lo, hi);
        return std::polar(r, kTwoPi * unit());
    }
    int index(int n) { return int(rng_() % std::uint64_t(n)); }

  private:
    std::mt19937_64 rng_;
};

// Relative distance from x to the nearest zero of (x; p, q), the inverse
// lattice p^{-j} q^{-k} (j, k >= 0).  Loop caps bound the work when a nome
// modulus approaches one.
double pq_zero_margin(Complex x, Complex p, Complex q) {
    double ax = std::abs(x);
    double bound = 4.0 * ax + 4.0;
    double m = std::numeric_limits<double>::infinity();
    Complex pj = 1.0;
    for (int j = 0; j <= 40 && std::abs(pj) <= bound; ++j, pj /= p) {
        Complex l = pj;
        for (int k = 0; k <= 40 && std::abs(l) <= bound; ++k, l /= q) {
            m = std::min(m, std::abs(x - l) / std::abs(l));
        }
    }
    return m;
}

// Same for the single-nome factorial (x; q): zeros at q^{-k}.
double q_zero_margin(Complex x, Complex q) {
    double bound = 4.0 * std::abs(x) + 4.0;
    double m = std::numeric_limits<double>::infinity();
    Complex l = 1.0;
    for (int k = 0; k <= 40 && std::abs(l) <= bound; ++k, l /= q) {
        m = std::min(m, std::abs(x - l) / std::abs(l));
    }
    return m;
}

// Health of x as an elliptic gamma argument: clearance from the pole lattice
// p^{-j} q^{-k} and from the zero lattice p^{j+1} q^{k+1}.
double gamma_arg_margin(Complex x, Complex p, Complex q) {
    double m = pq_zero_margin(x, p, q);
    double ax = std::abs(x);
    Complex pj = p;
    for (int j = 0; j <= 40 && std::abs(pj * q) >= 0.25 * ax; ++j, pj *= p) {
        Complex l = pj * q;
        for (int k = 0; k <= 40 && std::abs(l) >= 0.25 * ax; ++k, l *= q) {
            m = std::min(m, std::abs(x - l) / std::max(std::abs(l), 0.05));
        }
    }
    return m;
}

double theta_zero_margin(Complex x, Complex q) {
    return std::min(q_zero_margin(x, q), q_zero_margin(q / x, q));
}

using Inputs = std::vector<std::pair<std::string, Complex>>;

double rel_between(Complex lhs, Complex rhs) {
    double scale = std::max(std::abs(lhs), std::abs(rhs));
    if (scale == 0.0) return 0.0;
    return std::abs(lhs - rhs) / scale;
}

// Registry defaults per suite.
struct SuiteInfo {
    int n_points;
    std::uint64_t seed;
    std::map<std::string, double> tolerances;
};

const std::map<std::string, SuiteInfo>& registry() {
    static const std::map<std::string, SuiteInfo> table = {
        {"GAMMA_RELATIONS",
         {100, 101, {{"gamma-reflection", 1e-10}, {"gamma-shift-p", 1e-10},
                     {"gamma-shift-q", 1e-10}}}},
        {"DUPLICATION",
         {100, 102, {{"duplication-double-product", 1e-10}, {"duplication-gamma", 1e-10}}}},
        {"E0_EVAL", {20, 42, {{"e0-evaluation", 1e-8}}}},
        {"E7_MOVE", {10, 103, {{"e1-transformation", 1e-8}}}},
        {"F4_MAIN", {21, 104, {{"main-move-proof-point", 1e-8}, {"main-move", 1e-8}}}},
        {"F4_ORBIT", {50, 105, {{"orbit-invariance", 1e-8}}}},
        {"LIMIT_B1",
         {5, 106, {{"b1-flip-invariance", 1e-8}, {"b1-trend-decreasing", 0.999},
                   {"b1-trend-agreement", 2e-2}}}},
        {"LIMIT_MID",
         {8, 107, {{"mid-case-a-trend-decreasing", 0.999}, {"mid-case-a-trend-agreement", 0.25},
                   {"mid-case-b-trend-decreasing", 0.999}, {"mid-case-b-trend-agreement", 0.25},
                   {"mid-case-c-trend-decreasing", 0.999}, {"mid-case-c-trend-agreement", 0.25},
                   {"mid-case-d-trend-decreasing", 0.999}, {"mid-case-d-trend-agreement", 0.25}}}},
        {"LIMIT_B0",
         {5, 108, {{"edge-equals-duality", 1e-8}, {"duality-integral-series", 1e-8},
                   {"edge-vertex-14W13", 1e-8}, {"cube-vertex-14W13", 1e-8}}}},
        {"SERIES_REPS",
         {5, 109, {{"vertex-14W13", 1e-8}, {"edge-4phi3", 1e-8}, {"square-2phi1", 1e-8},
                   {"interior-constant", 1e-8}, {"w8-7-evaluation", 1e-8}}}},
        {"W8_7", {20, 110, {{"w8-7-evaluation", 1e-10}}}},
        {"THETA_ADDITION", {50, 111, {{"theta-addition", 1e-12}}}},
        {"GROUP_FACTS",
         {1, 0, {{"root-count", 0.0}, {"group-order", 0.0}, {"b4-order", 0.0},
                 {"b4-index", 0.0}, {"coxeter-matrix", 0.0}}}},
    };
    return table;
}

const std::vector<std::string>& registry_order() {
    static const std::vector<std::string> order = {
        "GAMMA_RELATIONS", "DUPLICATION", "E0_EVAL",  "E7_MOVE",        "F4_MAIN",
        "F4_ORBIT",        "LIMIT_B1",    "LIMIT_MID", "LIMIT_B0",       "SERIES_REPS",
        "W8_7",            "THETA_ADDITION", "GROUP_FACTS"};
    return order;
}

double tolerance_for(const SuiteSpec& spec, const SuiteInfo& info, const std::string& identity) {
    if (auto it = spec.tolerances.find(identity); it != spec.tolerances.end()) return it->second;
    if (auto it = info.tolerances.find(identity); it != info.tolerances.end()) return it->second;
    fail(ErrorCode::Domain, "no tolerance registered for identity " + identity);
}

// Assembles one record.  `eval` returns (lhs, rhs); `residual` marks checks
// whose single returned value already is the (nonnegative) error, in which
// case both error fields carry it verbatim.
CaseRecord checked(int index, const std::string& identity, const SuiteSpec& spec,
                   const SuiteInfo& info, const Inputs& inputs,
                   const std::function<std::pair<Complex, Complex>()>& eval,
                   bool residual = false) {
    CaseRecord rec;
    rec.index = index;
    rec.identity = identity;
    rec.inputs = inputs;
    rec.tolerance = tolerance_for(spec, info, identity);
    reset_sample_tally();
    try {
        auto [lhs, rhs] = eval();
        rec.lhs = lhs;
        rec.rhs = rhs;
        if (residual) {
            rec.abs_err = std::abs(lhs);
            rec.rel_err = rec.abs_err;
        } else {
            rec.abs_err = std::abs(lhs - rhs);
            rec.rel_err = rel_between(lhs, rhs);
        }
        rec.pass = rec.rel_err <= rec.tolerance;
    } catch (const Error& e) {
        rec.error = to_string(e.code());
        rec.pass = false;
    }
    rec.n_used = sample_tally();
    return rec;
}

// Error records for a whole case when its shared setup failed.
std::vector<CaseRecord> case_failed(int index, const std::vector<std::string>& identities,
                                    const SuiteSpec& spec, const SuiteInfo& info,
                                    const Inputs& inputs, ErrorCode code) {
    std::vector<CaseRecord> out;
    for (const auto& id : identities) {
        CaseRecord rec;
        rec.index = index;
        rec.identity = id;
        rec.inputs = inputs;
        rec.tolerance = tolerance_for(spec, info, id);
        rec.error = to_string(code);
        out.push_back(rec);
    }
    return out;
}

// Rejection sampling: redraw until `ok`, bounded.
template <typename T>
T sample_until(const std::function<T()>& draw, const std::function<bool(const T&)>& ok) {
    for (int attempt = 0; attempt < 200000; ++attempt) {
        T cand = draw();
        if (ok(cand)) return cand;
    }
    fail(ErrorCode::Domain, "rejection sampling exhausted its attempt budget");
}

Complex draw_nome(Sampler& s, const std::optional<Complex>& fixed, double max_abs) {
    if (fixed) return *fixed;
    return s.annulus(0.2, max_abs);
}

struct NomePair {
    Complex p, q;
};

NomePair draw_nomes(Sampler& s, const SuiteSpec& spec) {
    return {draw_nome(s, spec.fixed_p, spec.base_envelope.max_abs_p),
            draw_nome(s, spec.fixed_q, spec.base_envelope.max_abs_q)};
}

// ---- GAMMA_RELATIONS ----

std::vector<CaseRecord> run_gamma_case(int i, Sampler& s, const SuiteSpec& spec,
                                       const SuiteInfo& info) {
    double margin = spec.base_envelope.pole_margin;
    struct Draw {
        NomePair n;
        Complex x;
    };
    Draw d = sample_until<Draw>(
        [&] { return Draw{draw_nomes(s, spec), s.annulus(0.2, 0.8)}; },
        [&](const Draw& c) {
            Complex p = c.n.p, q = c.n.q;
            for (Complex arg : {c.x, p * q / c.x, p * c.x, q * c.x})
                if (gamma_arg_margin(arg, p, q) < margin) return false;
            return theta_zero_margin(c.x, q) >= margin && theta_zero_margin(c.x, p) >= margin;
        });
    Inputs in = {{"p", d.n.p}, {"q", d.n.q}, {"x", d.x}};
    EllipticBase base(d.n.p, d.n.q);
    std::vector<CaseRecord> out;
    out.push_back(checked(i, "gamma-reflection", spec, info, in, [&] {
        return std::pair<Complex, Complex>(
            elliptic_gamma(d.x, base) * elliptic_gamma(d.n.p * d.n.q / d.x, base), 1.0);
    }));
    out.push_back(checked(i, "gamma-shift-p", spec, info, in, [&] {
        return std::pair<Complex, Complex>(elliptic_gamma(d.n.p * d.x, base),
                                           theta(d.x, d.n.q) * elliptic_gamma(d.x, base));
    }));
    out.push_back(checked(i, "gamma-shift-q", spec, info, in, [&] {
        return std::pair<Complex, Complex>(elliptic_gamma(d.n.q * d.x, base),
                                           theta(d.x, d.n.p) * elliptic_gamma(d.x, base));
    }));
    return out;
}

// ---- DUPLICATION ----

std::vector<CaseRecord> run_duplication_case(int i, Sampler& s, const SuiteSpec& spec,
                                             const SuiteInfo& info) {
    double margin = spec.base_envelope.pole_margin;
    struct Draw {
        NomePair n;
        Complex z;
    };
    Draw d = sample_until<Draw>(
        [&] { return Draw{draw_nomes(s, spec), s.annulus(0.2, 0.8)}; },
        [&](const Draw& c) {
            Complex p = c.n.p, q = c.n.q;
            if (gamma_arg_margin(c.z, p, q) < margin) return false;
            for (Complex w : {Complex(1.0), p, q, p * q}) {
                Complex r = std::sqrt(w * c.z);
                if (gamma_arg_margin(r, p, q) < margin ||
                    gamma_arg_margin(-r, p, q) < margin)
                    return false;
            }
            return true;
        });
    Inputs in = {{"p", d.n.p}, {"q", d.n.q}, {"z", d.z}};
    EllipticBase base(d.n.p, d.n.q);
    auto roots = [&] {
        std::vector<Complex> r;
        for (Complex w : {Complex(1.0), d.n.p, d.n.q, d.n.p * d.n.q}) {
            Complex root = std::sqrt(w * d.z);
            r.push_back(root);
            r.push_back(-root);
        }
        return r;
    }();
    std::vector<CaseRecord> out;
    out.push_back(checked(i, "duplication-double-product", spec, info, in, [&] {
        Complex lhs = 1.0;
        for (Complex r : roots) lhs *= pq_poch(r, base);
        return std::pair<Complex, Complex>(lhs, pq_poch(d.z, base));
    }));
    out.push_back(checked(i, "duplication-gamma", spec, info, in, [&] {
        Complex lhs = 1.0;
        for (Complex r : roots) lhs *= elliptic_gamma(r, base);
        return std::pair<Complex, Complex>(lhs, elliptic_gamma(d.z, base));
    }));
    return out;
}

// ---- E0_EVAL ----

std::vector<CaseRecord> run_e0_case(int i, Sampler& s, const SuiteSpec& spec,
                                    const SuiteInfo& info) {
    double margin = spec.base_envelope.pole_margin;
    struct Draw {
        NomePair n;
        std::array<Complex, 6> t;
    };
    Draw d = sample_until<Draw>(
        [&] {
            Draw c{draw_nomes(s, spec), {}};
            Complex prod = 1.0;
            for (int r = 0; r < 5; ++r) {
                c.t[r] = s.annulus(0.2, 0.8);
                prod *= c.t[r];
            }
            c.t[5] = c.n.p * c.n.q / prod;
            return c;
        },
        [&](const Draw& c) {
            double a5 = std::abs(c.t[5]);
            if (a5 < margin || a5 > 1.0 - margin) return false;
            for (int r = 0; r < 6; ++r)
                for (int u = r + 1; u < 6; ++u)
                    if (pq_zero_margin(c.t[r] * c.t[u], c.n.p, c.n.q) < margin) return false;
            return true;
        });
    Inputs in = {{"p", d.n.p}, {"q", d.n.q}};
    for (int r = 0; r < 6; ++r) in.emplace_back("t" + std::to_string(r + 1), d.t[r]);
    EllipticBase base(d.n.p, d.n.q);
    std::vector<CaseRecord> out;
    out.push_back(checked(i, "e0-evaluation", spec, info, in, [&] {
        BetaParams params{0, {d.t.begin(), d.t.end()}};
        return std::pair<Complex, Complex>(e_m(params, base), e0_product(d.t, base));
    }));
    return out;
}

// ---- E7_MOVE ----

std::vector<CaseRecord> run_e7_case(int i, Sampler& s, const SuiteSpec& spec,
                                    const SuiteInfo& info) {
    double margin = spec.base_envelope.pole_margin;
    struct Draw {
        NomePair n;
        std::array<Complex, 8> t;
        Complex v;
    };
    Draw d = sample_until<Draw>(
        [&] {
            Draw c{draw_nomes(s, spec), {}, 0.0};
            Complex prod = 1.0;
            for (int r = 0; r < 7; ++r) {
                c.t[r] = s.annulus(0.2, 0.8);
                prod *= c.t[r];
            }
            Complex pq = c.n.p * c.n.q;
            c.t[7] = pq * pq / prod;
            c.v = std::sqrt(pq / (c.t[0] * c.t[1] * c.t[2] * c.t[3]));
            return c;
        },
        [&](const Draw& c) {
            std::array<Complex, 8> img;
            for (int r = 0; r < 8; ++r) img[r] = r < 4 ? c.t[r] * c.v : c.t[r] / c.v;
            for (const auto& tup : {c.t, img})
                for (int r = 0; r < 8; ++r) {
                    double a = std::abs(tup[r]);
                    if (a < margin || a > 1.0 - margin) return false;
                }
            for (const auto& tup : {c.t, img})
                for (int r = 0; r < 8; ++r)
                    for (int u = r + 1; u < 8; ++u)
                        if (pq_zero_margin(tup[r] * tup[u], c.n.p, c.n.q) < margin) return false;
            return true;
        });
    Inputs in = {{"p", d.n.p}, {"q", d.n.q}};
    for (int r = 0; r < 8; ++r) in.emplace_back("t" + std::to_string(r + 1), d.t[r]);
    EllipticBase base(d.n.p, d.n.q);
    std::vector<CaseRecord> out;
    out.push_back(checked(i, "e1-transformation", spec, info, in, [&] {
        auto [lhs, rhs] = e1_transform_pair(d.t, base);
        return std::pair<Complex, Complex>(lhs, rhs);
    }));
    return out;
}

// ---- F4_MAIN / F4_ORBIT ----

bool f4_tuple_ok(Complex b, const std::array<Complex, 4>& t, Complex p, Complex q,
                 double margin) {
    Complex pq = p * q;
    double lim = 1.0 - margin;
    if (std::sqrt(std::abs(b)) > lim) return false;
    if (pq_zero_margin(pq / b, p, q) < margin) return false;
    for (int r = 0; r < 4; ++r) {
        double a = std::abs(t[r]);
        if (a < margin || a > lim) return false;
        if (std::abs(pq / (b * t[r])) > lim) return false;
    }
    for (int r = 0; r < 4; ++r)
        for (int u = 0; u < 4; ++u) {
            if (u > r && pq_zero_margin(t[r] * t[u], p, q) < margin) return false;
            if (u > r &&
                pq_zero_margin(pq * pq / (b * b * t[r] * t[u]), p, q) < margin)
                return false;
            if (u != r && pq_zero_margin(pq * t[r] / (b * t[u]), p, q) < margin) return false;
        }
    return true;
}

Inputs f4_inputs(const F4IntegralParams& P) {
    Inputs in = {{"p", P.base.p()}, {"q", P.base.q()}, {"b", P.b}};
    for (int r = 0; r < 4; ++r) in.emplace_back("t" + std::to_string(r + 1), P.t[r]);
    return in;
}

std::vector<CaseRecord> run_f4_main_case(int i, Sampler& s, const SuiteSpec& spec,
                                         const SuiteInfo& info) {
    if (i == 0) {
        // Pinned self-dual point: v = 1, so the move is the identity map.
        double q = 0.3;
        Complex b = std::pow(q, 0.75);
        F4IntegralParams P{b,
                           {std::pow(q, 0.75), std::pow(q, 0.75), std::sqrt(q), std::sqrt(q)},
                           EllipticBase(q, q)};
        std::vector<CaseRecord> out;
        out.push_back(checked(i, "main-move-proof-point", spec, info, f4_inputs(P), [&] {
            Complex v = v_parameter(P);
            F4IntegralParams Pv = P;
            for (auto& tr : Pv.t) tr *= v;
            return std::pair<Complex, Complex>(e_f4_explicit(P), e_f4_explicit(Pv));
        }));
        return out;
    }
    double margin = spec.base_envelope.pole_margin;
    struct Draw {
        NomePair n;
        Complex b;
        std::array<Complex, 4> t;
        std::array<Complex, 4> tv;
    };
    Draw d = sample_until<Draw>(
        [&] {
            Draw c{draw_nomes(s, spec), s.annulus(0.2, 0.8), {}, {}};
            for (auto& tr : c.t) tr = s.annulus(0.2, 0.8);
            Complex pq = c.n.p * c.n.q;
            Complex v = std::sqrt(pq * pq / (c.b * c.b * c.t[0] * c.t[1] * c.t[2] * c.t[3]));
            for (int r = 0; r < 4; ++r) c.tv[r] = c.t[r] * v;
            return c;
        },
        [&](const Draw& c) {
            return f4_tuple_ok(c.b, c.t, c.n.p, c.n.q, margin) &&
                   f4_tuple_ok(c.b, c.tv, c.n.p, c.n.q, margin);
        });
    F4IntegralParams P{d.b, d.t, EllipticBase(d.n.p, d.n.q)};
    F4IntegralParams Pv{d.b, d.tv, EllipticBase(d.n.p, d.n.q)};
    std::vector<CaseRecord> out;
    out.push_back(checked(i, "main-move", spec, info, f4_inputs(P), [&] {
        return std::pair<Complex, Complex>(e_f4_explicit(P), e_f4_explicit(Pv));
    }));
    return out;
}

std::vector<CaseRecord> run_f4_orbit_case(int i, Sampler& s, const SuiteSpec& spec,
                                          const SuiteInfo& info) {
    double margin = spec.base_envelope.pole_margin;
    struct Draw {
        NomePair n;
        Complex b;
        std::array<Complex, 4> t;
        std::vector<int> word;
        std::array<Complex, 4> image;
    };
    Draw d = sample_until<Draw>(
        [&] {
            Draw c{draw_nomes(s, spec), s.annulus(0.2, 0.8), {}, {}, {}};
            for (auto& tr : c.t) tr = s.annulus(0.2, 0.8);
            int len = 1 + s.index(4);
            GroupElement g = GroupElement::identity();
            for (int k = 0; k < len; ++k) {
                int letter = s.index(4);
                c.word.push_back(letter);
                g = simple_reflections()[letter] * g;
            }
            F4Point pt{c.t, c.n.p * c.n.q / c.b};
            c.image = mult_action(g, pt).z;
            return c;
        },
        [&](const Draw& c) {
            return f4_tuple_ok(c.b, c.t, c.n.p, c.n.q, margin) &&
                   f4_tuple_ok(c.b, c.image, c.n.p, c.n.q, margin);
        });
    F4IntegralParams P{d.b, d.t, EllipticBase(d.n.p, d.n.q)};
    F4IntegralParams Pg{d.b, d.image, EllipticBase(d.n.p, d.n.q)};
    Inputs in = f4_inputs(P);
    for (size_t k = 0; k < d.word.size(); ++k)
        in.emplace_back("word" + std::to_string(k + 1), Complex(double(d.word[k]), 0.0));
    std::vector<CaseRecord> out;
    out.push_back(checked(i, "orbit-invariance", spec, info, in, [&] {
        return std::pair<Complex, Complex>(e_f4_explicit(P), e_f4_explicit(Pg));
    }));
    return out;
}

// ---- Limit suites ----

bool q_level_pairs_ok(Complex b, const std::array<Complex, 4>& t, Complex q, double margin) {
    if (q_zero_margin(q / b, q) < margin) return false;
    for (int r = 0; r < 4; ++r)
        for (int u = 0; u < 4; ++u) {
            if (u > r && q_zero_margin(t[r] * t[u], q) < margin) return false;
            if (u > r && q_zero_margin(q * q / (b * b * t[r] * t[u]), q) < margin) return false;
            if (u != r && q_zero_margin(q * t[r] / (b * t[u]), q) < margin) return false;
        }
    return true;
}

std::vector<CaseRecord> run_limit_b1_case(int i, Sampler& s, const SuiteSpec& spec,
                                          const SuiteInfo& info) {
    double margin = spec.base_envelope.pole_margin;
    struct Draw {
        Complex q, b;
        std::array<Complex, 4> t;
    };
    Draw d = sample_until<Draw>(
        [&] {
            Draw c{draw_nome(s, spec.fixed_q, spec.base_envelope.max_abs_q),
                   s.annulus(0.2, 0.8),
                   {}};
            for (auto& tr : c.t) tr = s.annulus(0.2, 0.8);
            return c;
        },
        [&](const Draw& c) {
            for (const auto& tr : c.t)
                if (std::abs(c.q / (c.b * tr)) > 1.0 - 2.0 * margin) return false;
            return q_level_pairs_ok(c.b, c.t, c.q, margin);
        });
    Inputs in = {{"q", d.q}, {"b", d.b}};
    for (int r = 0; r < 4; ++r) in.emplace_back("t" + std::to_string(r + 1), d.t[r]);
    std::vector<std::string> ids = {"b1-flip-invariance", "b1-trend-decreasing",
                                    "b1-trend-agreement"};
    std::vector<CaseRecord> out;
    out.push_back(checked(i, ids[0], spec, info, in, [&] {
        std::array<Complex, 4> flipped = d.t;
        flipped[2] = d.q / (d.b * d.t[2]);
        return std::pair<Complex, Complex>(b1_integral(d.b, d.t, d.q),
                                           b1_integral(d.b, flipped, d.q));
    }));
    // The trend records share the elliptic evaluations.
    Complex limit{}, e2{}, e3{};
    try {
        LimitExponents e{1.0, {0.0, 0.0, 0.0, 0.0}};
        limit = b1_integral(d.b, d.t, d.q);
        e2 = e_f4_at_exponents(d.b, d.t, e, EllipticBase(1e-2, d.q));
        e3 = e_f4_at_exponents(d.b, d.t, e, EllipticBase(1e-3, d.q));
    } catch (const Error& err) {
        auto failed = case_failed(i, {ids[1], ids[2]}, spec, info, in, err.code());
        out.insert(out.end(), failed.begin(), failed.end());
        return out;
    }
    double err2 = rel_between(e2, limit), err3 = rel_between(e3, limit);
    out.push_back(checked(i, ids[1], spec, info, in,
                          [&] {
                              return std::pair<Complex, Complex>(
                                  Complex(err3 / std::max(err2, 1e-300), 0.0), 0.0);
                          },
                          /*residual=*/true));
    out.push_back(checked(i, ids[2], spec, info, in, [&] {
        return std::pair<Complex, Complex>(e3, limit);
    }));
    return out;
}

std::vector<CaseRecord> run_limit_mid_case(int i, Sampler& s, const SuiteSpec& spec,
                                           const SuiteInfo& info) {
    double margin = spec.base_envelope.pole_margin;
    const char letter = "abcd"[i % 4];
    const double beta = 0.5, h = 0.25;
    LimitExponents e{beta, {}};
    switch (letter) {
        case 'a': e.tau = {0.0, 1.0 - beta, 0.0, 1.0 - beta}; break;
        case 'b': e.tau = {h, h, h, 3.0 * h}; break;
        case 'c': e.tau = {h, h, h, -h}; break;
        default: e.tau = {h + 0.075, h - 0.075, h + 0.075, h - 0.075}; break;
    }
    struct Draw {
        Complex q, b;
        std::array<Complex, 4> t;
    };
    Draw d = sample_until<Draw>(
        [&] {
            Draw c{draw_nome(s, spec.fixed_q, spec.base_envelope.max_abs_q),
                   s.annulus(0.2, 0.8),
                   {}};
            for (auto& tr : c.t) tr = s.annulus(0.2, 0.8);
            return c;
        },
        [&](const Draw& c) {
            for (const auto& tr : c.t)
                if (std::abs(c.q / (c.b * tr)) > 0.85) return false;
            if (!q_level_pairs_ok(c.b, c.t, c.q, margin)) return false;
            Complex arg;
            switch (letter) {
                case 'a': arg = c.t[0] * (c.q / (c.b * c.t[1])) * c.t[2] * (c.q / (c.b * c.t[3]));
                    break;
                case 'b': arg = std::pow(c.q, 3) / (std::pow(c.b, 3) * c.t[3] * c.t[3]); break;
                case 'c': arg = c.q * c.t[3] * c.t[3] / c.b; break;
                default: return true;
            }
            return q_zero_margin(arg, c.q) >= margin;
        });
    Inputs in = {{"q", d.q}, {"b", d.b}};
    for (int r = 0; r < 4; ++r) in.emplace_back("t" + std::to_string(r + 1), d.t[r]);
    for (int r = 0; r < 4; ++r) in.emplace_back("tau" + std::to_string(r + 1), Complex(e.tau[r]));
    std::string base_id = std::string("mid-case-") + letter;
    std::vector<std::string> ids = {base_id + "-trend-decreasing", base_id + "-trend-agreement"};
    std::vector<CaseRecord> out;
    Complex limit{}, e2{}, e3{};
    try {
        limit = mid_beta_limit(d.b, d.t, d.q, e);
        e2 = e_f4_at_exponents(d.b, d.t, e, EllipticBase(1e-2, d.q));
        e3 = e_f4_at_exponents(d.b, d.t, e, EllipticBase(1e-3, d.q));
    } catch (const Error& err) {
        return case_failed(i, ids, spec, info, in, err.code());
    }
    double err2 = rel_between(e2, limit), err3 = rel_between(e3, limit);
    out.push_back(checked(i, ids[0], spec, info, in,
                          [&] {
                              return std::pair<Complex, Complex>(
                                  Complex(err3 / std::max(err2, 1e-300), 0.0), 0.0);
                          },
                          /*residual=*/true));
    out.push_back(checked(i, ids[1], spec, info, in, [&] {
        return std::pair<Complex, Complex>(e3, limit);
    }));
    return out;
}

std::vector<CaseRecord> run_limit_b0_case(int i, Sampler& s, const SuiteSpec& spec,
                                          const SuiteInfo& info) {
    double margin = spec.base_envelope.pole_margin;
    int n_sat = i % 4;
    struct Draw {
        Complex q, b;
        std::array<Complex, 4> t;
        LimitExponents e;
        std::vector<Complex> u;
    };
    Draw d = sample_until<Draw>(
        [&] {
            Draw c{draw_nome(s, spec.fixed_q, spec.base_envelope.max_abs_q),
                   s.annulus(0.2, 0.8),
                   {},
                   {0.0, {}},
                   {}};
            for (auto& tr : c.t) tr = s.annulus(0.2, 0.8);
            double tau1 = -(0.1 + 0.35 * s.unit());
            c.e.tau[0] = tau1;
            double width = 1.0 + 2.0 * tau1;
            for (int r = 1; r < 4; ++r) {
                if (r <= n_sat) {
                    bool high = s.index(2) == 1;
                    c.e.tau[r] = high ? 1.0 + tau1 : -tau1;
                    c.u.push_back(high ? c.q / (c.b * c.t[r]) : c.t[r]);
                } else {
                    c.e.tau[r] = -tau1 + (0.05 + 0.9 * s.unit()) * width;
                }
            }
            return c;
        },
        [&](const Draw& c) {
            if (std::abs(c.q / c.b) > 1.0 - 2.0 * margin) return false;
            if (q_zero_margin(c.q / (c.b * c.b), c.q) < margin) return false;
            for (const auto& tr : c.t)
                if (std::abs(c.q / (c.b * tr)) > 1.0 - 2.0 * margin) return false;
            if (!q_level_pairs_ok(c.b, c.t, c.q, margin)) return false;
            for (const auto& ur : c.u)
                if (q_zero_margin(c.b * ur * c.t[0], c.q) < margin) return false;
            // Vertex presentation margins.
            Complex T2 = c.t[0] * c.t[1] * c.t[2] * c.t[3];
            if (q_zero_margin(c.b * c.b * T2 / c.q, c.q) < margin) return false;
            Complex root = c.t[0] * std::sqrt(c.q / c.b);
            if (q_zero_margin(root, c.q) < margin || q_zero_margin(-root, c.q) < margin)
                return false;
            for (int r = 1; r < 4; ++r)
                if (q_zero_margin(c.q * c.t[0] / c.t[r], c.q) < margin) return false;
            return true;
        });
    Inputs in = {{"q", d.q}, {"b", d.b}};
    for (int r = 0; r < 4; ++r) in.emplace_back("t" + std::to_string(r + 1), d.t[r]);
    for (int r = 0; r < 4; ++r)
        in.emplace_back("tau" + std::to_string(r + 1), Complex(d.e.tau[r]));
    for (size_t k = 0; k < d.u.size(); ++k)
        in.emplace_back("u" + std::to_string(k + 1), d.u[k]);
    std::vector<CaseRecord> out;
    out.push_back(checked(i, "edge-equals-duality", spec, info, in, [&] {
        return std::pair<Complex, Complex>(limit_b0_edge(d.b, d.t, d.q, d.e),
                                           duality_integral(d.b, d.t[0], d.u, d.q));
    }));
    out.push_back(checked(i, "duality-integral-series", spec, info, in, [&] {
        return std::pair<Complex, Complex>(duality_integral(d.b, d.t[0], d.u, d.q),
                                           duality_series(d.b, d.t[0], d.u, d.q));
    }));
    out.push_back(checked(i, "edge-vertex-14W13", spec, info, in, [&] {
        LimitExponents vert{0.0, {-0.5, 0.5, 0.5, 0.5}};
        return std::pair<Complex, Complex>(limit_b0_edge(d.b, d.t, d.q, vert),
                                           vertex_w14_13(d.b, d.t, d.q));
    }));
    out.push_back(checked(i, "cube-vertex-14W13", spec, info, in, [&] {
        LimitExponents cube{0.0, {0.0, 0.0, 0.0, 0.0}};
        return std::pair<Complex, Complex>(limit_b0_interior(d.b, d.t, d.q, cube),
                                           w14_13_value(d.b, d.t, d.q));
    }));
    return out;
}

// ---- SERIES_REPS ----

std::vector<CaseRecord> run_series_case(int i, Sampler& s, const SuiteSpec& spec,
                                        const SuiteInfo& info) {
    double margin = spec.base_envelope.pole_margin;
    struct Draw {
        Complex q, b;
        std::array<Complex, 4> t;
        double x, y;
    };
    Draw d = sample_until<Draw>(
        [&] {
            Draw c{draw_nome(s, spec.fixed_q, spec.base_envelope.max_abs_q),
                   s.annulus(0.2, 0.5),
                   {},
                   0.2 + 0.6 * s.unit(),
                   0.2 + 0.6 * s.unit()};
            for (auto& tr : c.t) tr = s.annulus(0.2, 0.8);
            return c;
        },
        [&](const Draw& c) {
            Complex T2 = c.t[0] * c.t[1] * c.t[2] * c.t[3];
            if (q_zero_margin(c.b * c.b * T2 / c.q, c.q) < margin) return false;
            for (int r = 0; r < 4; ++r)
                for (int u = r + 1; u < 4; ++u)
                    if (q_zero_margin(c.t[r] * c.t[u], c.q) < margin) return false;
            return true;
        });
    Inputs in = {{"q", d.q}, {"b", d.b}};
    for (int r = 0; r < 4; ++r) in.emplace_back("t" + std::to_string(r + 1), d.t[r]);
    in.emplace_back("x", Complex(d.x));
    in.emplace_back("y", Complex(d.y));
    std::vector<CaseRecord> out;
    out.push_back(checked(i, "vertex-14W13", spec, info, in, [&] {
        return std::pair<Complex, Complex>(b2_integral(d.b, d.t, d.q),
                                           w14_13_value(d.b, d.t, d.q));
    }));
    out.push_back(checked(i, "edge-4phi3", spec, info, in, [&] {
        LimitExponents e{0.0, {0.0, 0.0, 0.0, d.x}};
        std::array<Complex, 3> t3 = {d.t[0], d.t[1], d.t[2]};
        return std::pair<Complex, Complex>(limit_b0_interior(d.b, d.t, d.q, e),
                                           series_rep_edge_4phi3(d.b, t3, d.q));
    }));
    out.push_back(checked(i, "square-2phi1", spec, info, in, [&] {
        LimitExponents e{0.0, {0.0, 0.0, d.x, d.y}};
        return std::pair<Complex, Complex>(
            limit_b0_interior(d.b, d.t, d.q, e),
            series_rep_octahedron_2phi1(d.b, d.t[0], d.t[1], d.q));
    }));
    out.push_back(checked(i, "interior-constant", spec, info, in,
                          [&] {
                              return std::pair<Complex, Complex>(
                                  Complex(interior_identity_check(d.b, d.t[0], d.q), 0.0), 0.0);
                          },
                          /*residual=*/true));
    out.push_back(checked(i, "w8-7-evaluation", spec, info, in,
                          [&] {
                              return std::pair<Complex, Complex>(
                                  Complex(w8_7_evaluation_check(d.b, d.t[0], d.q), 0.0), 0.0);
                          },
                          /*residual=*/true));
    return out;
}

std::vector<CaseRecord> run_w87_case(int i, Sampler& s, const SuiteSpec& spec,
                                     const SuiteInfo& info) {
    double margin = spec.base_envelope.pole_margin;
    struct Draw {
        Complex q, b, t;
    };
    Draw d = sample_until<Draw>(
        [&] {
            return Draw{draw_nome(s, spec.fixed_q, spec.base_envelope.max_abs_q),
                        s.annulus(0.2, 0.8), s.annulus(0.2, 0.8)};
        },
        [&](const Draw& c) {
            return q_zero_margin(c.b * c.b * c.b * c.t * c.t, c.q) >= margin &&
                   q_zero_margin(c.b * c.b * c.t * c.t / c.q, c.q) >= margin;
        });
    Inputs in = {{"q", d.q}, {"b", d.b}, {"t", d.t}};
    std::vector<CaseRecord> out;
    out.push_back(checked(i, "w8-7-evaluation", spec, info, in,
                          [&] {
                              return std::pair<Complex, Complex>(
                                  Complex(w8_7_evaluation_check(d.b, d.t, d.q), 0.0), 0.0);
                          },
                          /*residual=*/true));
    return out;
}

std::vector<CaseRecord> run_theta_case(int i, Sampler& s, const SuiteSpec& spec,
                                       const SuiteInfo& info) {
    double margin = spec.base_envelope.pole_margin;
    struct Draw {
        Complex q, b, w, z;
    };
    // Denominator thetas must stay away from their zero lattices, and the
    // final addition must be well conditioned: the two summands can dwarf
    // their sum, which amplifies roundoff past any fixed tolerance.
    Draw d = sample_until<Draw>(
        [&] {
            return Draw{draw_nome(s, spec.fixed_q, spec.base_envelope.max_abs_q),
                        s.annulus(0.2, 0.8), s.annulus(0.2, 0.8), s.annulus(0.2, 0.8)};
        },
        [&](const Draw& c) {
            for (Complex x : {c.w * c.z, c.w / c.z, c.z * c.z, c.b})
                if (theta_zero_margin(x, c.q) < margin) return false;
            auto half = [&](Complex zz) {
                return theta(c.b * c.w * zz, c.q) * theta(c.w / (c.b * zz), c.q) *
                       theta(c.b / (zz * zz), c.q) /
                       (theta(c.w * zz, c.q) * theta(c.w / zz, c.q) *
                        theta(1.0 / (zz * zz), c.q));
            };
            double scale = std::abs(half(c.z)) + std::abs(half(1.0 / c.z));
            return scale <= 30.0 * std::abs(theta(c.b * c.b, c.q) / theta(c.b, c.q));
        });
    Complex q = d.q, b = d.b, w = d.w, z = d.z;
    Inputs in = {{"q", q}, {"b", b}, {"w", w}, {"z", z}};
    std::vector<CaseRecord> out;
    out.push_back(checked(i, "theta-addition", spec, info, in,
                          [&] {
                              return std::pair<Complex, Complex>(
                                  Complex(theta_addition_residual(b, w, z, q), 0.0), 0.0);
                          },
                          /*residual=*/true));
    return out;
}

// ---- GROUP_FACTS ----

int element_order(const GroupElement& g) {
    GroupElement acc = g;
    for (int n = 1; n <= 24; ++n) {
        if (acc == GroupElement::identity()) return n;
        acc = g * acc;
    }
    return -1;
}

std::vector<CaseRecord> run_group_facts(const SuiteSpec& spec, const SuiteInfo& info) {
    std::vector<CaseRecord> out;
    auto fact = [&](const std::string& id, auto compute, double expected) {
        out.push_back(checked(int(out.size()), id, spec, info, {}, [&] {
            return std::pair<Complex, Complex>(Complex(double(compute()), 0.0),
                                               Complex(expected, 0.0));
        }));
    };
    fact("root-count", [] { return f4_roots().size(); }, 48.0);
    fact("group-order", [] { return f4_group().size(); }, 1152.0);
    fact("b4-order", [] { return b4_subgroup().size(); }, 384.0);
    fact("b4-index", [] { return f4_group().size() / b4_subgroup().size(); }, 3.0);
    // Coxeter matrix of the simple system: count the (i, j) order mismatches.
    fact("coxeter-matrix",
         [] {
             const int expected[4][4] = {
                 {1, 3, 2, 2}, {3, 1, 4, 2}, {2, 4, 1, 3}, {2, 2, 3, 1}};
             const auto& gens = simple_reflections();
             int mismatches = 0;
             for (int a = 0; a < 4; ++a)
                 for (int c = 0; c < 4; ++c)
                     if (element_order(gens[a] * gens[c]) != expected[a][c]) ++mismatches;
             return mismatches;
         },
         0.0);
    return out;
}

}  // namespace

const std::vector<std::string>& suite_names() { return registry_order(); }

SuiteSpec default_spec(const std::string& name) {
    auto it = registry().find(name);
    if (it == registry().end()) fail(ErrorCode::UnknownSuite, "no suite named " + name);
    SuiteSpec spec;
    spec.name = name;
    spec.n_points = it->second.n_points;
    spec.seed = it->second.seed;
    spec.tolerances = it->second.tolerances;
    return spec;
}

VerificationReport run_suite(const SuiteSpec& spec) {
    auto it = registry().find(spec.name);
    if (it == registry().end()) fail(ErrorCode::UnknownSuite, "no suite named " + spec.name);
    const SuiteInfo& info = it->second;
    if (spec.n_points < 1) fail(ErrorCode::Domain, "n_points must be >= 1");
    if (!(spec.base_envelope.pole_margin > 0.0) || spec.base_envelope.pole_margin >= 0.5)
        fail(ErrorCode::Domain, "pole margin must lie in (0, 0.5)");
    for (double cap : {spec.base_envelope.max_abs_p, spec.base_envelope.max_abs_q})
        if (!(cap >= 0.2) || !(cap < 1.0))
            fail(ErrorCode::Domain, "nome modulus cap must lie in [0.2, 1)");

    auto t0 = std::chrono::steady_clock::now();
    VerificationReport report;
    report.suite = spec.name;
    report.seed = spec.seed;
    Sampler s(spec.seed);

    if (spec.name == "GROUP_FACTS") {
        report.cases = run_group_facts(spec, info);
    } else {
        for (int i = 0; i < spec.n_points; ++i) {
            std::vector<CaseRecord> recs;
            if (spec.name == "GAMMA_RELATIONS") recs = run_gamma_case(i, s, spec, info);
            else if (spec.name == "DUPLICATION") recs = run_duplication_case(i, s, spec, info);
            else if (spec.name == "E0_EVAL") recs = run_e0_case(i, s, spec, info);
            else if (spec.name == "E7_MOVE") recs = run_e7_case(i, s, spec, info);
            else if (spec.name == "F4_MAIN") recs = run_f4_main_case(i, s, spec, info);
            else if (spec.name == "F4_ORBIT") recs = run_f4_orbit_case(i, s, spec, info);
            else if (spec.name == "LIMIT_B1") recs = run_limit_b1_case(i, s, spec, info);
            else if (spec.name == "LIMIT_MID") recs = run_limit_mid_case(i, s, spec, info);
            else if (spec.name == "LIMIT_B0") recs = run_limit_b0_case(i, s, spec, info);
            else if (spec.name == "SERIES_REPS") recs = run_series_case(i, s, spec, info);
            else if (spec.name == "W8_7") recs = run_w87_case(i, s, spec, info);
            else if (spec.name == "THETA_ADDITION") recs = run_theta_case(i, s, spec, info);
            report.cases.insert(report.cases.end(), recs.begin(), recs.end());
        }
    }

    report.summary.n_cases = int(report.cases.size());
    for (const auto& c : report.cases) {
        if (c.pass) ++report.summary.n_pass;
        if (!c.error.empty()) ++report.summary.n_error;
        else report.summary.max_rel_err = std::max(report.summary.max_rel_err, c.rel_err);
    }
    report.summary.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

// ---- Serialization ----

namespace {

nlohmann::json complex_to_json(Complex v) { return nlohmann::json::array({v.real(), v.imag()}); }

Complex complex_from_json(const nlohmann::json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

std::string report_to_json(const VerificationReport& report) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["suite"] = report.suite;
    j["seed"] = report.seed;
    nlohmann::json cases = nlohmann::json::array();
    for (const auto& c : report.cases) {
        nlohmann::json jc;
        jc["index"] = c.index;
        jc["identity"] = c.identity;
        nlohmann::json inputs = nlohmann::json::array();
        for (const auto& [name, value] : c.inputs) {
            nlohmann::json ji;
            ji["name"] = name;
            ji["value"] = complex_to_json(value);
            inputs.push_back(ji);
        }
        jc["inputs"] = inputs;
        jc["lhs"] = complex_to_json(c.lhs);
        jc["rhs"] = complex_to_json(c.rhs);
        jc["abs_err"] = c.abs_err;
        jc["rel_err"] = c.rel_err;
        jc["tolerance"] = c.tolerance;
        jc["n_used"] = c.n_used;
        jc["pass"] = c.pass;
        jc["error"] = c.error;
        cases.push_back(jc);
    }
    j["cases"] = cases;
    j["summary"] = {{"n_cases", report.summary.n_cases},
                    {"n_pass", report.summary.n_pass},
                    {"n_error", report.summary.n_error},
                    {"max_rel_err", report.summary.max_rel_err},
                    {"wall_time_seconds", report.summary.wall_time_seconds}};
    return j.dump(2) + "\n";
}

VerificationReport report_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Io, std::string("cannot parse report: ") + e.what());
    }
    try {
        VerificationReport r;
        r.suite = j.at("suite").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& jc : j.at("cases")) {
            CaseRecord c;
            c.index = jc.at("index").get<int>();
            c.identity = jc.at("identity").get<std::string>();
            for (const auto& ji : jc.at("inputs"))
                c.inputs.emplace_back(ji.at("name").get<std::string>(),
                                      complex_from_json(ji.at("value")));
            c.lhs = complex_from_json(jc.at("lhs"));
            c.rhs = complex_from_json(jc.at("rhs"));
            c.abs_err = jc.at("abs_err").get<double>();
            c.rel_err = jc.at("rel_err").get<double>();
            c.tolerance = jc.at("tolerance").get<double>();
            c.n_used = jc.at("n_used").get<long>();
            c.pass = jc.at("pass").get<bool>();
            c.error = jc.at("error").get<std::string>();
            r.cases.push_back(std::move(c));
        }
        const auto& js = j.at("summary");
        r.summary.n_cases = js.at("n_cases").get<int>();
        r.summary.n_pass = js.at("n_pass").get<int>();
        r.summary.n_error = js.at("n_error").get<int>();
        r.summary.max_rel_err = js.at("max_rel_err").get<double>();
        r.summary.wall_time_seconds = js.at("wall_time_seconds").get<double>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Io, std::string("report fields missing or mistyped: ") + e.what());
    }
}

std::string report_to_text(const VerificationReport& report) {
    std::ostringstream os;
    os << "suite " << report.suite << " seed " << report.seed << "\n";
    char line[256];
    for (const auto& c : report.cases) {
        if (c.error.empty()) {
            std::snprintf(line, sizeof line, "  case %3d %-28s rel %.3e tol %.1e %s\n", c.index,
                          c.identity.c_str(), c.rel_err, c.tolerance,
                          c.pass ? "pass" : "FAIL");
        } else {
            std::snprintf(line, sizeof line, "  case %3d %-28s ERROR %s\n", c.index,
                          c.identity.c_str(), c.error.c_str());
        }
        os << line;
    }
    std::snprintf(line, sizeof line,
                  "summary: pass %d/%d, errors %d, max rel %.3e, wall %.2f s\n",
                  report.summary.n_pass, report.summary.n_cases, report.summary.n_error,
                  report.summary.max_rel_err, report.summary.wall_time_seconds);
    os << line;
    return os.str();
}

void emit_report(const VerificationReport& report, ReportFormat format,
                 const std::string& destination) {
    std::string body =
        format == ReportFormat::Json ? report_to_json(report) : report_to_text(report);
    if (destination == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(destination);
    if (!out.good()) fail(ErrorCode::Io, "cannot open report destination: " + destination);
    out << body;
    if (!out.good()) fail(ErrorCode::Io, "write failed: " + destination);
}

}  // namespace ellf4
