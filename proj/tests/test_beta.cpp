#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "approx.hpp"
#include "ellf4/base.hpp"
#include "ellf4/beta.hpp"
#include "ellf4/errors.hpp"
#include "ellf4/quadrature.hpp"
#include "ellf4/series.hpp"
#include "ellf4/special.hpp"
#include "ellf4/weyl.hpp"

using ellf4::BetaParams;
using ellf4::CircleContour;
using ellf4::Complex;
using ellf4::EllipticBase;
using ellf4::Error;
using ellf4::ErrorCode;
using ellf4::F4IntegralParams;
using ellf4::F4Point;
using ellf4::GroupElement;
using ellf4::LimitCase;
using ellf4::LimitExponents;
using ellf4::TruncationPolicy;
using testutil::rel_err;

namespace {

template <typename F>
ErrorCode thrown_code(F&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an ellf4::Error");
    return ErrorCode::Domain;
}

Complex qp(Complex x, Complex q) { return ellf4::qpoch_inf(x, q); }

}  // namespace

// Oracle: the bare kernel quadrature against the closed Askey-Wilson style
// evaluation (u1u2u3u4;q) / prod_{r<s}(u_r u_s;q), built from raw parts only.
TEST_CASE("kernel quadrature reproduces the closed four-parameter evaluation") {
    const Complex q(0.2, 0.0);
    const std::array<Complex, 4> u = {Complex(0.55, 0.0), Complex(0.4, 0.12),
                                      Complex(0.3, -0.2), Complex(0.45, 0.0)};
    auto f = [&](Complex z) {
        Complex val = ellf4::qpoch_pair(1.0, z * z, q);
        for (const Complex& ur : u) val /= ellf4::qpoch_pair(ur, z, q);
        return val;
    };
    const Complex integral = ellf4::integrate_circle(f, CircleContour{1.0}).value;
    const Complex lhs = qp(q, q) / 2.0 * integral;

    Complex rhs = qp(u[0] * u[1] * u[2] * u[3], q);
    for (int r = 0; r < 4; ++r)
        for (int s = r + 1; s < 4; ++s) rhs /= qp(u[r] * u[s], q);
    CHECK(rel_err(lhs, rhs) <= 1e-9);
}

TEST_CASE("order-zero integral matches its product evaluation") {
    const EllipticBase base(0.1, 0.15);
    const std::vector<Complex> leading = {Complex(0.40, 0.0), std::polar(0.50, 0.2),
                                          std::polar(0.45, -0.35), std::polar(0.55, 0.3),
                                          std::polar(0.35, -0.2)};
    const BetaParams params = BetaParams::balanced(0, leading, base);
    REQUIRE(params.t.size() == 6);

    Complex prod = 1.0;
    for (const Complex& ti : params.t) prod *= ti;
    CHECK(rel_err(prod, base.p() * base.q()) <= 1e-13);

    std::array<Complex, 6> t6;
    std::copy(params.t.begin(), params.t.end(), t6.begin());
    const Complex lhs = ellf4::e_m(params, base);
    const Complex rhs = ellf4::e0_product(t6, base);
    CHECK(rel_err(lhs, rhs) <= 1e-9);

    // The value only sees the unordered tuple modulo a global sign.
    BetaParams swapped = params;
    std::swap(swapped.t[0], swapped.t[3]);
    CHECK(rel_err(ellf4::e_m(swapped, base), lhs) <= 1e-10);
    BetaParams negated = params;
    for (Complex& ti : negated.t) ti = -ti;
    CHECK(rel_err(ellf4::e_m(negated, base), lhs) <= 1e-10);

    CHECK(thrown_code([&] { BetaParams::balanced(0, {Complex(0.5)}, base); }) ==
          ErrorCode::Domain);
}

TEST_CASE("order-one transformation holds and is trivial at the unit move") {
    const EllipticBase base(0.1, 0.15);
    const std::array<Complex, 8> t = {Complex(0.45, 0.0), std::polar(0.5, 0.25),
                                      std::polar(0.4, -0.3), std::polar(0.55, 0.15),
                                      Complex(0.3, 0.0),    std::polar(0.28, -0.2),
                                      std::polar(0.25, 0.1), Complex(0.0, 0.0)};
    const auto [lhs, rhs] = ellf4::e1_transform_pair(t, base);
    CHECK(rel_err(lhs, rhs) <= 1e-8);

    // First-four product equal to pq forces v = 1: both sides are the same tuple.
    const std::array<Complex, 8> fixed = {Complex(0.4), Complex(0.5), Complex(0.3),
                                          Complex(0.25), Complex(0.45), Complex(0.5),
                                          Complex(0.35), Complex(0.0)};
    const auto [lhs2, rhs2] = ellf4::e1_transform_pair(fixed, base);
    CHECK(rel_err(lhs2, rhs2) <= 1e-14);
}

TEST_CASE("both evaluation routes of the f4 integral agree") {
    const F4IntegralParams P{Complex(0.5), {Complex(0.6), Complex(0.55), Complex(0.5),
                                            Complex(0.45)}, EllipticBase(0.1, 0.15)};
    CHECK(rel_err(ellf4::e_f4_def(P), ellf4::e_f4_explicit(P)) <= 1e-8);
}

TEST_CASE("normalization refuses parameters on the denominator zero lattice") {
    const EllipticBase base(0.1, 0.15);
    // b t1^2 = 1 exactly.
    const F4IntegralParams hit1{Complex(1.0 / 1.44),
                                {Complex(1.2), Complex(0.5), Complex(0.45), Complex(0.4)},
                                base};
    CHECK(thrown_code([&] { ellf4::e_f4_explicit(hit1); }) == ErrorCode::DenominatorZero);
    CHECK(thrown_code([&] { ellf4::e_f4_def(hit1); }) == ErrorCode::DenominatorZero);
    // p^2 q^2 / (b t1^2) = 1 exactly.
    const double pq = 0.1 * 0.15;
    const F4IntegralParams hit2{Complex(0.5),
                                {Complex(pq * std::sqrt(2.0)), Complex(0.5), Complex(0.45),
                                 Complex(0.4)},
                                base};
    CHECK(thrown_code([&] { ellf4::e_f4_explicit(hit2); }) == ErrorCode::DenominatorZero);
}

TEST_CASE("main transformation fixes the self-dual point and a generic tuple") {
    // Self-dual point: p = q, b = q^{3/4}, t = (q^{3/4}, q^{3/4}, q^{1/2}, q^{1/2}).
    const double q0 = 0.3;
    const EllipticBase self_base(q0, q0);
    const Complex b0 = std::pow(q0, 0.75);
    const F4IntegralParams self{b0, {b0, b0, std::sqrt(Complex(q0)), std::sqrt(Complex(q0))},
                                self_base};
    const Complex v0 = ellf4::v_parameter(self);
    CHECK(std::min(std::abs(v0 - 1.0), std::abs(v0 + 1.0)) <= 1e-12);
    CHECK(std::isfinite(std::abs(ellf4::e_f4_explicit(self))));

    const EllipticBase base(0.12, 0.2);
    const F4IntegralParams P{Complex(0.45),
                             {Complex(0.5), std::polar(0.42, 0.2), std::polar(0.58, -0.15),
                              Complex(0.47)},
                             base};
    const Complex v = ellf4::v_parameter(P);
    F4IntegralParams moved = P;
    for (Complex& ti : moved.t) ti *= v;
    CHECK(rel_err(ellf4::e_f4_explicit(moved), ellf4::e_f4_explicit(P)) <= 1e-8);

    // Applying the move twice undoes it: v(tv) = 1/v up to the global sign.
    const Complex v2 = ellf4::v_parameter(moved);
    CHECK(std::min(std::abs(v2 * v - 1.0), std::abs(v2 * v + 1.0)) <= 1e-12);
}

TEST_CASE("group images of the parameter tuple leave the value fixed") {
    const EllipticBase base(0.1, 0.15);
    const Complex b(0.5);
    const std::array<Complex, 4> t = {Complex(0.6), Complex(0.55), Complex(0.5),
                                      Complex(0.45)};
    const Complex A = base.p() * base.q() / b;
    const Complex reference = ellf4::e_f4_explicit({b, t, base});

    const auto& s = ellf4::simple_reflections();
    const std::vector<std::vector<int>> words = {{3}, {1, 3}, {3, 0, 2}};
    for (const auto& word : words) {
        F4Point pt{t, A};
        for (int i : word) pt = ellf4::mult_action(s[i], pt);
        CHECK(std::abs(pt.A - A) <= 1e-14);
        for (const Complex& zi : pt.z) {
            REQUIRE(std::abs(zi) < 0.95);
            REQUIRE(std::abs(zi) > 0.04);
        }
        CHECK(rel_err(ellf4::e_f4_explicit({b, pt.z, base}), reference) <= 1e-8);
    }
}

TEST_CASE("vertex integral equals its series form and carries the balanced symmetry") {
    const Complex q(0.2), b(0.4);
    const std::array<Complex, 4> t = {Complex(0.55), std::polar(0.5, 0.1),
                                      std::polar(0.45, -0.2), Complex(0.6)};
    const Complex integral = ellf4::b2_integral(b, t, q);
    CHECK(rel_err(integral, ellf4::w14_13_value(b, t, q)) <= 1e-8);

    const Complex T = std::sqrt(t[0] * t[1] * t[2] * t[3]);
    const std::array<Complex, 4> reflected = {T / t[0], T / t[1], T / t[2], T / t[3]};
    CHECK(rel_err(ellf4::b2_integral(b, reflected, q), integral) <= 1e-8);

    CHECK(rel_err(ellf4::b2_integral(Complex(0.0), t, q), qp(t[0] * t[1] * t[2] * t[3], q)) <=
          1e-9);
}

TEST_CASE("edge integral at the half-exponent vertex equals the vertex series") {
    const Complex q(0.2), b(0.45);
    const std::array<Complex, 4> t = {Complex(0.6), Complex(0.5), Complex(0.55),
                                      Complex(0.65)};
    const LimitExponents e{0.0, {-0.5, 0.5, 0.5, 0.5}};
    CHECK(rel_err(ellf4::limit_b0_edge(b, t, q, e), ellf4::vertex_w14_13(b, t, q)) <= 1e-8);
}

TEST_CASE("duality between the one-dimensional integral and its series") {
    const Complex q(0.2), b(0.5), t1(0.55);
    std::vector<Complex> u;
    const std::vector<Complex> pool = {Complex(0.6), std::polar(0.45, 0.3),
                                       std::polar(0.5, -0.2)};
    for (int k = 0; k <= 3; ++k) {
        const Complex lhs = ellf4::duality_integral(b, t1, u, q);
        const Complex rhs = ellf4::duality_series(b, t1, u, q);
        CHECK(rel_err(lhs, rhs) <= 1e-8);
        if (k == 0) CHECK(rel_err(lhs, qp(q * b * b, q)) <= 1e-9);
        if (k < 3) u.push_back(pool[k]);
    }
}

TEST_CASE("edge limit reduces to the duality integral family") {
    const Complex q(0.2), b(0.5);
    const std::array<Complex, 4> t = {Complex(0.55), Complex(0.5), Complex(0.45),
                                      Complex(0.6)};

    // No facet saturation: every parameter drops out.
    const LimitExponents generic{0.0, {-0.2, 0.3, 0.5, 0.7}};
    CHECK(rel_err(ellf4::limit_b0_edge(b, t, q, generic), qp(q * b * b, q)) <= 1e-8);

    // One saturation on each side of the window.
    const LimitExponents two{0.0, {-0.25, 0.25, 0.4, 0.75}};
    const std::vector<Complex> u = {t[1], q / (b * t[3])};
    CHECK(rel_err(ellf4::limit_b0_edge(b, t, q, two),
                  ellf4::duality_series(b, t[0], u, q)) <= 1e-8);

    // Mirrored window: tau_1 > 1 routes through t_1 -> q/(b t_1).
    const LimitExponents pos{0.0, {1.25, 0.25, 0.4, 0.75}};
    const std::vector<Complex> upos = {t[1], q / (b * t[3])};
    CHECK(rel_err(ellf4::limit_b0_edge(b, t, q, pos),
                  ellf4::duality_series(b, q / (b * t[0]), upos, q)) <= 1e-8);

    // The offending exponent may sit at any coordinate.
    const LimitExponents shuffled{0.0, {0.3, -0.2, 0.5, 0.7}};
    CHECK(rel_err(ellf4::limit_b0_edge(b, t, q, shuffled), qp(q * b * b, q)) <= 1e-8);
}

TEST_CASE("mid-range limits take their printed closed forms") {
    const Complex q(0.2), b(0.4);
    const std::array<Complex, 4> t = {Complex(0.5), Complex(0.45), Complex(0.6),
                                      Complex(0.55)};

    const Complex mixed = ellf4::mid_beta_limit(
        b, t, q, {0.5, {0.0, 0.0, 0.5, 0.5}});
    CHECK(rel_err(mixed, qp(t[0] * t[1] * (q / (b * t[2])) * (q / (b * t[3])), q)) <= 1e-12);

    const Complex permuted = ellf4::mid_beta_limit(
        b, t, q, {0.5, {0.5, 0.0, 0.0, 0.5}});
    CHECK(rel_err(permuted, qp(t[1] * t[2] * (q / (b * t[0])) * (q / (b * t[3])), q)) <= 1e-12);

    const Complex corner = ellf4::mid_beta_limit(b, t, q, {0.5, {0.0, 0.0, 0.0, 0.0}});
    CHECK(rel_err(corner, qp(t[0] * t[1] * t[2] * t[3], q)) <= 1e-12);

    const Complex stretched = ellf4::mid_beta_limit(
        b, t, q, {0.5, {0.25, 0.25, 0.25, 0.75}});
    CHECK(rel_err(stretched, qp(q * q * q / (b * b * b * t[3] * t[3]), q)) <= 1e-12);
    const Complex stretched0 = ellf4::mid_beta_limit(
        b, t, q, {0.5, {0.75, 0.25, 0.25, 0.25}});
    CHECK(rel_err(stretched0, qp(q * q * q / (b * b * b * t[0] * t[0]), q)) <= 1e-12);

    const Complex dipped = ellf4::mid_beta_limit(
        b, t, q, {0.5, {0.25, 0.25, 0.25, -0.25}});
    CHECK(rel_err(dipped, qp(q * t[3] * t[3] / b, q)) <= 1e-12);

    const Complex interior = ellf4::mid_beta_limit(
        b, t, q, {0.5, {0.1, 0.2, 0.3, 0.15}});
    CHECK(std::abs(interior - 1.0) <= 1e-15);

    CHECK(thrown_code([&] {
              ellf4::mid_beta_limit(b, t, q, {0.5, {0.9, 0.9, 0.2, 0.2}});
          }) == ErrorCode::OutsidePolytope);
    // Facet points that are not pattern vertices have no printed value.
    CHECK(thrown_code([&] {
              ellf4::mid_beta_limit(b, t, q, {0.5, {0.0, 0.0, 0.3, 0.2}});
          }) == ErrorCode::OutsidePolytope);
    CHECK(thrown_code([&] {
              ellf4::mid_beta_limit(b, t, q, {0.0, {0.0, 0.0, 0.0, 0.0}});
          }) == ErrorCode::Domain);
}

TEST_CASE("base limit integral realizes each boundary series") {
    const Complex q(0.2), b(0.3);

    const std::array<Complex, 4> tv = {Complex(0.5), Complex(0.45), Complex(0.4),
                                       Complex(0.55)};
    CHECK(rel_err(ellf4::limit_b0_interior(b, tv, q, {0.0, {0.0, 0.0, 0.0, 0.0}}),
                  ellf4::b2_integral(b, tv, q)) <= 1e-12);

    // Two pinned coordinates, two inert ones.
    const std::array<Complex, 4> tsq = {Complex(0.5), Complex(0.45), Complex(0.3),
                                        Complex(0.35)};
    CHECK(rel_err(ellf4::limit_b0_interior(b, tsq, q, {0.0, {0.0, 0.0, 0.4, 0.7}}),
                  ellf4::series_rep_octahedron_2phi1(b, tsq[0], tsq[1], q)) <= 1e-8);

    // Three pinned coordinates.
    const std::array<Complex, 4> ted = {Complex(0.5), Complex(0.45), Complex(0.4),
                                        Complex(0.3)};
    CHECK(rel_err(ellf4::limit_b0_interior(b, ted, q, {0.0, {0.0, 0.0, 0.0, 0.5}}),
                  ellf4::series_rep_edge_4phi3(b, {ted[0], ted[1], ted[2]}, q)) <= 1e-8);

    // One pinned coordinate: the value is parameter independent.
    CHECK(ellf4::interior_identity_check(b, Complex(0.5), q) <= 1e-8);
    CHECK(ellf4::interior_identity_check(b, Complex(0.35), q) <= 1e-8);
    CHECK(ellf4::interior_identity_check(Complex(0.0), Complex(0.5), q) <= 1e-9);

    // No pinned coordinate: the bare kernel identity.
    CHECK(rel_err(ellf4::limit_b0_interior(b, tv, q, {0.0, {0.3, 0.5, 0.55, 0.6}}),
                  qp(q * b * b, q)) <= 1e-8);

    // Interior coordinates drop out entirely.
    const std::array<Complex, 4> ta = {Complex(0.5), Complex(0.45), Complex(0.2),
                                       Complex(0.3)};
    const std::array<Complex, 4> tb = {Complex(0.5), Complex(0.45), Complex(0.66),
                                       std::polar(0.12, 0.4)};
    const LimitExponents mixed{0.0, {0.0, 0.0, 0.3, 0.8}};
    CHECK(rel_err(ellf4::limit_b0_interior(b, ta, q, mixed),
                  ellf4::limit_b0_interior(b, tb, q, mixed)) <= 1e-12);

    // A saturated top exponent is the reflected bottom one.
    const Complex bf(0.4);
    const std::array<Complex, 4> tf = {Complex(0.5), Complex(0.45), Complex(0.55),
                                       Complex(0.6)};
    const std::array<Complex, 4> tf_flip = {tf[0], tf[1], tf[2], q / (bf * tf[3])};
    CHECK(rel_err(ellf4::limit_b0_interior(bf, tf, q, {0.0, {0.0, 0.0, 0.0, 1.0}}),
                  ellf4::b2_integral(bf, tf_flip, q)) <= 1e-8);

    CHECK(thrown_code([&] {
              ellf4::limit_b0_interior(b, tv, q, {0.0, {-0.2, 0.3, 0.5, 0.7}});
          }) == ErrorCode::OutsidePolytope);
}

TEST_CASE("very well poised eight-term evaluation") {
    const Complex q(0.25), b(0.35), t(0.6);
    CHECK(ellf4::w8_7_evaluation_check(b, t, q) <= 1e-10);
    CHECK(ellf4::w8_7_evaluation_check(b, Complex(0.0), q) <= 1e-12);
    CHECK(ellf4::w8_7_evaluation_check(Complex(0.45), Complex(0.3), Complex(0.15)) <= 1e-10);

    // Termwise agreement between the generic very-well-poised term and the
    // combined double-step form for k <= 6.
    const Complex a = b * b * t * t / q;
    const Complex rb = std::sqrt(b), rbq = std::sqrt(b / q);
    const std::array<Complex, 5> prm = {t * rb, -t * rb, t * rbq, -t * rbq, b};
    Complex sum_display = 0.0;
    for (int k = 0; k <= 60; ++k) {
        const Complex zk = std::pow(b * q, k);
        Complex vwp = (1.0 - a * std::pow(q, 2 * k)) / (1.0 - a) *
                      ellf4::qpoch_finite(a, q, k) / ellf4::qpoch_finite(q, q, k) * zk;
        for (const Complex& pi : prm)
            vwp *= ellf4::qpoch_finite(pi, q, k) / ellf4::qpoch_finite(a * q / pi, q, k);
        const Complex display =
            (1.0 - b * b * t * t * std::pow(q, 2 * k) / q) / (1.0 - b * b * t * t / q) *
            ellf4::qpoch_finite(b * b * t * t / q, q, k) * ellf4::qpoch_finite(b, q, k) *
            ellf4::qpoch_finite(b * t * t / q, q, 2 * k) /
            (ellf4::qpoch_finite(q, q, k) * ellf4::qpoch_finite(b * t * t, q, k) *
             ellf4::qpoch_finite(b * b * b * t * t, q, 2 * k)) *
            zk;
        if (k <= 6) CHECK(rel_err(vwp, display) <= 1e-12);
        sum_display += display;
    }
    const Complex summed = ellf4::sum_vwp_w(a, {prm.begin(), prm.end()}, q, b * q).value;
    CHECK(rel_err(summed, sum_display) <= 1e-11);
}

// Near a terminating specialization the vertex integral loses its separating
// circle; its analytic continuation is the principal circle plus residue
// corrections for the family members that crossed.  The continued value must
// match the (now nearly terminating) series form.
TEST_CASE("terminating specialization matches the continued vertex integral") {
    const Complex q(0.2), b(0.45);
    const Complex t1(0.5), t2(0.45), t3(0.55);
    const double eps = 1e-4;
    for (int n = 1; n <= 2; ++n) {
        const Complex tc4 = std::pow(0.2, -n) * (1.0 + eps) / t3;
        const std::array<Complex, 4> tc = {t1, t2, t3, tc4};
        const Complex rhs = ellf4::w14_13_value(b, tc, q);

        Complex pref = qp(b * b, q) * qp(q * b * b, q) * qp(q, q) /
                       (2.0 * qp(b, q) * qp(q * b, q));
        for (int r = 0; r < 4; ++r)
            for (int s = r + 1; s < 4; ++s) pref *= qp(tc[r] * tc[s], q);

        auto f = [&](Complex z) {
            Complex val = ellf4::qpoch_pair(1.0, z * z, q) / ellf4::qpoch_pair(b, z * z, q);
            for (const Complex& tr : tc)
                val *= ellf4::qpoch_pair(b * tr, z, q) / ellf4::qpoch_pair(tr, z, q);
            return val;
        };
        Complex total = ellf4::integrate_circle(f, CircleContour{1.0}).value;

        // Shared part of f with the fourth denominator pair handled by hand.
        auto partial = [&](Complex z) {
            Complex val = ellf4::qpoch_pair(1.0, z * z, q) / ellf4::qpoch_pair(b, z * z, q);
            for (int r = 0; r < 3; ++r)
                val *= ellf4::qpoch_pair(b * tc[r], z, q) / ellf4::qpoch_pair(tc[r], z, q);
            return val * ellf4::qpoch_pair(b * tc4, z, q);
        };
        // Inward family members of (t4/z;q) that sit outside the circle.
        for (int j = 0; std::abs(tc4) * std::pow(0.2, j) > 1.0; ++j) {
            const Complex z0 = tc4 * std::pow(q, j);
            const Complex removed = ellf4::qpoch_finite(std::pow(q, -j), q, j) * qp(q, q);
            total += partial(z0) / (qp(tc4 * z0, q) * removed);
        }
        // Outward family members of (t4 z;q) that sit inside the circle.
        for (int k = 0; std::pow(0.2, -k) / std::abs(tc4) < 1.0; ++k) {
            const Complex z0 = std::pow(q, -k) / tc4;
            const Complex removed = ellf4::qpoch_finite(std::pow(q, -k), q, k) * qp(q, q);
            total += partial(z0) / (qp(tc4 / z0, q) * removed);
        }
        CHECK(rel_err(pref * total, rhs) <= 1e-7);
    }
}

TEST_CASE("exponent points classify into the printed regimes") {
    using ellf4::classify_limit;
    CHECK(classify_limit({1.0, {0, 0, 0, 0}}) == LimitCase::B1Vertex);
    CHECK(classify_limit({1.0, {0, 0, 0, 0.1}}) == LimitCase::Outside);
    CHECK(classify_limit({0.5, {0, 0, 0.5, 0.5}}) == LimitCase::MidCaseA);
    CHECK(classify_limit({0.5, {0.25, 0.25, 0.75, 0.25}}) == LimitCase::MidCaseB);
    CHECK(classify_limit({0.5, {0.25, -0.25, 0.25, 0.25}}) == LimitCase::MidCaseC);
    CHECK(classify_limit({0.5, {0.1, 0.2, 0.3, 0.15}}) == LimitCase::MidCaseD);
    CHECK(classify_limit({0.5, {0.0, 0.0, 0.3, 0.2}}) == LimitCase::Outside);
    CHECK(classify_limit({0.5, {0.9, 0.9, 0.2, 0.2}}) == LimitCase::Outside);
    CHECK(classify_limit({0.0, {0.0, 0.3, 1.0, 0.62}}) == LimitCase::B0Interior);
    CHECK(classify_limit({0.0, {-0.2, 0.3, 0.5, 0.7}}) == LimitCase::B0EdgeNeg);
    CHECK(classify_limit({0.0, {0.3, 0.5, -0.2, 0.7}}) == LimitCase::B0EdgeNeg);
    CHECK(classify_limit({0.0, {-0.5, 0.5, 0.5, 0.5}}) == LimitCase::B0EdgeNeg);
    CHECK(classify_limit({0.0, {-0.2, 0.1, 0.5, 0.7}}) == LimitCase::Outside);
    CHECK(classify_limit({0.0, {1.25, 0.3, 0.5, 0.7}}) == LimitCase::B0EdgePos);
    CHECK(classify_limit({0.0, {1.6, 0.7, 0.7, 0.7}}) == LimitCase::Outside);
    CHECK(classify_limit({0.0, {-0.2, 1.1, 0.5, 0.5}}) == LimitCase::Outside);
    CHECK(classify_limit({-0.1, {0, 0, 0, 0}}) == LimitCase::Outside);
    CHECK(classify_limit({1.2, {0, 0, 0, 0}}) == LimitCase::Outside);
    CHECK(std::string(ellf4::to_string(LimitCase::MidCaseB)) != "");
}

TEST_CASE("limit dispatcher routes to the member evaluators") {
    const Complex q(0.15), b(0.5);
    const std::array<Complex, 4> t = {Complex(0.55), Complex(0.5), Complex(0.45),
                                      Complex(0.6)};
    CHECK(rel_err(ellf4::limit_value(b, t, q, {1.0, {0, 0, 0, 0}}),
                  ellf4::b1_integral(b, t, q)) <= 1e-12);
    const LimitExponents mid{0.5, {0.1, 0.2, 0.3, 0.15}};
    CHECK(rel_err(ellf4::limit_value(b, t, q, mid), Complex(1.0)) <= 1e-14);
    const LimitExponents cube{0.0, {0.0, 0.0, 0.0, 0.5}};
    CHECK(rel_err(ellf4::limit_value(b, t, q, cube),
                  ellf4::limit_b0_interior(b, t, q, cube)) <= 1e-12);
    const LimitExponents edge{0.0, {-0.2, 0.3, 0.5, 0.7}};
    CHECK(rel_err(ellf4::limit_value(b, t, q, edge),
                  ellf4::limit_b0_edge(b, t, q, edge)) <= 1e-12);
    CHECK(thrown_code([&] {
              ellf4::limit_value(b, t, q, {0.5, {0.9, 0.9, 0.2, 0.2}});
          }) == ErrorCode::OutsidePolytope);
}

TEST_CASE("apex limit object keeps the group symmetry") {
    const Complex q(0.15), b(0.5);
    const std::array<Complex, 4> t = {Complex(0.55), Complex(0.5), Complex(0.45),
                                      Complex(0.6)};
    const Complex A = q / b;
    const Complex reference = ellf4::b1_integral(b, t, q);

    std::array<Complex, 4> flipped = t;
    flipped[3] = A / t[3];
    CHECK(rel_err(ellf4::b1_integral(b, flipped, q), reference) <= 1e-8);

    std::array<Complex, 4> permuted = {t[2], t[0], t[3], t[1]};
    CHECK(rel_err(ellf4::b1_integral(b, permuted, q), reference) <= 1e-8);

    F4Point pt{t, A};
    pt = ellf4::mult_action(ellf4::simple_reflections()[3], pt);
    for (const Complex& zi : pt.z) REQUIRE(std::abs(zi) < 0.95);
    CHECK(rel_err(ellf4::b1_integral(b, pt.z, q), reference) <= 1e-8);
}

TEST_CASE("elliptic family approaches its limit objects as p shrinks") {
    const Complex q(0.15), b(0.5);

    // Apex regime.
    const std::array<Complex, 4> ta = {Complex(0.55), Complex(0.5), Complex(0.45),
                                       Complex(0.52)};
    const LimitExponents apex{1.0, {0, 0, 0, 0}};
    const Complex apex_limit = ellf4::b1_integral(b, ta, q);
    const double ea1 = rel_err(
        ellf4::e_f4_at_exponents(b, ta, apex, EllipticBase(1e-2, q)), apex_limit);
    const double ea2 = rel_err(
        ellf4::e_f4_at_exponents(b, ta, apex, EllipticBase(1e-3, q)), apex_limit);
    CHECK(ea2 < ea1);
    CHECK(ea2 < 0.02);

    // Base regime with two interior exponents.  The pinned pair t_0 = -t_1
    // cancels the O(p^{1/2}) prefactor correction, leaving O(p) convergence.
    const Complex bc(0.4);
    const std::array<Complex, 4> tc = {Complex(0.5), Complex(-0.5), Complex(0.3),
                                       Complex(0.35)};
    const LimitExponents cube{0.0, {0.0, 0.0, 0.5, 0.5}};
    const Complex cube_limit = ellf4::limit_b0_interior(bc, tc, q, cube);
    const double ec1 = rel_err(
        ellf4::e_f4_at_exponents(bc, tc, cube, EllipticBase(1e-2, q)), cube_limit);
    const double ec2 = rel_err(
        ellf4::e_f4_at_exponents(bc, tc, cube, EllipticBase(1e-3, q)), cube_limit);
    CHECK(ec2 < ec1);
    CHECK(ec2 < 0.05);

    // A fixed exponent point evaluates through some admissible group image.
    const EllipticBase base(0.1, q);
    const LimitExponents flat{0.0, {0, 0, 0, 0}};
    CHECK(rel_err(ellf4::e_f4_at_exponents(b, ta, flat, base),
                  ellf4::e_f4_explicit({b, ta, base})) <= 1e-10);

    CHECK(thrown_code([&] {
              ellf4::e_f4_at_exponents(b, ta, flat, EllipticBase(Complex(0.1, 0.02), q));
          }) == ErrorCode::Domain);
}
