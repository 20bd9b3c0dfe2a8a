#include "ellf4/beta.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ellf4/errors.hpp"
#include "ellf4/series.hpp"
#include "ellf4/special.hpp"

namespace ellf4 {
namespace {

constexpr double kEps = 1e-9;  // exponent pattern matching tolerance

/// True when x lies within rel tol of some p^{-j} q^{-k}, j,k >= 0.  All such
/// points have modulus >= 1, which gives the cheap early exit.
bool near_inverse_lattice(Complex x, Complex p, Complex q, double tol) {
    const double ax = std::abs(x);
    if (ax < 1.0 - tol) return false;
    const double bound = 2.0 * ax;
    Complex pj = 1.0;
    while (std::abs(pj) <= bound) {
        Complex c = pj;
        while (std::abs(c) <= bound) {
            if (std::abs(x - c) <= tol * std::abs(c)) return true;
            if (std::abs(q) == 0.0) break;
            c /= q;
        }
        if (std::abs(p) == 0.0) break;
        pj /= p;
    }
    return false;
}

void require_nonzero(Complex b, const std::array<Complex, 4>& t) {
    if (b == Complex(0.0)) fail(ErrorCode::Domain, "b must be nonzero");
    for (const Complex& tr : t)
        if (tr == Complex(0.0)) fail(ErrorCode::Domain, "parameters must be nonzero");
}

/// The normalization prod_r (b t_r^2; p,q)(p^2 q^2/(b t_r^2); p,q) divides both
/// presentations of the integral; reject parameters where it vanishes.
void guard_normalization(const F4IntegralParams& P) {
    require_nonzero(P.b, P.t);
    const Complex pq = P.base.p() * P.base.q();
    for (const Complex& tr : P.t) {
        const Complex d = P.b * tr * tr;
        if (near_inverse_lattice(d, P.base.p(), P.base.q(), 1e-8) ||
            near_inverse_lattice(pq * pq / d, P.base.p(), P.base.q(), 1e-8))
            fail(ErrorCode::DenominatorZero,
                 "(b t^2; p,q)(p^2 q^2/(b t^2); p,q) vanishes at these parameters");
    }
}

/// Strip factors with vanishing coefficient (they contribute no poles) and
/// integrate over the circle chosen by the pole catalog.
Complex quadrate(const std::function<Complex(Complex)>& f, std::vector<IntegrandFactor> factors,
                 const EllipticBase& base, const QuadratureConfig& cfg) {
    factors.erase(std::remove_if(factors.begin(), factors.end(),
                                 [](const IntegrandFactor& fac) {
                                     return std::abs(fac.coefficient) == 0.0;
                                 }),
                  factors.end());
    const std::optional<double> radius =
        select_radius([&](double r) { return gamma_pole_catalog(factors, base, r); });
    if (!radius)
        fail(ErrorCode::NoSeparatingCircle, "pole families pinch every circle contour");
    return integrate_circle(f, CircleContour{*radius}, cfg).value;
}

/// Parameters must multiply to (pq)^{m+1} up to the global sign.
void check_balancing(const std::vector<Complex>& t, int m, const EllipticBase& base) {
    Complex prod = 1.0;
    for (const Complex& ti : t) prod *= ti;
    const Complex target = std::pow(base.p() * base.q(), m + 1);
    if (std::min(std::abs(prod - target), std::abs(prod + target)) > 1e-9 * std::abs(target))
        fail(ErrorCode::Domain, "parameters must multiply to (pq)^{m+1} up to sign");
}

}  // namespace

BetaParams BetaParams::balanced(int m, const std::vector<Complex>& leading,
                                const EllipticBase& base) {
    if (m < 0 || leading.size() != static_cast<size_t>(2 * m + 5))
        fail(ErrorCode::Domain, "balanced factory takes 2m+5 leading parameters");
    Complex prod = 1.0;
    for (const Complex& ti : leading) prod *= ti;
    if (prod == Complex(0.0)) fail(ErrorCode::Domain, "parameters must be nonzero");
    BetaParams out;
    out.m = m;
    out.t = leading;
    out.t.push_back(std::pow(base.p() * base.q(), m + 1) / prod);
    return out;
}

Complex e_m(const BetaParams& params, const EllipticBase& base, const QuadratureConfig& cfg) {
    if (params.m < 0 || params.t.size() != static_cast<size_t>(2 * params.m + 6))
        fail(ErrorCode::Domain, "order m integral takes 2m+6 parameters");
    for (const Complex& ti : params.t)
        if (ti == Complex(0.0)) fail(ErrorCode::Domain, "parameters must be nonzero");
    check_balancing(params.t, params.m, base);

    Complex pref = qpoch_inf(base.p(), base.p()) * qpoch_inf(base.q(), base.q()) / 2.0;
    const size_t n = params.t.size();
    for (size_t r = 0; r < n; ++r)
        for (size_t s = r + 1; s < n; ++s) pref *= pq_poch(params.t[r] * params.t[s], base);

    std::vector<IntegrandFactor> factors;
    factors.reserve(2 * n);
    for (const Complex& ti : params.t) {
        factors.push_back({FactorKind::Gamma, ti, 1});
        factors.push_back({FactorKind::Gamma, ti, -1});
    }
    const Complex p = base.p(), q = base.q();
    auto f = [&](Complex z) {
        // 1/Gamma(z^{+-2}) in its entire form theta(z^2; p) theta(z^{-2}; q):
        // the trapezoid samples include z = +-1 where the Gamma form is singular.
        Complex val = theta(z * z, p) * theta(1.0 / (z * z), q);
        for (const Complex& ti : params.t) val *= gamma_pair(ti, z, base);
        return val;
    };
    return pref * quadrate(f, factors, base, cfg);
}

Complex e0_product(const std::array<Complex, 6>& t, const EllipticBase& base) {
    check_balancing({t.begin(), t.end()}, 0, base);
    const Complex pq = base.p() * base.q();
    Complex val = 1.0;
    for (int r = 0; r < 6; ++r)
        for (int s = r + 1; s < 6; ++s) val *= pq_poch(pq / (t[r] * t[s]), base);
    return val;
}

std::pair<Complex, Complex> e1_transform_pair(const std::array<Complex, 8>& t,
                                              const EllipticBase& base,
                                              const QuadratureConfig& cfg) {
    Complex prod7 = 1.0;
    for (int r = 0; r < 7; ++r) {
        if (t[r] == Complex(0.0)) fail(ErrorCode::Domain, "parameters must be nonzero");
        prod7 *= t[r];
    }
    const Complex pq = base.p() * base.q();
    std::vector<Complex> lhs_t(t.begin(), t.end());
    lhs_t[7] = pq * pq / prod7;  // re-solved so the tuple balances exactly

    const Complex v = std::sqrt(pq / (lhs_t[0] * lhs_t[1] * lhs_t[2] * lhs_t[3]));
    std::vector<Complex> rhs_t = lhs_t;
    for (int r = 0; r < 4; ++r) rhs_t[r] *= v;
    for (int r = 4; r < 8; ++r) rhs_t[r] /= v;

    return {e_m(BetaParams{1, lhs_t}, base, cfg), e_m(BetaParams{1, rhs_t}, base, cfg)};
}

Complex v_parameter(const F4IntegralParams& P) {
    require_nonzero(P.b, P.t);
    const Complex pq = P.base.p() * P.base.q();
    return std::sqrt(pq * pq / (P.b * P.b * P.t[0] * P.t[1] * P.t[2] * P.t[3]));
}

Complex e_f4_def(const F4IntegralParams& P, const QuadratureConfig& cfg) {
    guard_normalization(P);
    const Complex p = P.base.p(), q = P.base.q(), pq = p * q, b = P.b;
    std::vector<Complex> t16;
    t16.reserve(16);
    for (const Complex& tr : P.t) {
        t16.push_back(tr);
        t16.push_back(pq / (b * tr));
    }
    for (const Complex& w : {Complex(1.0), q, p, pq}) {
        const Complex s = std::sqrt(b * w);
        t16.push_back(s);
        t16.push_back(-s);
    }
    Complex denom = 1.0;
    for (const Complex& tr : P.t)
        denom *= pq_poch(b * tr * tr, P.base) * pq_poch(pq * pq / (b * tr * tr), P.base);
    return e_m(BetaParams{5, t16}, P.base, cfg) / denom;
}

Complex e_f4_explicit(const F4IntegralParams& P, const QuadratureConfig& cfg) {
    guard_normalization(P);
    const Complex p = P.base.p(), q = P.base.q(), pq = p * q, b = P.b;
    const std::array<Complex, 4>& t = P.t;

    Complex pref = qpoch_inf(p, p) * qpoch_inf(q, q) / 2.0;
    for (int r = 0; r < 4; ++r)
        for (int s = r + 1; s < 4; ++s)
            pref *= pq_poch(t[r] * t[s], P.base) * pq_poch(pq * t[r] / (b * t[s]), P.base) *
                    pq_poch(pq * t[s] / (b * t[r]), P.base) *
                    pq_poch(pq * pq / (b * b * t[r] * t[s]), P.base);
    const Complex qb = pq_poch(pq / b, P.base);
    pref *= qb * qb * qb * qb;
    for (const Complex& w : {Complex(1.0), p, q, pq})
        pref *= pq_poch(w * b * b, P.base) / pq_poch(w * b, P.base);

    std::vector<IntegrandFactor> factors = {{FactorKind::Gamma, b, 2},
                                            {FactorKind::Gamma, b, -2}};
    for (const Complex& tr : t) {
        factors.push_back({FactorKind::Gamma, tr, 1});
        factors.push_back({FactorKind::Gamma, tr, -1});
        factors.push_back({FactorKind::InverseGamma, b * tr, 1});
        factors.push_back({FactorKind::InverseGamma, b * tr, -1});
    }
    auto f = [&](Complex z) {
        Complex val = gamma_pair(b, z * z, P.base) * theta(z * z, p) * theta(1.0 / (z * z), q);
        for (const Complex& tr : t)
            val *= gamma_pair(tr, z, P.base) / gamma_pair(b * tr, z, P.base);
        return val;
    };
    return pref * quadrate(f, factors, P.base, cfg);
}

Complex b1_integral(Complex b, const std::array<Complex, 4>& t, Complex q,
                    const QuadratureConfig& cfg) {
    require_nonzero(b, t);
    const EllipticBase qbase(0.0, q);
    Complex pref = qpoch_inf(q, q) / 2.0;
    for (int r = 0; r < 4; ++r)
        for (int s = r + 1; s < 4; ++s)
            pref *= qpoch_inf(t[r] * t[s], q) * qpoch_inf(q * t[r] / (b * t[s]), q) *
                    qpoch_inf(q * t[s] / (b * t[r]), q) *
                    qpoch_inf(q * q / (b * b * t[r] * t[s]), q);
    const Complex qb = qpoch_inf(q / b, q);
    pref *= qb * qb * qb * qb;

    std::vector<IntegrandFactor> factors;
    for (const Complex& tr : t) {
        factors.push_back({FactorKind::InverseQPoch, tr, 1});
        factors.push_back({FactorKind::InverseQPoch, tr, -1});
        factors.push_back({FactorKind::InverseQPoch, q / (b * tr), 1});
        factors.push_back({FactorKind::InverseQPoch, q / (b * tr), -1});
    }
    auto f = [&](Complex z) {
        Complex val = qpoch_pair(1.0, z * z, q) * qpoch_pair(q / b, z * z, q);
        for (const Complex& tr : t)
            val /= qpoch_pair(tr, z, q) * qpoch_pair(q / (b * tr), z, q);
        return val;
    };
    return pref * quadrate(f, factors, qbase, cfg);
}

Complex b2_integral(Complex b, const std::array<Complex, 4>& t, Complex q,
                    const QuadratureConfig& cfg) {
    const EllipticBase qbase(0.0, q);
    Complex pref = qpoch_inf(b * b, q) * qpoch_inf(q * b * b, q) * qpoch_inf(q, q) /
                   (2.0 * qpoch_inf(b, q) * qpoch_inf(q * b, q));
    for (int r = 0; r < 4; ++r)
        for (int s = r + 1; s < 4; ++s) pref *= qpoch_inf(t[r] * t[s], q);

    std::vector<IntegrandFactor> factors = {{FactorKind::InverseQPoch, b, 2},
                                            {FactorKind::InverseQPoch, b, -2}};
    for (const Complex& tr : t) {
        factors.push_back({FactorKind::InverseQPoch, tr, 1});
        factors.push_back({FactorKind::InverseQPoch, tr, -1});
    }
    auto f = [&](Complex z) {
        Complex val = qpoch_pair(1.0, z * z, q) / qpoch_pair(b, z * z, q);
        for (const Complex& tr : t)
            val *= qpoch_pair(b * tr, z, q) / qpoch_pair(tr, z, q);
        return val;
    };
    return pref * quadrate(f, factors, qbase, cfg);
}

const char* to_string(LimitCase c) {
    switch (c) {
        case LimitCase::B1Vertex: return "b1-vertex";
        case LimitCase::MidCaseA: return "mid-corner";
        case LimitCase::MidCaseB: return "mid-stretched";
        case LimitCase::MidCaseC: return "mid-dipped";
        case LimitCase::MidCaseD: return "mid-interior";
        case LimitCase::B0Interior: return "base-cube";
        case LimitCase::B0EdgeNeg: return "base-edge-low";
        case LimitCase::B0EdgePos: return "base-edge-high";
        case LimitCase::Outside: return "outside";
    }
    return "unknown";
}

LimitCase classify_limit(const LimitExponents& e, double eps) {
    const double beta = e.beta;
    const auto& tau = e.tau;
    if (beta < -eps || beta > 1.0 + eps) return LimitCase::Outside;
    if (beta >= 1.0 - eps) {
        for (double tr : tau)
            if (std::abs(tr) > eps) return LimitCase::Outside;
        return LimitCase::B1Vertex;
    }
    if (beta > eps) {
        const double h = 1.0 - beta;
        for (int r = 0; r < 4; ++r)
            for (int s = r + 1; s < 4; ++s) {
                const double sum = tau[r] + tau[s];
                if (sum < -eps || sum > 2.0 * h + eps) return LimitCase::Outside;
                if (std::abs(tau[r] - tau[s]) > h + eps) return LimitCase::Outside;
            }
        bool all_vertex = true;
        for (double tr : tau)
            all_vertex = all_vertex && (std::abs(tr) <= eps || std::abs(tr - h) <= eps);
        if (all_vertex) return LimitCase::MidCaseA;
        std::array<double, 4> s = tau;
        std::sort(s.begin(), s.end());
        const double half = h / 2.0;
        auto near = [eps](double x, double y) { return std::abs(x - y) <= eps; };
        if (near(s[0], half) && near(s[1], half) && near(s[2], half) && near(s[3], 3.0 * half))
            return LimitCase::MidCaseB;
        if (near(s[0], -half) && near(s[1], half) && near(s[2], half) && near(s[3], half))
            return LimitCase::MidCaseC;
        // The generic value 1 holds only strictly inside the polytope.
        for (int r = 0; r < 4; ++r)
            for (int ss = r + 1; ss < 4; ++ss) {
                const double sum = tau[r] + tau[ss];
                if (sum < eps || sum > 2.0 * h - eps) return LimitCase::Outside;
                if (std::abs(tau[r] - tau[ss]) > h - eps) return LimitCase::Outside;
            }
        return LimitCase::MidCaseD;
    }
    int low = -1, high = -1, nlow = 0, nhigh = 0;
    for (int r = 0; r < 4; ++r) {
        if (tau[r] < -eps) {
            low = r;
            ++nlow;
        }
        if (tau[r] > 1.0 + eps) {
            high = r;
            ++nhigh;
        }
    }
    if (nlow == 0 && nhigh == 0) return LimitCase::B0Interior;
    if (nlow == 1 && nhigh == 0) {
        const double tau1 = tau[low];
        if (tau1 < -0.5 - eps) return LimitCase::Outside;
        for (int r = 0; r < 4; ++r) {
            if (r == low) continue;
            if (tau[r] < -tau1 - eps || tau[r] > 1.0 + tau1 + eps) return LimitCase::Outside;
        }
        return LimitCase::B0EdgeNeg;
    }
    if (nlow == 0 && nhigh == 1) {
        const double tau1 = tau[high];
        if (tau1 > 1.5 + eps) return LimitCase::Outside;
        for (int r = 0; r < 4; ++r) {
            if (r == high) continue;
            if (tau[r] < tau1 - 1.0 - eps || tau[r] > 2.0 - tau1 + eps) return LimitCase::Outside;
        }
        return LimitCase::B0EdgePos;
    }
    return LimitCase::Outside;
}

Complex mid_beta_limit(Complex b, const std::array<Complex, 4>& t, Complex q,
                       const LimitExponents& e) {
    if (!(e.beta > kEps && e.beta < 1.0 - kEps))
        fail(ErrorCode::Domain, "mid range limit needs 0 < beta < 1");
    require_nonzero(b, t);
    switch (classify_limit(e)) {
        case LimitCase::MidCaseA: {
            Complex arg = 1.0;
            for (int r = 0; r < 4; ++r)
                arg *= (std::abs(e.tau[r]) <= kEps) ? t[r] : q / (b * t[r]);
            return qpoch_inf(arg, q);
        }
        case LimitCase::MidCaseB: {
            const int d = static_cast<int>(
                std::max_element(e.tau.begin(), e.tau.end()) - e.tau.begin());
            return qpoch_inf(q * q * q / (b * b * b * t[d] * t[d]), q);
        }
        case LimitCase::MidCaseC: {
            const int d = static_cast<int>(
                std::min_element(e.tau.begin(), e.tau.end()) - e.tau.begin());
            return qpoch_inf(q * t[d] * t[d] / b, q);
        }
        case LimitCase::MidCaseD:
            return Complex(1.0);
        default:
            fail(ErrorCode::OutsidePolytope, "exponent point has no printed mid range limit");
    }
}

Complex limit_b0_interior(Complex b, const std::array<Complex, 4>& t, Complex q,
                          const LimitExponents& e, const QuadratureConfig& cfg) {
    if (classify_limit(e) != LimitCase::B0Interior)
        fail(ErrorCode::OutsidePolytope, "exponent point is not in the base cube");
    std::vector<int> zero, one;
    for (int r = 0; r < 4; ++r) {
        if (e.tau[r] <= kEps)
            zero.push_back(r);
        else if (e.tau[r] >= 1.0 - kEps)
            one.push_back(r);
        // interior exponents drop out of the limit entirely
    }
    if (!one.empty() && b == Complex(0.0))
        fail(ErrorCode::Domain, "saturated top exponents need b != 0");
    for (int r : one)
        if (t[r] == Complex(0.0)) fail(ErrorCode::Domain, "parameters must be nonzero");

    const EllipticBase qbase(0.0, q);
    Complex pref = qpoch_inf(b * b, q) * qpoch_inf(q * b * b, q) * qpoch_inf(q, q) /
                   (2.0 * qpoch_inf(b, q) * qpoch_inf(q * b, q));
    for (size_t i = 0; i < zero.size(); ++i)
        for (size_t j = i + 1; j < zero.size(); ++j)
            pref *= qpoch_inf(t[zero[i]] * t[zero[j]], q);
    for (int r : zero)
        for (int s : one) pref *= qpoch_inf(q * t[r] / (b * t[s]), q);
    for (size_t i = 0; i < one.size(); ++i)
        for (size_t j = i + 1; j < one.size(); ++j)
            pref *= qpoch_inf(q * q / (b * b * t[one[i]] * t[one[j]]), q);

    std::vector<IntegrandFactor> factors = {{FactorKind::InverseQPoch, b, 2},
                                            {FactorKind::InverseQPoch, b, -2}};
    for (int r : zero) {
        factors.push_back({FactorKind::InverseQPoch, t[r], 1});
        factors.push_back({FactorKind::InverseQPoch, t[r], -1});
    }
    for (int r : one) {
        factors.push_back({FactorKind::InverseQPoch, q / (b * t[r]), 1});
        factors.push_back({FactorKind::InverseQPoch, q / (b * t[r]), -1});
    }
    auto f = [&](Complex z) {
        Complex val = qpoch_pair(1.0, z * z, q) / qpoch_pair(b, z * z, q);
        for (int r : zero) val *= qpoch_pair(b * t[r], z, q) / qpoch_pair(t[r], z, q);
        for (int r : one)
            val *= qpoch_pair(q / t[r], z, q) / qpoch_pair(q / (b * t[r]), z, q);
        return val;
    };
    return pref * quadrate(f, factors, qbase, cfg);
}

Complex limit_b0_edge(Complex b, const std::array<Complex, 4>& t, Complex q,
                      const LimitExponents& e, const QuadratureConfig& cfg) {
    const LimitCase c = classify_limit(e);
    if (c != LimitCase::B0EdgeNeg && c != LimitCase::B0EdgePos)
        fail(ErrorCode::OutsidePolytope, "exponent point is not in an edge window");
    require_nonzero(b, t);
    int i0 = -1;
    for (int r = 0; r < 4; ++r)
        if (e.tau[r] < -kEps || e.tau[r] > 1.0 + kEps) i0 = r;
    Complex t1 = t[i0];
    double tau1 = e.tau[i0];
    if (c == LimitCase::B0EdgePos) {  // mirrored window folds onto the negative one
        t1 = q / (b * t1);
        tau1 = 1.0 - tau1;
    }
    // At tau1 = -1/2 the two saturation families coincide and the integrand
    // gains the bracket factor; every other coordinate then carries both pairs.
    const bool bracket = tau1 <= -0.5 + kEps;
    std::vector<int> low, high;
    for (int r = 0; r < 4; ++r) {
        if (r == i0) continue;
        if (e.tau[r] <= -tau1 + kEps) low.push_back(r);
        if (e.tau[r] >= 1.0 + tau1 - kEps) high.push_back(r);
    }

    const EllipticBase qbase(0.0, q);
    // Non-even integrand: the full (q;q), not (q;q)/2.
    Complex pref = qpoch_inf(q / b, q) * qpoch_inf(q * b * b, q) * qpoch_inf(q, q) /
                   (qpoch_inf(q / (b * b), q) * qpoch_inf(q * b, q));
    for (int r : low) pref *= qpoch_inf(t[r] * t1, q);
    for (int r : high) pref *= qpoch_inf(q * t1 / (b * t[r]), q);

    std::vector<IntegrandFactor> factors = {{FactorKind::InverseQPoch, t1, 1},
                                            {FactorKind::InverseQPoch, q / (b * t1), -1}};
    for (int r : low) factors.push_back({FactorKind::InverseQPoch, t[r], -1});
    for (int r : high) factors.push_back({FactorKind::InverseQPoch, q / (b * t[r]), -1});
    if (bracket) {
        factors.push_back({FactorKind::InverseQPoch, b, -2});
        factors.push_back({FactorKind::InverseQPoch, t1, -1});
    }
    auto f = [&](Complex z) {
        Complex val = theta(b * b * t1 * z, q) /
                      (qpoch_inf(t1 * z, q) * qpoch_inf(q / (b * t1 * z), q));
        for (int r : low) val *= qpoch_inf(b * t[r] / z, q) / qpoch_inf(t[r] / z, q);
        for (int r : high)
            val *= qpoch_inf(q / (t[r] * z), q) / qpoch_inf(q / (b * t[r] * z), q);
        if (bracket)
            val *= (1.0 - 1.0 / (z * z)) * qpoch_inf(q / (b * z * z), q) *
                   qpoch_inf(b * t1 / z, q) /
                   (qpoch_inf(b / (z * z), q) * qpoch_inf(t1 / z, q));
        return val;
    };
    return pref * quadrate(f, factors, qbase, cfg);
}

Complex series_rep_edge_4phi3(Complex b, const std::array<Complex, 3>& t, Complex q,
                              const TruncationPolicy& policy) {
    Complex pref = qpoch_inf(q * b * b, q) * qpoch_inf(b * b, q) / qpoch_inf(q * b, q);
    PhiSeriesSpec spec;
    spec.q = q;
    spec.z = b * b;
    for (int r = 0; r < 3; ++r)
        for (int s = r + 1; s < 3; ++s) {
            pref *= qpoch_inf(b * t[r] * t[s], q);
            spec.numerators.push_back(t[r] * t[s]);
            spec.denominators.push_back(b * t[r] * t[s]);
        }
    spec.numerators.push_back(q / b);
    return pref * sum_phi(spec, policy).value;
}

Complex series_rep_octahedron_2phi1(Complex b, Complex t, Complex v, Complex q,
                                    const TruncationPolicy& policy) {
    const Complex pref = qpoch_inf(b * t * v, q) * qpoch_inf(q * b * b, q) *
                         qpoch_inf(b * b, q) / qpoch_inf(q * b, q);
    PhiSeriesSpec spec;
    spec.numerators = {t * v, q / b};
    spec.denominators = {b * t * v};
    spec.q = q;
    spec.z = b * b;
    return pref * sum_phi(spec, policy).value;
}

double interior_identity_check(Complex b, Complex t, Complex q, const QuadratureConfig& cfg) {
    const EllipticBase qbase(0.0, q);
    const Complex pref = qpoch_inf(b * b, q) * qpoch_inf(q * b * b, q) * qpoch_inf(q, q) /
                         (2.0 * qpoch_inf(b, q) * qpoch_inf(q * b, q));
    const std::vector<IntegrandFactor> factors = {{FactorKind::InverseQPoch, b, 2},
                                                  {FactorKind::InverseQPoch, b, -2},
                                                  {FactorKind::InverseQPoch, t, 1},
                                                  {FactorKind::InverseQPoch, t, -1}};
    auto f = [&](Complex z) {
        return qpoch_pair(1.0, z * z, q) * qpoch_pair(b * t, z, q) /
               (qpoch_pair(b, z * z, q) * qpoch_pair(t, z, q));
    };
    const Complex lhs = pref * quadrate(f, factors, qbase, cfg);
    const Complex rhs = qpoch_inf(q * b * b, q);
    return std::abs(lhs - rhs) / std::abs(rhs);
}

double w8_7_evaluation_check(Complex b, Complex t, Complex q, const TruncationPolicy& policy) {
    const Complex closed = qpoch_inf(q * b * b, q) * qpoch_inf(b * b * t * t, q) /
                           (qpoch_inf(b * b * b * t * t, q) * qpoch_inf(q * b, q));
    const Complex a = b * b * t * t / q;
    const Complex rb = std::sqrt(b), rbq = std::sqrt(b / q);
    const std::vector<Complex> params = {t * rb, -t * rb, t * rbq, -t * rbq, b};
    const Complex summed = sum_vwp_w(a, params, q, q * b, policy).value;
    return std::abs(closed - summed) / std::abs(closed);
}

Complex vertex_w14_13(Complex b, const std::array<Complex, 4>& t, Complex q,
                      const TruncationPolicy& policy) {
    const Complex t1 = t[0];
    Complex pref = qpoch_inf(q * b * b, q) * qpoch_inf(b * b, q) *
                   qpoch_inf(q * t1 * t1 / b, q) /
                   (qpoch_inf(q * b, q) * qpoch_inf(q * t1 * t1, q));
    std::vector<Complex> params;
    params.reserve(11);
    for (int r = 1; r < 4; ++r) {
        pref *= qpoch_inf(b * t1 * t[r], q) * qpoch_inf(q * t1 / t[r], q);
        params.push_back(t1 * t[r]);
        params.push_back(q * t1 / (b * t[r]));
    }
    params.push_back(q / b);
    const Complex s0 = std::sqrt(b) * t1, s1 = std::sqrt(b * q) * t1;
    params.insert(params.end(), {s0, -s0, s1, -s1});
    return pref * sum_vwp_w(t1 * t1, params, q, b * b, policy).value;
}

Complex duality_integral(Complex b, Complex t1, const std::vector<Complex>& u, Complex q,
                         const QuadratureConfig& cfg) {
    if (b == Complex(0.0) || t1 == Complex(0.0))
        fail(ErrorCode::Domain, "parameters must be nonzero");
    const EllipticBase qbase(0.0, q);
    Complex pref = qpoch_inf(q / b, q) * qpoch_inf(q * b * b, q) * qpoch_inf(q, q) /
                   (qpoch_inf(q / (b * b), q) * qpoch_inf(q * b, q));
    for (const Complex& ur : u) pref *= qpoch_inf(t1 * ur, q);

    std::vector<IntegrandFactor> factors = {{FactorKind::InverseQPoch, t1, 1},
                                            {FactorKind::InverseQPoch, q / (b * t1), -1}};
    for (const Complex& ur : u) factors.push_back({FactorKind::InverseQPoch, ur, -1});
    auto f = [&](Complex z) {
        Complex val = theta(b * b * t1 * z, q) /
                      (qpoch_inf(t1 * z, q) * qpoch_inf(q / (b * t1 * z), q));
        for (const Complex& ur : u) val *= qpoch_inf(b * ur / z, q) / qpoch_inf(ur / z, q);
        return val;
    };
    return pref * quadrate(f, factors, qbase, cfg);
}

Complex duality_series(Complex b, Complex t1, const std::vector<Complex>& u, Complex q,
                       const TruncationPolicy& policy) {
    Complex pref = qpoch_inf(q * b * b, q) * qpoch_inf(b * b, q) / qpoch_inf(q * b, q);
    PhiSeriesSpec spec;
    spec.q = q;
    spec.z = b * b;
    for (const Complex& ur : u) {
        pref *= qpoch_inf(b * ur * t1, q);
        spec.numerators.push_back(t1 * ur);
        spec.denominators.push_back(b * ur * t1);
    }
    spec.numerators.push_back(q / b);
    return pref * sum_phi(spec, policy).value;
}

Complex limit_value(Complex b, const std::array<Complex, 4>& t, Complex q,
                    const LimitExponents& e, const QuadratureConfig& cfg) {
    switch (classify_limit(e)) {
        case LimitCase::B1Vertex:
            return b1_integral(b, t, q, cfg);
        case LimitCase::MidCaseA:
        case LimitCase::MidCaseB:
        case LimitCase::MidCaseC:
        case LimitCase::MidCaseD:
            return mid_beta_limit(b, t, q, e);
        case LimitCase::B0Interior:
            return limit_b0_interior(b, t, q, e, cfg);
        case LimitCase::B0EdgeNeg:
        case LimitCase::B0EdgePos:
            return limit_b0_edge(b, t, q, e, cfg);
        case LimitCase::Outside:
            break;
    }
    fail(ErrorCode::OutsidePolytope, "exponent point lies outside the limit polytope");
}

Complex e_f4_at_exponents(Complex b, const std::array<Complex, 4>& t, const LimitExponents& e,
                          const EllipticBase& base, const QuadratureConfig& cfg) {
    const Complex pc = base.p();
    if (pc.imag() != 0.0 || pc.real() <= 0.0)
        fail(ErrorCode::Domain, "exponent evaluation needs real p in (0, 1)");
    const double p = pc.real();
    const Complex b_full = b * std::pow(p, e.beta);
    const double center = (1.0 - e.beta) / 2.0;

    // Rank the additive images by how tightly their exponents cluster around
    // the window center; tie-break on the exponents themselves so the scan
    // order is deterministic.  Images sharing an exponent tuple give the same
    // contour data, so they collapse to one candidate.
    struct Candidate {
        double score;
        std::array<long long, 4> key;
        const GroupElement* g;
    };
    std::vector<Candidate> cands;
    cands.reserve(f4_group().size());
    for (const GroupElement& g : f4_group()) {
        const LimitExponents img = additive_action(g, e);
        Candidate c{0.0, {}, &g};
        for (int r = 0; r < 4; ++r) {
            c.score = std::max(c.score, std::abs(img.tau[r] - center));
            c.key[r] = std::llround(img.tau[r] * 1e9);
        }
        cands.push_back(c);
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& c) {
        if (a.score != c.score) return a.score < c.score;
        return a.key < c.key;
    });
    cands.erase(std::unique(cands.begin(), cands.end(),
                            [](const Candidate& a, const Candidate& c) { return a.key == c.key; }),
                cands.end());

    F4Point pt;
    for (int r = 0; r < 4; ++r) pt.z[r] = t[r] * std::pow(p, e.tau[r]);
    pt.A = base.p() * base.q() / b_full;

    std::optional<Error> first;
    for (const Candidate& cand : cands) {
        const F4Point img = mult_action(*cand.g, pt);
        try {
            return e_f4_explicit({b_full, img.z, base}, cfg);
        } catch (const Error& err) {
            if (!first) first = err;
        }
    }
    throw first ? *first : Error(ErrorCode::Domain, "no admissible group image");
}

}  // namespace ellf4
