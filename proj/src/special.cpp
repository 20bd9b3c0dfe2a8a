#include "ellf4/special.hpp"

#include <algorithm>
#include <cmath>

namespace ellf4 {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonConvergent: return "non-convergent";
        case ErrorCode::TruncationBudget: return "truncation budget exhausted";
        case ErrorCode::Pole: return "argument at or near a pole";
        case ErrorCode::Domain: return "domain error";
        case ErrorCode::NoSeparatingCircle: return "no separating circle";
        case ErrorCode::DivergentDenominator: return "divergent denominator";
        case ErrorCode::DenominatorZero: return "denominator zero";
        case ErrorCode::OutsidePolytope: return "point outside limit polytope";
        case ErrorCode::UnknownSuite: return "unknown suite";
        case ErrorCode::Io: return "i/o error";
    }
    return "unknown error";
}

Complex qpoch_finite(Complex x, Complex q, int m) {
    if (m < 0) fail(ErrorCode::Domain, "finite q-factorial needs m >= 0");
    Complex prod = 1.0;
    Complex xq = x;
    for (int r = 0; r < m; ++r) {
        prod *= (1.0 - xq);
        xq *= q;
    }
    return prod;
}

Complex qpoch_inf(Complex x, Complex q, const TruncationPolicy& policy) {
    double aq = std::abs(q);
    if (!(aq < 1.0)) fail(ErrorCode::Domain, "infinite q-factorial needs |q| < 1");
    if (x == Complex(0.0)) return 1.0;
    // After N factors the log of the remaining product is bounded by
    // ~ |x| |q|^N / (1 - |q|), so stop once that falls below tol.
    double ax = std::abs(x);
    double cutoff = policy.tol * (1.0 - aq);
    Complex prod = 1.0;
    Complex xq = x;
    double axq = ax;
    for (int r = 0; r < policy.max_terms; ++r) {
        if (axq < cutoff) return prod;
        prod *= (1.0 - xq);
        xq *= q;
        axq *= aq;
    }
    fail(ErrorCode::TruncationBudget, "infinite q-factorial did not reach tolerance");
}

Complex pq_poch(Complex x, const EllipticBase& base) {
    if (x == Complex(0.0)) return 1.0;
    double ap = std::abs(base.p()), aq = std::abs(base.q());
    double big = std::max(ap, aq);
    if (big == 0.0) return 1.0 - x;
    // Truncate along diagonals r + s < D.  Diagonal d holds d+1 factors of
    // modulus <= |x| big^d, so the dropped log-mass is below
    // 2 |x| big^D (D+1) / (1-big)^2 once each factor is small.
    double ax = std::abs(x);
    double tol = base.policy().tol;
    int depth = 1;
    double scale = 2.0 * ax * big / ((1.0 - big) * (1.0 - big));
    while (scale * (depth + 1) >= tol && depth < base.policy().max_terms) {
        scale *= big;
        ++depth;
    }
    if (depth >= base.policy().max_terms)
        fail(ErrorCode::TruncationBudget, "double product did not reach tolerance");

    Complex prod = 1.0;
    Complex xp = x;  // x p^r
    for (int r = 0; r < depth; ++r) {
        Complex xpq = xp;  // x p^r q^s
        for (int s = 0; r + s < depth; ++s) {
            prod *= (1.0 - xpq);
            xpq *= base.q();
        }
        xp *= base.p();
    }
    return prod;
}

Complex theta(Complex x, Complex p, const TruncationPolicy& policy) {
    if (x == Complex(0.0)) fail(ErrorCode::Domain, "theta needs x != 0");
    return qpoch_inf(x, p, policy) * qpoch_inf(p / x, p, policy);
}

Complex elliptic_gamma(Complex x, const EllipticBase& base) {
    if (x == Complex(0.0)) fail(ErrorCode::Domain, "elliptic gamma needs x != 0");
    // Poles sit at x = p^{-j} q^{-k} with j,k >= 0; all have modulus >= 1.
    double ax = std::abs(x);
    if (ax > 1.0 - 1e-10) {
        double ap = std::abs(base.p()), aq = std::abs(base.q());
        Complex pj = 1.0;
        for (int j = 0; std::abs(pj) <= 2.0 * ax; ++j) {
            Complex pjqk = pj;
            for (int k = 0; std::abs(pjqk) <= 2.0 * ax; ++k) {
                if (std::abs(x - pjqk) < 1e-10 * ax)
                    fail(ErrorCode::Pole, "elliptic gamma argument near a pole");
                if (aq == 0.0) break;
                pjqk /= base.q();
            }
            if (ap == 0.0) break;
            pj /= base.p();
        }
    }
    return pq_poch(base.p() * base.q() / x, base) / pq_poch(x, base);
}

Complex qpoch_pair(Complex a, Complex z, Complex q, const TruncationPolicy& policy) {
    return qpoch_inf(a * z, q, policy) * qpoch_inf(a / z, q, policy);
}

Complex gamma_pair(Complex a, Complex z, const EllipticBase& base) {
    return elliptic_gamma(a * z, base) * elliptic_gamma(a / z, base);
}

double theta_addition_residual(Complex b, Complex w, Complex z, Complex q,
                               const TruncationPolicy& policy) {
    auto half = [&](Complex zz) {
        Complex num = theta(b * w * zz, q, policy) * theta(w / (b * zz), q, policy) *
                      theta(b / (zz * zz), q, policy);
        Complex den = theta(w * zz, q, policy) * theta(w / zz, q, policy) *
                      theta(1.0 / (zz * zz), q, policy);
        if (den == Complex(0.0)) fail(ErrorCode::DenominatorZero, "theta relation denominator");
        return num / den;
    };
    Complex lhs = half(z) + half(1.0 / z);
    Complex rhs = theta(b * b, q, policy) / theta(b, q, policy);
    return std::abs(lhs - rhs) / std::abs(rhs);
}

}  // namespace ellf4
