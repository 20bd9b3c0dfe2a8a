#include "ellf4/series.hpp"

#include <cmath>
#include <limits>

#include "ellf4/special.hpp"

namespace ellf4 {

namespace {

// Smallest n >= 0 with |x - q^{-n}| < 1e-12 |q|^{-n}, or -1.  The scan stops once
// |q|^{-n} outgrows 2|x|, so it is bounded.
int negative_power_index(Complex x, Complex q) {
    double ax = std::abs(x);
    if (ax < 0.5) return -1;
    Complex qn = 1.0;
    for (int n = 0; std::abs(qn) <= 2.0 * ax; ++n) {
        if (std::abs(x - qn) < 1e-12 * std::abs(qn)) return n;
        qn /= q;
    }
    return -1;
}

}  // namespace

SeriesResult sum_phi(const PhiSeriesSpec& spec, const TruncationPolicy& policy) {
    if (spec.numerators.size() != spec.denominators.size() + 1)
        fail(ErrorCode::Domain, "phi series needs r+1 numerators over r denominators");
    if (!(std::abs(spec.q) < 1.0)) fail(ErrorCode::Domain, "phi series needs |q| < 1");

    // Termination index: smallest n with some numerator equal to q^{-n}.
    int term_at = -1;
    for (Complex a : spec.numerators) {
        int n = negative_power_index(a, spec.q);
        if (n >= 0 && (term_at < 0 || n < term_at)) term_at = n;
    }
    // A denominator q^{-m} is fatal iff the recurrence uses its vanishing factor,
    // i.e. m < term_at or the series does not terminate at all.
    for (Complex b : spec.denominators) {
        int m = negative_power_index(b, spec.q);
        if (m >= 0 && (term_at < 0 || m < term_at))
            fail(ErrorCode::DivergentDenominator,
                 "denominator parameter q^{-n} reached before termination");
    }

    if (term_at == 0) return {Complex(1.0), 1, true, 0.0};

    Complex term = 1.0, partial = 1.0;
    Complex qk = 1.0;  // q^k
    int small_streak = 0;
    for (int k = 0; k < policy.max_terms; ++k) {
        Complex ratio = spec.z;
        for (Complex a : spec.numerators) ratio *= (1.0 - a * qk);
        qk *= spec.q;
        ratio /= (1.0 - qk);
        Complex dq = qk / spec.q;
        for (Complex b : spec.denominators) ratio /= (1.0 - b * dq);
        term *= ratio;
        partial += term;
        // An exactly zero term (z = 0, say) kills every later term too.
        if (term == Complex(0.0) && term_at < 0) return {partial, k + 1, false, 0.0};

        if (term_at >= 0) {
            if (k + 1 == term_at) return {partial, term_at + 1, true, 0.0};
            continue;
        }
        if (std::abs(term) > 1e100)
            fail(ErrorCode::NonConvergent, "phi series terms diverge");
        if (std::abs(term) < policy.tol * std::abs(partial)) {
            if (++small_streak == 3) {
                // Geometric tail guess from the last observed ratio.
                double r = std::min(std::abs(ratio), 0.9);
                return {partial, k + 2, false, std::abs(term) * r / (1.0 - r)};
            }
        } else {
            small_streak = 0;
        }
    }
    fail(ErrorCode::NonConvergent, "phi series did not contract within max_terms");
}

SeriesResult sum_vwp_w(Complex a, const std::vector<Complex>& b, Complex q, Complex z,
                       const TruncationPolicy& policy) {
    Complex ra = std::sqrt(a);
    PhiSeriesSpec spec;
    spec.numerators = {a, q * ra, -q * ra};
    spec.denominators = {ra, -ra};
    for (Complex bi : b) {
        spec.numerators.push_back(bi);
        // A vanishing slot pairs with a vanishing mate: (0;q)_k / (0;q)_k = 1.
        spec.denominators.push_back(bi == Complex(0.0) ? Complex(0.0) : a * q / bi);
    }
    spec.q = q;
    spec.z = z;
    return sum_phi(spec, policy);
}

Complex w14_13_value(Complex b, const std::array<Complex, 4>& t, Complex q,
                     const TruncationPolicy& policy) {
    Complex T2 = t[0] * t[1] * t[2] * t[3];
    if (b == Complex(0.0)) return qpoch_inf(T2, q, policy);

    Complex prefactor = 1.0;
    std::vector<Complex> params;
    for (int r = 0; r < 4; ++r)
        for (int s = r + 1; s < 4; ++s) {
            prefactor *= qpoch_inf(b * t[r] * t[s], q, policy);
            params.push_back(t[r] * t[s]);
        }
    prefactor *= qpoch_inf(q * b * b, q, policy) * qpoch_inf(b * b, q, policy) *
                 qpoch_inf(T2, q, policy) /
                 (qpoch_inf(q * b, q, policy) * qpoch_inf(b * T2, q, policy));

    Complex T = std::sqrt(T2), rq = std::sqrt(q);
    params.push_back(q / b);
    params.push_back(b * T / rq);
    params.push_back(-b * T / rq);
    params.push_back(b * T);
    params.push_back(-b * T);
    return prefactor * sum_vwp_w(b * T2 / q, params, q, b * b, policy).value;
}

}  // namespace ellf4
