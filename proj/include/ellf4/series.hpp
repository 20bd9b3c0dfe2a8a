#pragma once

#include <array>
#include <vector>

#include "ellf4/base.hpp"

namespace ellf4 {

/// Parameters of the basic hypergeometric sum
///   sum_{k>=0} (a_1,...,a_{r+1};q)_k / (q, b_1,...,b_r;q)_k * z^k.
/// Shape constraint: numerators.size() == denominators.size() + 1.
struct PhiSeriesSpec {
    std::vector<Complex> numerators;
    std::vector<Complex> denominators;
    Complex q;
    Complex z;
};

struct SeriesResult {
    Complex value;
    int terms_used = 0;
    bool terminated = false;  // a numerator q^{-n} truncated the sum
    double tail_estimate = 0.0;
};

/// Sum the series by the term-ratio recurrence
///   term_{k+1} = term_k * prod(1 - a_i q^k) / ((1 - q^{k+1}) prod(1 - b_j q^k)) * z.
/// Terminating numerators are detected up front (|a - q^{-n}| < 1e-12 |q|^{-n});
/// otherwise stops after 3 consecutive terms below tol * |partial sum|.
SeriesResult sum_phi(const PhiSeriesSpec& spec, const TruncationPolicy& policy = {});

/// Very well poised series r+1_W_r(a; b_1..b_{r-2}; q, z): expands to the phi spec
/// with numerators {a, q sqrt(a), -q sqrt(a), b...} over {sqrt(a), -sqrt(a), aq/b...}
/// and delegates to sum_phi.  Result is branch independent: the square roots enter
/// in +- pairs.
SeriesResult sum_vwp_w(Complex a, const std::vector<Complex>& b, Complex q, Complex z,
                       const TruncationPolicy& policy = {});

/// Prefactor times 14_W_13 series form of the order-two q-beta integral:
///   prod_{r<s}(b t_r t_s;q) * (qb^2, b^2, T^2;q)/(qb, bT^2;q)
///     * 14_W_13(bT^2/q; t_r t_s (6 of them), q/b, +-bT/sqrt(q), +-bT; q, b^2)
/// with T = sqrt(t_1 t_2 t_3 t_4).  b = 0 short-circuits to (T^2;q).
Complex w14_13_value(Complex b, const std::array<Complex, 4>& t, Complex q,
                     const TruncationPolicy& policy = {});

}  // namespace ellf4
