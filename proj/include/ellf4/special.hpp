#pragma once

#include <complex>

#include "ellf4/base.hpp"

namespace ellf4 {

/// (x;q)_m = prod_{r=0}^{m-1} (1 - x q^r).  m >= 0.
Complex qpoch_finite(Complex x, Complex q, int m);

/// (x;q)_inf = prod_{r>=0} (1 - x q^r), truncated once |x||q|^N < tol*(1-|q|).
Complex qpoch_inf(Complex x, Complex q, const TruncationPolicy& policy = {});

/// (x;p,q) = prod_{r,s>=0} (1 - x p^r q^s), truncated along diagonals r+s = const.
/// Symmetric in p and q.
Complex pq_poch(Complex x, const EllipticBase& base);

/// theta(x;p) = (x;p)_inf (p/x;p)_inf.  Requires x != 0.
Complex theta(Complex x, Complex p, const TruncationPolicy& policy = {});

/// Gamma(x;p,q) = (pq/x;p,q) / (x;p,q).  Poles at x = p^{-j} q^{-k}, j,k >= 0;
/// arguments within relative distance 1e-10 of a pole are rejected.
Complex elliptic_gamma(Complex x, const EllipticBase& base);

/// (a z; q)_inf (a/z; q)_inf.
Complex qpoch_pair(Complex a, Complex z, Complex q, const TruncationPolicy& policy = {});

/// Gamma(a z; p,q) Gamma(a/z; p,q).
Complex gamma_pair(Complex a, Complex z, const EllipticBase& base);

/// Residual |lhs - rhs| / |rhs| of the three-term theta relation
///   theta(bwz, w/(bz), b/z^2; q) / theta(wz, w/z, 1/z^2; q) + (z -> 1/z)
///     = theta(b^2; q) / theta(b; q),
/// where theta of several arguments is the product over them.
double theta_addition_residual(Complex b, Complex w, Complex z, Complex q,
                               const TruncationPolicy& policy = {});

}  // namespace ellf4
