#pragma once

#include <complex>

#include "ellf4/errors.hpp"

namespace ellf4 {

using Complex = std::complex<double>;

/// Truncation control for infinite products and series.
struct TruncationPolicy {
    double tol = 1e-14;
    int max_terms = 4000;
};

/// A pair of elliptic nomes with |p| < 1, |q| < 1 (strict) plus truncation control.
class EllipticBase {
  public:
    EllipticBase(Complex p, Complex q, double tol = 1e-14, int max_terms = 4000)
        : p_(p), q_(q), policy_{tol, max_terms} {
        if (!(std::abs(p) < 1.0) || !(std::abs(q) < 1.0))
            fail(ErrorCode::Domain, "elliptic base requires |p| < 1 and |q| < 1");
        if (!(tol > 0.0) || max_terms < 1)
            fail(ErrorCode::Domain, "elliptic base requires tol > 0 and max_terms >= 1");
    }

    Complex p() const { return p_; }
    Complex q() const { return q_; }
    const TruncationPolicy& policy() const { return policy_; }

    /// Same base with the two nomes exchanged.
    EllipticBase swapped() const {
        return EllipticBase(q_, p_, policy_.tol, policy_.max_terms);
    }

  private:
    Complex p_, q_;
    TruncationPolicy policy_;
};

}  // namespace ellf4
