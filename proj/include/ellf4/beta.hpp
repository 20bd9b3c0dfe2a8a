#pragma once

#include <array>
#include <utility>
#include <vector>

#include "ellf4/base.hpp"
#include "ellf4/quadrature.hpp"
#include "ellf4/weyl.hpp"

namespace ellf4 {

/// Parameter point of the renormalized order-m beta integral: 2m+6 values t_i
/// with prod t_i = (pq)^{m+1}.  The factory solves the last slot from the
/// leading 2m+5, so the balancing holds by construction; tuples are only
/// meaningful modulo a global sign flip.
struct BetaParams {
    int m = 0;
    std::vector<Complex> t;

    static BetaParams balanced(int m, const std::vector<Complex>& leading,
                               const EllipticBase& base);
};

/// Arguments of the F4-symmetric integral E(b;t).  Evaluation refuses points
/// where some b t_r^2 or p^2 q^2/(b t_r^2) lies on the p^{-j} q^{-k} lattice:
/// the normalized function extends there, but both computational routes
/// divide by a vanishing product.
struct F4IntegralParams {
    Complex b;
    std::array<Complex, 4> t;
    EllipticBase base;
};

/// prod_{r<s}(t_r t_s;p,q) (p;p)(q;q)/2 times the circle integral of
/// prod_r Gamma(t_r z^{+-1}) / Gamma(z^{+-2}).
Complex e_m(const BetaParams& params, const EllipticBase& base,
            const QuadratureConfig& cfg = {});

/// Closed form of the m = 0 integral: prod_{r<s} (pq/(t_r t_s); p,q).
Complex e0_product(const std::array<Complex, 6>& t, const EllipticBase& base);

/// Both sides of the m = 1 transformation: lhs = E^1(t); rhs = E^1 with the
/// first four parameters multiplied by v and the last four divided by v,
/// v^2 = pq/(t0 t1 t2 t3).  The eighth slot is re-solved from the balancing.
std::pair<Complex, Complex> e1_transform_pair(const std::array<Complex, 8>& t,
                                              const EllipticBase& base,
                                              const QuadratureConfig& cfg = {});

/// E(b;t) through the order-5 integral with arguments t_r, pq/(b t_r) and the
/// eight square roots of b, bq, bp, bpq, divided by
/// prod_r (b t_r^2, p^2 q^2/(b t_r^2); p,q).  Cross-check route.
Complex e_f4_def(const F4IntegralParams& params, const QuadratureConfig& cfg = {});

/// E(b;t) as a single-kernel integral: pair prefactor over t_r t_s,
/// pq t_r/(b t_s), pq t_s/(b t_r), p^2 q^2/(b^2 t_r t_s), the b-block
/// constants, (p;p)(q;q)/2, and the circle integral of
/// Gamma(b z^{+-2})/Gamma(z^{+-2}) prod_r Gamma(t_r z^{+-1})/Gamma(b t_r z^{+-1}).
/// Default route: same value as e_f4_def with fewer gamma evaluations.
Complex e_f4_explicit(const F4IntegralParams& params, const QuadratureConfig& cfg = {});

/// Principal root of p^2 q^2/(b^2 t1 t2 t3 t4).  E(b;t) = E(b;tv) for either
/// sign of the root; applying the move twice returns the original tuple.
Complex v_parameter(const F4IntegralParams& params);

/// Apex limit object (b carries one power of p): prefactor
/// prod_{r<s}(t_r t_s, q t_r/(b t_s), q t_s/(b t_r), q^2/(b^2 t_r t_s);q)
/// (q/b;q)^4 (q;q)/2 times the circle integral of
/// (z^{+-2};q)((q/b) z^{+-2};q) / prod_r ((t_r z^{+-1};q)((q/(b t_r)) z^{+-1};q)).
Complex b1_integral(Complex b, const std::array<Complex, 4>& t, Complex q,
                    const QuadratureConfig& cfg = {});

/// Vertex limit object (all exponents zero): prod_{r<s}(t_r t_s;q)
/// (b^2,qb^2,q;q)/(2(b,qb;q)) times the circle integral of
/// (z^{+-2};q)/(b z^{+-2};q) prod_r (b t_r z^{+-1};q)/(t_r z^{+-1};q).
Complex b2_integral(Complex b, const std::array<Complex, 4>& t, Complex q,
                    const QuadratureConfig& cfg = {});

/// Closed-form limits for 0 < beta < 1, matched after permutation with
/// h = (1-beta)/2: all tau_r in {0, 1-beta} gives
/// (prod_{tau_r=0} t_r prod_{tau_r=1-beta} q/(b t_r); q); (h,h,h,3h) gives
/// (q^3/(b^3 t4^2);q); (h,h,h,-h) gives (q t4^2/b;q); any other point strictly
/// inside the polytope gives 1.
Complex mid_beta_limit(Complex b, const std::array<Complex, 4>& t, Complex q,
                       const LimitExponents& e);

/// beta = 0 limit integral for 0 <= tau_r <= 1: per-coordinate integrand
/// factors (b t_r z^{+-1};q)/(t_r z^{+-1};q) at tau_r = 0 and
/// ((q/t_r) z^{+-1};q)/((q/(b t_r)) z^{+-1};q) at tau_r = 1, none for interior
/// tau_r; pair prefactors only between boundary coordinates.
Complex limit_b0_interior(Complex b, const std::array<Complex, 4>& t, Complex q,
                          const LimitExponents& e, const QuadratureConfig& cfg = {});

/// beta = 0 limit integral when one exponent leaves [0,1]: tau_1 in [-1/2,0)
/// with -tau_1 <= tau_r <= 1+tau_1, or the mirrored window tau_1 in (1,3/2]
/// handled by the substitution (t_1, tau_1) -> (q/(b t_1), 1-tau_1).  Boundary
/// saturations toggle the printed indicator factors; the integrand is not even,
/// so the full circle carries weight (q;q), not (q;q)/2.
Complex limit_b0_edge(Complex b, const std::array<Complex, 4>& t, Complex q,
                      const LimitExponents& e, const QuadratureConfig& cfg = {});

/// prod_{r<s<=3}(b t_r t_s;q) (qb^2,b^2;q)/(qb;q) times
/// 4phi3(t1 t2, t1 t3, t2 t3, q/b; b t1 t2, b t1 t3, b t2 t3; q, b^2).
Complex series_rep_edge_4phi3(Complex b, const std::array<Complex, 3>& t, Complex q,
                              const TruncationPolicy& policy = {});

/// (b t v, qb^2, b^2;q)/(qb;q) times 2phi1(t v, q/b; b t v; q, b^2).
Complex series_rep_octahedron_2phi1(Complex b, Complex t, Complex v, Complex q,
                                    const TruncationPolicy& policy = {});

/// Relative residual of (qb^2;q) = (b^2,qb^2,q;q)/(2(b,qb;q)) times the circle
/// integral of (z^{+-2}, b t z^{+-1};q)/(b z^{+-2}, t z^{+-1};q); the right
/// side is t-independent.
double interior_identity_check(Complex b, Complex t, Complex q,
                               const QuadratureConfig& cfg = {});

/// Relative residual of (qb^2, b^2 t^2;q)/(b^3 t^2, qb;q) =
/// 8W7(b^2 t^2/q; +-t sqrt(b), +-t sqrt(b/q), b; q, qb).
double w8_7_evaluation_check(Complex b, Complex t, Complex q,
                             const TruncationPolicy& policy = {});

/// Vertex series at the one-negative-exponent presentation:
/// prod_{r>=2}(b t1 t_r, q t1/t_r;q) (qb^2, b^2, q t1^2/b;q)/(qb, q t1^2;q)
/// times 14W13(t1^2; t1 t_r, q t1/(b t_r) for r >= 2, q/b, +-sqrt(b) t1,
/// +-sqrt(bq) t1; q, b^2).  Requires |b| < 1.
Complex vertex_w14_13(Complex b, const std::array<Complex, 4>& t, Complex q,
                      const TruncationPolicy& policy = {});

/// Integral side of the edge duality, k = u.size() >= 0:
/// prod_r (t1 u_r;q) (q/b, qb^2, q;q)/(q/b^2, qb;q) times the circle integral
/// of theta(b^2 t1 z;q)/((t1 z, q/(b t1 z);q)) prod_r (b u_r/z;q)/(u_r/z;q).
Complex duality_integral(Complex b, Complex t1, const std::vector<Complex>& u,
                         Complex q, const QuadratureConfig& cfg = {});

/// Series side of the edge duality:
/// prod_r (b u_r t1;q) (qb^2,b^2;q)/(qb;q) times
/// (k+1)phik(t1 u_1..t1 u_k, q/b; b u_1 t1..b u_k t1; q, b^2).
Complex duality_series(Complex b, Complex t1, const std::vector<Complex>& u,
                       Complex q, const TruncationPolicy& policy = {});

/// Syntactic regime of (beta, tau) driving limit_value dispatch.
enum class LimitCase {
    B1Vertex,    // beta = 1, tau = 0
    MidCaseA,    // 0 < beta < 1, all tau_r in {0, 1-beta}
    MidCaseB,    // 0 < beta < 1, (h,h,h,3h) pattern
    MidCaseC,    // 0 < beta < 1, (h,h,h,-h) pattern
    MidCaseD,    // 0 < beta < 1, other interior point
    B0Interior,  // beta = 0, all tau_r in [0,1]
    B0EdgeNeg,   // beta = 0, one tau_r < 0
    B0EdgePos,   // beta = 0, one tau_r > 1
    Outside,
};

const char* to_string(LimitCase c);

LimitCase classify_limit(const LimitExponents& e, double eps = 1e-9);

/// The p -> 0 limit object of E(b p^beta; t_r p^{tau_r}) for the regime of e.
Complex limit_value(Complex b, const std::array<Complex, 4>& t, Complex q,
                    const LimitExponents& e, const QuadratureConfig& cfg = {});

/// E(b p^beta; t_r p^{tau_r}) at real p in (0,1), evaluated through whichever
/// image of the exponents under the additive action admits a separating circle
/// (the value is orbit-invariant); images are tried most-central first.
Complex e_f4_at_exponents(Complex b, const std::array<Complex, 4>& t,
                          const LimitExponents& e, const EllipticBase& base,
                          const QuadratureConfig& cfg = {});

}  // namespace ellf4
