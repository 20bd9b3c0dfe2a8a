#pragma once

#include <array>
#include <vector>

#include "ellf4/base.hpp"

namespace ellf4 {

/// A root of the rank-4 exceptional system: entries are exact dyadic rationals
/// (0, +-1, +-1/2, +-2 patterns), so double arithmetic on them is exact.
using Root = std::array<double, 4>;
using Vec4 = std::array<double, 4>;

/// Orthogonal group element stored as the doubled matrix N = 2M with integer
/// entries in {0, +-1, +-2}.  Every element is either pure signed-permutation
/// type (each row one +-2) or pure half type (each row four +-1); orthogonality
/// of the rows forbids mixing.
struct GroupElement {
    std::array<std::array<int, 4>, 4> n{};

    static GroupElement identity();
    GroupElement operator*(const GroupElement& rhs) const;  // this after rhs
    GroupElement inverse() const;                            // transpose
    bool operator==(const GroupElement&) const = default;
    bool operator<(const GroupElement&) const;
    bool half_type() const;
};

/// All 48 roots: 24 short (+-e_j and half-sum vectors) and 24 long (+-e_j +- e_k).
const std::vector<Root>& f4_roots();

/// s_alpha(beta) = beta - 2 <alpha,beta>/<alpha,alpha> alpha.
Vec4 reflect(const Root& alpha, const Vec4& beta);

GroupElement reflection_element(const Root& alpha);

/// The four simple reflections, in the fixed basis order
///   e2-e3, e1-e2, -e1, (e1+e2+e3+e4)/2.
const std::array<GroupElement, 4>& simple_reflections();

/// Breadth-first closure of the simple reflections; deterministic order,
/// identity first.  1152 elements.
const std::vector<GroupElement>& f4_group();

/// Subgroup generated by the +-e_j and +-e_j +- e_k reflections: the signed
/// permutations, 384 elements.
const std::vector<GroupElement>& b4_subgroup();

/// A 4-tuple of nonzero values modulo global sign, with the action scale A.
struct F4Point {
    std::array<Complex, 4> z;
    Complex A;
};

/// The multiplicative action: conjugate the linear action by coordinatewise
/// log shifted so A sits at the origin.  Realized algebraically: one square
/// root of z1 z2 z3 z4 and one of A; the branch choices amount to the global
/// sign that the ~ quotient removes.
F4Point mult_action(const GroupElement& g, const F4Point& pt);

bool same_mod_sign(const std::array<Complex, 4>& a, const std::array<Complex, 4>& b,
                   double tol);

/// Distinct images of pt under the whole group, modulo global sign.
std::vector<std::array<Complex, 4>> orbit_mod_sign(const F4Point& pt, double tol = 1e-9);

/// Exponents (beta on the modulus parameter, tau on the four others) for the
/// degeneration family.  The polytope of admissible exponents is the pyramid
///   0 <= beta <= 1,  0 <= tau_r + tau_s <= 2-2beta,  tau_r - tau_s <= 1-beta,
/// whose base (beta = 0) is a 24-cell and whose apex is beta = 1, tau = 0.
struct LimitExponents {
    double beta = 0.0;
    Vec4 tau{};
};

/// beta fixed; tau -> s + M (tau - s), s = (1-beta)/2 per coordinate.  This is
/// the shadow of mult_action on exponents.
LimitExponents additive_action(const GroupElement& g, const LimitExponents& e);

/// Position of the exponent vector in the polytope, up to the group action.
/// At beta = 0 the boundary cells are graded by how many facets of the 24-cell
/// the point saturates (1: octahedron, 2: triangle, 3: edge, >=4: vertex); the
/// square locus inside an octahedron facet is where the saturating pair of
/// centered coordinates is equal.
enum class RegimeTag {
    Vertex,
    Edge,
    Triangle,
    OctahedronGeneric,
    OctahedronSquare,
    Interior,
    MidBeta,
    BetaOneApex,
    Outside,
};

const char* to_string(RegimeTag tag);

RegimeTag classify_regime(const LimitExponents& e, double eps = 1e-9);

}  // namespace ellf4
