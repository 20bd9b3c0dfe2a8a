#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ellf4/base.hpp"

namespace ellf4 {

/// Origin-centered circle, traversed once counterclockwise.
struct CircleContour {
    double radius = 1.0;
};

struct QuadratureConfig {
    int n_start = 32;       // power of two, >= 16
    int n_max = 65536;
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;  // floor for integrals whose true value is ~0
};

struct QuadratureResult {
    Complex value;
    double err_estimate = 0.0;  // last doubling difference
    int n_used = 0;
};

/// Trapezoid rule for (2*pi*i)^{-1} \oint f(z) dz/z on the circle: the plain
/// average of f over N equispaced samples, N doubling with sample reuse until
/// |v_{2N} - v_N| < rel_tol |v_{2N}| + abs_tol.  Spectrally accurate for f
/// analytic in an annulus around the contour.
QuadratureResult integrate_circle(const std::function<Complex(Complex)>& f,
                                  const CircleContour& contour, const QuadratureConfig& cfg = {});

/// Thread-local running tallies across integrate_circle calls: total integrand
/// samples and summed relative doubling differences (exact prefactors leave
/// relative error intact), so multi-integral evaluations can report a single
/// diagnostic.
void reset_sample_tally();
long sample_tally();
double error_tally();

/// Simple-pole residue of f at the given point: the same engine applied to
/// w -> f(pole + w) * w on a small circle around the origin.
Complex residue_numeric(const std::function<Complex(Complex)>& f, Complex pole,
                        double small_radius, const QuadratureConfig& cfg = {});

/// One multiplicative factor of an integrand, carrying poles in z:
///   Gamma:        Gamma(c z^s; p,q),   poles where c z^s = p^{-j} q^{-k}
///   InverseGamma: 1/Gamma(c z^s; p,q), poles where c z^s = p^{j+1} q^{k+1}
///   InverseQPoch: 1/(c z^s; q)_inf,    poles where c z^s = q^{-k}
/// with s in {1, -1, 2, -2}.  s > 0 families accumulate at infinity for Gamma /
/// InverseQPoch and at 0 for InverseGamma; s < 0 mirrors that.
enum class FactorKind { Gamma, InverseGamma, InverseQPoch };

struct IntegrandFactor {
    FactorKind kind;
    Complex coefficient;
    int z_power = 1;
};

struct PoleEntry {
    Complex location;
    std::string source;
};

/// Poles sorted by which side of the contour they must fall on: inward families
/// accumulate at 0, outward ones at infinity.  Retains generation j=k=0 always
/// plus every pole with modulus in [radius/4, 4*radius].
struct PoleCatalog {
    std::vector<PoleEntry> inward;
    std::vector<PoleEntry> outward;

    double max_inward_modulus() const;  // 0 when empty
    double min_outward_modulus() const; // +inf when empty
};

PoleCatalog gamma_pole_catalog(const std::vector<IntegrandFactor>& factors,
                               const EllipticBase& base, double radius);

/// Geometric mean of the bounding moduli when the catalog separates
/// (max inward < min outward); empty when the two sides cross.  One-sided
/// catalogs fall back to min_out/2 resp. 2*max_in; pole-free ones to 1.
std::optional<double> select_radius(
    const std::function<PoleCatalog(double)>& catalog_builder);

}  // namespace ellf4
