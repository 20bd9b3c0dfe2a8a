#include "ellf4/quadrature.hpp"

#include <cmath>
#include <limits>

namespace ellf4 {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Compensated accumulation, fixed index order, so results are bit-deterministic.
class KahanSum {
  public:
    void add(Complex x) {
        add_part(x.real(), re_, re_c_);
        add_part(x.imag(), im_, im_c_);
    }
    Complex total() const { return {re_, im_}; }

  private:
    static void add_part(double x, double& s, double& c) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double re_ = 0.0, im_ = 0.0, re_c_ = 0.0, im_c_ = 0.0;
};

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

thread_local long g_sample_tally = 0;
thread_local double g_error_tally = 0.0;

}  // namespace

void reset_sample_tally() {
    g_sample_tally = 0;
    g_error_tally = 0.0;
}

long sample_tally() { return g_sample_tally; }

double error_tally() { return g_error_tally; }

QuadratureResult integrate_circle(const std::function<Complex(Complex)>& f,
                                  const CircleContour& contour, const QuadratureConfig& cfg) {
    if (!(contour.radius > 0.0)) fail(ErrorCode::Domain, "contour radius must be positive");
    if (cfg.n_start < 16 || !power_of_two(cfg.n_start))
        fail(ErrorCode::Domain, "n_start must be a power of two >= 16");
    if (cfg.n_max < cfg.n_start) fail(ErrorCode::Domain, "n_max must be >= n_start");
    if (!(cfg.rel_tol > 0.0)) fail(ErrorCode::Domain, "rel_tol must be positive");

    KahanSum sum;
    for (int j = 0; j < cfg.n_start; ++j)
        sum.add(f(std::polar(contour.radius, kTwoPi * j / cfg.n_start)));
    Complex value = sum.total() / double(cfg.n_start);

    int n = cfg.n_start;
    while (n < cfg.n_max) {
        // The N old samples are the even-index samples of the 2N grid; only the
        // odd ones are new.
        KahanSum fresh;
        for (int j = 0; j < n; ++j)
            fresh.add(f(std::polar(contour.radius, kTwoPi * (2 * j + 1) / (2 * n))));
        Complex refined = 0.5 * (value + fresh.total() / double(n));
        double diff = std::abs(refined - value);
        n *= 2;
        value = refined;
        if (diff < cfg.rel_tol * std::abs(refined) + cfg.abs_tol) {
            // With nested doubling the final grid size equals the total count
            // of fresh integrand evaluations.
            g_sample_tally += n;
            g_error_tally += diff / std::max(std::abs(value), cfg.abs_tol);
            return {value, diff, n};
        }
    }
    g_sample_tally += cfg.n_max;
    fail(ErrorCode::NonConvergent, "quadrature did not converge; a pole may hug the contour");
}

Complex residue_numeric(const std::function<Complex(Complex)>& f, Complex pole,
                        double small_radius, const QuadratureConfig& cfg) {
    if (!(small_radius > 0.0)) fail(ErrorCode::Domain, "residue radius must be positive");
    auto recentered = [&](Complex w) { return f(pole + w) * w; };
    return integrate_circle(recentered, {small_radius}, cfg).value;
}

double PoleCatalog::max_inward_modulus() const {
    double m = 0.0;
    for (const auto& e : inward) m = std::max(m, std::abs(e.location));
    return m;
}

double PoleCatalog::min_outward_modulus() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& e : outward) m = std::min(m, std::abs(e.location));
    return m;
}

namespace {

const char* kind_name(FactorKind k) {
    switch (k) {
        case FactorKind::Gamma: return "gamma";
        case FactorKind::InverseGamma: return "1/gamma";
        case FactorKind::InverseQPoch: return "1/qpoch";
    }
    return "?";
}

// Append the z-plane solutions of z^s = w.  |s| is 1 or 2.
void push_roots(std::vector<PoleEntry>& dst, Complex w, int s, const std::string& tag) {
    if (s < 0) {
        w = 1.0 / w;
        s = -s;
    }
    if (s == 1) {
        dst.push_back({w, tag});
    } else {
        Complex r = std::sqrt(w);
        dst.push_back({r, tag});
        dst.push_back({-r, tag});
    }
}

}  // namespace

PoleCatalog gamma_pole_catalog(const std::vector<IntegrandFactor>& factors,
                               const EllipticBase& base, double radius) {
    if (!(radius > 0.0)) fail(ErrorCode::Domain, "catalog radius must be positive");
    PoleCatalog cat;
    double lo = radius / 4.0, hi = 4.0 * radius;

    for (const auto& fac : factors) {
        int s = fac.z_power;
        if (s == 0 || std::abs(s) > 2)
            fail(ErrorCode::Domain, "factor z power must be one of {1,-1,2,-2}");
        std::string tag =
            std::string(kind_name(fac.kind)) + "(c z^" + std::to_string(s) + ")";

        // The pole family in the w = z^s variable: |w| monotone in the ladder
        // generation.  Gamma / InverseQPoch families grow; InverseGamma shrinks.
        bool grows = fac.kind != FactorKind::InverseGamma;
        // Outward in z iff the family escapes to infinity there: growing families
        // with s > 0, shrinking families with s < 0.
        bool outward = grows == (s > 0);
        auto& side = outward ? cat.outward : cat.inward;

        // z-modulus window [lo, hi] mapped to w-space.
        double w_lo = std::min(std::pow(lo, double(s)), std::pow(hi, double(s)));
        double w_hi = std::max(std::pow(lo, double(s)), std::pow(hi, double(s)));
        auto in_window = [&](Complex w) {
            double m = std::abs(w);
            return m >= w_lo && m <= w_hi;
        };

        Complex base_w = 1.0 / fac.coefficient;  // generation (0,0)
        if (fac.kind == FactorKind::InverseGamma) {
            base_w *= base.p() * base.q();
            if (base_w == Complex(0.0)) continue;  // a zero nome: no poles at all
        }
        double ap = std::abs(base.p()), aq = std::abs(base.q());

        if (fac.kind == FactorKind::InverseQPoch) {
            // Single ladder w = c^{-1} q^{-k}; moduli grow, so stop past w_hi.
            Complex w = base_w;
            for (int k = 0;; ++k) {
                if (k > 0 && std::abs(w) > w_hi) break;
                if (k == 0 || in_window(w)) push_roots(side, w, s, tag);
                if (aq == 0.0) break;
                w /= base.q();
            }
            continue;
        }

        // Double ladder: w = base_w * p^{-j} q^{-k} (Gamma, growing) or
        // base_w * p^j q^k (InverseGamma, shrinking).  Moduli are monotone in
        // each index, so each loop breaks once it passes the window.
        Complex wj = base_w;
        for (int j = 0;; ++j) {
            if (j > 0 && (grows ? std::abs(wj) > w_hi : std::abs(wj) < w_lo)) break;
            Complex w = wj;
            for (int k = 0;; ++k) {
                if (k > 0 && (grows ? std::abs(w) > w_hi : std::abs(w) < w_lo)) break;
                if ((j == 0 && k == 0) || in_window(w)) push_roots(side, w, s, tag);
                if (aq == 0.0) break;
                w = grows ? w / base.q() : w * base.q();
            }
            if (ap == 0.0) break;
            wj = grows ? wj / base.p() : wj * base.p();
        }
    }
    return cat;
}

std::optional<double> select_radius(
    const std::function<PoleCatalog(double)>& catalog_builder) {
    // Generation-0 poles are always retained, and each family's extreme modulus
    // is attained at generation 0, so one probe catalog suffices.
    PoleCatalog cat = catalog_builder(1.0);
    bool has_in = !cat.inward.empty(), has_out = !cat.outward.empty();
    if (!has_in && !has_out) return 1.0;
    if (!has_in) return cat.min_outward_modulus() / 2.0;
    if (!has_out) return 2.0 * cat.max_inward_modulus();
    double max_in = cat.max_inward_modulus();
    double min_out = cat.min_outward_modulus();
    if (max_in >= min_out) return std::nullopt;
    return std::sqrt(max_in * min_out);
}

}  // namespace ellf4
