#include "ellf4/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "ellf4/errors.hpp"

namespace ellf4 {

namespace {

std::array<int, 16> flat(const GroupElement& g) {
    std::array<int, 16> out;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out[4 * r + c] = g.n[r][c];
    return out;
}

double dot(const Vec4& a, const Vec4& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

Complex pow_int(Complex w, int k) {
    Complex out{1.0, 0.0};
    for (int i = 0; i < std::abs(k); ++i) out *= w;
    return k < 0 ? Complex{1.0, 0.0} / out : out;
}

}  // namespace

GroupElement GroupElement::identity() {
    GroupElement g;
    for (int r = 0; r < 4; ++r) g.n[r][r] = 2;
    return g;
}

GroupElement GroupElement::operator*(const GroupElement& rhs) const {
    // (2M1)(2M2) = 4 M1 M2, and the product matrix is again doubled, so halve.
    GroupElement out;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            int acc = 0;
            for (int k = 0; k < 4; ++k) acc += n[r][k] * rhs.n[k][c];
            out.n[r][c] = acc / 2;
        }
    return out;
}

GroupElement GroupElement::inverse() const {
    GroupElement out;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out.n[r][c] = n[c][r];
    return out;
}

bool GroupElement::operator<(const GroupElement& other) const {
    return flat(*this) < flat(other);
}

bool GroupElement::half_type() const {
    // Rows are orthonormal up to the doubling, so one odd entry forces all odd.
    return std::abs(n[0][0]) == 1 || std::abs(n[0][1]) == 1 || std::abs(n[0][2]) == 1 ||
           std::abs(n[0][3]) == 1;
}

const std::vector<Root>& f4_roots() {
    static const std::vector<Root> roots = [] {
        std::vector<Root> out;
        for (int j = 0; j < 4; ++j)
            for (double s : {1.0, -1.0}) {
                Root r{};
                r[j] = s;
                out.push_back(r);
            }
        for (int j = 0; j < 4; ++j)
            for (int k = j + 1; k < 4; ++k)
                for (double sj : {1.0, -1.0})
                    for (double sk : {1.0, -1.0}) {
                        Root r{};
                        r[j] = sj;
                        r[k] = sk;
                        out.push_back(r);
                    }
        for (int mask = 0; mask < 16; ++mask) {
            Root r;
            for (int j = 0; j < 4; ++j) r[j] = (mask >> j & 1) ? 0.5 : -0.5;
            out.push_back(r);
        }
        return out;
    }();
    return roots;
}

Vec4 reflect(const Root& alpha, const Vec4& beta) {
    double c = 2.0 * dot(alpha, beta) / dot(alpha, alpha);
    Vec4 out;
    for (int j = 0; j < 4; ++j) out[j] = beta[j] - c * alpha[j];
    return out;
}

GroupElement reflection_element(const Root& alpha) {
    double aa = dot(alpha, alpha);
    GroupElement g;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            double m = (r == c ? 1.0 : 0.0) - 2.0 * alpha[r] * alpha[c] / aa;
            g.n[r][c] = static_cast<int>(std::lround(2.0 * m));
        }
    return g;
}

const std::array<GroupElement, 4>& simple_reflections() {
    static const std::array<GroupElement, 4> gens = [] {
        return std::array<GroupElement, 4>{
            reflection_element({0.0, 1.0, -1.0, 0.0}),
            reflection_element({1.0, -1.0, 0.0, 0.0}),
            reflection_element({-1.0, 0.0, 0.0, 0.0}),
            reflection_element({0.5, 0.5, 0.5, 0.5}),
        };
    }();
    return gens;
}

namespace {

std::vector<GroupElement> bfs_closure(const std::vector<GroupElement>& gens) {
    std::vector<GroupElement> order{GroupElement::identity()};
    std::set<std::array<int, 16>> seen{flat(order.front())};
    std::deque<GroupElement> queue{order.front()};
    while (!queue.empty()) {
        GroupElement g = queue.front();
        queue.pop_front();
        for (const GroupElement& s : gens) {
            GroupElement next = s * g;
            if (seen.insert(flat(next)).second) {
                order.push_back(next);
                queue.push_back(next);
            }
        }
    }
    return order;
}

}  // namespace

const std::vector<GroupElement>& f4_group() {
    static const std::vector<GroupElement> group = [] {
        const auto& s = simple_reflections();
        return bfs_closure({s.begin(), s.end()});
    }();
    return group;
}

const std::vector<GroupElement>& b4_subgroup() {
    static const std::vector<GroupElement> group = [] {
        std::vector<GroupElement> gens;
        for (const Root& alpha : f4_roots()) {
            bool integral = true;
            for (double a : alpha) integral = integral && a == std::round(a);
            if (integral) gens.push_back(reflection_element(alpha));
        }
        return bfs_closure(gens);
    }();
    return group;
}

F4Point mult_action(const GroupElement& g, const F4Point& pt) {
    Complex w = std::sqrt(pt.A);
    F4Point out;
    out.A = pt.A;
    if (g.half_type()) {
        Complex s = std::sqrt(pt.z[0] * pt.z[1] * pt.z[2] * pt.z[3]);
        for (int r = 0; r < 4; ++r) {
            int rowsum = 0;
            Complex mono{1.0, 0.0};
            for (int c = 0; c < 4; ++c) {
                rowsum += g.n[r][c];
                if (g.n[r][c] == 1) mono *= pt.z[c];
            }
            out.z[r] = pow_int(w, (2 - rowsum) / 2) * mono / s;
        }
    } else {
        for (int r = 0; r < 4; ++r) {
            int rowsum = 0;
            Complex mono{1.0, 0.0};
            for (int c = 0; c < 4; ++c) {
                rowsum += g.n[r][c];
                if (g.n[r][c] == 2) mono = pt.z[c];
                if (g.n[r][c] == -2) mono = Complex{1.0, 0.0} / pt.z[c];
            }
            out.z[r] = pow_int(w, (2 - rowsum) / 2) * mono;
        }
    }
    return out;
}

bool same_mod_sign(const std::array<Complex, 4>& a, const std::array<Complex, 4>& b,
                   double tol) {
    for (Complex sign : {Complex{1.0, 0.0}, Complex{-1.0, 0.0}}) {
        bool ok = true;
        for (int r = 0; r < 4 && ok; ++r)
            ok = std::abs(a[r] - sign * b[r]) <= tol * (1.0 + std::abs(a[r]));
        if (ok) return true;
    }
    return false;
}

std::vector<std::array<Complex, 4>> orbit_mod_sign(const F4Point& pt, double tol) {
    std::vector<std::array<Complex, 4>> out;
    for (const GroupElement& g : f4_group()) {
        std::array<Complex, 4> image = mult_action(g, pt).z;
        bool fresh = true;
        for (const auto& known : out)
            if (same_mod_sign(image, known, tol)) {
                fresh = false;
                break;
            }
        if (fresh) out.push_back(image);
    }
    return out;
}

LimitExponents additive_action(const GroupElement& g, const LimitExponents& e) {
    double s = 0.5 * (1.0 - e.beta);
    LimitExponents out;
    out.beta = e.beta;
    for (int r = 0; r < 4; ++r) {
        double acc = 0.0;
        for (int c = 0; c < 4; ++c) acc += 0.5 * g.n[r][c] * (e.tau[c] - s);
        out.tau[r] = s + acc;
    }
    return out;
}

const char* to_string(RegimeTag tag) {
    switch (tag) {
        case RegimeTag::Vertex: return "vertex";
        case RegimeTag::Edge: return "edge";
        case RegimeTag::Triangle: return "triangle";
        case RegimeTag::OctahedronGeneric: return "octahedron";
        case RegimeTag::OctahedronSquare: return "octahedron-square";
        case RegimeTag::Interior: return "interior";
        case RegimeTag::MidBeta: return "mid-beta";
        case RegimeTag::BetaOneApex: return "beta-one-apex";
        case RegimeTag::Outside: return "outside";
    }
    return "?";
}

RegimeTag classify_regime(const LimitExponents& e, double eps) {
    if (e.beta < -eps || e.beta > 1.0 + eps) return RegimeTag::Outside;
    double h = 0.5 * (1.0 - e.beta);
    Vec4 sigma;
    for (int r = 0; r < 4; ++r) sigma[r] = e.tau[r] - h;
    // Facets of the (1-beta)-scaled 24-cell: eps_r sigma_r + eps_s sigma_s = 2h.
    int saturated = 0;
    int tight_r = -1, tight_s = -1;
    double tight_er = 0.0, tight_es = 0.0;
    for (int r = 0; r < 4; ++r)
        for (int s = r + 1; s < 4; ++s)
            for (double er : {1.0, -1.0})
                for (double es : {1.0, -1.0}) {
                    double v = er * sigma[r] + es * sigma[s];
                    if (v > 2.0 * h + eps) return RegimeTag::Outside;
                    if (v > 2.0 * h - eps) {
                        ++saturated;
                        tight_r = r;
                        tight_s = s;
                        tight_er = er;
                        tight_es = es;
                    }
                }
    if (e.beta > 1.0 - eps) return RegimeTag::BetaOneApex;
    if (e.beta > eps) return RegimeTag::MidBeta;
    switch (saturated) {
        case 0: return RegimeTag::Interior;
        case 1: {
            // The special locus inside an octahedron facet is the union of its
            // three equatorial squares (the facet stabilizer, a full octahedral
            // symmetry group, permutes them): either the saturating pair sits
            // at the midpoint split, or the free pair has equal absolute value.
            bool mid = std::abs(tight_er * sigma[tight_r] - h) <= eps &&
                       std::abs(tight_es * sigma[tight_s] - h) <= eps;
            double free1 = 0.0, free2 = 0.0;
            bool first = true;
            for (int c = 0; c < 4; ++c) {
                if (c == tight_r || c == tight_s) continue;
                (first ? free1 : free2) = std::abs(sigma[c]);
                first = false;
            }
            bool balanced = std::abs(free1 - free2) <= eps;
            return (mid || balanced) ? RegimeTag::OctahedronSquare
                                     : RegimeTag::OctahedronGeneric;
        }
        case 2: return RegimeTag::Triangle;
        case 3: return RegimeTag::Edge;
        default: return RegimeTag::Vertex;
    }
}

}  // namespace ellf4
