#pragma once

// L-type polyhedra P(k,l): a regular odd l-gon base at height -r, k layers
// of vertices stacked on the l meridians, one apex, faces being the base,
// l apex triangles and rings of symmetric trapezoids. The free shape
// parameters (r and the layer latitudes) are pinned by incidence equations:
// every designated vertex of sigma(v) must lie on the dual plane of v.
// Rotational symmetry reduces these to one equation per latitude pair plus
// the base-height equation, a square (k+1)-dimensional system solved by
// damped Newton. An independent tangent-polygon (Poncelet) generator is
// provided as a cross-check for small k.

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "ssd/duality.hpp"
#include "ssd/geom.hpp"
#include "ssd/polytope.hpp"
#include "ssd/verify.hpp"

namespace ssd {

struct LTypeSpec {
    int k = 1;                      // number of layers
    int l = 3;                      // base polygon (odd)
    std::vector<double> latitudes;  // polar angles of layers 1..k from the north pole
    double r = 0.0;                 // insphere radius

    void validate() const {
        if (k < 1) throw InvalidParams("ltype: k >= 1");
        if (l < 3 || l % 2 == 0) throw InvalidParams("ltype: l must be odd and >= 3");
        if (static_cast<int>(latitudes.size()) != k)
            throw InvalidParams("ltype: need k latitudes");
    }
};

// Symmetry-reduced incidence residuals; the zero vector means P(k,l) closes.
//
//   res[0]  = cos(theta_k) + r                                  (base tangency)
//   one per latitude pair {i,j} with i+j = k or i+j = k+1:
//   res[..] = -sin(theta_i) sin(theta_j) cos(pi/l) + cos(theta_i) cos(theta_j) + r
//
// Each pair equation is the signed distance of a designated vertex of
// sigma(u(v,i)) to dual_plane(u(v,i), r): the face dual to a layer-i vertex
// is the opposite-azimuth trapezoid spanning layers k-i and k-i+1 (the apex
// triangle when i = k), and the azimuth difference contributes -cos(pi/l).
inline std::vector<double> ltype_residuals(const LTypeSpec& spec) {
    spec.validate();
    const int k = spec.k;
    const double q = std::cos(kPi / spec.l);
    std::vector<double> res;
    res.reserve(static_cast<std::size_t>(k) + 1);
    auto s = [&](int i) { return std::sin(spec.latitudes[static_cast<std::size_t>(i) - 1]); };
    auto c = [&](int i) { return std::cos(spec.latitudes[static_cast<std::size_t>(i) - 1]); };
    res.push_back(c(k) + spec.r);
    for (int i = 1; 2 * i <= k; ++i)
        res.push_back(-s(i) * s(k - i) * q + c(i) * c(k - i) + spec.r);
    for (int i = 1; 2 * i <= k + 1; ++i)
        res.push_back(-s(i) * s(k + 1 - i) * q + c(i) * c(k + 1 - i) + spec.r);
    return res;
}

namespace ltype_detail {

// Damped Newton with a forward-difference Jacobian on a square system.
// Returns true when ||F||_inf <= ftol.
inline bool damped_newton(const std::function<std::vector<double>(const std::vector<double>&)>& F,
                          std::vector<double>& x, double ftol, int max_iter = 200) {
    const int n = static_cast<int>(x.size());
    auto norm_inf = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double t : v) m = std::max(m, std::abs(t));
        return m;
    };
    std::vector<double> fx = F(x);
    if (static_cast<int>(fx.size()) != n) throw InvalidParams("damped_newton: system not square");
    for (int iter = 0; iter < max_iter; ++iter) {
        double f0 = norm_inf(fx);
        if (f0 <= ftol) return true;
        // Jacobian by forward differences
        std::vector<double> J(static_cast<std::size_t>(n) * n);
        for (int j = 0; j < n; ++j) {
            double h = 1e-7 * std::max(1.0, std::abs(x[j]));
            std::vector<double> xj = x;
            xj[j] += h;
            std::vector<double> fj = F(xj);
            for (int i = 0; i < n; ++i) J[static_cast<std::size_t>(i) * n + j] = (fj[i] - fx[i]) / h;
        }
        // solve J dx = -fx by Gaussian elimination with partial pivoting
        std::vector<double> rhs(fx);
        for (double& t : rhs) t = -t;
        std::vector<int> piv(n);
        for (int i = 0; i < n; ++i) piv[i] = i;
        for (int col = 0; col < n; ++col) {
            int best = col;
            for (int row = col + 1; row < n; ++row)
                if (std::abs(J[static_cast<std::size_t>(row) * n + col]) >
                    std::abs(J[static_cast<std::size_t>(best) * n + col]))
                    best = row;
            if (std::abs(J[static_cast<std::size_t>(best) * n + col]) < 1e-14) return false;
            if (best != col) {
                for (int j = 0; j < n; ++j)
                    std::swap(J[static_cast<std::size_t>(col) * n + j],
                              J[static_cast<std::size_t>(best) * n + j]);
                std::swap(rhs[col], rhs[best]);
            }
            for (int row = col + 1; row < n; ++row) {
                double f = J[static_cast<std::size_t>(row) * n + col] /
                           J[static_cast<std::size_t>(col) * n + col];
                for (int j = col; j < n; ++j)
                    J[static_cast<std::size_t>(row) * n + j] -=
                        f * J[static_cast<std::size_t>(col) * n + j];
                rhs[row] -= f * rhs[col];
            }
        }
        std::vector<double> dx(n);
        for (int i = n - 1; i >= 0; --i) {
            double sum = rhs[i];
            for (int j = i + 1; j < n; ++j) sum -= J[static_cast<std::size_t>(i) * n + j] * dx[j];
            dx[i] = sum / J[static_cast<std::size_t>(i) * n + i];
        }
        // backtracking line search
        double lambda = 1.0;
        bool improved = false;
        for (int halvings = 0; halvings < 30; ++halvings, lambda *= 0.5) {
            std::vector<double> xt = x;
            for (int i = 0; i < n; ++i) xt[i] += lambda * dx[i];
            std::vector<double> ft = F(xt);
            if (norm_inf(ft) < f0) {
                x = xt;
                fx = ft;
                improved = true;
                break;
            }
        }
        if (!improved) return norm_inf(fx) <= ftol;
    }
    return norm_inf(fx) <= ftol;
}

}  // namespace ltype_detail

// Solve the incidence system for (r, theta_1..theta_k). Seeded at equal
// spherical spacing; extra seeds cover stiff (k,l) combinations.
inline LTypeSpec solve_ltype(int k, int l, double ftol = 1e-13) {
    if (k < 1) throw InvalidParams("construct_ltype: k >= 1");
    if (l < 3 || l % 2 == 0) throw InvalidParams("construct_ltype: l must be odd and >= 3");
    auto F = [&](const std::vector<double>& x) {
        LTypeSpec s;
        s.k = k;
        s.l = l;
        s.r = x[0];
        s.latitudes.assign(x.begin() + 1, x.end());
        return ltype_residuals(s);
    };
    for (double r0 : {0.5, 0.3, 0.7, 0.2, 0.8, 0.9, 0.45, 0.6}) {
        std::vector<double> x(static_cast<std::size_t>(k) + 1);
        x[0] = r0;
        double base = std::acos(-r0);
        for (int i = 1; i <= k; ++i) x[static_cast<std::size_t>(i)] = base * i / k;
        if (!ltype_detail::damped_newton(F, x, ftol)) continue;
        if (!(x[0] > 0.0 && x[0] < 1.0)) continue;
        bool ordered = true;
        for (int i = 1; i <= k; ++i) {
            if (!(x[static_cast<std::size_t>(i)] > 0.0 && x[static_cast<std::size_t>(i)] < kPi))
                ordered = false;
            if (i >= 2 && x[static_cast<std::size_t>(i)] <= x[static_cast<std::size_t>(i) - 1])
                ordered = false;
        }
        if (!ordered) continue;
        LTypeSpec s;
        s.k = k;
        s.l = l;
        s.r = x[0];
        s.latitudes.assign(x.begin() + 1, x.end());
        return s;
    }
    throw NoClosure("construct_ltype: no solution found for P(" + std::to_string(k) + "," +
                    std::to_string(l) + ")");
}

// Vertices and faces of P(k,l) from a solved spec. Vertex order: apex, then
// layers top to bottom, each counterclockwise from azimuth 0.
inline Polytope ltype_polytope(const LTypeSpec& spec) {
    spec.validate();
    const int k = spec.k, l = spec.l;
    Polytope poly;
    poly.r = spec.r;
    poly.alpha = std::sqrt(2.0 + 2.0 * spec.r);
    poly.vertices.push_back({0.0, 0.0, 1.0});
    for (int i = 1; i <= k; ++i) {
        double th = spec.latitudes[static_cast<std::size_t>(i) - 1];
        for (int v = 0; v < l; ++v) {
            double az = 2.0 * kPi * v / l;
            poly.vertices.push_back(
                {std::sin(th) * std::cos(az), std::sin(th) * std::sin(az), std::cos(th)});
        }
    }
    auto idx = [&](int layer, int v) { return 1 + (layer - 1) * l + ((v % l + l) % l); };
    // base l-gon (clockwise from below = counterclockwise seen from outside)
    std::vector<int> base;
    for (int v = l - 1; v >= 0; --v) base.push_back(idx(k, v));
    poly.faces.push_back(base);
    // apex triangles
    for (int v = 0; v < l; ++v) poly.faces.push_back({0, idx(1, v), idx(1, v + 1)});
    // trapezoid rings
    for (int i = 1; i < k; ++i)
        for (int v = 0; v < l; ++v)
            poly.faces.push_back({idx(i, v), idx(i + 1, v), idx(i + 1, v + 1), idx(i, v + 1)});
    // fix outward orientation
    for (auto& f : poly.faces) {
        std::vector<Vec3> fp;
        for (int vi : f) fp.push_back(poly.vertices[vi]);
        if (fit_plane(fp).offset < 0.0) std::reverse(f.begin(), f.end());
    }
    canonicalize_faces(poly);
    return poly;
}

// Construct P(k,l) and certify it. The returned polytope carries the sigma
// inferred by the verifier.
inline Polytope construct_ltype(int k, int l, double tol = kVerifyTolConverged) {
    LTypeSpec spec = solve_ltype(k, l);
    Polytope poly = ltype_polytope(spec);
    SsdReport rep = verify_ssd(poly, tol);
    if (!rep.passed)
        throw NoClosure("construct_ltype: P(" + std::to_string(k) + "," + std::to_string(l) +
                        ") failed verification (worst " + fmt_g(rep.worst()) + ")");
    poly.sigma = rep.sigma;
    return poly;
}

// Constants around the regular-triangle-face obstruction for P(k,5):
// the insphere radius forced by a regular apex triangle, the spherical arc
// lengths a, b, c, and the negative discriminant that kills the u(1,1)u(1,2)
// step. The b reported by the paper corresponds to cos b = (10+sqrt5)/15
// (consistent with its sin(b/2) value; the printed (10-sqrt5)/15 is a sign
// slip), and the discriminant equals (25-16*sqrt5)/30.
struct P5ObstructionConstants {
    double r;             // sqrt((5+2 sqrt 5)/15)
    double cos_b;         // (10+sqrt5)/15
    double a_deg;         // arccos r
    double b_deg;         // arccos cos_b
    double c_deg;         // arccos(sqrt5/5)
    double sum_deg;       // a+b+c
    double discriminant;  // 1 + <.,.> - 2r^2 at the u(1,1)u(1,2) step
    bool obstruction;     // r^2 > (45-8 sqrt5)/60
};

inline P5ObstructionConstants p5_obstruction_constants() {
    const double s5 = std::sqrt(5.0);
    P5ObstructionConstants c{};
    c.r = std::sqrt((5.0 + 2.0 * s5) / 15.0);
    c.cos_b = (10.0 + s5) / 15.0;
    c.a_deg = rad2deg(std::acos(c.r));
    c.b_deg = rad2deg(std::acos(c.cos_b));
    c.c_deg = rad2deg(std::acos(s5 / 5.0));
    c.sum_deg = c.a_deg + c.b_deg + c.c_deg;
    c.discriminant = (25.0 - 16.0 * s5) / 30.0;
    c.obstruction = c.r * c.r > (45.0 - 8.0 * s5) / 60.0;
    return c;
}

// ---------------------------------------------------------------------------
// Tangent-polygon (Poncelet-style) cross-check generator.
//
// In the meridian plane, inscribe a (2k+1)-gon in the ellipse with semi-axes
// (1, r0) starting from the touching point (1,0), every side tangent to the
// concentric circle of radius t; t is found by bisection on the closure
// angle. The affine map (x, y) -> (x, y/r0) sends the polygon onto the unit
// circle; its first k points give the layer latitudes. The outer parameter
// r0 is tuned by bisection on one incidence residual and the result is
// validated a posteriori by the verifier.

namespace ltype_detail {

struct Pt2 {
    double x, y;
};

// Next tangent-chord point on the ellipse, walking counterclockwise.
inline std::optional<Pt2> tangent_step(const Pt2& p, double t, double r0) {
    double pr = std::hypot(p.x, p.y);
    if (pr <= t) return std::nullopt;  // point inside the circle: no tangent
    double phi = std::atan2(p.y, p.x);
    double beta = std::asin(t / pr);
    // counterclockwise-advancing tangent: |p x u| = pr sin(pi - beta) = t
    double psi = phi + kPi - beta;
    double ux = std::cos(psi), uy = std::sin(psi);
    double A = ux * ux + uy * uy / (r0 * r0);
    double B = 2.0 * (p.x * ux + p.y * uy / (r0 * r0));
    double s = -B / A;  // second ellipse intersection (first is s = 0)
    if (!(s > 1e-12)) return std::nullopt;
    return Pt2{p.x + s * ux, p.y + s * uy};
}

// Total winding after m tangent steps from (1,0); closure wants exactly 2*pi.
inline std::optional<double> winding_after(int m, double t, double r0) {
    Pt2 p{1.0, 0.0};
    double prev = 0.0;
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
        auto q = tangent_step(p, t, r0);
        if (!q) return std::nullopt;
        double ang = std::atan2(q->y, q->x);
        double dd = ang - prev;
        while (dd <= 0) dd += 2.0 * kPi;
        total += dd;
        prev = ang;
        p = *q;
    }
    return total;
}

}  // namespace ltype_detail

// Latitudes of the k + 1 .. 2k polygon points for a given ellipse minor
// semi-axis r0, or nothing when no tangent circle closes the (2k+1)-gon.
inline std::optional<std::vector<double>> tangent_polygon_latitudes(int k, double r0) {
    using ltype_detail::winding_after;
    const int m = 2 * k + 1;
    const double target = 2.0 * kPi;
    double lo = 1e-6;
    auto wlo = winding_after(m, lo, r0);
    if (!wlo || *wlo < target) return std::nullopt;
    // largest workable t: back off from r0 until all m tangent steps exist
    // and the winding drops below one turn
    double hi = r0 * (1.0 - 1e-9);
    std::optional<double> whi;
    for (int backoff = 0; backoff < 2000; ++backoff) {
        whi = winding_after(m, hi, r0);
        if (whi && *whi < target) break;
        whi.reset();
        hi *= 0.995;
        if (hi <= lo) break;
    }
    if (!whi) return std::nullopt;
    for (int iter = 0; iter < 200; ++iter) {
        double mid = 0.5 * (lo + hi);
        auto wm = winding_after(m, mid, r0);
        if (!wm) return std::nullopt;
        if ((*wm - target) * (*wlo - target) <= 0.0)
            hi = mid;
        else {
            lo = mid;
            wlo = wm;
        }
    }
    double t = 0.5 * (lo + hi);
    ltype_detail::Pt2 p{1.0, 0.0};
    std::vector<double> lats;
    for (int i = 0; i < k; ++i) {
        auto q = ltype_detail::tangent_step(p, t, r0);
        if (!q) return std::nullopt;
        // affine image on the unit circle; polar angle from the pole (1,0)
        double cx = q->x, cy = q->y / r0;
        lats.push_back(std::atan2(std::abs(cy), cx));
        p = *q;
    }
    return lats;
}

// Cross-check constructor: find r0 so the tangent-polygon latitudes satisfy
// the apex-triangle incidence, then assemble and verify.
inline Polytope ltype_via_tangent_polygon(int k, int l, double tol = 1e-8) {
    if (k < 1) throw InvalidParams("ltype_via_tangent_polygon: k >= 1");
    if (l < 3 || l % 2 == 0) throw InvalidParams("ltype_via_tangent_polygon: l odd >= 3");
    const double q = std::cos(kPi / l);
    auto residual = [&](double r0) -> std::optional<double> {
        auto lats = tangent_polygon_latitudes(k, r0);
        if (!lats) return std::nullopt;
        double thk = lats->back(), th1 = lats->front();
        double r = -std::cos(thk);
        if (!(r > 0.0 && r < 1.0)) return std::nullopt;
        return -std::sin(th1) * std::sin(thk) * q + std::cos(th1) * std::cos(thk) + r;
    };
    // bracket the root in r0
    double lo = 0.02, hi = 0.98;
    std::optional<double> flo, fhi;
    std::vector<std::pair<double, double>> samples;
    for (double x = lo; x <= hi; x += 0.02) {
        auto f = residual(x);
        if (f) samples.emplace_back(x, *f);
    }
    double a = 0.0, b = 0.0;
    bool found = false;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i)
        if (samples[i].second * samples[i + 1].second <= 0.0) {
            a = samples[i].first;
            b = samples[i + 1].first;
            found = true;
            break;
        }
    if (!found) throw NoClosure("ltype_via_tangent_polygon: no sign change in r0 sweep");
    double fa = *residual(a);
    for (int iter = 0; iter < 100; ++iter) {
        double mid = 0.5 * (a + b);
        auto fm = residual(mid);
        if (!fm) throw NoClosure("ltype_via_tangent_polygon: lost closure during bisection");
        if (fa * *fm <= 0.0)
            b = mid;
        else {
            a = mid;
            fa = *fm;
        }
    }
    auto lats = tangent_polygon_latitudes(k, 0.5 * (a + b));
    if (!lats) throw NoClosure("ltype_via_tangent_polygon: closure lost at root");
    LTypeSpec spec;
    spec.k = k;
    spec.l = l;
    spec.latitudes = *lats;
    spec.r = -std::cos(lats->back());
    Polytope poly = ltype_polytope(spec);
    SsdReport rep = verify_ssd(poly, tol);
    if (!rep.passed)
        throw NoClosure("ltype_via_tangent_polygon: verification failed (worst " +
                        fmt_g(rep.worst()) + ")");
    poly.sigma = rep.sigma;
    return poly;
}

}  // namespace ssd
