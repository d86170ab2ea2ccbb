#pragma once

// The three-parameter pentagon search: a symmetric spherical pentagon
// a..e at height -r plus the north pole z seeds a nested chain of dual-edge
// (Phi) evaluations; three scalar residuals measure how far the construction
// is from closing into a polyhedron, and a shrinking-grid sweep drives them
// to machine precision. The converged parameters yield the 22-vertex
// polyhedron with a hexagonal face; the same machinery rebuilt from
// published parameters reproduces the 8-vertex Katz-Memoli-Wang polyhedron.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "ssd/duality.hpp"
#include "ssd/geom.hpp"
#include "ssd/hull.hpp"
#include "ssd/polytope.hpp"
#include "ssd/reconstruct.hpp"
#include "ssd/verify.hpp"

namespace ssd {

// Converged parameters reported for the 22-vertex polyhedron (angles in
// degrees) and for the Katz-Memoli-Wang 8-vertex polyhedron.
inline constexpr double kSsd23KappaDeg = 45.18708115925679;
inline constexpr double kSsd23LambdaDeg = 137.9708898008123;
inline constexpr double kSsd23R = 0.801257067121262;

inline constexpr double kKmwR = 0.493643648472824;
inline constexpr double kKmwKappaDeg = 25.73186609765885;
inline constexpr double kKmwLambdaDeg = 167.1340669511706;

struct Pentagon {
    Vec3 a, b, c, d, e, z;
};

// a = (rho, 0, -r), b/e at azimuth +-kappa, c/d at +-lambda, z = north pole;
// rho = sqrt(1 - r^2). Angles in radians.
inline Pentagon pentagon_vertices(double kappa, double lambda, double r) {
    if (!(r > 0.0 && r < 1.0)) throw InvalidParams("pentagon_vertices: r must be in (0,1)");
    if (!(kappa > 0.0 && kappa < lambda && lambda < kPi))
        throw InvalidParams("pentagon_vertices: need 0 < kappa < lambda < pi");
    double rho = std::sqrt(1.0 - r * r);
    Pentagon p;
    p.a = {rho, 0.0, -r};
    p.b = {rho * std::cos(kappa), rho * std::sin(kappa), -r};
    p.c = {rho * std::cos(lambda), rho * std::sin(lambda), -r};
    p.d = {rho * std::cos(lambda), -rho * std::sin(lambda), -r};
    p.e = {rho * std::cos(kappa), -rho * std::sin(kappa), -r};
    p.z = {0.0, 0.0, 1.0};
    return p;
}

// All chain points of the construction. `rv` is the chain vertex the paper
// calls R (the letter r names the insphere radius). x duplicates f at a
// solution; y is never a vertex (it falls behind the edge ZF).
struct Chain {
    Vec3 f, g, h, i, j;       // duals of the pentagon edges
    Vec3 k, l, m, n, p;       // second step
    Vec3 q, rv, s, t, y;      // third step (y non-proper)
    Vec3 u, v, x;             // fourth step (x non-proper, = f at a solution)
    bool ok = false;
    const char* failed_at = nullptr;
};

namespace search_detail {

inline bool phi_fast(const Vec3& a, const Vec3& b, double r, Vec3& out) {
    double d = a.x * b.x + a.y * b.y + a.z * b.z;
    double one_plus = 1.0 + d;
    double one_minus = 1.0 - d;
    if (one_plus < 1e-14 || one_minus < 1e-14) return false;
    double disc = one_plus - 2.0 * r * r;
    if (disc < -kDiscriminantClamp) return false;
    if (disc < 0.0) disc = 0.0;
    double coeff = std::sqrt(disc / one_minus);
    double inv = 1.0 / one_plus;
    Vec3 cr{a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
    out.x = (coeff * cr.x - r * (a.x + b.x)) * inv;
    out.y = (coeff * cr.y - r * (a.y + b.y)) * inv;
    out.z = (coeff * cr.z - r * (a.z + b.z)) * inv;
    return true;
}

}  // namespace search_detail

// Full dependency chain of the construction (shared subexpressions evaluated
// once). On an infeasible parameter point ok = false and failed_at names the
// first chain element whose discriminant went negative.
inline Chain build_chain(const Pentagon& pent, double r) noexcept {
    using search_detail::phi_fast;
    Chain c;
    struct Step {
        Vec3* out;
        const Vec3 *a, *b;
        const char* name;
    };
    const Vec3 &a = pent.a, &b = pent.b, &cc = pent.c, &d = pent.d, &e = pent.e;
    const Step steps[] = {
        {&c.f, &d, &cc, "f"}, {&c.g, &e, &d, "g"},  {&c.h, &a, &e, "h"},
        {&c.i, &b, &a, "i"},  {&c.j, &cc, &b, "j"}, {&c.k, &c.h, &c.i, "k"},
        {&c.l, &c.i, &c.j, "l"}, {&c.m, &c.j, &c.f, "m"}, {&c.n, &c.f, &c.g, "n"},
        {&c.p, &c.g, &c.h, "p"}, {&c.q, &c.p, &c.n, "q"}, {&c.rv, &c.k, &c.p, "rv"},
        {&c.s, &c.l, &c.k, "s"}, {&c.t, &c.m, &c.l, "t"}, {&c.y, &c.m, &c.n, "y"},
        {&c.u, &c.s, &c.t, "u"}, {&c.v, &c.q, &c.rv, "v"}, {&c.x, &c.rv, &c.s, "x"},
    };
    for (const Step& s : steps) {
        if (!phi_fast(*s.a, *s.b, r, *s.out)) {
            c.failed_at = s.name;
            return c;
        }
    }
    c.ok = true;
    return c;
}

inline Chain build_chain(double kappa, double lambda, double r) {
    return build_chain(pentagon_vertices(kappa, lambda, r), r);
}

// e1 = |f - x|; e2, e3 = distances of vertex V to the planes NST and FJT.
struct ResidualTriple {
    double e1 = std::numeric_limits<double>::infinity();
    double e2 = std::numeric_limits<double>::infinity();
    double e3 = std::numeric_limits<double>::infinity();
    double error() const { return std::max({e1, e2, e3}); }
    bool feasible() const { return std::isfinite(e1); }
};

inline ResidualTriple residuals_of_chain(const Chain& c) noexcept {
    ResidualTriple res;
    if (!c.ok) return res;
    res.e1 = dist(c.f, c.x);
    Vec3 sn = c.s - c.n, tn = c.t - c.n, vn = c.v - c.n;
    double denom2 = norm(cross(sn, tn));
    Vec3 ft = c.f - c.t, jt = c.j - c.t, vt = c.v - c.t;
    double denom3 = norm(cross(ft, jt));
    if (denom2 < 1e-14 || denom3 < 1e-14) return res;
    res.e2 = std::abs(triple(sn, tn, vn)) / denom2;
    res.e3 = std::abs(triple(ft, jt, vt)) / denom3;
    return res;
}

// Residuals at a parameter point; infeasible points score +infinity.
inline ResidualTriple residuals(double kappa, double lambda, double r) noexcept {
    if (!(r > 0.0 && r < 1.0) || !(kappa > 0.0 && kappa < lambda && lambda < kPi))
        return {};
    Pentagon pent;
    double rho = std::sqrt(1.0 - r * r);
    pent.a = {rho, 0.0, -r};
    pent.b = {rho * std::cos(kappa), rho * std::sin(kappa), -r};
    pent.c = {rho * std::cos(lambda), rho * std::sin(lambda), -r};
    pent.d = {pent.c.x, -pent.c.y, -r};
    pent.e = {pent.b.x, -pent.b.y, -r};
    pent.z = {0.0, 0.0, 1.0};
    return residuals_of_chain(build_chain(pent, r));
}

struct SearchParams {
    double kappa = deg2rad(45.0);
    double lambda = deg2rad(135.0);
    double r = 0.8;
    double delta0 = 0.1;  // box half-width: radians for angles, absolute for r
    int n = 200;          // subdivisions per axis -> (n+1)^3 lattice points
    double shrink = 1.0 / 3.0;
    double tol = 1e-15;
    int max_steps = 40;
    unsigned threads = 0;  // 0 = hardware concurrency

    void validate() const {
        if (!(kappa > 0.0 && kappa < lambda && lambda < kPi))
            throw InvalidParams("search: need 0 < kappa < lambda < pi");
        if (!(r > 0.0 && r < 1.0)) throw InvalidParams("search: r must be in (0,1)");
        if (n < 2) throw InvalidParams("search: n >= 2");
        if (!(shrink > 0.0 && shrink < 1.0)) throw InvalidParams("search: shrink in (0,1)");
        if (delta0 <= 0.0) throw InvalidParams("search: delta0 > 0");
        if (max_steps < 1) throw InvalidParams("search: max_steps >= 1");
    }
};

struct SearchStep {
    int step = 0;
    double kappa = 0.0, lambda = 0.0, r = 0.0;  // radians
    double error = 0.0;
};

struct SearchResult {
    double kappa = 0.0, lambda = 0.0, r = 0.0;  // radians
    double error = std::numeric_limits<double>::infinity();
    int steps = 0;
    bool converged = false;
    std::vector<SearchStep> trace;
};

namespace search_detail {

struct BestPoint {
    double error = std::numeric_limits<double>::infinity();
    std::int64_t index = std::numeric_limits<std::int64_t>::max();

    void consider(double e, std::int64_t idx) {
        if (e < error || (e == error && idx < index)) {
            error = e;
            index = idx;
        }
    }
    void merge(const BestPoint& o) {
        if (o.error < error || (o.error == error && o.index < index)) *this = o;
    }
};

}  // namespace search_detail

// Shrinking-grid refinement: evaluate the residual error on the (n+1)^3
// lattice of the current box, recenter at the minimal-error lattice point
// (lexicographically smallest index on ties), shrink the half-width, repeat.
// Deterministic for a fixed parameter set regardless of thread count: the
// per-step minimum reduction is ordered by (error, flat lattice index).
inline SearchResult grid_refine(const SearchParams& params) {
    params.validate();
    const int n = params.n;
    const std::int64_t per_axis = n + 1;
    const std::int64_t total = per_axis * per_axis * per_axis;

    double ck = params.kappa, cl = params.lambda, cr = params.r;
    double delta = params.delta0;

    unsigned nthreads = params.threads ? params.threads : std::thread::hardware_concurrency();
    if (nthreads == 0) nthreads = 1;
    nthreads = std::min<unsigned>(nthreads, 16);

    SearchResult result;
    for (int step = 1; step <= params.max_steps; ++step) {
        auto eval_range = [&](std::int64_t lo, std::int64_t hi, search_detail::BestPoint& best) {
            for (std::int64_t idx = lo; idx < hi; ++idx) {
                std::int64_t ik = idx / (per_axis * per_axis);
                std::int64_t il = (idx / per_axis) % per_axis;
                std::int64_t ir = idx % per_axis;
                double kk = ck + delta * (2.0 * static_cast<double>(ik) / n - 1.0);
                double ll = cl + delta * (2.0 * static_cast<double>(il) / n - 1.0);
                double rr = cr + delta * (2.0 * static_cast<double>(ir) / n - 1.0);
                best.consider(residuals(kk, ll, rr).error(), idx);
            }
        };

        search_detail::BestPoint best;
        if (nthreads == 1) {
            eval_range(0, total, best);
        } else {
            std::vector<search_detail::BestPoint> partial(nthreads);
            std::vector<std::thread> workers;
            std::int64_t chunk = (total + nthreads - 1) / nthreads;
            for (unsigned t = 0; t < nthreads; ++t) {
                std::int64_t lo = t * chunk;
                std::int64_t hi = std::min(total, lo + chunk);
                if (lo >= hi) break;
                workers.emplace_back(eval_range, lo, hi, std::ref(partial[t]));
            }
            for (auto& w : workers) w.join();
            for (const auto& p : partial) best.merge(p);
        }

        std::int64_t ik = best.index / (per_axis * per_axis);
        std::int64_t il = (best.index / per_axis) % per_axis;
        std::int64_t ir = best.index % per_axis;
        ck = ck + delta * (2.0 * static_cast<double>(ik) / n - 1.0);
        cl = cl + delta * (2.0 * static_cast<double>(il) / n - 1.0);
        cr = cr + delta * (2.0 * static_cast<double>(ir) / n - 1.0);

        result.trace.push_back({step, ck, cl, cr, best.error});
        result.kappa = ck;
        result.lambda = cl;
        result.r = cr;
        result.error = best.error;
        result.steps = step;
        if (best.error <= params.tol) {
            result.converged = true;
            break;
        }
        delta *= params.shrink;
    }
    return result;
}

inline void require_converged(const SearchResult& res, double tol) {
    if (!res.converged)
        throw NoConvergence("grid_refine stopped at error " + std::to_string(res.error) +
                            " after " + std::to_string(res.steps) + " steps (tol " +
                            std::to_string(tol) + ")");
}

// Assemble the 22-vertex polyhedron at a (near-)converged parameter point:
// pentagon + apex + the sixteen proper chain vertices, X merged into F by
// deduplication, faces from the convex hull with coplanar merging, sigma
// inferred and the whole certificate checked at tol.
inline Polytope assemble_ssd23(double kappa, double lambda, double r, double tol = 1e-9) {
    ResidualTriple res = residuals(kappa, lambda, r);
    if (!(res.error() <= tol))
        throw VerificationFailed("assemble_ssd23: residual error " + fmt_g(res.error()) +
                                 " exceeds tol");
    Pentagon pent = pentagon_vertices(kappa, lambda, r);
    Chain c = build_chain(pent, r);
    std::vector<Vec3> pts = {pent.z, pent.a, pent.b, pent.c, pent.d, pent.e,
                             c.f, c.g, c.h, c.i, c.j, c.k, c.l, c.m, c.n, c.p,
                             c.q, c.rv, c.s, c.t, c.u, c.v, c.x};
    Polytope poly = convex_hull3(dedupe_points(pts), kMergeTol);
    poly.r = r;
    poly.alpha = std::sqrt(2.0 + 2.0 * r);
    SsdReport rep = verify_ssd(poly, tol);
    if (!rep.passed)
        throw VerificationFailed("assemble_ssd23: verification failed (worst " +
                                 fmt_g(rep.worst()) + ")");
    poly.sigma = rep.sigma;
    return poly;
}

// The Katz-Memoli-Wang 8-vertex polyhedron from the published parameters,
// built by reconstruction from its pentagonal face.
inline Polytope kmw8(double tol = 1e-8) {
    Pentagon pent = pentagon_vertices(deg2rad(kKmwKappaDeg), deg2rad(kKmwLambdaDeg), kKmwR);
    ReconstructOptions opt;
    opt.verify_tol = tol;
    std::vector<Vec3> face = {pent.a, pent.b, pent.c, pent.d, pent.e};
    Polytope poly = reconstruct_from_face(face, opt);
    if (poly.vertices.size() != 8)
        throw VerificationFailed("kmw8: expected 8 vertices, got " +
                                 std::to_string(poly.vertices.size()));
    FaceVector fv = face_vector(poly);
    if (!(fv[3] == 5 && fv[4] == 2 && fv[5] == 1))
        throw VerificationFailed("kmw8: unexpected face vector");
    return poly;
}

}  // namespace ssd
