#pragma once

// Certification of the strong self-duality conditions: inscribed vertices,
// insphere tangency of every face, the sigma bijection with orthogonality,
// equal principal diagonals, and the distance-product law. All checks are
// quantitative; `passed` summarizes them against one tolerance.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "ssd/geom.hpp"
#include "ssd/polytope.hpp"

namespace ssd {

inline constexpr double kVerifyTolConverged = 1e-9;
inline constexpr double kVerifyTolIterate = 1e-6;
inline constexpr double kSigmaAngleTol = 1e-6;  // radians, for sigma inference

struct SsdReport {
    double inscribed_dev = 0.0;      // max | |v_i| - 1 |
    double tangency_dev = 0.0;       // max over faces of |d_F - r|
    bool sigma_valid = false;        // bijection, v not in sigma(v), symmetry, edge pairing
    double orthogonality_dev = 0.0;  // max angle(face normal, -v), radians
    double diagonal_dev = 0.0;       // max | |principal diagonal| - alpha |
    double product_dev = 0.0;        // max |d_G * d_sigma(G) - r|
    bool alpha_bound_ok = false;     // alpha >= sqrt(2(n+1)/n), n = 3
    bool passed = false;

    double r_used = 0.0;      // insphere radius the checks ran against
    double alpha_used = 0.0;  // sqrt(2 + 2 r_used)
    std::vector<int> sigma;   // the sigma used (given or inferred)

    double worst() const {
        return std::max({inscribed_dev, tangency_dev, orthogonality_dev, diagonal_dev,
                         product_dev});
    }
};

namespace verify_detail {

struct FaceGeom {
    Plane plane;      // outward normal, positive offset for a body containing O
    double d = 0.0;   // distance of the face plane from the origin
};

inline std::vector<FaceGeom> face_geometry(const Polytope& poly) {
    std::vector<FaceGeom> out;
    out.reserve(poly.faces.size());
    for (const auto& f : poly.faces) {
        std::vector<Vec3> fp;
        fp.reserve(f.size());
        for (int vi : f) fp.push_back(poly.vertices[vi]);
        Plane pl = fit_plane(fp);
        out.push_back({pl, pl.offset});
    }
    return out;
}

}  // namespace verify_detail

// Full ssd certification. If the polytope carries no sigma, it is inferred by
// matching each vertex v to the face whose outward normal is within
// kSigmaAngleTol of -v, then validated globally as a bijection.
inline SsdReport verify_ssd(const Polytope& poly, double tol = kVerifyTolConverged) {
    if (poly.vertices.size() < 4) throw InvalidParams("verify_ssd: need at least 4 vertices");
    if (poly.faces.empty()) throw InvalidParams("verify_ssd: polytope has no faces");

    auto fg = verify_detail::face_geometry(poly);
    const int nv = static_cast<int>(poly.vertices.size());
    const int nf = static_cast<int>(poly.faces.size());

    // convexity: no vertex beyond any face plane
    for (const auto& g : fg)
        for (const Vec3& v : poly.vertices)
            if (signed_distance(g.plane, v) > 1e-6 + 10.0 * tol)
                throw NonConvex("verify_ssd: vertex outside a face plane");

    SsdReport rep;

    for (const Vec3& v : poly.vertices)
        rep.inscribed_dev = std::max(rep.inscribed_dev, std::abs(norm(v) - 1.0));

    // angle between unit vectors via the chord norm (stable near zero,
    // unlike acos of a dot product close to 1)
    auto angle_between = [](const Vec3& a, const Vec3& b) {
        return 2.0 * std::asin(std::min(1.0, 0.5 * dist(a, b)));
    };

    // sigma: given or inferred by outward-normal match against -v
    std::vector<int> sigma = poly.sigma;
    if (sigma.empty()) {
        sigma.assign(nv, -1);
        for (int i = 0; i < nv; ++i) {
            Vec3 target = unit(-poly.vertices[i]);
            double best_angle = kSigmaAngleTol;
            for (int f = 0; f < nf; ++f) {
                double ang = angle_between(fg[f].plane.normal, target);
                if (ang < best_angle) {
                    best_angle = ang;
                    sigma[i] = f;
                }
            }
            if (sigma[i] < 0)
                throw NoSigmaCandidate("verify_ssd: vertex " + std::to_string(i) +
                                       " has no face with matching normal");
        }
    }
    rep.sigma = sigma;

    // r: trust the polytope's radius when present, else the mean face distance
    double r = poly.r;
    if (!(r > 0.0 && r < 1.0)) {
        double sum = 0.0;
        for (const auto& g : fg) sum += g.d;
        r = sum / static_cast<double>(nf);
    }
    rep.r_used = r;
    rep.alpha_used = std::sqrt(2.0 + 2.0 * r);
    rep.alpha_bound_ok = rep.alpha_used >= std::sqrt(8.0 / 3.0) - 1e-9;

    for (const auto& g : fg) rep.tangency_dev = std::max(rep.tangency_dev, std::abs(g.d - r));

    // sigma validity: bijection, v not in sigma(v), symmetry of incidence
    bool valid = static_cast<int>(sigma.size()) == nv && nv == nf;
    std::set<int> image(sigma.begin(), sigma.end());
    valid = valid && static_cast<int>(image.size()) == nv;
    if (valid) {
        std::vector<std::set<int>> face_verts(nf);
        for (int f = 0; f < nf; ++f) face_verts[f] = {poly.faces[f].begin(), poly.faces[f].end()};
        for (int i = 0; i < nv && valid; ++i) {
            if (face_verts[sigma[i]].count(i)) valid = false;  // v in sigma(v)
            for (int j = 0; j < nv && valid; ++j) {
                bool ij = face_verts[sigma[j]].count(i) > 0;
                bool ji = face_verts[sigma[i]].count(j) > 0;
                if (ij != ji) valid = false;
            }
        }
    }

    // orthogonality: face normal of sigma(v) against -v
    if (valid) {
        for (int i = 0; i < nv; ++i) {
            Vec3 target = unit(-poly.vertices[i]);
            rep.orthogonality_dev =
                std::max(rep.orthogonality_dev, angle_between(fg[sigma[i]].plane.normal, target));
        }
    }

    // principal diagonals: v to every vertex of sigma(v)
    if (valid) {
        for (int i = 0; i < nv; ++i)
            for (int w : poly.faces[sigma[i]])
                rep.diagonal_dev = std::max(
                    rep.diagonal_dev,
                    std::abs(dist(poly.vertices[i], poly.vertices[w]) - rep.alpha_used));
    }

    // distance products: vertex/face pairs and edge/dual-edge pairs
    if (valid) {
        for (int i = 0; i < nv; ++i) {
            double prod = norm(poly.vertices[i]) * fg[sigma[i]].d;
            rep.product_dev = std::max(rep.product_dev, std::abs(prod - r));
        }
        // dual edge of (u,v) = the common edge of faces sigma(u), sigma(v)
        auto edges = edge_set(poly);
        std::set<Edge> face_edges;
        for (const auto& [u, v] : edges) {
            const auto& fu = poly.faces[sigma[u]];
            const auto& fv = poly.faces[sigma[v]];
            std::set<Edge> eu;
            for (std::size_t k = 0; k < fu.size(); ++k)
                eu.insert(make_edge(fu[k], fu[(k + 1) % fu.size()]));
            Edge dual{-1, -1};
            int found = 0;
            for (std::size_t k = 0; k < fv.size(); ++k) {
                Edge e = make_edge(fv[k], fv[(k + 1) % fv.size()]);
                if (eu.count(e)) { dual = e; ++found; }
            }
            if (found != 1) { valid = false; break; }
            double d_e = line_distance_from_origin(poly.vertices[u], poly.vertices[v]);
            double d_dual = line_distance_from_origin(poly.vertices[dual.first],
                                                      poly.vertices[dual.second]);
            rep.product_dev = std::max(rep.product_dev, std::abs(d_e * d_dual - r));
        }
    }

    rep.sigma_valid = valid;
    rep.passed = valid && rep.alpha_bound_ok && euler_check(poly).pass && rep.worst() <= tol;
    return rep;
}

struct HomothetyCheck {
    bool pass = false;
    double max_dev = 0.0;
};

// Statement-1 cross-check: scaling by 1/sqrt(r) turns the polytope into a
// negatively self-polar body. The polar of the scaled body is computed from
// the scaled face planes and compared against -1 times the scaled vertex set.
inline HomothetyCheck homothety_check(const Polytope& poly, double tol = 1e-8) {
    HomothetyCheck hc;
    auto fg = verify_detail::face_geometry(poly);
    double r = poly.r;
    if (!(r > 0.0 && r < 1.0)) {
        double sum = 0.0;
        for (const auto& g : fg) sum += g.d;
        r = sum / static_cast<double>(fg.size());
    }
    double s = 1.0 / std::sqrt(r);
    // polar vertices of s*P: n / (s d) for each face plane (n, d)
    std::vector<Vec3> polar;
    polar.reserve(fg.size());
    for (const auto& g : fg) {
        if (g.d <= 0.0) return {false, 1e9};  // origin not interior
        polar.push_back(g.plane.normal / (s * g.d));
    }
    std::vector<Vec3> target;
    target.reserve(poly.vertices.size());
    for (const Vec3& v : poly.vertices) target.push_back(-s * v);
    if (polar.size() != target.size()) return {false, 1e9};
    // symmetric nearest-point set distance
    double worst = 0.0;
    for (const Vec3& p : polar) {
        double best = 1e9;
        for (const Vec3& t : target) best = std::min(best, dist(p, t));
        worst = std::max(worst, best);
    }
    for (const Vec3& t : target) {
        double best = 1e9;
        for (const Vec3& p : polar) best = std::min(best, dist(p, t));
        worst = std::max(worst, best);
    }
    hc.max_dev = worst;
    hc.pass = worst <= tol;
    return hc;
}

}  // namespace ssd
