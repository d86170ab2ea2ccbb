#pragma once

// The sigma/polar machinery: dual planes of unit vertices, the dual-edge map
// Phi, the common principal-diagonal length alpha, and the segment-type
// classifier for vertex pairs of a candidate polytope.

#include <optional>
#include <span>

#include "ssd/geom.hpp"

namespace ssd {

inline constexpr double kDiscriminantClamp = 1e-12;
inline constexpr double kUnitTol = 1e-9;

// Plane orthogonal to the unit vertex v, tangent to the insphere on the far
// side: { p : <p, v> = -r }. Its intersection with the unit sphere is the
// circumcircle of sigma(v), centered at -r*v with radius sqrt(1 - r^2).
inline Plane dual_plane(const Vec3& v, double r) {
    if (!(r > 0.0 && r < 1.0)) throw InvalidRadius("dual_plane: r must be in (0,1)");
    if (std::abs(norm(v) - 1.0) > kUnitTol) throw NonUnitVertex("dual_plane: |v| != 1");
    return Plane{v, -r};
}

// Common length of all principal diagonals, alpha = sqrt(2 + 2r).
inline double parameter_alpha(double r) {
    if (!(r > 0.0 && r < 1.0)) throw InvalidRadius("parameter_alpha: r must be in (0,1)");
    return std::sqrt(2.0 + 2.0 * r);
}

// One endpoint of the dual edge of (a, b):
//
//   Phi_r(a,b) = [ sqrt((1 + <a,b> - 2r^2) / (1 - <a,b>)) (a x b) - r(a+b) ] / (1 + <a,b>)
//
// The result lies on the unit sphere and on both dual-plane circles of a and
// b; Phi_r(b,a) is the other intersection point of those circles.
//
// Returns nothing when 1 + <a,b> - 2r^2 < -clamp (circles do not meet) or the
// pair is degenerate (a = +-b within tolerance). This noexcept form is the
// search hot path; phi() below converts failures to exceptions.
inline std::optional<Vec3> phi_opt(const Vec3& a, const Vec3& b, double r) noexcept {
    double d = dot(a, b);
    double one_plus = 1.0 + d;
    double one_minus = 1.0 - d;
    if (one_plus < 1e-14 || one_minus < 1e-14) return std::nullopt;
    double disc = one_plus - 2.0 * r * r;
    if (disc < -kDiscriminantClamp) return std::nullopt;
    if (disc < 0.0) disc = 0.0;  // tangent circles
    double coeff = std::sqrt(disc / one_minus);
    Vec3 result = (coeff * cross(a, b) - r * (a + b)) / one_plus;
    return result;
}

inline Vec3 phi(const Vec3& a, const Vec3& b, double r) {
    if (!(r > 0.0 && r < 1.0)) throw InvalidRadius("phi: r must be in (0,1)");
    double d = dot(a, b);
    if (1.0 + d < 1e-14) throw AntipodalInput("phi: a = -b");
    if (1.0 - d < 1e-14) throw DegenerateInput("phi: a = b");
    double disc = 1.0 + d - 2.0 * r * r;
    if (disc < -kDiscriminantClamp)
        throw DegenerateDiscriminant("phi: 1 + <a,b> - 2r^2 = " + fmt_g(disc));
    return *phi_opt(a, b, r);
}

enum class SegmentType {
    Edge,
    BodyDiagonal,
    FaceDiagonal,
    FaceDiagonalThroughCenter,
};

inline const char* to_string(SegmentType t) {
    switch (t) {
        case SegmentType::Edge: return "Edge";
        case SegmentType::BodyDiagonal: return "BodyDiagonal";
        case SegmentType::FaceDiagonal: return "FaceDiagonal";
        case SegmentType::FaceDiagonalThroughCenter: return "FaceDiagonalThroughCenter";
    }
    return "?";
}

inline constexpr double kClassifyTol = 1e-8;

// Decision tree for the type of segment (uv) joining two vertices of a
// polytope inscribed in the unit sphere with insphere radius r:
//
//   d_(uv) = |u+v|/2 < r          -> diagonal of the body (dual circles miss)
//   else x = Phi_r(u,v), y = Phi_r(v,u):
//     |x-y| < tol                 -> face diagonal through the circle center
//     x and y both vertices       -> edge, with dual edge (x,y)
//     otherwise                   -> face diagonal (x or y cut by a face)
//
// Membership of x,y in the vertex set decides the edge case: for points on
// both dual circles the chord |xu| equals sqrt(2+2r) identically, so the
// length test alone cannot separate edges from face diagonals; what breaks
// the tie is whether the circle intersections are themselves vertices.
inline SegmentType classify_pair(const Vec3& u, const Vec3& v, double r,
                                 std::span<const Vec3> vertices, double tol = kClassifyTol) {
    double d_uv = 0.5 * norm(u + v);
    if (d_uv < r - tol) return SegmentType::BodyDiagonal;
    auto x = phi_opt(u, v, r);
    auto y = phi_opt(v, u, r);
    if (!x || !y) return SegmentType::BodyDiagonal;  // boundary fuzz: treat as non-face chord
    if (dist(*x, *y) < tol) return SegmentType::FaceDiagonalThroughCenter;
    auto is_vertex = [&](const Vec3& p) {
        for (const Vec3& w : vertices)
            if (dist(p, w) < tol) return true;
        return false;
    };
    if (is_vertex(*x) && is_vertex(*y)) return SegmentType::Edge;
    return SegmentType::FaceDiagonal;
}

}  // namespace ssd
