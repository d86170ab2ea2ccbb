#pragma once

// 3D primitives shared by every other header: vectors, oriented planes,
// circumscribed circles of coplanar point sets, and the error types the
// library throws at its API boundaries.

#include <cmath>
#include <cstdio>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssd {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double deg2rad(double d) { return d * (kPi / 180.0); }
inline double rad2deg(double r) { return r * (180.0 / kPi); }

// short scientific formatting for diagnostics (std::to_string drops digits)
inline std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// All errors carry a stable machine-parsable class name so the CLI can print
// "ErrorClass: message" on one line.
class Error : public std::runtime_error {
public:
    Error(std::string cls, const std::string& msg)
        : std::runtime_error(cls + ": " + msg), cls_(std::move(cls)) {}
    const std::string& class_name() const { return cls_; }

private:
    std::string cls_;
};

#define SSD_DEFINE_ERROR(Name)                                        \
    class Name : public Error {                                       \
    public:                                                           \
        explicit Name(const std::string& msg) : Error(#Name, msg) {}  \
    }

SSD_DEFINE_ERROR(CollinearInput);
SSD_DEFINE_ERROR(NotCoplanar);
SSD_DEFINE_ERROR(NotConcyclic);
SSD_DEFINE_ERROR(InvalidRadius);
SSD_DEFINE_ERROR(NonUnitVertex);
SSD_DEFINE_ERROR(AntipodalInput);
SSD_DEFINE_ERROR(DegenerateDiscriminant);
SSD_DEFINE_ERROR(DegenerateInput);
SSD_DEFINE_ERROR(InvalidParams);
SSD_DEFINE_ERROR(InvalidN);
SSD_DEFINE_ERROR(NoSigmaCandidate);
SSD_DEFINE_ERROR(NonConvex);
SSD_DEFINE_ERROR(NoClosure);
SSD_DEFINE_ERROR(NoConvergence);
SSD_DEFINE_ERROR(NotConcyclicFace);
SSD_DEFINE_ERROR(OpenChain);
SSD_DEFINE_ERROR(Overflow);
SSD_DEFINE_ERROR(VerificationFailed);
SSD_DEFINE_ERROR(ParseError);

#undef SSD_DEFINE_ERROR

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }
inline double dist(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline bool finite(const Vec3& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

inline Vec3 unit(const Vec3& v) {
    double n = norm(v);
    if (n == 0.0 || !std::isfinite(n))
        throw DegenerateInput("cannot normalize zero or non-finite vector");
    return v / n;
}

// Scalar triple product <a, b x c>.
inline double triple(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }

// Oriented plane { p : <p, normal> = offset } with |normal| = 1.
struct Plane {
    Vec3 normal{0, 0, 1};
    double offset = 0.0;
};

// Signed distance of p from the plane; positive on the side the normal points to.
inline double signed_distance(const Plane& plane, const Vec3& p) {
    return dot(p, plane.normal) - plane.offset;
}

// Distance from the origin of the line through a and b.
inline double line_distance_from_origin(const Vec3& a, const Vec3& b) {
    double ab = dist(a, b);
    if (ab == 0.0) return norm(a);
    return norm(cross(a, b)) / ab;
}

// Least-squares plane through a point cycle. The centroid is on the plane and
// the normal is the cross-sum of consecutive edge pairs (Newell's method),
// which distributes planarity error over all vertices instead of the first
// three. Orientation follows the cycle order (counterclockwise -> normal).
inline Plane fit_plane(std::span<const Vec3> pts) {
    if (pts.size() < 3) throw DegenerateInput("fit_plane needs at least 3 points");
    Vec3 centroid{0, 0, 0};
    for (const Vec3& p : pts) centroid += p;
    centroid = centroid / static_cast<double>(pts.size());
    Vec3 n{0, 0, 0};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec3& p = pts[i];
        const Vec3& q = pts[(i + 1) % pts.size()];
        n += cross(p - centroid, q - centroid);
    }
    if (norm(n) == 0.0) throw CollinearInput("fit_plane: degenerate (collinear) cycle");
    n = unit(n);
    return Plane{n, dot(n, centroid)};
}

struct Circumcircle {
    Vec3 center;
    double radius = 0.0;
    Plane plane;
};

inline constexpr double kCoplanarTol = 1e-9;

// Circumscribed circle of >= 3 coplanar points. The circle is computed from
// the first three non-collinear points and validated against the rest.
inline Circumcircle circumcircle(std::span<const Vec3> pts, double tol = kCoplanarTol) {
    if (pts.size() < 3) throw DegenerateInput("circumcircle needs at least 3 points");
    const Vec3& a = pts[0];
    std::size_t ib = 0, ic = 0;
    Vec3 n;
    double cross_norm = 0.0;
    // first pair (b, c) giving a usable triangle area with a
    for (std::size_t i = 1; i < pts.size() && cross_norm == 0.0; ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            n = cross(pts[i] - a, pts[j] - a);
            if (norm(n) > 1e-14) {
                cross_norm = norm(n);
                ib = i;
                ic = j;
                break;
            }
        }
    }
    if (cross_norm == 0.0) throw CollinearInput("circumcircle: all points collinear");
    const Vec3& b = pts[ib];
    const Vec3& c = pts[ic];

    Plane plane{unit(n), 0.0};
    plane.offset = dot(plane.normal, a);

    double worst = 0.0;
    for (const Vec3& p : pts) worst = std::max(worst, std::abs(signed_distance(plane, p)));
    if (worst > tol)
        throw NotCoplanar("circumcircle: max plane deviation " + fmt_g(worst));

    // center = a + alpha*(b-a) + beta*(c-a) from |center-a| = |center-b| = |center-c|
    Vec3 ab = b - a, ac = c - a;
    double d11 = dot(ab, ab), d12 = dot(ab, ac), d22 = dot(ac, ac);
    double det = d11 * d22 - d12 * d12;
    if (det <= 0.0) throw CollinearInput("circumcircle: degenerate triangle");
    double alpha = 0.5 * d22 * (d11 - d12) / det;
    double beta = 0.5 * d11 * (d22 - d12) / det;
    Vec3 center = a + alpha * ab + beta * ac;
    double radius = dist(center, a);

    for (const Vec3& p : pts) {
        double dev = std::abs(dist(center, p) - radius);
        if (dev > std::max(tol, 1e3 * tol * radius))
            throw NotConcyclic("circumcircle: point off circle by " + fmt_g(dev));
    }
    return Circumcircle{center, radius, plane};
}

inline Circumcircle circumcircle(const std::vector<Vec3>& pts, double tol = kCoplanarTol) {
    return circumcircle(std::span<const Vec3>(pts.data(), pts.size()), tol);
}

}  // namespace ssd
