#pragma once

// Polytope data model: vertices on the unit sphere, ordered face cycles
// (outward counterclockwise), the sigma bijection vertex -> face, and the
// face-vector / Euler accounting used by the combinatorial checks.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "ssd/duality.hpp"
#include "ssd/geom.hpp"

namespace ssd {

inline constexpr double kDedupTol = 1e-9;
inline constexpr double kMergeTol = 1e-7;

struct Polytope {
    std::vector<Vec3> vertices;
    std::vector<std::vector<int>> faces;  // ordered cycles, outward CCW
    std::vector<int> sigma;               // vertex index -> face index; empty if unknown
    double r = std::numeric_limits<double>::quiet_NaN();
    double alpha = std::numeric_limits<double>::quiet_NaN();

    bool has_sigma() const { return !sigma.empty(); }
};

using Edge = std::pair<int, int>;  // ordered (min, max)

inline Edge make_edge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

inline std::set<Edge> edge_set(const Polytope& poly) {
    std::set<Edge> edges;
    for (const auto& f : poly.faces)
        for (std::size_t i = 0; i < f.size(); ++i)
            edges.insert(make_edge(f[i], f[(i + 1) % f.size()]));
    return edges;
}

// alpha_l = number of l-gonal faces, stored sparsely as l -> count.
struct FaceVector {
    std::map<int, int> counts;

    int operator[](int l) const {
        auto it = counts.find(l);
        return it == counts.end() ? 0 : it->second;
    }
    int total_faces() const {
        int s = 0;
        for (auto& [l, c] : counts) s += c;
        return s;
    }
    long long weighted_sum() const {  // sum l * alpha_l = 2|E| for a polyhedron
        long long s = 0;
        for (auto& [l, c] : counts) s += static_cast<long long>(l) * c;
        return s;
    }
    // Eq-style balance: sum (4 - l) alpha_l, equal to 4 for an ssd candidate.
    long long balance() const {
        long long s = 0;
        for (auto& [l, c] : counts) s += static_cast<long long>(4 - l) * c;
        return s;
    }
    bool operator==(const FaceVector& o) const { return counts == o.counts; }
};

inline FaceVector face_vector(const Polytope& poly) {
    FaceVector fv;
    for (const auto& f : poly.faces) fv.counts[static_cast<int>(f.size())]++;
    return fv;
}

struct EulerCheck {
    bool pass = false;
    int V = 0, E = 0, F = 0;
};

// Pass iff F + V - E = 2 together with the self-dual counts F = V and
// E = 2(V - 1).
inline EulerCheck euler_check(const Polytope& poly) {
    EulerCheck ec;
    ec.V = static_cast<int>(poly.vertices.size());
    ec.F = static_cast<int>(poly.faces.size());
    ec.E = static_cast<int>(edge_set(poly).size());
    ec.pass = (ec.F + ec.V - ec.E == 2) && (ec.F == ec.V) && (ec.E == 2 * (ec.V - 1));
    return ec;
}

// Rotate a cycle so it starts at its smallest vertex index; orientation kept.
inline void canonicalize_cycle(std::vector<int>& cycle) {
    if (cycle.empty()) return;
    auto it = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), it, cycle.end());
}

// Canonical face order for golden-file comparison: each cycle starts at its
// lowest vertex index, faces sorted lexicographically; sigma remapped.
inline void canonicalize_faces(Polytope& poly) {
    for (auto& f : poly.faces) canonicalize_cycle(f);
    std::vector<int> order(poly.faces.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return poly.faces[a] < poly.faces[b]; });
    std::vector<int> rank(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> sorted(poly.faces.size());
    for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = std::move(poly.faces[order[i]]);
    poly.faces = std::move(sorted);
    for (auto& s : poly.sigma) s = rank[s];
}

// Congruence up to isometry, decided on canonical invariants: vertex count,
// face vector, and the sorted multiset of pairwise vertex distances.
inline bool congruent(const Polytope& a, const Polytope& b, double tol = 1e-8) {
    if (a.vertices.size() != b.vertices.size()) return false;
    if (!(face_vector(a) == face_vector(b))) return false;
    auto dists = [](const Polytope& p) {
        std::vector<double> d;
        for (std::size_t i = 0; i < p.vertices.size(); ++i)
            for (std::size_t j = i + 1; j < p.vertices.size(); ++j)
                d.push_back(dist(p.vertices[i], p.vertices[j]));
        std::sort(d.begin(), d.end());
        return d;
    };
    auto da = dists(a), db = dists(b);
    for (std::size_t i = 0; i < da.size(); ++i)
        if (std::abs(da[i] - db[i]) > tol) return false;
    return true;
}

// Merge points closer than tol; returns deduplicated list (first occurrence
// kept, deterministic order).
inline std::vector<Vec3> dedupe_points(std::span<const Vec3> pts, double tol = kDedupTol) {
    std::vector<Vec3> out;
    for (const Vec3& p : pts) {
        bool found = false;
        for (const Vec3& q : out)
            if (dist(p, q) < tol) { found = true; break; }
        if (!found) out.push_back(p);
    }
    return out;
}

// Segment classifier on a polytope: wraps classify_pair with the polytope's
// own vertex list and insphere radius (the corollary's fixed-r setting).
inline SegmentType classify_segment(int u_idx, int v_idx, const Polytope& poly,
                                    double tol = kClassifyTol) {
    if (u_idx == v_idx) throw InvalidParams("classify_segment: identical indices");
    if (!(poly.r > 0.0 && poly.r < 1.0))
        throw InvalidRadius("classify_segment: polytope has no insphere radius");
    return classify_pair(poly.vertices[u_idx], poly.vertices[v_idx], poly.r,
                         std::span<const Vec3>(poly.vertices.data(), poly.vertices.size()), tol);
}

}  // namespace ssd
