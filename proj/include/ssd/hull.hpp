#pragma once

// Incremental 3D convex hull with a coplanar-merge post-pass. Triangles are
// grown point by point; afterwards adjacent coplanar triangles are merged
// into polygon faces, so near-planar polygons (pentagons, hexagons of search
// iterates) come out as single cycles. Inputs are assumed to be in convex
// position up to the merge tolerance, which holds for every use in this
// project (vertex sets of inscribed polytopes); interior points are dropped.

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <vector>

#include "ssd/geom.hpp"
#include "ssd/polytope.hpp"

namespace ssd {

namespace hull_detail {

struct Tri {
    std::array<int, 3> v;
    Plane plane;
    bool alive = true;
};

inline Plane tri_plane(const Vec3& a, const Vec3& b, const Vec3& c) {
    Vec3 n = unit(cross(b - a, c - a));
    return Plane{n, dot(n, a)};
}

}  // namespace hull_detail

// Convex hull of >= 4 affinely independent points. Faces are maximal
// coplanar cycles (triangles merged at coplanar_tol), outward
// counterclockwise, each starting at its lowest vertex index, sorted.
inline Polytope convex_hull3(std::span<const Vec3> input, double coplanar_tol = kMergeTol) {
    using hull_detail::Tri;
    const double eps_visible = 1e-12;

    std::vector<Vec3> pts = dedupe_points(input);
    const int n = static_cast<int>(pts.size());
    if (n < 4) throw DegenerateInput("convex_hull3: fewer than 4 distinct points");

    // initial simplex from extreme points
    int i0 = 0, i1 = -1;
    for (int i = 1; i < n; ++i)
        if (pts[i].x < pts[i0].x) i0 = i;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
        double d = dist(pts[i], pts[i0]);
        if (d > best) { best = d; i1 = i; }
    }
    if (best < 1e-12) throw DegenerateInput("convex_hull3: points coincide");
    int i2 = -1;
    best = -1.0;
    for (int i = 0; i < n; ++i) {
        double d = norm(cross(pts[i] - pts[i0], pts[i1] - pts[i0]));
        if (d > best) { best = d; i2 = i; }
    }
    if (best < 1e-12) throw DegenerateInput("convex_hull3: points collinear");
    int i3 = -1;
    best = 0.0;
    Plane base = hull_detail::tri_plane(pts[i0], pts[i1], pts[i2]);
    for (int i = 0; i < n; ++i) {
        double d = signed_distance(base, pts[i]);
        if (std::abs(d) > std::abs(best)) { best = d; i3 = i; }
    }
    if (std::abs(best) < 1e-12) throw DegenerateInput("convex_hull3: points coplanar");

    Vec3 interior = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) / 4.0;
    std::vector<Tri> tris;
    auto add_tri = [&](int a, int b, int c) {
        Tri t{{a, b, c}, hull_detail::tri_plane(pts[a], pts[b], pts[c]), true};
        if (signed_distance(t.plane, interior) > 0.0) {
            std::swap(t.v[1], t.v[2]);
            t.plane = hull_detail::tri_plane(pts[t.v[0]], pts[t.v[1]], pts[t.v[2]]);
        }
        tris.push_back(t);
    };
    add_tri(i0, i1, i2);
    add_tri(i0, i1, i3);
    add_tri(i0, i2, i3);
    add_tri(i1, i2, i3);

    std::vector<bool> used(n, false);
    used[i0] = used[i1] = used[i2] = used[i3] = true;

    for (int p = 0; p < n; ++p) {
        if (used[p]) continue;
        used[p] = true;
        std::vector<int> visible;
        for (std::size_t t = 0; t < tris.size(); ++t)
            if (tris[t].alive && signed_distance(tris[t].plane, pts[p]) > eps_visible)
                visible.push_back(static_cast<int>(t));
        if (visible.empty()) continue;  // inside or coplanar; fixed up after merge

        // horizon = directed edges of visible triangles whose reverse edge
        // belongs to a surviving triangle
        std::set<std::pair<int, int>> vis_edges;
        for (int t : visible) {
            const auto& v = tris[t].v;
            for (int k = 0; k < 3; ++k) vis_edges.insert({v[k], v[(k + 1) % 3]});
        }
        std::vector<std::pair<int, int>> horizon;
        for (const auto& e : vis_edges)
            if (!vis_edges.count({e.second, e.first})) horizon.push_back(e);

        for (int t : visible) tris[t].alive = false;
        for (const auto& e : horizon) add_tri(e.first, e.second, p);
    }

    std::vector<Tri> live;
    for (const auto& t : tris)
        if (t.alive) live.push_back(t);

    // group triangles into maximal coplanar patches (flood fill over shared
    // edges, coplanarity judged against the seed triangle's plane)
    std::map<std::pair<int, int>, int> edge_owner;  // directed edge -> triangle
    for (std::size_t t = 0; t < live.size(); ++t)
        for (int k = 0; k < 3; ++k)
            edge_owner[{live[t].v[k], live[t].v[(k + 1) % 3]}] = static_cast<int>(t);

    std::vector<int> group(live.size(), -1);
    int ngroups = 0;
    for (std::size_t seed = 0; seed < live.size(); ++seed) {
        if (group[seed] >= 0) continue;
        int g = ngroups++;
        std::vector<int> stack{static_cast<int>(seed)};
        group[seed] = g;
        while (!stack.empty()) {
            int t = stack.back();
            stack.pop_back();
            for (int k = 0; k < 3; ++k) {
                auto it = edge_owner.find({live[t].v[(k + 1) % 3], live[t].v[k]});
                if (it == edge_owner.end()) continue;
                int nb = it->second;
                if (group[nb] >= 0) continue;
                bool coplanar = true;
                for (int vi : live[nb].v)
                    if (std::abs(signed_distance(live[seed].plane, pts[vi])) > coplanar_tol) {
                        coplanar = false;
                        break;
                    }
                if (coplanar) {
                    group[nb] = g;
                    stack.push_back(nb);
                }
            }
        }
    }

    // boundary cycle of each group from its unmatched directed edges
    std::vector<std::vector<int>> faces(ngroups);
    for (int g = 0; g < ngroups; ++g) {
        std::set<std::pair<int, int>> dir;
        for (std::size_t t = 0; t < live.size(); ++t) {
            if (group[t] != g) continue;
            for (int k = 0; k < 3; ++k) dir.insert({live[t].v[k], live[t].v[(k + 1) % 3]});
        }
        std::map<int, int> next;
        for (const auto& e : dir)
            if (!dir.count({e.second, e.first})) next[e.first] = e.second;
        if (next.empty()) throw DegenerateInput("convex_hull3: merge produced a closed shell");
        std::vector<int> cycle;
        int start = next.begin()->first;
        int cur = start;
        do {
            cycle.push_back(cur);
            auto it = next.find(cur);
            if (it == next.end())
                throw DegenerateInput("convex_hull3: broken face boundary after merge");
            cur = it->second;
        } while (cur != start && cycle.size() <= next.size());
        if (cur != start) throw DegenerateInput("convex_hull3: face boundary is not a single cycle");
        faces[g] = std::move(cycle);
    }

    // points skipped as coplanar-invisible may still be polygon vertices;
    // insert them into their face cycle by angle around the circumcenter
    std::set<int> on_faces;
    for (const auto& f : faces)
        for (int vi : f) on_faces.insert(vi);
    for (int p = 0; p < n; ++p) {
        if (on_faces.count(p)) continue;
        for (std::size_t g = 0; g < faces.size(); ++g) {
            auto& f = faces[g];
            std::vector<Vec3> fp;
            for (int vi : f) fp.push_back(pts[vi]);
            Plane pl = fit_plane(fp);
            if (std::abs(signed_distance(pl, pts[p])) > coplanar_tol) continue;
            Vec3 centroid{0, 0, 0};
            for (const Vec3& q : fp) centroid += q;
            centroid = centroid / static_cast<double>(fp.size());
            double rad = 0.0;
            for (const Vec3& q : fp) rad = std::max(rad, dist(q, centroid));
            if (dist(pts[p], centroid) < rad - coplanar_tol) continue;  // interior point
            // angular insertion
            Vec3 ax = unit(fp[0] - centroid);
            Vec3 ay = cross(pl.normal, ax);
            auto angle = [&](const Vec3& q) {
                return std::atan2(dot(q - centroid, ay), dot(q - centroid, ax));
            };
            double ap = angle(pts[p]);
            std::size_t pos = 0;
            for (; pos < f.size(); ++pos) {
                double a0 = angle(pts[f[pos]]);
                double a1 = angle(pts[f[(pos + 1) % f.size()]]);
                double span = a1 - a0;
                double off = ap - a0;
                const double two_pi = 6.283185307179586476925286766559;
                while (span <= 0) span += two_pi;
                while (off < 0) off += two_pi;
                if (off > 0 && off < span) break;
            }
            if (pos < f.size()) {
                f.insert(f.begin() + static_cast<long>(pos) + 1, p);
                on_faces.insert(p);
                break;
            }
        }
    }

    // drop unused (interior) points, remap indices
    std::vector<int> remap(n, -1);
    std::vector<Vec3> verts;
    for (int p = 0; p < n; ++p)
        if (on_faces.count(p)) {
            remap[p] = static_cast<int>(verts.size());
            verts.push_back(pts[p]);
        }
    for (auto& f : faces)
        for (int& vi : f) vi = remap[vi];

    Polytope poly;
    poly.vertices = std::move(verts);
    poly.faces = std::move(faces);
    canonicalize_faces(poly);
    return poly;
}

inline Polytope convex_hull3(const std::vector<Vec3>& pts, double coplanar_tol = kMergeTol) {
    return convex_hull3(std::span<const Vec3>(pts.data(), pts.size()), coplanar_tol);
}

}  // namespace ssd
