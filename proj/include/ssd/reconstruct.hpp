#pragma once

// Face-propagation reconstruction: given one face of a (hypothetical) ssd
// polyhedron inscribed in the unit sphere, grow the whole polytope.
//
// The growth alternates two kinds of moves.
//
//  Certain moves. (a) The dual of a confirmed edge is itself an edge whose
//  endpoints are vertices: resolve it with Phi and record the sigma pairing.
//  (b) A vertex pair whose two Phi points both match known vertices is an
//  edge (two faces can share two vertices only along a common edge).
//  (c) A pair whose midpoint is closer than r to the origin is a body
//  diagonal; a pair with coincident Phi points is a face diagonal through
//  its circle center. (d) A hinged pair (one Phi point matches a vertex)
//  whose other Phi point lies behind a confirmed dual plane is a face
//  diagonal; the candidate point is discarded as non-proper.
//
//  Speculative moves. When no certain move is left, the hinged candidate
//  with the largest properness margin is accepted as a new vertex. Wrong
//  acceptances surface as contradictions (vertex collisions, impropriety
//  against later vertices, degenerate edge duals, failed assembly), which
//  trigger rollback to the last speculation and the next alternative; the
//  rejected candidate's pair is recorded as a diagonal. Completion moves for
//  the two L-type face patterns (regular polygon, symmetric trapezoid) enter
//  the same queue when a face chain is otherwise stuck.

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "ssd/duality.hpp"
#include "ssd/geom.hpp"
#include "ssd/polytope.hpp"
#include "ssd/verify.hpp"

namespace ssd {

struct ReconstructOptions {
    double merge_tol = kDedupTol;  // vertex deduplication
    double proper_eps = 1e-7;      // behind-a-dual-plane rejection threshold
    double assume_closure = 0.0;   // optional looser frontier merge (F = X step)
    int max_vertices = 64;
    int max_speculations = 512;
    double verify_tol = kVerifyTolConverged;
    bool trace = false;  // growth log on stderr
};

// Growing state: vertices, classified pairs, edges with their dual edges,
// and the diagonals found along the way.
struct ReconstructionState {
    std::vector<Vec3> vertices;
    double r = 0.0;
    std::map<Edge, Edge> dual;   // confirmed edge -> dual edge ((-1,-1) = unresolved)
    std::set<Edge> diagonals;    // pairs classified as face diagonals
    std::map<Edge, int> status;  // 1 body, 2 diagonal, 3 edge
};

// Duals of the consecutive edges of a face: (Phi(u,v), Phi(v,u)) per edge.
// For a face of an ssd polytope one point of each pair is the face's dual
// vertex (the apex over that face).
inline std::vector<std::pair<Vec3, Vec3>> duals_of_face_edges(std::span<const Vec3> face,
                                                              double r) {
    if (face.size() < 3) throw InvalidParams("duals_of_face_edges: need a cycle");
    std::vector<std::pair<Vec3, Vec3>> out;
    for (std::size_t i = 0; i < face.size(); ++i) {
        const Vec3& u = face[i];
        const Vec3& v = face[(i + 1) % face.size()];
        auto x = phi_opt(u, v, r), y = phi_opt(v, u, r);
        if (!x || !y)
            throw DegenerateDiscriminant("duals_of_face_edges: edge " + std::to_string(i));
        out.emplace_back(*x, *y);
    }
    return out;
}

namespace recon_detail {

inline int find_vertex(const std::vector<Vec3>& verts, const Vec3& p, double tol) {
    for (std::size_t i = 0; i < verts.size(); ++i)
        if (dist(verts[i], p) < tol) return static_cast<int>(i);
    return -1;
}

struct Candidate {
    double margin;  // min over dual planes of <c, w> + r (>= 0 for interior points)
    int i, j;       // the generating pair
    Vec3 point;
    int known_idx;  // index the other Phi point matched
    bool known_is_x;
};

struct Engine {
    ReconstructOptions opt;
    ReconstructionState st;
    int speculations = 0;

    double merge_tol() const { return std::max(opt.merge_tol, opt.assume_closure); }

    double margin_of(const Vec3& p) const {
        double worst = 1e9;
        for (const Vec3& w : st.vertices) worst = std::min(worst, dot(p, w) + st.r);
        return worst;
    }

    int add_vertex(const Vec3& p) {
        st.vertices.push_back(p);
        return static_cast<int>(st.vertices.size()) - 1;
    }

    void record_edge(Edge e, Edge d) {
        st.dual[e] = d;
        auto it = st.dual.find(d);
        if (it == st.dual.end() || (it->second.first < 0)) st.dual[d] = e;
        st.status[e] = 3;
        st.status[d] = 3;
    }

    // resolve duals of confirmed edges; returns true on progress,
    // throws on contradiction
    bool certain_edge_duals() {
        bool progress = false;
        for (auto& [e, d] : st.dual) {
            if (d.first >= 0) continue;
            auto x = phi_opt(st.vertices[e.first], st.vertices[e.second], st.r);
            auto y = phi_opt(st.vertices[e.second], st.vertices[e.first], st.r);
            if (!x || !y) throw DegenerateDiscriminant("edge dual does not exist");
            int xi = find_vertex(st.vertices, *x, merge_tol());
            if (xi < 0) xi = add_vertex(*x);
            int yi = find_vertex(st.vertices, *y, merge_tol());
            if (yi < 0) yi = add_vertex(*y);
            if (xi == yi) throw DegenerateInput("edge dual collapsed to one point");
            record_edge(e, make_edge(xi, yi));
            progress = true;
            break;  // map mutated; rescan
        }
        return progress;
    }

    // classify pairs; certain deductions applied, hinged candidates collected
    bool scan_pairs(std::vector<Candidate>& hinged) {
        bool progress = false;
        const int nv = static_cast<int>(st.vertices.size());
        for (int i = 0; i < nv; ++i) {
            for (int j = i + 1; j < nv; ++j) {
                Edge key = make_edge(i, j);
                auto s = st.status.find(key);
                if (s != st.status.end()) continue;
                const Vec3& u = st.vertices[i];
                const Vec3& v = st.vertices[j];
                if (0.5 * norm(u + v) < st.r - opt.merge_tol) {
                    st.status[key] = 1;
                    continue;
                }
                auto x = phi_opt(u, v, st.r);
                auto y = phi_opt(v, u, st.r);
                if (!x || !y) { st.status[key] = 1; continue; }
                if (dist(*x, *y) < merge_tol()) {
                    st.status[key] = 2;
                    st.diagonals.insert(key);
                    continue;
                }
                int xi = find_vertex(st.vertices, *x, merge_tol());
                int yi = find_vertex(st.vertices, *y, merge_tol());
                if (xi >= 0 && yi >= 0) {
                    if (xi == yi) { st.status[key] = 2; st.diagonals.insert(key); continue; }
                    record_edge(key, make_edge(xi, yi));
                    progress = true;
                } else if (xi >= 0 || yi >= 0) {
                    const Vec3& cand = (xi >= 0) ? *y : *x;
                    double m = margin_of(cand);
                    if (m < -opt.proper_eps) {
                        st.status[key] = 2;  // candidate behind a confirmed plane
                        st.diagonals.insert(key);
                        progress = true;
                    } else {
                        hinged.push_back({m, i, j, cand, xi >= 0 ? xi : yi, xi >= 0});
                    }
                }
                // neither point known: undecidable now, rescanned next round
            }
        }
        return progress;
    }

    // L-type completion candidates for face chains that are stuck: the next
    // vertex of a regular-polygon face or the fourth vertex of a symmetric
    // trapezoid, both on the known circumcircle of the face.
    void completion_candidates(std::vector<Candidate>& out) {
        const int nv = static_cast<int>(st.vertices.size());
        for (int vi = 0; vi < nv; ++vi) {
            auto chain = face_chain(vi);
            if (chain.size() < 3 || chain.front() == chain.back()) continue;  // closed or tiny
            Vec3 center = -st.r * st.vertices[vi];
            Vec3 nrm = st.vertices[vi];
            double rad = std::sqrt(std::max(0.0, 1.0 - st.r * st.r));
            // chord lengths along the chain
            std::vector<double> chords;
            for (std::size_t k = 0; k + 1 < chain.size(); ++k)
                chords.push_back(dist(st.vertices[chain[k]], st.vertices[chain[k + 1]]));
            bool equal = true;
            for (double c : chords)
                if (std::abs(c - chords[0]) > 1e-6) equal = false;
            if (equal) {
                // regular polygon: next vertex continues at the same step angle
                double step = 2.0 * std::asin(std::clamp(chords[0] / (2.0 * rad), 0.0, 1.0));
                for (int end = 0; end < 2; ++end) {
                    int last = end == 0 ? chain.back() : chain.front();
                    int prev = end == 0 ? chain[chain.size() - 2] : chain[1];
                    Vec3 cand = rotate_about(st.vertices[last], center, nrm,
                                             turn_sign(prev, last, center, nrm) * step);
                    push_candidate(out, vi, last, cand);
                }
            }
            if (chain.size() == 3) {
                // symmetric trapezoid: reflect the first vertex across the
                // plane through the circle axis and the middle chord bisector
                Vec3 p0 = st.vertices[chain[0]], p1 = st.vertices[chain[1]],
                     p2 = st.vertices[chain[2]];
                Vec3 m = 0.5 * (p1 + p2) - center;
                if (norm(m) > 1e-9) {
                    Vec3 u3 = unit(cross(unit(m), nrm));
                    Vec3 cand = p0 - 2.0 * dot(p0 - center, u3) * u3;
                    push_candidate(out, vi, chain[2], cand);
                }
            }
        }
    }

    static Vec3 rotate_about(const Vec3& p, const Vec3& center, const Vec3& axis, double ang) {
        Vec3 d = p - center;
        Vec3 a = unit(axis);
        Vec3 par = dot(d, a) * a;
        Vec3 perp = d - par;
        Vec3 w = cross(a, perp);
        return center + par + std::cos(ang) * perp + std::sin(ang) * w;
    }

    double turn_sign(int prev, int last, const Vec3& center, const Vec3& nrm) const {
        return triple(nrm, st.vertices[prev] - center, st.vertices[last] - center) >= 0 ? 1.0
                                                                                        : -1.0;
    }

    void push_candidate(std::vector<Candidate>& out, int face_vi, int attach, const Vec3& cand) {
        if (!finite(cand)) return;
        if (std::abs(norm(cand) - 1.0) > 1e-6) return;
        if (find_vertex(st.vertices, cand, merge_tol()) >= 0) return;
        double m = margin_of(cand);
        if (m < -opt.proper_eps) return;
        out.push_back({m, face_vi, attach, cand, -1, false});
    }

    // open or closed chain of face sigma(vi) implied by recorded dual edges
    std::vector<int> face_chain(int vi) const {
        std::vector<Edge> des;
        for (const auto& [e, d] : st.dual) {
            if (d.first < 0) continue;
            if (e.first == vi || e.second == vi) des.push_back(d);
        }
        std::set<Edge> uniq(des.begin(), des.end());
        des.assign(uniq.begin(), uniq.end());
        if (des.empty()) return {};
        std::vector<int> cyc{des[0].first, des[0].second};
        std::vector<bool> used(des.size(), false);
        used[0] = true;
        bool extended = true;
        while (extended) {
            extended = false;
            for (std::size_t k = 0; k < des.size(); ++k) {
                if (used[k]) continue;
                auto [a, b] = des[k];
                if (a == cyc.back()) { cyc.push_back(b); used[k] = true; extended = true; }
                else if (b == cyc.back()) { cyc.push_back(a); used[k] = true; extended = true; }
                else if (a == cyc.front()) { cyc.insert(cyc.begin(), b); used[k] = true; extended = true; }
                else if (b == cyc.front()) { cyc.insert(cyc.begin(), a); used[k] = true; extended = true; }
            }
        }
        return cyc;  // closed iff front == back
    }

    // consistency checks after each accepted speculation
    void check_contradictions() const {
        const int nv = static_cast<int>(st.vertices.size());
        if (nv > opt.max_vertices) throw Overflow("more than max_vertices vertices");
        for (int i = 0; i < nv; ++i)
            for (int j = i + 1; j < nv; ++j)
                if (dist(st.vertices[i], st.vertices[j]) < opt.merge_tol)
                    throw DegenerateInput("vertex collision");
        for (const Vec3& v : st.vertices)
            if (margin_of(v) < -opt.proper_eps) throw DegenerateInput("vertex became improper");
        // face boundaries are simple cycles: inside the dual-edge set of any
        // one face no vertex can meet more than two edges
        for (int vi = 0; vi < nv; ++vi) {
            std::map<int, int> incidence;
            std::set<Edge> seen;
            for (const auto& [e, d] : st.dual) {
                if (d.first < 0) continue;
                if (e.first != vi && e.second != vi) continue;
                if (!seen.insert(d).second) continue;
                if (++incidence[d.first] > 2 || ++incidence[d.second] > 2)
                    throw DegenerateInput("face boundary branches at a vertex");
            }
            check_face_arcs(vi, seen);
        }
    }

    // All known vertices on the dual circle of vi belong to the face
    // sigma(vi); an edge of that face cuts off an arc that contains no other
    // face vertex. If both arcs of a recorded face edge hold circle members,
    // some accepted point cannot be a vertex.
    void check_face_arcs(int vi, const std::set<Edge>& face_edges) const {
        if (face_edges.empty()) return;
        const Vec3& v = st.vertices[vi];
        std::vector<std::pair<int, double>> members;  // vertex -> angle on the circle
        Vec3 ax{}, ay{};
        bool basis = false;
        for (std::size_t w = 0; w < st.vertices.size(); ++w) {
            if (static_cast<int>(w) == vi) continue;
            if (std::abs(dot(st.vertices[w], v) + st.r) > opt.proper_eps) continue;
            Vec3 center = -st.r * v;
            Vec3 d = st.vertices[w] - center;
            if (!basis) {
                ax = unit(d);
                ay = cross(v, ax);
                basis = true;
            }
            members.emplace_back(static_cast<int>(w), std::atan2(dot(d, ay), dot(d, ax)));
        }
        if (members.size() < 3) return;
        auto angle_of = [&](int w) {
            for (const auto& [m, a] : members)
                if (m == w) return a;
            return 1e9;
        };
        for (const Edge& e : face_edges) {
            double a0 = angle_of(e.first), a1 = angle_of(e.second);
            if (a0 > 1e8 || a1 > 1e8) continue;
            if (a0 > a1) std::swap(a0, a1);
            int inside = 0, outside = 0;
            for (const auto& [m, a] : members) {
                if (m == e.first || m == e.second) continue;
                if (a > a0 + 1e-12 && a < a1 - 1e-12)
                    ++inside;
                else
                    ++outside;
            }
            if (inside > 0 && outside > 0)
                throw DegenerateInput("face edge arc contains an extra circle point");
        }
    }

    void run_certain() {
        while (true) {
            if (static_cast<int>(st.vertices.size()) > opt.max_vertices)
                throw Overflow("more than max_vertices vertices");
            if (certain_edge_duals()) {
                check_contradictions();
                continue;
            }
            std::vector<Candidate> hinged;
            if (scan_pairs(hinged)) continue;
            break;
        }
    }

    std::vector<Candidate> collect_candidates() {
        std::vector<Candidate> hinged;
        scan_pairs(hinged);
        if (hinged.empty()) completion_candidates(hinged);  // only when otherwise stuck
        std::sort(hinged.begin(), hinged.end(), [](const Candidate& a, const Candidate& b) {
            if (a.margin != b.margin) return a.margin > b.margin;
            if (a.i != b.i) return a.i < b.i;
            return a.j < b.j;
        });
        return hinged;
    }

    // Accept every candidate point proposed by two or more distinct pairs:
    // such a point lies on four confirmed dual circles at once, which no
    // spurious intersection point does in general position.
    bool accept_corroborated(const std::vector<Candidate>& cands) {
        bool any = false;
        std::vector<bool> used(cands.size(), false);
        for (std::size_t a = 0; a < cands.size(); ++a) {
            if (used[a]) continue;
            std::vector<std::size_t> group{a};
            for (std::size_t b = a + 1; b < cands.size(); ++b)
                if (!used[b] && dist(cands[a].point, cands[b].point) < merge_tol())
                    group.push_back(b);
            if (group.size() < 2) continue;
            int ci = find_vertex(st.vertices, cands[a].point, merge_tol());
            if (ci < 0) ci = add_vertex(cands[a].point);
            for (std::size_t g : group) {
                used[g] = true;
                const Candidate& c = cands[g];
                if (c.known_idx >= 0) record_edge(make_edge(c.i, c.j), make_edge(c.known_idx, ci));
            }
            if (opt.trace)
                std::fprintf(stderr, "[recon] corroborated x%zu -> v%d (|V|=%zu)\n", group.size(),
                             ci, st.vertices.size());
            any = true;
        }
        return any;
    }

    // depth-first search over speculative acceptances; returns the finished
    // polytope or throws the most informative failure. Candidate rejection
    // never mutates the parent state: a failed subtree may have gone wrong
    // at any depth, so the only sound reaction is to try the next branch.
    Polytope grow() {
        run_certain();
        std::optional<Error> last_failure;
        try {
            return assemble();  // complete already?
        } catch (const Error& err) {
            last_failure = err;
        }
        auto cands = collect_candidates();
        if (accept_corroborated(cands)) {
            check_contradictions();
            return grow();
        }

        for (const Candidate& c : cands) {
            if (++speculations > opt.max_speculations)
                throw OpenChain("speculation budget exhausted");
            ReconstructionState snapshot = st;
            try {
                int ci = add_vertex(c.point);
                if (opt.trace)
                    std::fprintf(stderr, "[recon %d] accept (%d,%d) margin %.2e -> v%d (|V|=%zu)\n",
                                 speculations, c.i, c.j, c.margin, ci, st.vertices.size());
                if (c.known_idx >= 0) {
                    Edge pair = make_edge(c.i, c.j);
                    record_edge(pair, make_edge(c.known_idx, ci));
                }
                check_contradictions();
                return grow();
            } catch (const Error& err) {
                st = std::move(snapshot);
                last_failure = err;
                if (opt.trace)
                    std::fprintf(stderr, "[recon %d] reject (%d,%d): %s\n", speculations, c.i,
                                 c.j, err.what());
            }
        }
        if (last_failure) throw *last_failure;
        throw OpenChain("no candidates and no assembly");
    }

    Polytope assemble() {
        const int nv = static_cast<int>(st.vertices.size());
        Polytope poly;
        poly.vertices = st.vertices;
        poly.r = st.r;
        poly.alpha = std::sqrt(2.0 + 2.0 * st.r);
        poly.faces.resize(nv);
        poly.sigma.resize(nv);
        for (int vi = 0; vi < nv; ++vi) {
            auto cyc = face_chain(vi);
            if (cyc.size() < 4 || cyc.front() != cyc.back())
                throw OpenChain("face of vertex " + std::to_string(vi) +
                                " is a broken line (nonempty diagonal set)");
            cyc.pop_back();
            // outward counterclockwise orientation
            std::vector<Vec3> fp;
            for (int k : cyc) fp.push_back(st.vertices[k]);
            Plane pl = fit_plane(fp);
            if (dot(pl.normal, -st.vertices[vi]) < 0.0) std::reverse(cyc.begin(), cyc.end());
            poly.faces[vi] = cyc;
            poly.sigma[vi] = vi;
        }
        canonicalize_faces(poly);
        SsdReport rep = verify_ssd(poly, opt.verify_tol);
        if (!rep.passed)
            throw VerificationFailed("reconstructed polytope fails ssd verification (worst " +
                                     fmt_g(rep.worst()) + ")");
        return poly;
    }
};

}  // namespace recon_detail

// Reconstruct the unique ssd polyhedron containing the given face, following
// the face-propagation proof. The face must be concyclic on the unit sphere
// with its plane at distance r in (0,1) from the origin.
inline Polytope reconstruct_from_face(std::span<const Vec3> face,
                                      const ReconstructOptions& opt = {}) {
    if (face.size() < 3) throw InvalidParams("reconstruct_from_face: need >= 3 points");
    for (const Vec3& p : face)
        if (std::abs(norm(p) - 1.0) > 1e-6)
            throw NonUnitVertex("reconstruct_from_face: face vertex not on the unit sphere");
    Circumcircle cc = circumcircle(face, std::max(kCoplanarTol, opt.assume_closure));
    double r = norm(cc.center);
    if (!(r > 1e-9 && r < 1.0 - 1e-12))
        throw NotConcyclicFace("reconstruct_from_face: face plane distance " + std::to_string(r));
    for (const Vec3& p : face) {
        double dev = std::abs(dist(p, cc.center) - cc.radius);
        if (dev > std::max(1e-7, opt.assume_closure))
            throw NotConcyclic("reconstruct_from_face: face not concyclic, dev " +
                               fmt_g(dev));
    }

    recon_detail::Engine eng;
    eng.opt = opt;
    eng.st.r = r;
    eng.st.vertices.assign(face.begin(), face.end());
    // apex over the seed face: the sphere point on the ray from the face
    // circumcenter through the origin
    Vec3 apex = -cc.center / r;
    if (recon_detail::find_vertex(eng.st.vertices, apex, eng.merge_tol()) < 0)
        eng.st.vertices.push_back(apex);
    const int k = static_cast<int>(face.size());
    for (int i = 0; i < k; ++i)
        eng.st.dual[make_edge(i, (i + 1) % k)] = Edge{-1, -1};
    return eng.grow();
}

inline Polytope reconstruct_from_face(const std::vector<Vec3>& face,
                                      const ReconstructOptions& opt = {}) {
    return reconstruct_from_face(std::span<const Vec3>(face.data(), face.size()), opt);
}

}  // namespace ssd
