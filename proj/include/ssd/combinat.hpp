#pragma once

// Arithmetic feasibility of ssd face vectors. For a strongly self-dual
// polyhedron with n vertices, |F| = n and |E| = 2(n-1), so the face vector
// must satisfy sum alpha_l = n and sum l*alpha_l = 4(n-1) (which forces the
// balance sum (4-l) alpha_l = 4). The enumeration walks all candidate
// vectors with sum alpha_l = n whose edge budget does not exceed 4(n-1):
// those hitting the budget exactly are feasible; those whose weighted sum is
// odd cannot be any convex polyhedron (2|E| is even) and form the
// parity-excluded list.

#include <algorithm>
#include <functional>
#include <vector>

#include "ssd/geom.hpp"
#include "ssd/polytope.hpp"

namespace ssd {

struct CandidateList {
    int n = 0;
    std::vector<FaceVector> feasible;
    std::vector<FaceVector> excluded_parity;
};

namespace combinat_detail {

// Enumerate partitions of every m <= max_excess into parts of size
// <= max_part, descending; each partition is the multiset of (l-3) excesses
// of the non-triangle faces.
inline void walk_partitions(int remaining, int max_part, int parts_used, int max_parts,
                            std::vector<int>& current,
                            const std::function<void(const std::vector<int>&)>& emit) {
    emit(current);
    if (remaining == 0 || parts_used == max_parts) return;
    int cap = std::min(remaining, max_part);
    if (!current.empty()) cap = std::min(cap, current.back());
    for (int part = cap; part >= 1; --part) {
        current.push_back(part);
        walk_partitions(remaining - part, max_part, parts_used + 1, max_parts, current, emit);
        current.pop_back();
    }
}

}  // namespace combinat_detail

inline CandidateList enumerate_face_vectors(int n) {
    if (n < 4 || n > 64) throw InvalidN("enumerate_face_vectors: n must be in [4, 64]");
    CandidateList out;
    out.n = n;
    const int max_excess = n - 4;          // sum l*alpha_l <= 4(n-1) with n faces
    const int max_part = (n - 1) - 3;      // face size l <= n-1
    const long long target = 4LL * (n - 1);

    std::vector<int> parts;
    auto emit = [&](const std::vector<int>& excesses) {
        if (static_cast<int>(excesses.size()) > n) return;
        FaceVector fv;
        int triangles = n - static_cast<int>(excesses.size());
        if (triangles > 0) fv.counts[3] = triangles;
        for (int e : excesses) fv.counts[3 + e]++;
        long long wsum = fv.weighted_sum();
        if (wsum == target)
            out.feasible.push_back(fv);
        else if (wsum % 2 != 0)
            out.excluded_parity.push_back(fv);
    };
    int budget = std::min(max_excess, max_part * n);
    combinat_detail::walk_partitions(budget, max_part, 0, n, parts, emit);
    return out;
}

}  // namespace ssd
