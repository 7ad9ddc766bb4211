#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "indicator.hpp"

namespace fubi {

// Unital dual-preserving automorphism: permutation of {0..n} fixing 0 and
// commuting with bar.
struct Automorphism {
    std::vector<int> perm;
};

// All automorphisms: permute the m dual pairs, flip within each pair, and
// permute the self-dual non-identity generators independently.
// |G| = m! * 2^m * (n-2m)!; for n=4, m=0 this is the S_4 action on the
// non-identity generators.
inline std::vector<Automorphism> group_elements(const DualSignature& sig) {
    int n = sig.n, m = sig.m;
    std::vector<int> pairperm(m), selfduals;
    for (int i = 0; i < m; ++i) pairperm[i] = i;
    for (int i = 2 * m + 1; i <= n; ++i) selfduals.push_back(i);

    std::vector<Automorphism> out;
    std::vector<int> sd = selfduals;
    do {
        for (std::uint32_t flips = 0; flips < (1u << m); ++flips) {
            std::sort(sd.begin(), sd.end());
            do {
                Automorphism g;
                g.perm.assign(n + 1, 0);
                for (int p = 0; p < m; ++p) {
                    int a = 2 * p + 1, b = 2 * p + 2;
                    if ((flips >> p) & 1) std::swap(a, b);
                    g.perm[a] = 2 * pairperm[p] + 1;
                    g.perm[b] = 2 * pairperm[p] + 2;
                }
                for (size_t i = 0; i < selfduals.size(); ++i) g.perm[selfduals[i]] = sd[i];
                out.push_back(std::move(g));
            } while (std::next_permutation(sd.begin(), sd.end()));
        }
    } while (std::next_permutation(pairperm.begin(), pairperm.end()));
    return out;
}

inline std::vector<int> induced_class_permutation(const Automorphism& g,
                                                  const ClassPartition& P) {
    std::vector<int> pi(P.count());
    for (int c = 0; c < P.count(); ++c) {
        const Triple& t = P.classes[c][0];
        int r = P.rank_of({g.perm[t.k], g.perm[t.j], g.perm[t.i]});
        if (r < 0) throw std::runtime_error("induced_class_permutation: image not a class");
        // the image class must match the mapped class element-for-element
        if (P.classes[r].size() != P.classes[c].size())
            throw std::runtime_error("induced_class_permutation: class size mismatch");
        pi[c] = r;
    }
    return pi;
}

// Deduplicated induced permutations with the identity omitted.
struct InducedAction {
    int nclasses = 0;
    std::vector<std::vector<int>> perms;
};

inline InducedAction induced_action(const DualSignature& sig, const ClassPartition& P) {
    InducedAction A;
    A.nclasses = P.count();
    std::set<std::vector<int>> seen;
    std::vector<int> id(P.count());
    for (int c = 0; c < P.count(); ++c) id[c] = c;
    for (const auto& g : group_elements(sig)) {
        auto pi = induced_class_permutation(g, P);
        if (pi != id && seen.insert(pi).second) A.perms.push_back(std::move(pi));
    }
    return A;
}

inline std::uint32_t apply_class_perm(std::uint32_t bits, const std::vector<int>& pi, int C) {
    std::uint32_t out = 0;
    for (int c = 0; c < C; ++c)
        if ((bits >> (C - 1 - c)) & 1u) out |= 1u << (C - 1 - pi[c]);
    return out;
}

// Orbit representative: minimal bitstring (as unsigned integer, rank 0 = MSB).
inline AIF canonicalize(const AIF& aif, const InducedAction& action) {
    if (aif.count != action.nclasses) throw std::invalid_argument("canonicalize: size mismatch");
    std::uint32_t best = aif.bits;
    for (const auto& pi : action.perms)
        best = std::min(best, apply_class_perm(aif.bits, pi, aif.count));
    return AIF{best, aif.count};
}

} // namespace fubi
