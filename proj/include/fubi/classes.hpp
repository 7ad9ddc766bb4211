#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "signature.hpp"

namespace fubi {

// Coefficient triple: the coefficient of p_i in p_k * p_j (N_{kj}^i).
struct Triple {
    int k = 0, j = 0, i = 0;
    auto operator<=>(const Triple&) const = default;
};

// Equivalence classes of triples over indices 1..n whose joint zero-pattern
// defines an admissible indicator function. Index-0 triples are excluded:
// their pattern is forced by the unital structure (see indicator.hpp).
struct ClassPartition {
    DualSignature sig;
    bool commutative = true;
    std::vector<std::vector<Triple>> classes; // each sorted; list sorted by smallest triple
    std::vector<int> index;                   // flat (k,j,i) -> class rank, -1 for index-0 triples

    int count() const { return static_cast<int>(classes.size()); }
    int flat(int k, int j, int i) const {
        int d = sig.n + 1;
        return (k * d + j) * d + i;
    }
    int rank_of(const Triple& t) const { return index[flat(t.k, t.j, t.i)]; }
};

// Closure of {t} under the Frobenius map F:(k,j,i)->(j,bar i,bar k), the dual
// map D:(k,j,i)->(bar j,bar k,bar i) and, when commutative, C:(k,j,i)->(j,k,i).
inline std::vector<Triple> frobenius_orbit(const Triple& t, const DualSignature& sig,
                                           bool commutative) {
    if (t.k < 1 || t.j < 1 || t.i < 1 || t.k > sig.n || t.j > sig.n || t.i > sig.n)
        throw std::invalid_argument("frobenius_orbit: indices must lie in 1..n");
    const auto& bar = sig.bar;
    std::set<Triple> orbit;
    std::vector<Triple> stack{t};
    while (!stack.empty()) {
        Triple u = stack.back();
        stack.pop_back();
        if (!orbit.insert(u).second) continue;
        stack.push_back({u.j, bar[u.i], bar[u.k]});
        stack.push_back({bar[u.j], bar[u.k], bar[u.i]});
        if (commutative) stack.push_back({u.j, u.k, u.i});
    }
    return {orbit.begin(), orbit.end()};
}

inline ClassPartition build_partition(const DualSignature& sig, bool commutative) {
    ClassPartition P;
    P.sig = sig;
    P.commutative = commutative;
    int n = sig.n, d = n + 1;
    P.index.assign(d * d * d, -1);
    for (int k = 1; k <= n; ++k)
        for (int j = 1; j <= n; ++j)
            for (int i = 1; i <= n; ++i) {
                Triple t{k, j, i};
                if (P.index[P.flat(k, j, i)] >= 0) continue;
                auto orbit = frobenius_orbit(t, sig, commutative);
                int rank = static_cast<int>(P.classes.size());
                for (const auto& u : orbit) P.index[P.flat(u.k, u.j, u.i)] = rank;
                P.classes.push_back(orbit); // already sorted (set order)
            }
    // deterministic order: by lexicographically smallest member
    std::vector<int> order(P.classes.size());
    for (size_t c = 0; c < order.size(); ++c) order[c] = static_cast<int>(c);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return P.classes[a].front() < P.classes[b].front(); });
    std::vector<std::vector<Triple>> sorted;
    sorted.reserve(P.classes.size());
    for (int c : order) sorted.push_back(std::move(P.classes[c]));
    P.classes = std::move(sorted);
    for (size_t c = 0; c < P.classes.size(); ++c)
        for (const auto& u : P.classes[c]) P.index[P.flat(u.k, u.j, u.i)] = static_cast<int>(c);
    return P;
}

// Default commutativity per (n, m). Matches every case the published tables
// pin down: on for m = 0 (all self-dual forces commutativity) and when at
// most one self-dual generator remains; off otherwise (e.g. n=4, m=1).
inline bool default_commutative(int n, int m) { return m == 0 || n - 2 * m <= 1; }

} // namespace fubi
