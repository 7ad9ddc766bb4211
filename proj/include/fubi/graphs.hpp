#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "indicator.hpp"

namespace fubi {

namespace detail {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    // false iff the edge closes a cycle
    bool unite(int a, int b) {
        int ra = find(a), rb = find(b);
        if (ra == rb) return false;
        parent[ra] = rb;
        return true;
    }
};

} // namespace detail

// Bipartite fusion graph Gamma_k: white vertices are row (output) indices i,
// black vertices are column (right factor) indices j; edge (i,j) iff
// ind(k,j,i) = 1.
struct FusionGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges; // (white i, black j)
};

struct FusionGraphSet {
    int n = 0;
    std::vector<FusionGraph> gamma; // index k in 0..n
};

inline FusionGraphSet build_graphs(const IndicatorTensor& T) {
    FusionGraphSet G;
    G.n = T.n;
    G.gamma.resize(T.n + 1);
    for (int k = 0; k <= T.n; ++k) {
        G.gamma[k].n = T.n;
        for (int i = 0; i <= T.n; ++i)
            for (int j = 0; j <= T.n; ++j)
                if (T.at(k, j, i)) G.gamma[k].edges.emplace_back(i, j);
    }
    return G;
}

inline bool is_forest(const FusionGraph& g) {
    detail::UnionFind uf(2 * (g.n + 1));
    for (auto [i, j] : g.edges)
        if (!uf.unite(i, (g.n + 1) + j)) return false;
    return true;
}

// dim P_3 equals the total edge count over all fusion graphs: Gamma_0 is the
// perfect matching (n+1 edges), each Gamma_k (k>=1) carries the two forced
// edges, and each active class contributes one edge per distinct (k,i,j).
inline int dim_p3(const AIF& aif, const ClassPartition& P) {
    int n = P.sig.n;
    int total = (n + 1) + 2 * n;
    for (int c = 0; c < P.count(); ++c)
        if (aif.bit(c)) total += static_cast<int>(P.classes[c].size());
    return total;
}

// Forest filter as used by the sieve: every Gamma_k acyclic AND
// dim P_3 >= (dim P_2)^2. The dimension bound is forced by subfactorizability
// (multiplication embeds P_2 (x) P_2 into P_3); group patterns attain
// equality. Without it the acyclicity count overshoots the published F_1.
inline bool all_forest(const AIF& aif, const ClassPartition& P) {
    int n = P.sig.n;
    if (dim_p3(aif, P) < (n + 1) * (n + 1)) return false;
    auto G = build_graphs(expand(aif, P));
    for (int k = 0; k <= n; ++k)
        if (!is_forest(G.gamma[k])) return false;
    return true;
}

// A vertex of the bipartite graph; white = row/output side.
struct Vertex {
    bool white = true;
    int idx = 0;
    auto operator<=>(const Vertex&) const = default;
};

struct Components {
    std::vector<Vertex> c1; // contains white i
    std::vector<Vertex> c2; // contains black j
};

// Components of the edge (i,j) after its removal. In a forest the edge is a
// tree edge, so white i and black j land in distinct components.
inline Components split_components(const FusionGraph& g, int i, int j) {
    bool present = false;
    for (auto [a, b] : g.edges)
        if (a == i && b == j) present = true;
    if (!present) throw std::invalid_argument("split_components: edge absent");

    int V = g.n + 1;
    auto id = [&](bool white, int x) { return white ? x : V + x; };
    std::vector<std::vector<int>> adj(2 * V);
    for (auto [a, b] : g.edges) {
        if (a == i && b == j) continue;
        adj[id(true, a)].push_back(id(false, b));
        adj[id(false, b)].push_back(id(true, a));
    }
    auto reach = [&](int start) {
        std::vector<char> seen(2 * V, 0);
        std::vector<int> stack{start};
        seen[start] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int u : adj[v])
                if (!seen[u]) {
                    seen[u] = 1;
                    stack.push_back(u);
                }
        }
        std::vector<Vertex> out;
        for (int v = 0; v < 2 * V; ++v)
            if (seen[v]) out.push_back({v < V, v < V ? v : v - V});
        return out;
    };
    Components comp;
    comp.c1 = reach(id(true, i));
    comp.c2 = reach(id(false, j));
    return comp;
}

} // namespace fubi
