#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "catalog.hpp"

namespace fubi {

struct ApcWitness {
    int i = 0, j = 0, k = 0, l = 0;
};

enum class ApcMode {
    Cancelling, // combine identical monomials before the sign test (default)
    Emptiness,  // weaker reading: one of P, M empty, the other not
};

// Associative Positivity Criterion on f(i,j,k,l) =
// sum_s N_{ij}^s N_{sk}^l - sum_s N_{is}^l N_{jk}^s. If, after combining like
// monomials, every surviving monomial has one sign, f = 0 has no positive
// solution. The cancelling mode is the one that reproduces the published
// sieve counts; the emptiness reading is kept for comparison.
inline std::optional<ApcWitness> apc_violation(const IndicatorTensor& T,
                                               ApcMode mode = ApcMode::Cancelling) {
    int n = T.n;
    using Key = std::array<int, 6>;
    std::map<Key, int> mono;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            for (int k = 0; k <= n; ++k)
                for (int l = 0; l <= n; ++l) {
                    if (mode == ApcMode::Emptiness) {
                        bool p = false, m = false;
                        for (int s = 0; s <= n; ++s) {
                            p |= T.at(i, j, s) && T.at(s, k, l);
                            m |= T.at(i, s, l) && T.at(j, k, s);
                        }
                        if (p != m) return ApcWitness{i, j, k, l};
                        continue;
                    }
                    mono.clear();
                    for (int s = 0; s <= n; ++s) {
                        if (T.at(i, j, s) && T.at(s, k, l)) {
                            Key a{i, j, s, s, k, l}, b{s, k, l, i, j, s};
                            mono[std::min(a, b)] += 1;
                        }
                        if (T.at(i, s, l) && T.at(j, k, s)) {
                            Key a{i, s, l, j, k, s}, b{j, k, s, i, s, l};
                            mono[std::min(a, b)] -= 1;
                        }
                    }
                    bool pos = false, neg = false;
                    for (const auto& [key, v] : mono) {
                        pos |= v > 0;
                        neg |= v < 0;
                    }
                    if (pos != neg) return ApcWitness{i, j, k, l};
                }
    return std::nullopt;
}

// p_i <= p_j iff p_i * p_j and p_j * p_i are scalar multiples of p_j,
// i.e. both zero-patterns are exactly {j}.
inline bool leq(const IndicatorTensor& T, int i, int j) {
    for (int s = 0; s <= T.n; ++s) {
        if (T.at(i, j, s) != (s == j ? 1 : 0)) return false;
        if (T.at(j, i, s) != (s == j ? 1 : 0)) return false;
    }
    return true;
}

// Algorithm "Generate a minimum S from L_2": A_i collects the nontrivial
// elements <= p_i; minimal elements seed S; the extension phase sends p_k to
// R only when every nontrivial element of S is below it, otherwise p_k joins
// S and pulls back every p_r in R that does not dominate it.
inline std::set<int> minimal_S(const IndicatorTensor& T) {
    int n = T.n;
    std::vector<std::set<int>> A(n + 1);
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
            if (leq(T, i, j)) A[j].insert(i);
            else if (leq(T, j, i)) A[i].insert(j);
        }
    std::set<int> S{0}, R;
    for (int i = 1; i <= n; ++i)
        if (A[i].empty()) S.insert(i);
    for (int k = 1; k <= n; ++k) {
        if (S.count(k)) continue;
        bool below = true;
        for (int s : S)
            if (s != 0 && !A[k].count(s)) below = false;
        if (below) {
            R.insert(k);
        } else {
            S.insert(k);
            for (auto it = R.begin(); it != R.end();) {
                if (!A[*it].count(k)) {
                    S.insert(*it);
                    it = R.erase(it);
                } else {
                    ++it;
                }
            }
        }
    }
    return S;
}

// Free Product Criterion: L_2 \ S non-empty.
inline bool is_free_product(const IndicatorTensor& T) {
    return static_cast<int>(minimal_S(T).size()) < T.n + 1;
}

struct TensorWitness {
    std::string group;
    std::string entry;
    std::vector<int> relabel; // product label -> candidate label
};

struct missing_catalog_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline bool iso_search(const IndicatorTensor& X, const std::vector<int>& barX,
                       const IndicatorTensor& T, const std::vector<int>& bar,
                       std::vector<int>& out) {
    int n = T.n;
    std::vector<int> perm(n + 1);
    perm[0] = 0;
    std::vector<int> rest;
    for (int i = 1; i <= n; ++i) rest.push_back(i);
    do {
        for (int i = 1; i <= n; ++i) perm[i] = rest[i - 1];
        bool ok = true;
        for (int x = 0; x <= n && ok; ++x) ok = perm[barX[x]] == bar[perm[x]];
        for (int k = 0; k <= n && ok; ++k)
            for (int j = 0; j <= n && ok; ++j)
                for (int i = 0; i <= n; ++i)
                    if (T.at(perm[k], perm[j], perm[i]) != X.at(k, j, i)) {
                        ok = false;
                        break;
                    }
        if (ok) {
            out = perm;
            return true;
        }
    } while (std::next_permutation(rest.begin(), rest.end()));
    return false;
}

} // namespace detail

// Tensor Product Criterion: the candidate's fusion matrices factor as the
// Kronecker product of a group pattern and a smaller catalog pattern, up to a
// unital dual-preserving relabeling.
inline std::optional<TensorWitness> is_tensor_product(const IndicatorTensor& T,
                                                      const DualSignature& sig,
                                                      const Catalog& catalog) {
    int dim = T.n + 1;
    for (int a = 2; a < dim; ++a) {
        if (dim % a != 0) continue;
        int b = dim / a;
        if (b < 2) continue;
        if (!catalog.has_dim(b))
            throw missing_catalog_error("is_tensor_product: classify dimension " +
                                        std::to_string(b) + " first");
        for (const auto& H : groups_of_order(a)) {
            CatalogEntry hg = group_graph(H);
            for (const CatalogEntry* e : catalog.entries_for_dim(b)) {
                auto [X, barX] = kronecker(hg.tensor, hg.sig.bar, e->tensor, e->sig.bar);
                std::vector<int> relabel;
                if (detail::iso_search(X, barX, T, sig.bar, relabel))
                    return TensorWitness{H.name, e->label, relabel};
            }
        }
    }
    return std::nullopt;
}

struct SieveVerdict {
    std::optional<ApcWitness> apc;
    bool free_product = false;
    std::set<int> S;
    std::optional<TensorWitness> tensor_product;
};

} // namespace fubi
