#pragma once

#include <stdexcept>
#include <vector>

namespace fubi {

// Dual structure on the minimal projections p_0..p_n. `bar` is an involution
// on {0..n} fixing 0. Canonical layout: the m dual pairs occupy indices
// (1,2),(3,4),...,(2m-1,2m); indices 2m+1..n are self-dual. Keeping this
// layout fixed lets the published class/action fixtures map by identity
// relabeling.
struct DualSignature {
    int n = 0;            // non-identity generators; dim P_2 = n + 1
    std::vector<int> bar; // involution on {0..n}
    int m = 0;            // number of dual pairs

    int dim() const { return n + 1; }
    int self_dual_count() const { return n - 2 * m; }

    bool operator==(const DualSignature&) const = default;
};

inline DualSignature make_signature(int n, int m) {
    if (n < 1) throw std::invalid_argument("signature: need at least one generator");
    if (m < 0 || 2 * m > n) throw std::invalid_argument("signature: invalid pair count");
    DualSignature s;
    s.n = n;
    s.m = m;
    s.bar.resize(n + 1);
    for (int i = 0; i <= n; ++i) s.bar[i] = i;
    for (int p = 0; p < m; ++p) {
        s.bar[2 * p + 1] = 2 * p + 2;
        s.bar[2 * p + 2] = 2 * p + 1;
    }
    return s;
}

// One signature per possible number of dual pairs, ascending.
inline std::vector<DualSignature> enumerate_signatures(int n) {
    if (n < 1) throw std::invalid_argument("enumerate_signatures: n must be >= 1");
    std::vector<DualSignature> out;
    for (int m = 0; 2 * m <= n; ++m) out.push_back(make_signature(n, m));
    return out;
}

} // namespace fubi
