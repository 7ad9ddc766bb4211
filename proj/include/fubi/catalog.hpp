#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphs.hpp"
#include "symmetry.hpp"

namespace fubi {

struct CatalogSolution {
    std::vector<double> d;
    double delta = 0.0;
};

struct CatalogEntry {
    int dim = 0;
    DualSignature sig;
    bool commutative = true;
    AIF aif;
    std::string label;
    std::optional<CatalogSolution> solution;
    IndicatorTensor tensor; // expanded form, kept for factor checks
};

// --- small finite-group library (orders needed at desk scale) ---------------

struct GroupTable {
    std::string name;
    std::vector<std::vector<int>> mul; // mul[a][b], identity = 0
};

inline GroupTable cyclic_group(int k) {
    GroupTable g;
    g.name = "Z" + std::to_string(k);
    g.mul.assign(k, std::vector<int>(k));
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) g.mul[a][b] = (a + b) % k;
    return g;
}

inline GroupTable klein_group() {
    GroupTable g;
    g.name = "Z2xZ2";
    g.mul.assign(4, std::vector<int>(4));
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) g.mul[a][b] = a ^ b;
    return g;
}

inline std::vector<GroupTable> groups_of_order(int k) {
    switch (k) {
        case 1: return {cyclic_group(1)};
        case 2: return {cyclic_group(2)};
        case 3: return {cyclic_group(3)};
        case 4: return {cyclic_group(4), klein_group()};
        case 5: return {cyclic_group(5)};
        default: throw std::invalid_argument("groups_of_order: order not in library");
    }
}

// --- constructors ------------------------------------------------------------

// Relabel generators so that dual pairs occupy (1,2),(3,4),... and self-dual
// generators come last; returns the relabeled tensor plus its signature.
inline std::pair<IndicatorTensor, DualSignature> relabel_canonical(const IndicatorTensor& T,
                                                                   const std::vector<int>& bar) {
    int n = T.n;
    std::vector<int> newof(n + 1);
    newof[0] = 0;
    int next = 1, m = 0;
    for (int i = 1; i <= n; ++i)
        if (bar[i] > i) {
            newof[i] = next;
            newof[bar[i]] = next + 1;
            next += 2;
            ++m;
        }
    for (int i = 1; i <= n; ++i)
        if (bar[i] == i) newof[i] = next++;
    DualSignature sig = make_signature(n, m);
    IndicatorTensor R;
    R.n = n;
    R.v.assign((n + 1) * (n + 1) * (n + 1), 0);
    for (int k = 0; k <= n; ++k)
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i)
                if (T.at(k, j, i)) R.set(newof[k], newof[j], newof[i], 1);
    return {R, sig};
}

// Build an entry from an expanded tensor given its involution.
inline CatalogEntry make_entry(const IndicatorTensor& T, const std::vector<int>& bar,
                               const std::string& label,
                               std::optional<CatalogSolution> solution = std::nullopt) {
    auto [R, sig] = relabel_canonical(T, bar);
    bool comm = default_commutative(sig.n, sig.m);
    ClassPartition P;
    AIF bits;
    try {
        P = build_partition(sig, comm);
        bits = read_back(R, P);
    } catch (const std::runtime_error&) {
        comm = false;
        P = build_partition(sig, comm);
        bits = read_back(R, P);
    }
    bits = canonicalize(bits, induced_action(sig, P));
    CatalogEntry e;
    e.dim = sig.dim();
    e.sig = sig;
    e.commutative = comm;
    e.aif = bits;
    e.label = label;
    e.solution = std::move(solution);
    e.tensor = expand(bits, P);
    return e;
}

// Group pattern: ind(k,j,i) = 1 iff i = k*j, bar(g) = g^{-1}.
inline CatalogEntry group_graph(const GroupTable& g) {
    int sz = static_cast<int>(g.mul.size());
    for (int a = 0; a < sz; ++a) {
        if (g.mul[0][a] != a || g.mul[a][0] != a)
            throw std::invalid_argument("group_graph: 0 is not an identity");
        bool inv = false;
        for (int b = 0; b < sz; ++b) inv |= g.mul[a][b] == 0;
        if (!inv) throw std::invalid_argument("group_graph: missing inverse");
        for (int b = 0; b < sz; ++b)
            for (int c = 0; c < sz; ++c)
                if (g.mul[g.mul[a][b]][c] != g.mul[a][g.mul[b][c]])
                    throw std::invalid_argument("group_graph: not associative");
    }
    int n = sz - 1;
    IndicatorTensor T;
    T.n = n;
    T.v.assign(sz * sz * sz, 0);
    std::vector<int> bar(sz);
    for (int a = 0; a < sz; ++a)
        for (int b = 0; b < sz; ++b) {
            T.set(a, b, g.mul[a][b], 1);
            if (g.mul[a][b] == 0) bar[a] = b;
        }
    CatalogEntry e = make_entry(T, bar, g.name);
    double root = 1.0 / std::sqrt(double(sz));
    e.solution = CatalogSolution{std::vector<double>(sz, root), std::sqrt(double(sz))};
    return e;
}

// Kronecker product of two expanded patterns; product labels row-major, bar
// acts componentwise. Returns raw (tensor, bar) before canonical relabeling.
inline std::pair<IndicatorTensor, std::vector<int>> kronecker(const IndicatorTensor& A,
                                                              const std::vector<int>& barA,
                                                              const IndicatorTensor& B,
                                                              const std::vector<int>& barB) {
    int da = A.n + 1, db = B.n + 1, sz = da * db;
    auto lbl = [&](int x, int y) { return x * db + y; };
    IndicatorTensor T;
    T.n = sz - 1;
    T.v.assign(sz * sz * sz, 0);
    std::vector<int> bar(sz);
    for (int x = 0; x < da; ++x)
        for (int y = 0; y < db; ++y) bar[lbl(x, y)] = lbl(barA[x], barB[y]);
    for (int k1 = 0; k1 < da; ++k1)
        for (int j1 = 0; j1 < da; ++j1)
            for (int i1 = 0; i1 < da; ++i1) {
                if (!A.at(k1, j1, i1)) continue;
                for (int k2 = 0; k2 < db; ++k2)
                    for (int j2 = 0; j2 < db; ++j2)
                        for (int i2 = 0; i2 < db; ++i2)
                            if (B.at(k2, j2, i2))
                                T.set(lbl(k1, k2), lbl(j1, j2), lbl(i1, i2), 1);
            }
    return {T, bar};
}

// Free product A * B of dimension dim(A) + dim(B) - 1. A-side generators fuse
// as in A; an A-side element is absorbed by every B-side element; B-side
// products restricted to B-side targets follow B, and the B-identity
// component spreads over p_0 and the whole A-side.
inline CatalogEntry free_product(const CatalogEntry& A, const CatalogEntry& B,
                                 const std::string& label = "") {
    int na = A.tensor.n, nb = B.tensor.n;
    int n = na + nb, sz = n + 1;
    auto aof = [&](int x) { return x; };          // A-side keeps its labels (incl. 0)
    auto bof = [&](int y) { return na + y; };     // B-side nontrivial y>=1
    IndicatorTensor T;
    T.n = n;
    T.v.assign(sz * sz * sz, 0);
    std::vector<int> bar(sz);
    for (int x = 0; x <= na; ++x) bar[aof(x)] = aof(A.sig.bar[x]);
    for (int y = 1; y <= nb; ++y) bar[bof(y)] = bof(B.sig.bar[y]);
    for (int k = 0; k <= na; ++k)
        for (int j = 0; j <= na; ++j)
            for (int i = 0; i <= na; ++i)
                if (A.tensor.at(k, j, i)) T.set(aof(k), aof(j), aof(i), 1);
    for (int a = 1; a <= na; ++a)
        for (int b = 1; b <= nb; ++b) {
            T.set(aof(a), bof(b), bof(b), 1);
            T.set(bof(b), aof(a), bof(b), 1);
        }
    for (int b = 1; b <= nb; ++b)
        for (int b2 = 1; b2 <= nb; ++b2) {
            for (int x = 1; x <= nb; ++x)
                if (B.tensor.at(b, b2, x)) T.set(bof(b), bof(b2), bof(x), 1);
            if (B.tensor.at(b, b2, 0))
                for (int a = 0; a <= na; ++a) T.set(bof(b), bof(b2), aof(a), 1);
        }
    std::string name = label.empty() ? A.label + "*" + B.label : label;
    return make_entry(T, bar, name);
}

// --- persistent store --------------------------------------------------------

struct Catalog {
    int version = 1;
    std::vector<CatalogEntry> entries;

    bool has_dim(int dim) const {
        for (const auto& e : entries)
            if (e.dim == dim) return true;
        return false;
    }
    std::vector<const CatalogEntry*> entries_for_dim(int dim) const {
        std::vector<const CatalogEntry*> out;
        for (const auto& e : entries)
            if (e.dim == dim) out.push_back(&e);
        return out;
    }
    // keyed by (dim, involution, canonical aif); duplicate inserts are dropped
    bool add(CatalogEntry e) {
        for (const auto& x : entries)
            if (x.dim == e.dim && x.sig.bar == e.sig.bar && x.aif == e.aif) return false;
        entries.push_back(std::move(e));
        return true;
    }
};

inline void persist(const Catalog& c, const std::string& path) {
    nlohmann::json j;
    j["version"] = c.version;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : c.entries) {
        nlohmann::json je;
        je["dim"] = e.dim;
        je["involution"] = e.sig.bar;
        je["aif_bits"] = e.aif.to_string();
        je["label"] = e.label;
        if (e.solution) {
            je["solution"] = {{"d", e.solution->d}, {"delta", e.solution->delta}};
        } else {
            je["solution"] = nullptr;
        }
        j["entries"].push_back(std::move(je));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("persist: cannot open " + path);
    out << j.dump(2) << "\n";
}

inline Catalog load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load: cannot open " + path);
    nlohmann::json j;
    in >> j;
    if (!j.contains("version") || j["version"].get<int>() != 1)
        throw std::runtime_error("load: unsupported catalog version");
    Catalog c;
    for (const auto& je : j.at("entries")) {
        int dim = je.at("dim").get<int>();
        std::vector<int> bar = je.at("involution").get<std::vector<int>>();
        if (static_cast<int>(bar.size()) != dim)
            throw std::runtime_error("load: malformed involution");
        int n = dim - 1, m = 0;
        for (int i = 1; i <= n; ++i)
            if (bar[i] > i) ++m;
        DualSignature sig = make_signature(n, m);
        if (sig.bar != bar) throw std::runtime_error("load: involution not in canonical layout");
        bool comm = default_commutative(n, m);
        ClassPartition P = build_partition(sig, comm);
        AIF bits = AIF::from_string(je.at("aif_bits").get<std::string>());
        if (bits.count != P.count()) throw std::runtime_error("load: aif length mismatch");
        CatalogEntry e;
        e.dim = dim;
        e.sig = sig;
        e.commutative = comm;
        e.aif = bits;
        e.label = je.at("label").get<std::string>();
        if (!je.at("solution").is_null()) {
            CatalogSolution s;
            s.d = je["solution"].at("d").get<std::vector<double>>();
            s.delta = je["solution"].at("delta").get<double>();
            e.solution = std::move(s);
        }
        e.tensor = expand(bits, P);
        c.add(std::move(e));
    }
    return c;
}

// Known realizable patterns for dims 2 and 3: Temperley-Lieb (generic loop
// parameter), TL at sqrt(2) = Z2 pattern, Z3, TL*TL, and the dim-3 survivor
// (index-5 group-subgroup pair).
inline Catalog seed_catalog() {
    Catalog c;
    {
        DualSignature sig = make_signature(1, 0);
        ClassPartition P = build_partition(sig, true);
        CatalogEntry tl;
        tl.dim = 2;
        tl.sig = sig;
        tl.commutative = true;
        tl.aif = AIF::from_string("1");
        tl.label = "TL";
        tl.tensor = expand(tl.aif, P);
        c.add(tl);
    }
    c.add(group_graph(cyclic_group(2)));
    c.add(group_graph(cyclic_group(3)));
    {
        const CatalogEntry* tl = nullptr;
        for (const auto& e : c.entries)
            if (e.label == "TL") tl = &e;
        c.add(free_product(*tl, *tl));
    }
    {
        DualSignature sig = make_signature(2, 0);
        ClassPartition P = build_partition(sig, true);
        CatalogEntry s;
        s.dim = 3;
        s.sig = sig;
        s.commutative = true;
        s.aif = AIF::from_string("0110");
        s.label = "Z2 in Z5:Z2";
        double r5 = std::sqrt(5.0);
        s.solution = CatalogSolution{{1.0 / r5, 2.0 / r5, 2.0 / r5}, r5};
        s.tensor = expand(s.aif, P);
        c.add(s);
    }
    return c;
}

} // namespace fubi
