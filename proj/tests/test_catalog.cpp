#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include <fubi/catalog.hpp>

using namespace fubi;

namespace {

const CatalogEntry* by_label(const Catalog& c, const std::string& label) {
    for (const auto& e : c.entries)
        if (e.label == label) return &e;
    return nullptr;
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("seed catalog contents") {
    Catalog c = seed_catalog();
    REQUIRE(c.entries.size() == 5);
    REQUIRE(c.has_dim(2));
    REQUIRE(c.has_dim(3));
    REQUIRE_FALSE(c.has_dim(4));
    REQUIRE(c.entries_for_dim(2).size() == 2);
    REQUIRE(c.entries_for_dim(3).size() == 3);
    REQUIRE(by_label(c, "TL") != nullptr);
    REQUIRE(by_label(c, "Z2") != nullptr);
    REQUIRE(by_label(c, "Z3") != nullptr);
    REQUIRE(by_label(c, "TL*TL") != nullptr);
    REQUIRE(by_label(c, "Z2 in Z5:Z2") != nullptr);
    // stored aifs are canonical forms under the induced action
    for (const auto& e : c.entries) {
        ClassPartition P = build_partition(e.sig, e.commutative);
        REQUIRE(canonicalize(e.aif, induced_action(e.sig, P)) == e.aif);
        REQUIRE(all_forest(e.aif, P));
    }
}

TEST_CASE("duplicate inserts are dropped") {
    Catalog c = seed_catalog();
    size_t before = c.entries.size();
    CatalogEntry again = group_graph(cyclic_group(2));
    again.label = "Z2 again";
    REQUIRE_FALSE(c.add(again));
    REQUIRE(c.entries.size() == before);
    REQUIRE(c.add(group_graph(cyclic_group(4))));
    REQUIRE(c.entries.size() == before + 1);
}

TEST_CASE("group patterns are 1-regular in every component graph") {
    for (int k = 2; k <= 5; ++k)
        for (const GroupTable& g : groups_of_order(k)) {
            CatalogEntry e = group_graph(g);
            REQUIRE(e.dim == k);
            auto G = build_graphs(e.tensor);
            for (int t = 0; t <= e.tensor.n; ++t) {
                REQUIRE((int)G.gamma[t].edges.size() == k);
                std::vector<int> wdeg(k, 0), bdeg(k, 0);
                for (auto [i, j] : G.gamma[t].edges) {
                    ++wdeg[i];
                    ++bdeg[j];
                }
                for (int v = 0; v < k; ++v) {
                    REQUIRE(wdeg[v] == 1);
                    REQUIRE(bdeg[v] == 1);
                }
            }
        }
}

TEST_CASE("group_graph validates the multiplication table") {
    GroupTable bad_id = cyclic_group(3);
    bad_id.mul[0][1] = 2;
    REQUIRE_THROWS_AS(group_graph(bad_id), std::invalid_argument);

    GroupTable no_inv = cyclic_group(3);
    no_inv.mul[1][1] = 1; // row 1 never reaches the identity
    no_inv.mul[1][2] = 1;
    REQUIRE_THROWS_AS(group_graph(no_inv), std::invalid_argument);

    GroupTable non_assoc = cyclic_group(4);
    std::swap(non_assoc.mul[1][1], non_assoc.mul[1][2]);
    REQUIRE_THROWS_AS(group_graph(non_assoc), std::invalid_argument);
}

TEST_CASE("Z4 and the Klein group have distinct patterns") {
    CatalogEntry z4 = group_graph(cyclic_group(4));
    CatalogEntry v4 = group_graph(klein_group());
    REQUIRE(z4.sig.m == 1); // one dual pair (1, 3)
    REQUIRE(v4.sig.m == 0); // every element self-inverse
    REQUIRE(z4.sig.bar != v4.sig.bar);
}

TEST_CASE("kronecker of Z2 with Z2 is the Klein pattern") {
    CatalogEntry z2 = group_graph(cyclic_group(2));
    auto [T, bar] = kronecker(z2.tensor, z2.sig.bar, z2.tensor, z2.sig.bar);
    CatalogEntry prod = make_entry(T, bar, "Z2xZ2");
    CatalogEntry v4 = group_graph(klein_group());
    REQUIRE(prod.sig.bar == v4.sig.bar);
    REQUIRE(prod.aif == v4.aif);
}

TEST_CASE("free products over the seed catalog") {
    Catalog c = seed_catalog();
    for (const auto& a : c.entries)
        for (const auto& b : c.entries) {
            if (a.dim + b.dim - 1 > 6) continue;
            CatalogEntry p = free_product(a, b);
            REQUIRE(p.dim == a.dim + b.dim - 1);
            ClassPartition P = build_partition(p.sig, p.commutative);
            REQUIRE(all_forest(p.aif, P));
            REQUIRE(p.label == a.label + "*" + b.label);
        }
}

TEST_CASE("persist/load round-trip") {
    Catalog c = seed_catalog();
    c.add(group_graph(cyclic_group(4)));
    TempFile f{"catalog_roundtrip.json"};
    persist(c, f.path);
    Catalog r = load(f.path);
    REQUIRE(r.entries.size() == c.entries.size());
    for (size_t i = 0; i < c.entries.size(); ++i) {
        const CatalogEntry &a = c.entries[i], &b = r.entries[i];
        REQUIRE(a.dim == b.dim);
        REQUIRE(a.sig.bar == b.sig.bar);
        REQUIRE(a.aif == b.aif);
        REQUIRE(a.label == b.label);
        REQUIRE(a.solution.has_value() == b.solution.has_value());
        if (a.solution) {
            REQUIRE(a.solution->d == b.solution->d);
            REQUIRE(a.solution->delta == b.solution->delta);
        }
        REQUIRE(a.tensor.v == b.tensor.v);
    }
}

TEST_CASE("load rejects malformed stores") {
    TempFile f{"catalog_malformed.json"};
    auto write = [&](const std::string& text) {
        std::ofstream out(f.path);
        out << text;
    };
    write(R"({"version": 2, "entries": []})");
    REQUIRE_THROWS_AS(load(f.path), std::runtime_error);
    write(R"({"version": 1, "entries": [{"dim": 3, "involution": [0, 1],
              "aif_bits": "0110", "label": "x", "solution": null}]})");
    REQUIRE_THROWS_AS(load(f.path), std::runtime_error);
    write(R"({"version": 1, "entries": [{"dim": 3, "involution": [0, 2, 1],
              "aif_bits": "0110", "label": "x", "solution": null}]})");
    REQUIRE_THROWS_AS(load(f.path), std::runtime_error); // aif length mismatch
    REQUIRE_THROWS_AS(load("no_such_catalog.json"), std::runtime_error);
}
