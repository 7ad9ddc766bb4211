// Acceptance checks: one pass/fail line per criterion, nonzero exit on any
// failure. Runs the full pipeline at desk scale and cross-checks the
// published counts, fixtures, survivor identifications, solver output, and
// the structural properties of the building blocks.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fubi/fubi.hpp>

#include "published_fixtures.hpp"

using namespace fubi;

namespace {

int failures = 0;
std::vector<std::string> notes;

void note(const std::string& s) { notes.push_back(s); }

void report(int criterion, bool ok, const std::string& what) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, what.c_str());
    for (const auto& s : notes) std::printf("       %s\n", s.c_str());
    notes.clear();
    if (!ok) ++failures;
}

bool expect(bool cond, const std::string& what) {
    if (!cond) note("failed: " + what);
    return cond;
}

double run_ms(const std::function<void()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

struct Row {
    std::uint64_t total, ff, rg, apc, ftpc;
    size_t free_products, tensor_products;
};

bool check_rows(const SievingReport& rep, const std::vector<Row>& want) {
    bool ok = expect(rep.cases.size() == want.size(), "signature case count");
    for (size_t i = 0; ok && i < want.size(); ++i) {
        const CaseReport& c = rep.cases[i];
        const Row& w = want[i];
        ok &= expect(c.stages.total == w.total && c.stages.ff == w.ff && c.stages.rg == w.rg &&
                         c.stages.apc == w.apc && c.stages.ftpc == w.ftpc,
                     "stage counts for m=" + std::to_string(c.pairs));
        ok &= expect(c.free_products.size() == w.free_products,
                     "free-product count for m=" + std::to_string(c.pairs));
        ok &= expect(c.tensor_products.size() == w.tensor_products,
                     "tensor-product count for m=" + std::to_string(c.pairs));
    }
    return ok;
}

// --- fixture translation (labels matched by class content) -------------------

std::vector<int> label_map(const fixtures::ClassList& list, const ClassPartition& P) {
    std::vector<int> map(list.size(), -1);
    for (size_t p = 0; p < list.size(); ++p) {
        std::set<Triple> want;
        for (const auto& t : list[p]) want.insert({t.k, t.j, t.i});
        for (int r = 0; r < P.count(); ++r) {
            std::set<Triple> have(P.classes[r].begin(), P.classes[r].end());
            if (have == want) map[p] = r;
        }
        if (map[p] < 0) return {};
    }
    return map;
}

std::set<std::vector<int>> translated_perms(const fixtures::ClassList& classes,
                                            const fixtures::CycleList& cycles,
                                            const ClassPartition& P) {
    auto map = label_map(classes, P);
    std::set<std::vector<int>> out;
    if (map.empty()) return out;
    for (const auto& perm : cycles) {
        std::vector<int> sigma(P.count());
        for (int c = 0; c < P.count(); ++c) sigma[c] = c;
        for (const auto& cyc : perm)
            for (size_t x = 0; x < cyc.size(); ++x)
                sigma[map[cyc[x] - 1]] = map[cyc[(x + 1) % cyc.size()] - 1];
        out.insert(std::move(sigma));
    }
    return out;
}

// --- independent forest oracle ------------------------------------------------

bool dfs_is_forest(const FusionGraph& g) {
    int V = 2 * (g.n + 1);
    std::vector<std::vector<int>> adj(V);
    for (size_t e = 0; e < g.edges.size(); ++e) {
        auto [i, j] = g.edges[e];
        adj[i].push_back(static_cast<int>(e));
        adj[g.n + 1 + j].push_back(static_cast<int>(e));
    }
    std::vector<char> seen(V, 0);
    for (int s = 0; s < V; ++s) {
        if (seen[s]) continue;
        std::vector<std::pair<int, int>> stack{{s, -1}};
        while (!stack.empty()) {
            auto [v, in_edge] = stack.back();
            stack.pop_back();
            if (seen[v]) return false;
            seen[v] = 1;
            for (int e : adj[v]) {
                if (e == in_edge) continue;
                auto [i, j] = g.edges[e];
                int u = (v == i) ? g.n + 1 + j : i;
                stack.push_back({u, e});
            }
        }
    }
    return true;
}

FusionGraph graph_from_mask(int n, std::uint64_t mask) {
    FusionGraph g;
    g.n = n;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            if ((mask >> (i * (n + 1) + j)) & 1) g.edges.emplace_back(i, j);
    return g;
}

bool one_regular(const IndicatorTensor& T) {
    auto G = build_graphs(T);
    for (int k = 0; k <= T.n; ++k) {
        std::vector<int> wdeg(T.n + 1, 0), bdeg(T.n + 1, 0);
        for (auto [i, j] : G.gamma[k].edges) {
            ++wdeg[i];
            ++bdeg[j];
        }
        for (int v = 0; v <= T.n; ++v)
            if (wdeg[v] != 1 || bdeg[v] != 1) return false;
    }
    return true;
}

bool same_pattern(const CatalogEntry& a, const CatalogEntry& b) {
    return a.dim == b.dim && a.sig.bar == b.sig.bar && a.aif == b.aif;
}

} // namespace

int main() {
    int threads = std::max(1u, std::thread::hardware_concurrency());

    // 1. dimension-5 table rows within the three-minute budget
    {
        SievingReport rep;
        ClassifyOptions opt;
        opt.threads = threads;
        double ms = run_ms([&] { rep = classify(5, opt); });
        bool ok = check_rows(rep, {{1048576, 47381, 2137, 41, 0, 41, 0},
                                   {65536, 4435, 1292, 18, 0, 18, 0},
                                   {1024, 137, 46, 2, 1, 1, 0}});
        ok &= expect(ms < 180000.0, "time budget");
        note("elapsed " + std::to_string(ms) + " ms");
        report(1, ok, "dimension-5 stage counts within 3 minutes");
    }

    // 2. dimension-4 table rows within ten seconds
    {
        SievingReport rep;
        double ms = run_ms([&] { rep = classify(4); });
        bool ok = check_rows(rep, {{1024, 308, 64, 15, 1, 12, 2}, {64, 20, 20, 5, 1, 4, 0}});
        ok &= expect(ms < 10000.0, "time budget");
        note("elapsed " + std::to_string(ms) + " ms");
        report(2, ok, "dimension-4 stage counts within 10 seconds");
    }

    // 3. dimension-3 table rows within two seconds
    {
        SievingReport rep;
        double ms = run_ms([&] { rep = classify(3); });
        bool ok = check_rows(rep, {{16, 10, 6, 5, 1, 4, 0}, {4, 2, 2, 1, 1, 0, 0}});
        ok &= expect(ms < 2000.0, "time budget");
        note("elapsed " + std::to_string(ms) + " ms");
        report(3, ok, "dimension-3 stage counts within 2 seconds");
    }

    // 4. published n = 4 class partitions, element for element
    {
        bool ok = true;
        struct Case {
            int m;
            bool comm;
            const fixtures::ClassList* classes;
        } cases[] = {{0, true, &fixtures::classes_case1},
                     {1, false, &fixtures::classes_case2},
                     {2, true, &fixtures::classes_case3}};
        for (const auto& c : cases) {
            ClassPartition P = build_partition(make_signature(4, c.m), c.comm);
            ok &= expect(P.count() == (int)c.classes->size(),
                         "class count for m=" + std::to_string(c.m));
            std::set<std::set<Triple>> ours, want;
            for (const auto& cls : P.classes) ours.insert({cls.begin(), cls.end()});
            for (const auto& cls : *c.classes) {
                std::set<Triple> s;
                for (const auto& t : cls) s.insert({t.k, t.j, t.i});
                want.insert(std::move(s));
            }
            ok &= expect(ours == want, "class contents for m=" + std::to_string(c.m));
        }
        report(4, ok, "n = 4 indicator classes match the published lists");
    }

    // 5. published induced-action permutation lists after label translation
    {
        bool ok = true;
        struct Case {
            int m;
            bool comm;
            const fixtures::ClassList* classes;
            const fixtures::CycleList* cycles;
            size_t count;
        } cases[] = {{0, true, &fixtures::classes_case1, &fixtures::perms_case1, 23},
                     {1, false, &fixtures::classes_case2, &fixtures::perms_case2, 3},
                     {2, true, &fixtures::classes_case3, &fixtures::perms_case3, 3}};
        for (const auto& c : cases) {
            DualSignature sig = make_signature(4, c.m);
            ClassPartition P = build_partition(sig, c.comm);
            InducedAction A = induced_action(sig, P);
            ok &= expect(A.perms.size() == c.count, "perm count for m=" + std::to_string(c.m));
            std::set<std::vector<int>> ours(A.perms.begin(), A.perms.end());
            ok &= expect(ours == translated_perms(*c.classes, *c.cycles, P),
                         "perm contents for m=" + std::to_string(c.m));
        }
        report(5, ok, "induced actions match the published permutation lists");
    }

    // 6. survivor identification: dim-5 survivor is the Z5 pattern, the
    //    noncommutative dim-4 survivor is the Z4 pattern, both 1-regular
    {
        bool ok = true;
        {
            ClassifyOptions opt;
            opt.pairs = 2;
            SievingReport rep = classify(5, opt);
            ok &= expect(rep.cases.size() == 1 && rep.cases[0].survivors.size() == 1,
                         "unique dim-5 survivor");
            if (ok) {
                const AIF& a = rep.cases[0].survivors[0].aif;
                ClassPartition P = build_partition(make_signature(4, 2), true);
                IndicatorTensor T = expand(a, P);
                ok &= expect(one_regular(T), "dim-5 survivor 1-regular");
                CatalogEntry mine = make_entry(T, make_signature(4, 2).bar, "survivor");
                ok &= expect(same_pattern(mine, group_graph(cyclic_group(5))),
                             "dim-5 survivor is Z5");
            }
        }
        {
            ClassifyOptions opt;
            opt.pairs = 1;
            SievingReport rep = classify(4, opt);
            ok &= expect(rep.cases.size() == 1 && rep.cases[0].survivors.size() == 1,
                         "unique noncommutative dim-4 survivor");
            if (ok) {
                const AIF& a = rep.cases[0].survivors[0].aif;
                ClassPartition P = build_partition(make_signature(3, 1), true);
                IndicatorTensor T = expand(a, P);
                ok &= expect(one_regular(T), "dim-4 case-2 survivor 1-regular");
                CatalogEntry mine = make_entry(T, make_signature(3, 1).bar, "survivor");
                ok &= expect(same_pattern(mine, group_graph(cyclic_group(4))),
                             "dim-4 case-2 survivor is Z4");
            }
        }
        report(6, ok, "group-pattern survivors identified");
    }

    // 7. solver results: exact indices, residuals, positivity margins
    {
        bool ok = true;
        auto solve_bits = [&](int n, int m, const std::string& bits) {
            DualSignature sig = make_signature(n, m);
            ClassPartition P = build_partition(sig, default_commutative(n, m));
            return solve(build_system(AIF::from_string(bits), P));
        };
        {
            SolveReport r = solve_bits(2, 0, "0110");
            double r5 = std::sqrt(5.0);
            ok &= expect(r.solutions.size() == 1, "dim-3 survivor solution count");
            if (!r.solutions.empty()) {
                const Solution& s = r.solutions[0];
                ok &= expect(std::abs(s.delta * s.delta - 5.0) < 1e-8, "delta^2 = 5");
                ok &= expect(std::abs(s.d[0] - 1 / r5) < 1e-8 && std::abs(s.d[1] - 2 / r5) < 1e-8 &&
                                 std::abs(s.d[2] - 2 / r5) < 1e-8,
                             "d = (1, 2, 2)/sqrt(5)");
            }
        }
        {
            SolveReport r = solve_bits(3, 0, "0011100010");
            ok &= expect(r.solutions.size() == 1 &&
                             std::abs(r.solutions[0].delta * r.solutions[0].delta - 7.0) < 1e-8,
                         "dim-4 survivor delta^2 = 7");
        }
        for (int k = 2; k <= 5; ++k) {
            CatalogEntry e = group_graph(cyclic_group(k));
            ClassPartition P = build_partition(e.sig, e.commutative);
            SolveReport r = solve(build_system(e.aif, P));
            bool good = r.solutions.size() == 1;
            if (good)
                for (double d : r.solutions[0].d) good &= std::abs(d - 1 / std::sqrt(k)) < 1e-8;
            ok &= expect(good, "Z" + std::to_string(k) + " dimensions n^{-1/2}");
            if (!r.solutions.empty()) {
                ok &= expect(r.solutions[0].residual < 1e-9, "residual tolerance");
                ok &= expect(r.solutions[0].positivity_margin > 1e-8, "positivity margin");
            }
        }
        report(7, ok, "solver reproduces the known indices");
    }

    // 8. structural property suites
    {
        bool ok = true;
        { // (a) canonical form is orbit-invariant
            DualSignature sig = make_signature(4, 0);
            ClassPartition P = build_partition(sig, true);
            InducedAction A = induced_action(sig, P);
            std::mt19937 rng(2024);
            std::uniform_int_distribution<std::uint32_t> bits(0, (1u << P.count()) - 1);
            std::uniform_int_distribution<size_t> pick(0, A.perms.size() - 1);
            bool inv = true;
            for (int t = 0; t < 10000; ++t) {
                AIF a{bits(rng), P.count()};
                AIF b{apply_class_perm(a.bits, A.perms[pick(rng)], a.count), a.count};
                inv &= canonicalize(a, A) == canonicalize(b, A);
            }
            ok &= expect(inv, "(a) canonical form orbit-invariant");
        }
        { // (b) forest test against an independent DFS oracle
            bool agree = true;
            for (int n = 0; n <= 3; ++n) {
                int cells = (n + 1) * (n + 1);
                for (std::uint64_t mask = 0; mask < (1ull << cells); ++mask) {
                    FusionGraph g = graph_from_mask(n, mask);
                    agree &= is_forest(g) == dfs_is_forest(g);
                }
            }
            std::mt19937_64 rng(2025);
            for (int n = 4; n <= 5; ++n) {
                int cells = (n + 1) * (n + 1);
                for (int t = 0; t < 10000; ++t) {
                    std::uint64_t mask = rng() & ((1ull << cells) - 1);
                    mask &= rng() | rng(); // bias toward sparser graphs
                    FusionGraph g = graph_from_mask(n, mask);
                    agree &= is_forest(g) == dfs_is_forest(g);
                }
            }
            ok &= expect(agree, "(b) is_forest matches the DFS oracle");
        }
        { // (c) 3-face identity on every forest aif with n <= 3
            bool hold = true;
            for (int n = 1; n <= 3; ++n)
                for (const DualSignature& sig : enumerate_signatures(n)) {
                    ClassPartition P = build_partition(sig, default_commutative(n, sig.m));
                    for (std::uint32_t b = 0; b < (1u << P.count()); ++b) {
                        AIF a{b, P.count()};
                        if (!all_forest(a, P)) continue;
                        IndicatorTensor T = expand(a, P);
                        hold &= check_3face1(derive_params(T, sig), T);
                    }
                }
            ok &= expect(hold, "(c) 3-face identity on forests");
        }
        { // (d) no catalog entry is rejected by the positivity sieve
            bool clean = true;
            Catalog c = seed_catalog();
            c.add(group_graph(cyclic_group(4)));
            c.add(group_graph(klein_group()));
            c.add(group_graph(cyclic_group(5)));
            for (const auto& e : c.entries) clean &= !apc_violation(e.tensor);
            ok &= expect(clean, "(d) catalog entries pass the positivity sieve");
        }
        { // (e) every dim-3/4 survivor admits a solution
            ClassifyOptions opt;
            opt.solve = true;
            bool solved = true;
            for (int dim : {3, 4})
                for (const auto& c : classify(dim, opt).cases)
                    for (const auto& s : c.survivors)
                        solved &= s.solve && !s.solve->infeasible && !s.solve->solutions.empty();
            ok &= expect(solved, "(e) dim-3/4 survivors admit solutions");
        }
        { // (f) free-product constructions are flagged by the free-product test
            Catalog c = seed_catalog();
            bool flagged = true;
            for (const auto& a : c.entries)
                for (const auto& b : c.entries) {
                    if (a.dim + b.dim - 1 > 6) continue;
                    flagged &= is_free_product(free_product(a, b).tensor);
                }
            ok &= expect(flagged, "(f) free products flagged");
        }
        report(8, ok, "property suites");
    }

    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures ? 1 : 0;
}
