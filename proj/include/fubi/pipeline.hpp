#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "equations.hpp"
#include "sieve.hpp"

namespace fubi {

struct StageCounts {
    std::uint64_t total = 0, ff = 0, rg = 0, apc = 0, ftpc = 0;
};

struct SurvivorOutcome {
    AIF aif;
    std::optional<SolveReport> solve;
};

struct CaseReport {
    int pairs = 0;
    bool commutative = true;
    StageCounts stages;
    std::map<std::string, double> elapsed_ms;
    std::vector<SurvivorOutcome> survivors; // post-FTPC remainder
    std::vector<AIF> free_products;
    std::vector<AIF> tensor_products;
};

struct SievingReport {
    int dim = 0;
    std::vector<CaseReport> cases;
};

enum class CommMode { Auto, On, Off };

struct ClassifyOptions {
    std::optional<int> pairs;        // restrict to one signature case
    CommMode commutative = CommMode::Auto;
    int threads = 1;
    bool solve = false;
    std::uint64_t seed = 1234;
    const Catalog* catalog = nullptr; // seed catalog when absent
    int starts = 32;
    double tol = 1e-9;
    int max_class_bits = 24;          // refusal threshold for the enumeration
};

namespace detail {

// Enumeration core: the forest test for Gamma_k depends only on the class
// bits that put edges into Gamma_k, so results are memoized per k on
// mask & relk[k].
struct CaseEnumerator {
    const DualSignature& sig;
    const ClassPartition& P;
    int C;
    std::vector<std::vector<std::array<int, 3>>> kedges; // per k: (rank, i, j)
    std::vector<std::uint32_t> relk;
    std::vector<int> wt;
    int base, bound;

    CaseEnumerator(const DualSignature& s, const ClassPartition& p) : sig(s), P(p), C(p.count()) {
        int n = sig.n;
        kedges.assign(n + 1, {});
        relk.assign(n + 1, 0);
        for (int r = 0; r < C; ++r)
            for (const auto& t : P.classes[r]) {
                kedges[t.k].push_back({r, t.i, t.j});
                relk[t.k] |= 1u << (C - 1 - r);
            }
        wt.resize(C);
        for (int r = 0; r < C; ++r) wt[r] = static_cast<int>(P.classes[r].size());
        base = (n + 1) + 2 * n;
        bound = (n + 1) * (n + 1);
    }

    bool forest_k(int k, std::uint32_t mask,
                  std::unordered_map<std::uint32_t, bool>& memo) const {
        std::uint32_t key = mask & relk[k];
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        int V = sig.n + 1;
        UnionFind uf(2 * V);
        uf.unite(k, V + 0);
        uf.unite(0, V + sig.bar[k]);
        bool ok = true;
        for (const auto& e : kedges[k])
            if ((mask >> (C - 1 - e[0])) & 1u)
                if (!uf.unite(e[1], V + e[2])) {
                    ok = false;
                    break;
                }
        memo.emplace(key, ok);
        return ok;
    }

    bool passes_ff(std::uint32_t mask,
                   std::vector<std::unordered_map<std::uint32_t, bool>>& memo) const {
        int total = base;
        for (int r = 0; r < C; ++r)
            if ((mask >> (C - 1 - r)) & 1u) total += wt[r];
        if (total < bound) return false;
        for (int k = 1; k <= sig.n; ++k)
            if (!forest_k(k, mask, memo[k])) return false;
        return true;
    }
};

inline double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

} // namespace detail

inline CaseReport classify_case(const DualSignature& sig, bool commutative,
                                const Catalog& catalog, const ClassifyOptions& opt) {
    CaseReport rep;
    rep.pairs = sig.m;
    rep.commutative = commutative;
    ClassPartition P = build_partition(sig, commutative);
    int C = P.count();
    if (C > opt.max_class_bits)
        throw std::invalid_argument("classify: " + std::to_string(C) +
                                    " indicator classes exceed the enumeration threshold of " +
                                    std::to_string(opt.max_class_bits) + " bits");
    detail::CaseEnumerator en(sig, P);
    rep.stages.total = std::uint64_t(1) << C;

    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::uint32_t> ff;
    int workers = std::max(1, opt.threads);
    if (workers == 1) {
        std::vector<std::unordered_map<std::uint32_t, bool>> memo(sig.n + 1);
        for (std::uint64_t mask = 0; mask < rep.stages.total; ++mask)
            if (en.passes_ff(static_cast<std::uint32_t>(mask), memo))
                ff.push_back(static_cast<std::uint32_t>(mask));
    } else {
        std::vector<std::vector<std::uint32_t>> parts(workers);
        std::vector<std::thread> pool;
        std::uint64_t chunk = (rep.stages.total + workers - 1) / workers;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                std::vector<std::unordered_map<std::uint32_t, bool>> memo(sig.n + 1);
                std::uint64_t lo = w * chunk, hi = std::min(rep.stages.total, lo + chunk);
                for (std::uint64_t mask = lo; mask < hi; ++mask)
                    if (en.passes_ff(static_cast<std::uint32_t>(mask), memo))
                        parts[w].push_back(static_cast<std::uint32_t>(mask));
            });
        for (auto& t : pool) t.join();
        for (auto& p : parts) ff.insert(ff.end(), p.begin(), p.end());
    }
    rep.stages.ff = ff.size();
    rep.elapsed_ms["ff"] = detail::ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    InducedAction action = induced_action(sig, P);
    std::vector<AIF> reps;
    for (std::uint32_t mask : ff) {
        AIF a{mask, C};
        if (canonicalize(a, action) == a) reps.push_back(a);
    }
    rep.stages.rg = reps.size();
    rep.elapsed_ms["rg"] = detail::ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    std::vector<AIF> apc_ok;
    for (const AIF& a : reps)
        if (!apc_violation(expand(a, P))) apc_ok.push_back(a);
    rep.stages.apc = apc_ok.size();
    rep.elapsed_ms["apc"] = detail::ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    for (const AIF& a : apc_ok) {
        IndicatorTensor T = expand(a, P);
        if (is_free_product(T)) {
            rep.free_products.push_back(a);
        } else if (is_tensor_product(T, sig, catalog)) {
            rep.tensor_products.push_back(a);
        } else {
            rep.survivors.push_back({a, std::nullopt});
        }
    }
    rep.stages.ftpc = rep.survivors.size();
    rep.elapsed_ms["ftpc"] = detail::ms_since(t0);

    if (opt.solve) {
        t0 = std::chrono::steady_clock::now();
        for (auto& s : rep.survivors) {
            StructureSystem sys = build_system(s.aif, P);
            SolveOptions so;
            so.tol = opt.tol;
            so.starts = opt.starts;
            so.seed = opt.seed ^ (std::uint64_t(s.aif.bits) << 8) ^ std::uint64_t(s.aif.count);
            s.solve = solve(sys, so);
        }
        rep.elapsed_ms["solve"] = detail::ms_since(t0);
    }
    return rep;
}

inline SievingReport classify(int dim, const ClassifyOptions& opt = {}) {
    if (dim < 2) throw std::invalid_argument("classify: dimension must be at least 2");
    if (dim > 6)
        throw std::invalid_argument(
            "classify: dimensions above 6 are not supported (enumeration is unbounded there)");
    Catalog seeded;
    const Catalog* cat = opt.catalog;
    if (!cat) {
        seeded = seed_catalog();
        cat = &seeded;
    }
    SievingReport rep;
    rep.dim = dim;
    for (const DualSignature& sig : enumerate_signatures(dim - 1)) {
        if (opt.pairs && sig.m != *opt.pairs) continue;
        bool comm = opt.commutative == CommMode::Auto
                        ? default_commutative(sig.n, sig.m)
                        : opt.commutative == CommMode::On;
        rep.cases.push_back(classify_case(sig, comm, *cat, opt));
    }
    if (opt.pairs && rep.cases.empty())
        throw std::invalid_argument("classify: no signature case with " +
                                    std::to_string(*opt.pairs) + " dual pairs at this dimension");
    return rep;
}

// --- report emission ----------------------------------------------------------

inline nlohmann::json solve_to_json(const SolveReport& r) {
    nlohmann::json j;
    j["infeasible"] = r.infeasible;
    if (r.infeasible) j["reason"] = r.reason;
    j["free_parameter_count"] = r.free_parameter_count;
    j["solutions"] = nlohmann::json::array();
    for (const auto& s : r.solutions)
        j["solutions"].push_back({{"d", s.d},
                                  {"delta", s.delta},
                                  {"residual", s.residual},
                                  {"free_parameter_count", s.free_parameter_count}});
    return j;
}

inline nlohmann::json report_to_json(const SievingReport& rep, bool with_elapsed = true) {
    nlohmann::json j;
    j["dim"] = rep.dim;
    j["cases"] = nlohmann::json::array();
    for (const auto& c : rep.cases) {
        nlohmann::json jc;
        jc["pairs"] = c.pairs;
        jc["commutative"] = c.commutative;
        jc["stages"] = {{"total", c.stages.total},
                        {"ff", c.stages.ff},
                        {"rg", c.stages.rg},
                        {"apc", c.stages.apc},
                        {"ftpc", c.stages.ftpc}};
        if (with_elapsed) jc["elapsed_ms"] = c.elapsed_ms;
        jc["survivors"] = nlohmann::json::array();
        for (const auto& s : c.survivors) {
            nlohmann::json js;
            js["aif_bits"] = s.aif.to_string();
            js["solve"] = s.solve ? solve_to_json(*s.solve) : nlohmann::json(nullptr);
            jc["survivors"].push_back(std::move(js));
        }
        jc["free_products"] = nlohmann::json::array();
        for (const auto& a : c.free_products) jc["free_products"].push_back(a.to_string());
        jc["tensor_products"] = nlohmann::json::array();
        for (const auto& a : c.tensor_products) jc["tensor_products"].push_back(a.to_string());
        j["cases"].push_back(std::move(jc));
    }
    return j;
}

inline std::string emit(const SievingReport& rep, const std::string& format) {
    std::ostringstream out;
    if (format == "json") {
        out << report_to_json(rep).dump(2) << "\n";
    } else if (format == "csv") {
        out << "dim,pairs,commutative,stage,count\n";
        for (const auto& c : rep.cases) {
            const char* comm = c.commutative ? "true" : "false";
            out << rep.dim << ',' << c.pairs << ',' << comm << ",total," << c.stages.total << "\n"
                << rep.dim << ',' << c.pairs << ',' << comm << ",ff," << c.stages.ff << "\n"
                << rep.dim << ',' << c.pairs << ',' << comm << ",rg," << c.stages.rg << "\n"
                << rep.dim << ',' << c.pairs << ',' << comm << ",apc," << c.stages.apc << "\n"
                << rep.dim << ',' << c.pairs << ',' << comm << ",ftpc," << c.stages.ftpc << "\n";
        }
    } else if (format == "table") {
        out << "dim " << rep.dim << "\n";
        auto row = [&](const std::string& label, auto get) {
            out << label;
            for (size_t i = label.size(); i < 8; ++i) out << ' ';
            for (const auto& c : rep.cases) {
                std::string v = std::to_string(get(c));
                for (size_t i = v.size(); i < 12; ++i) out << ' ';
                out << v;
            }
            out << "\n";
        };
        out << "        ";
        for (const auto& c : rep.cases) {
            std::string h = "m=" + std::to_string(c.pairs);
            for (size_t i = h.size(); i < 12; ++i) out << ' ';
            out << h;
        }
        out << "\n";
        row("total", [](const CaseReport& c) { return c.stages.total; });
        row("FF", [](const CaseReport& c) { return c.stages.ff; });
        row("RG", [](const CaseReport& c) { return c.stages.rg; });
        row("APC", [](const CaseReport& c) { return c.stages.apc; });
        row("FTPC", [](const CaseReport& c) { return c.stages.ftpc; });
        for (const auto& c : rep.cases)
            for (const auto& s : c.survivors)
                out << "survivor m=" << c.pairs << ": " << s.aif.to_string() << "\n";
    } else {
        throw std::invalid_argument("emit: unknown format '" + format + "'");
    }
    return out.str();
}

} // namespace fubi
