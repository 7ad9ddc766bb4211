#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <fubi/fubi.hpp>

namespace {

fubi::CommMode parse_comm(const std::string& s) {
    if (s == "auto") return fubi::CommMode::Auto;
    if (s == "on") return fubi::CommMode::On;
    if (s == "off") return fubi::CommMode::Off;
    throw CLI::ValidationError("--commutative must be auto|on|off");
}

struct GraphFile {
    fubi::DualSignature sig;
    bool commutative = true;
    fubi::ClassPartition partition;
    fubi::AIF aif;
};

// Interchange format: {"dim", "n", "involution", "commutative", "aif_bits"}
// with an optional expanded "indicator" tensor, which must agree.
GraphFile read_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    nlohmann::json j;
    in >> j;
    GraphFile g;
    int dim = j.at("dim").get<int>();
    std::vector<int> bar = j.at("involution").get<std::vector<int>>();
    if (static_cast<int>(bar.size()) != dim) throw std::invalid_argument("involution size != dim");
    int m = 0;
    for (int i = 1; i < dim; ++i)
        if (bar[i] > i) ++m;
    g.sig = fubi::make_signature(dim - 1, m);
    if (g.sig.bar != bar)
        throw std::invalid_argument("involution is not in canonical layout (pairs first)");
    if (j.contains("n") && j["n"].get<int>() != dim - 1)
        throw std::invalid_argument("n must equal dim - 1");
    g.commutative = j.at("commutative").get<bool>();
    g.partition = fubi::build_partition(g.sig, g.commutative);
    g.aif = fubi::AIF::from_string(j.at("aif_bits").get<std::string>());
    if (g.aif.count != g.partition.count())
        throw std::invalid_argument("aif_bits length != class count");
    if (j.contains("indicator")) {
        auto raw = j["indicator"].get<std::vector<std::vector<std::vector<int>>>>();
        fubi::IndicatorTensor T = fubi::expand(g.aif, g.partition);
        for (int k = 0; k < dim; ++k)
            for (int jj = 0; jj < dim; ++jj)
                for (int i = 0; i < dim; ++i)
                    if ((raw.at(k).at(jj).at(i) != 0) != (T.at(k, jj, i) != 0))
                        throw std::invalid_argument("indicator tensor disagrees with aif_bits");
    }
    return g;
}

std::string cycle_notation(const std::vector<int>& pi) {
    std::string out;
    std::vector<char> seen(pi.size(), 0);
    for (size_t s = 0; s < pi.size(); ++s) {
        if (seen[s] || pi[s] == static_cast<int>(s)) continue;
        out += "(";
        size_t x = s;
        bool first = true;
        while (!seen[x]) {
            seen[x] = 1;
            if (!first) out += ",";
            out += std::to_string(x + 1); // 1-based class labels
            first = false;
            x = pi[x];
        }
        out += ")";
    }
    return out.empty() ? "()" : out;
}

int run(int argc, char** argv) {
    CLI::App app{"classification engine for exchange-relation fusion bialgebras"};
    app.require_subcommand(1);

    int dim = 0, pairs = -1, threads = 1, starts = 32;
    std::string comm = "auto", db, format = "table", graph_path, label, out_path;
    bool do_solve = false;
    std::uint64_t seed = 1234;
    double tol = 1e-9;

    auto* classes = app.add_subcommand("classes", "print the coefficient-triple classes");
    classes->add_option("--dim", dim, "2-box dimension")->required();
    classes->add_option("--pairs", pairs, "number of dual pairs")->required();
    classes->add_option("--commutative", comm, "auto|on|off");

    auto* actions = app.add_subcommand("actions", "print the induced class permutations");
    actions->add_option("--dim", dim)->required();
    actions->add_option("--pairs", pairs)->required();
    actions->add_option("--commutative", comm, "auto|on|off");

    auto* classify = app.add_subcommand("classify", "run the sieving pipeline");
    classify->add_option("--dim", dim)->required();
    classify->add_option("--pairs", pairs, "restrict to one signature case");
    classify->add_option("--commutative", comm, "auto|on|off");
    classify->add_option("--db", db, "catalog file (defaults to built-in seeds)");
    classify->add_option("--emit", format, "table|json|csv");
    classify->add_option("--threads", threads);
    classify->add_flag("--solve", do_solve, "solve structure equations for survivors");
    classify->add_option("--seed", seed);

    auto* solvecmd = app.add_subcommand("solve", "solve the structure equations of one graph");
    solvecmd->add_option("--graph", graph_path, "interchange JSON file")->required();
    solvecmd->add_option("--tol", tol);
    solvecmd->add_option("--starts", starts);
    solvecmd->add_option("--seed", seed);

    auto* catcmd = app.add_subcommand("catalog", "inspect or extend the catalog");
    catcmd->require_subcommand(1);
    auto* cat_list = catcmd->add_subcommand("list", "list entries");
    cat_list->add_option("--db", db, "catalog file (defaults to built-in seeds)");
    auto* cat_add = catcmd->add_subcommand("add", "add an entry from an interchange file");
    cat_add->add_option("--db", db)->required();
    cat_add->add_option("--graph", graph_path)->required();
    cat_add->add_option("--label", label)->required();
    auto* cat_export = catcmd->add_subcommand("export", "write the catalog JSON");
    cat_export->add_option("--db", db, "catalog file (defaults to built-in seeds)");
    cat_export->add_option("--out", out_path, "output path (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    if (*classes || *actions) {
        fubi::DualSignature sig = fubi::make_signature(dim - 1, pairs);
        bool c = parse_comm(comm) == fubi::CommMode::Auto
                     ? fubi::default_commutative(sig.n, sig.m)
                     : parse_comm(comm) == fubi::CommMode::On;
        fubi::ClassPartition P = fubi::build_partition(sig, c);
        if (*classes) {
            for (int r = 0; r < P.count(); ++r) {
                std::cout << "t" << r + 1 << ":";
                for (const auto& t : P.classes[r])
                    std::cout << " N_{" << t.k << "," << t.j << "}^" << t.i;
                std::cout << "\n";
            }
        } else {
            for (const auto& pi : fubi::induced_action(sig, P).perms)
                std::cout << cycle_notation(pi) << "\n";
        }
        return 0;
    }
    if (*classify) {
        fubi::ClassifyOptions opt;
        if (classify->count("--pairs")) opt.pairs = pairs;
        opt.commutative = parse_comm(comm);
        opt.threads = threads;
        opt.solve = do_solve;
        opt.seed = seed;
        fubi::Catalog cat;
        if (!db.empty()) {
            cat = fubi::load(db);
            opt.catalog = &cat;
        }
        std::cout << fubi::emit(fubi::classify(dim, opt), format);
        return 0;
    }
    if (*solvecmd) {
        GraphFile g = read_graph(graph_path);
        fubi::StructureSystem sys = fubi::build_system(g.aif, g.partition);
        fubi::SolveOptions so;
        so.tol = tol;
        so.starts = starts;
        so.seed = seed ^ (std::uint64_t(g.aif.bits) << 8) ^ std::uint64_t(g.aif.count);
        fubi::SolveReport rep = fubi::solve(sys, so);
        nlohmann::json j = fubi::solve_to_json(rep);
        int n = g.sig.n;
        for (auto& js : j["solutions"]) {
            std::vector<double> d = js["d"].get<std::vector<double>>();
            double delta = js["delta"].get<double>();
            auto tn = fubi::normalized_coeffs(sys, d, delta);
            nlohmann::json jn = nlohmann::json::array(), jt = nlohmann::json::array();
            for (int x = 0; x <= n; ++x) {
                nlohmann::json rx = nlohmann::json::array(), tx = nlohmann::json::array();
                for (int y = 0; y <= n; ++y) {
                    nlohmann::json ry = nlohmann::json::array(), ty = nlohmann::json::array();
                    for (int z = 0; z <= n; ++z) {
                        ry.push_back(sys.N(d, x, y, z));
                        ty.push_back(tn[sys.vflat(x, y, z)]);
                    }
                    rx.push_back(std::move(ry));
                    tx.push_back(std::move(ty));
                }
                jn.push_back(std::move(rx));
                jt.push_back(std::move(tx));
            }
            js["N"] = std::move(jn);
            js["tilde_N"] = std::move(jt);
        }
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    // catalog subcommands
    fubi::Catalog cat;
    if (*cat_add) {
        std::ifstream probe(db);
        cat = probe ? fubi::load(db) : fubi::seed_catalog();
        GraphFile g = read_graph(graph_path);
        fubi::IndicatorTensor T = fubi::expand(g.aif, g.partition);
        cat.add(fubi::make_entry(T, g.sig.bar, label));
        fubi::persist(cat, db);
        return 0;
    }
    cat = db.empty() ? fubi::seed_catalog() : fubi::load(db);
    if (*cat_list) {
        for (const auto& e : cat.entries) {
            std::cout << "dim " << e.dim << "  " << e.aif.to_string() << "  " << e.label;
            if (e.solution) std::cout << "  delta=" << e.solution->delta;
            std::cout << "\n";
        }
        return 0;
    }
    // export
    fubi::persist(cat, out_path.empty() ? "/dev/stdout" : out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const fubi::missing_catalog_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
