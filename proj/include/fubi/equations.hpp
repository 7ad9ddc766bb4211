#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "graphs.hpp"

namespace fubi {

// Canonical exchange parameters a_{sk}^{ij}, b_{lk}^{ij} in {-1,0,+1},
// indexed (s, k, i, j): graph Gamma_k, edge (white i, black j).
struct CanonicalParams {
    int n = 0;
    std::vector<std::int8_t> a, b;

    int flat(int s, int k, int i, int j) const {
        int d = n + 1;
        return ((s * d + k) * d + i) * d + j;
    }
    std::int8_t aval(int s, int k, int i, int j) const { return a[flat(s, k, i, j)]; }
    std::int8_t bval(int l, int k, int i, int j) const { return b[flat(l, k, i, j)]; }
};

// Construction cases from the canonical-parameter theorem:
// (1) absent edge -> all zero; (2) k = 0 -> a_{i0}^{ii} = 1;
// (3) forced spurs of Gamma_k -> a_{0k}^{0,bar k} = 1, b_{0k}^{k0} = 1;
// (4) generic edge -> +1 on white C1, -1 on black C1.
inline CanonicalParams derive_params(const IndicatorTensor& T, const DualSignature& sig) {
    auto G = build_graphs(T);
    for (int k = 0; k <= T.n; ++k)
        if (!is_forest(G.gamma[k]))
            throw std::invalid_argument("derive_params: fusion graph is not a forest");
    CanonicalParams P;
    P.n = T.n;
    int sz = (T.n + 1) * (T.n + 1) * (T.n + 1) * (T.n + 1);
    P.a.assign(sz, 0);
    P.b.assign(sz, 0);
    for (int k = 0; k <= T.n; ++k)
        for (auto [i, j] : G.gamma[k].edges) {
            if (k == 0) {
                P.a[P.flat(i, 0, i, i)] = 1;
            } else if ((i == 0 && j == sig.bar[k]) || (i == k && j == 0)) {
                if (i == 0) P.a[P.flat(0, k, 0, j)] = 1;
                else P.b[P.flat(0, k, k, 0)] = 1;
            } else {
                auto comp = split_components(G.gamma[k], i, j);
                for (const auto& v : comp.c1) {
                    if (v.white) P.a[P.flat(v.idx, k, i, j)] = 1;
                    else P.b[P.flat(v.idx, k, i, j)] = -1;
                }
            }
        }
    return P;
}

// Signed index sets for N_{i,bar(j)}^k read from the edge (i,j) of Gamma_k:
// Plus = white side of C1, Minus = black side of C1.
struct Expr {
    std::vector<int> plus, minus;
};

inline Expr coefficient_expression(const IndicatorTensor& T, const DualSignature& sig, int i,
                                   int j, int k) {
    if (!T.at(k, j, i)) return {};
    CanonicalParams P = derive_params(T, sig);
    Expr e;
    for (int s = 0; s <= T.n; ++s) {
        if (P.aval(s, k, i, j) > 0) e.plus.push_back(s);
        if (P.bval(s, k, i, j) != 0) {
            if (P.bval(s, k, i, j) < 0) e.minus.push_back(s);
            else e.plus.push_back(s); // forced-spur case: b = +1
        }
    }
    return e;
}

// 3-face identity: over every Gamma_k with edge (i,j), and every edge (s,l)
// of Gamma_k, a_{sk}^{ij} + b_{lk}^{ij} = [s=i][l=j]. Holds by construction
// on forests; exposed as a checkable property.
inline bool check_3face1(const CanonicalParams& P, const IndicatorTensor& T) {
    auto G = build_graphs(T);
    for (int k = 0; k <= T.n; ++k)
        for (auto [i, j] : G.gamma[k].edges)
            for (auto [s, l] : G.gamma[k].edges) {
                int want = (s == i && l == j) ? 1 : 0;
                if (P.aval(s, k, i, j) + P.bval(l, k, i, j) != want) return false;
            }
    return true;
}

// Polynomial system over (d_0..d_n, delta). Linear stage is kept with exact
// integer coefficients for the rational elimination; everything is also
// evaluated numerically through residuals().
struct StructureSystem {
    int n = 0;
    DualSignature sig;
    IndicatorTensor ind;
    CanonicalParams params;
    // value expression per (x,y,z): N_{xy}^z = sum sign * d_s
    std::vector<std::vector<std::pair<int, int>>> val;
    std::vector<std::vector<int>> linear; // homogeneous rows over n+2 variables
    // (x,y,z) with ind(z,y,x) = 1: Q4 comparison points and positivity set
    std::vector<std::array<int, 3>> targets;
    bool infeasible = false;
    std::string infeasible_reason;

    int vflat(int x, int y, int z) const { return (x * (n + 1) + y) * (n + 1) + z; }
    double N(const std::vector<double>& d, int x, int y, int z) const {
        double s = 0;
        for (auto [sg, i] : val[vflat(x, y, z)]) s += sg * d[i];
        return s;
    }

    std::vector<double> residuals(const std::vector<double>& v) const {
        const std::vector<double> d(v.begin(), v.begin() + n + 1);
        double delta = v[n + 1];
        std::vector<double> res;
        for (const auto& row : linear) { // L1, L3, delta - sum d
            double s = 0;
            for (int c = 0; c < n + 2; ++c) s += row[c] * v[c];
            res.push_back(s);
        }
        res.push_back(d[0] * delta - 1.0); // C
        for (int i = 0; i <= n; ++i)       // Q1 coptrace
            for (int j = 0; j <= n; ++j) {
                double s = 0;
                for (int t = 0; t <= n; ++t) s += N(d, i, j, t) * d[t];
                res.push_back(d[i] * d[j] - s);
            }
        for (int i = 0; i <= n; ++i) // Q2 associativity
            for (int j = 0; j <= n; ++j)
                for (int k = 0; k <= n; ++k)
                    for (int l = 0; l <= n; ++l) {
                        double s = 0;
                        for (int t = 0; t <= n; ++t)
                            s += N(d, i, j, t) * N(d, t, k, l) - N(d, i, t, l) * N(d, j, k, t);
                        res.push_back(s);
                    }
        const auto& bar = sig.bar;
        for (int k = 0; k <= n; ++k) // Q3 Frobenius at value level
            for (int j = 0; j <= n; ++j)
                for (int i = 0; i <= n; ++i)
                    res.push_back(N(d, k, j, i) * d[i] - N(d, i, bar[j], k) * d[k]);
        // Q4: the three W(i,j,k) expansions agree on each T(x,y,z) present
        auto av = [&](int s, int k, int i, int j) { return (double)params.aval(s, k, i, j); };
        auto bv = [&](int l, int k, int i, int j) { return (double)params.bval(l, k, i, j); };
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j)
                for (int k = 0; k <= n; ++k)
                    for (const auto& t : targets) {
                        int x = t[0], y = t[1], z = t[2];
                        double A = 0, B = 0, C = 0;
                        for (int s = 0; s <= n; ++s) {
                            A += av(s, z, j, k) * N(d, s, i, x) + bv(s, z, j, k) * N(d, s, i, y);
                            B += av(s, bar[x], bar[i], j) * N(d, s, bar[k], bar[y]) +
                                 bv(s, bar[x], bar[i], j) * N(d, s, bar[k], z);
                            C += av(s, y, k, bar[i]) * N(d, s, bar[j], bar[z]) +
                                 bv(s, y, k, bar[i]) * N(d, s, bar[j], bar[x]);
                        }
                        res.push_back(A - B);
                        res.push_back(B - C);
                    }
        return res;
    }
};

inline StructureSystem build_system(const AIF& aif, const ClassPartition& P) {
    if (!all_forest(aif, P)) throw std::invalid_argument("build_system: not a forest aif");
    StructureSystem S;
    S.n = P.sig.n;
    S.sig = P.sig;
    S.ind = expand(aif, P);
    S.params = derive_params(S.ind, P.sig);
    int n = S.n;
    const auto& bar = P.sig.bar;

    S.val.assign((n + 1) * (n + 1) * (n + 1), {});
    for (int x = 0; x <= n; ++x)
        for (int y = 0; y <= n; ++y)
            for (int z = 0; z <= n; ++z) {
                // N_{xy}^z reads the params of edge (x, bar(y)) in Gamma_z
                int i = x, j = bar[y], k = z;
                if (!S.ind.at(k, j, i)) continue;
                auto& e = S.val[S.vflat(x, y, z)];
                for (int s = 0; s <= n; ++s) {
                    if (S.params.aval(s, k, i, j)) e.emplace_back(S.params.aval(s, k, i, j), s);
                    if (S.params.bval(s, k, i, j)) e.emplace_back(S.params.bval(s, k, i, j), s);
                }
            }
    for (int x = 0; x <= n; ++x)
        for (int y = 0; y <= n; ++y)
            for (int z = 0; z <= n; ++z) {
                if (S.ind.at(z, y, x)) {
                    S.targets.push_back({x, y, z});
                    continue;
                }
                // L2: indicator-0 triple whose expression is nonempty must
                // vanish as a signed sum (a contradiction certificate when it
                // degenerates to a single +d_s; see solve())
                const auto& e = S.val[S.vflat(z, y, x)];
                if (e.empty()) continue;
                std::vector<int> row(n + 2, 0);
                for (auto [sg, s] : e) row[s] += sg;
                bool zero = true;
                for (int c : row) zero &= c == 0;
                if (!zero) S.linear.push_back(std::move(row));
            }

    for (int i = 0; i <= n; ++i) { // L1
        if (bar[i] == i) continue;
        std::vector<int> row(n + 2, 0);
        row[i] = 1;
        row[bar[i]] -= 1;
        S.linear.push_back(std::move(row));
    }
    {
        std::vector<int> row(n + 2, 0); // delta = sum d
        for (int i = 0; i <= n; ++i) row[i] = -1;
        row[n + 1] = 1;
        S.linear.push_back(std::move(row));
    }
    // L3: C1/C2 balance per generic edge — white and black totals of the
    // edge's component coincide
    auto G = build_graphs(S.ind);
    for (int k = 1; k <= n; ++k)
        for (auto [i, j] : G.gamma[k].edges) {
            if (i == 0 || j == 0) continue;
            auto comp = split_components(G.gamma[k], i, j);
            std::vector<int> row(n + 2, 0);
            for (const auto& v : comp.c1) row[v.idx] += v.white ? 1 : -1;
            for (const auto& v : comp.c2) row[v.idx] += v.white ? 1 : -1;
            bool zero = true;
            for (int c : row) zero &= c == 0;
            if (!zero) S.linear.push_back(std::move(row));
        }
    return S;
}

// --- exact rational elimination for the linear stage -------------------------

namespace detail {

struct Rational {
    long long num = 0, den = 1;
    void reduce() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) den = 1;
    }
    Rational operator*(const Rational& o) const {
        Rational r{num * o.num, den * o.den};
        r.reduce();
        return r;
    }
    Rational operator-(const Rational& o) const {
        Rational r{num * o.den - o.num * den, den * o.den};
        r.reduce();
        return r;
    }
    bool zero() const { return num == 0; }
};

// returns rank; rows reduced in place
inline int rational_rank(std::vector<std::vector<Rational>>& rows, int cols) {
    int rank = 0;
    for (int c = 0; c < cols && rank < (int)rows.size(); ++c) {
        int piv = -1;
        for (int r = rank; r < (int)rows.size(); ++r)
            if (!rows[r][c].zero()) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        for (int r = 0; r < (int)rows.size(); ++r) {
            if (r == rank || rows[r][c].zero()) continue;
            Rational f{rows[r][c].num * rows[rank][c].den, rows[r][c].den * rows[rank][c].num};
            f.reduce();
            for (int cc = 0; cc < cols; ++cc) rows[r][cc] = rows[r][cc] - f * rows[rank][cc];
        }
        ++rank;
    }
    return rank;
}

} // namespace detail

struct Solution {
    std::vector<double> d;
    double delta = 0.0;
    double residual = 0.0;
    int free_parameter_count = 0;
    double positivity_margin = 0.0;
};

struct SolveReport {
    std::vector<Solution> solutions;
    bool infeasible = false;
    std::string reason;
    int free_parameter_count = 0;
};

struct SolveOptions {
    double tol = 1e-9;
    int starts = 32;
    std::uint64_t seed = 0x5eed;
    int max_iter = 200;
};

namespace detail {

// dense least-squares step via regularized normal equations (tiny systems)
inline bool lsq_step(const std::vector<std::vector<double>>& J, const std::vector<double>& r,
                     std::vector<double>& step) {
    int nv = (int)J[0].size();
    std::vector<std::vector<double>> A(nv, std::vector<double>(nv + 1, 0.0));
    for (int a = 0; a < nv; ++a) {
        for (int b = 0; b < nv; ++b) {
            double s = 0;
            for (size_t t = 0; t < J.size(); ++t) s += J[t][a] * J[t][b];
            A[a][b] = s + (a == b ? 1e-12 : 0.0);
        }
        double s = 0;
        for (size_t t = 0; t < J.size(); ++t) s += J[t][a] * r[t];
        A[a][nv] = -s;
    }
    for (int c = 0; c < nv; ++c) { // partial-pivot elimination
        int piv = c;
        for (int rr = c + 1; rr < nv; ++rr)
            if (std::abs(A[rr][c]) > std::abs(A[piv][c])) piv = rr;
        if (std::abs(A[piv][c]) < 1e-300) return false;
        std::swap(A[c], A[piv]);
        for (int rr = 0; rr < nv; ++rr) {
            if (rr == c) continue;
            double f = A[rr][c] / A[c][c];
            for (int cc = c; cc <= nv; ++cc) A[rr][cc] -= f * A[c][cc];
        }
    }
    step.resize(nv);
    for (int c = 0; c < nv; ++c) step[c] = A[c][nv] / A[c][c];
    return true;
}

inline double inf_norm(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double two_norm(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// numeric rank of J via elimination on J^T J with a relative pivot threshold
inline int jacobian_rank(const std::vector<std::vector<double>>& J) {
    int nv = (int)J[0].size();
    std::vector<std::vector<double>> A(nv, std::vector<double>(nv, 0.0));
    double scale = 0;
    for (int a = 0; a < nv; ++a)
        for (int b = a; b < nv; ++b) {
            double s = 0;
            for (size_t t = 0; t < J.size(); ++t) s += J[t][a] * J[t][b];
            A[a][b] = A[b][a] = s;
            if (a == b) scale = std::max(scale, s);
        }
    double tol = 1e-6 * scale;
    int rank = 0;
    for (int c = 0; c < nv; ++c) {
        int piv = rank;
        for (int r = rank; r < nv; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        if (std::abs(A[piv][c]) <= tol) continue;
        std::swap(A[rank], A[piv]);
        for (int r = 0; r < nv; ++r) {
            if (r == rank) continue;
            double f = A[r][c] / A[rank][c];
            for (int cc = 0; cc < nv; ++cc) A[r][cc] -= f * A[rank][cc];
        }
        ++rank;
    }
    return rank;
}

} // namespace detail

// Exact rational elimination of the (homogeneous) linear stage gives the rank
// and infeasibility certificates; damped Gauss-Newton from deterministic
// pseudo-random positive starts polishes the nonlinear part.
inline SolveReport solve(const StructureSystem& S, const SolveOptions& opt = {}) {
    SolveReport rep;
    if (S.infeasible) {
        rep.infeasible = true;
        rep.reason = S.infeasible_reason;
        return rep;
    }
    int nv = S.n + 2;
    {
        std::vector<std::vector<detail::Rational>> rows;
        for (const auto& r : S.linear) {
            std::vector<detail::Rational> row(nv);
            for (int c = 0; c < nv; ++c) row[c] = {r[c], 1};
            rows.push_back(std::move(row));
        }
        int rank = detail::rational_rank(rows, nv);
        // variables on the solution subspace: a leading variable with an
        // otherwise-zero reduced row is forced to 0 — no positive solution
        for (const auto& row : rows) {
            int nz = 0, lead = -1;
            for (int c = 0; c < nv; ++c)
                if (!row[c].zero()) {
                    ++nz;
                    if (lead < 0) lead = c;
                }
            if (nz == 1) {
                rep.infeasible = true;
                rep.reason = "linear stage forces variable " + std::to_string(lead) + " to zero";
                return rep;
            }
        }
        // a-priori bound from the linear stage alone; one degree of freedom
        // is the overall scale, fixed by d0*delta = 1
        rep.free_parameter_count = (nv - rank) - 1;
    }

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> uni(0.2, 2.0);
    for (int s = 0; s < opt.starts; ++s) {
        std::vector<double> v(nv);
        for (double& x : v) x = uni(rng);
        for (int it = 0; it < opt.max_iter; ++it) {
            auto r = S.residuals(v);
            if (detail::inf_norm(r) < 1e-13) break;
            std::vector<std::vector<double>> J(r.size(), std::vector<double>(nv));
            const double h = 1e-7;
            for (int c = 0; c < nv; ++c) {
                auto vp = v;
                vp[c] += h;
                auto rp = S.residuals(vp);
                for (size_t t = 0; t < r.size(); ++t) J[t][c] = (rp[t] - r[t]) / h;
            }
            std::vector<double> step;
            if (!detail::lsq_step(J, r, step)) break;
            double base = detail::two_norm(r), t = 1.0;
            bool improved = false;
            while (t > 1e-6) {
                auto vn = v;
                for (int c = 0; c < nv; ++c) vn[c] += t * step[c];
                if (detail::two_norm(S.residuals(vn)) < base) {
                    v = vn;
                    improved = true;
                    break;
                }
                t /= 2;
            }
            if (!improved) break;
        }
        auto r = S.residuals(v);
        double res = detail::inf_norm(r);
        if (res >= opt.tol) continue;
        double margin = v[S.n + 1]; // delta
        std::vector<double> d(v.begin(), v.begin() + S.n + 1);
        for (double x : d) margin = std::min(margin, x);
        for (const auto& t : S.targets) // N_{zy}^x > 0 when ind(z,y,x) = 1
            margin = std::min(margin, S.N(d, t[2], t[1], t[0]));
        if (margin <= 1e-8) continue;
        bool dup = false;
        for (const auto& known : rep.solutions) {
            double dist = std::abs(known.delta - v[S.n + 1]);
            for (int c = 0; c <= S.n; ++c) dist = std::max(dist, std::abs(known.d[c] - d[c]));
            dup |= dist < 1e-6;
        }
        if (dup) continue;
        Solution sol;
        sol.d = d;
        sol.delta = v[S.n + 1];
        sol.residual = res;
        // free parameters at the solution: nullity of the Jacobian there
        {
            std::vector<std::vector<double>> J(r.size(), std::vector<double>(nv));
            const double h = 1e-7;
            for (int c = 0; c < nv; ++c) {
                auto vp = v;
                vp[c] += h;
                auto rp = S.residuals(vp);
                for (size_t t = 0; t < r.size(); ++t) J[t][c] = (rp[t] - r[t]) / h;
            }
            sol.free_parameter_count = nv - detail::jacobian_rank(J);
        }
        sol.positivity_margin = margin;
        rep.solutions.push_back(std::move(sol));
    }
    std::sort(rep.solutions.begin(), rep.solutions.end(),
              [](const Solution& a, const Solution& b) { return a.d < b.d; });
    if (!rep.solutions.empty()) {
        int f = 0;
        for (const auto& s : rep.solutions) f = std::max(f, s.free_parameter_count);
        rep.free_parameter_count = f;
    }
    return rep;
}

// tilde-N_{jk}^s = N_{jk}^s * sqrt(delta * d_s) / sqrt(d_j * d_k); the
// normalized coefficients of the x_j = sqrt(delta/d_j) p_j basis.
inline std::vector<double> normalized_coeffs(const StructureSystem& S,
                                             const std::vector<double>& d, double delta) {
    int n = S.n;
    std::vector<double> out((n + 1) * (n + 1) * (n + 1), 0.0);
    for (int j = 0; j <= n; ++j)
        for (int k = 0; k <= n; ++k)
            for (int s = 0; s <= n; ++s)
                out[S.vflat(j, k, s)] =
                    S.N(d, j, k, s) * std::sqrt(delta * d[s]) / std::sqrt(d[j] * d[k]);
    return out;
}

} // namespace fubi
