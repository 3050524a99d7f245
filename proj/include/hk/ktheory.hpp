#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "spectral.hpp"

namespace hk {

struct not_implemented : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- partitions ----

using Partition = std::vector<int>; // decreasing parts

inline std::vector<Partition> partitions(int n) {
    std::vector<Partition> out;
    Partition cur;
    std::function<void(int, int)> rec = [&](int left, int maxp) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (int p = std::min(left, maxp); p >= 1; --p) {
            cur.push_back(p);
            rec(left - p, p);
            cur.pop_back();
        }
    };
    rec(n, n);
    return out;
}
inline int distinct_parts(const Partition& m) {
    std::set<int> s(m.begin(), m.end());
    return s.size();
}
inline int part_gcd(const Partition& m) {
    int g = 0;
    for (int p : m) g = std::gcd(g, p);
    return g;
}
inline Partition dual(const Partition& m) {
    Partition d;
    for (int i = 1; !m.empty() && i <= m.front(); ++i) {
        int c = 0;
        for (int p : m) c += p >= i;
        d.push_back(c);
    }
    return d;
}
inline std::string partition_str(const Partition& m) {
    std::string s;
    for (size_t i = 0; i < m.size(); ++i) s += (i ? "+" : "") + std::to_string(m[i]);
    return s;
}

inline long long d_formula(int n) {
    long long s = 0;
    for (auto& m : partitions(n)) s += (long long)part_gcd(m) << (distinct_parts(m) - 1);
    return s;
}
inline long long p_tuples(int k, int n) {
    // coefficient of x^n in Π (1 - x^i)^{-k}
    std::vector<long long> c(n + 1, 0);
    c[0] = 1;
    for (int t = 0; t < k; ++t)
        for (int i = 1; i <= n; ++i)
            for (int j = i; j <= n; ++j) c[j] += c[j - i];
    return c[n];
}
inline long long gl_rank(int n) {
    long long s = 0;
    for (auto& m : partitions(n)) s += 1LL << distinct_parts(m);
    return s;
}

// ---- rank results ----

struct EQComponent {
    std::string cls;      // conjugacy class label
    std::string source;   // residual coset orbit (q ≠ 1) or "T"
    int components = 0;   // components of the fixed locus
    int orbits = 0;       // centralizer orbits on the good components
    long long stabilizer_order = 0;
    int torus_rank = 0;
    long long even = 0, odd = 0;
};

struct RankResult {
    long long k0 = 0, k1 = 0;
    std::vector<EQComponent> census;
    std::string method;
    nlohmann::json to_json() const {
        auto arr = nlohmann::json::array();
        for (auto& c : census)
            arr.push_back({{"class", c.cls}, {"source", c.source}, {"components", c.components}, {"orbits", c.orbits},
                           {"stabilizer_order", c.stabilizer_order}, {"torus_rank", c.torus_rank},
                           {"contribution_even", c.even}, {"contribution_odd", c.odd}});
        return {{"k0", k0}, {"k1", k1}, {"method", method}, {"census", arr}};
    }
};

// K_*(T^m) ranks
inline std::pair<long long, long long> torus_k(int m) {
    if (m == 0) return {1, 0};
    return {1LL << (m - 1), 1LL << (m - 1)};
}

// Components of {t ∈ T_u : t(n_a) = exp(2πi ψ_a)} for generators n_a, and the
// linear action of an element on them and on the cocharacter space.
class FixedLocus {
public:
    int r = 0, rk = 0;
    IMat V, vinv;              // adapted basis: rows of vinv, first rk span Sat(N)
    std::vector<RVec> comps;   // values on vinv rows 0..rk-1

    FixedLocus(const IMat& gens, const RVec& psi, int r_) : r(r_) {
        if (gens.empty()) {
            V = vinv = identity(r);
            comps.push_back({});
            return;
        }
        SNF s = smith(gens, r);
        rk = s.rank;
        V = s.V;
        vinv = inverse_unimodular(s.V);
        CharSolutions cs = solve_characters(gens, psi, r);
        comps = cs.solutions;
    }
    int dim() const { return r - rk; }

    // matrix of h in the adapted basis (columns b_i = vinv rows)
    IMat adapted(const IMat& H) const { return matmul(matmul(transpose(V, r), H), transpose(vinv, r)); }

    // det(1 + s h) on X_Q / N_Q
    long long det_quot(const IMat& A, int sign) const {
        int m = r - rk;
        IMat b(m, IVec(m));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) b[i][j] = (i == j) + sign * A[rk + i][rk + j];
        return det(b);
    }
    // image of component c under h, given the adapted matrix of h^{-1}
    RVec move(const RVec& c, const IMat& Ainv) const {
        RVec out(rk, Rat(0));
        for (int i = 0; i < rk; ++i) {
            Rat s = 0;
            for (int j = 0; j < rk; ++j)
                if (Ainv[j][i]) s += Rat(Ainv[j][i]) * c[j];
            out[i] = s.frac();
        }
        return out;
    }
    int find(const RVec& c) const {
        for (size_t i = 0; i < comps.size(); ++i)
            if (comps[i] == c) return i;
        return -1;
    }
};

inline IMat one_minus(const IMat& g) {
    int r = g.size();
    IMat a(r, IVec(r));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) a[i][j] = (i == j) - g[i][j];
    return a;
}

// Burnside sum over the centralizer Z acting on the good components.
struct BurnsideSum {
    long long tot = 0, sgn = 0;
    int orbits = 0;
};
inline BurnsideSum burnside(const Weyl& W, const FixedLocus& F, const std::vector<int>& good,
                            const std::vector<int>& Z) {
    BurnsideSum b;
    long long T = 0, S = 0;
    long long fixes = 0;
    for (int h : Z) {
        IMat A = F.adapted(W.mat[h]);
        IMat Ai = F.adapted(W.mat[W.inv[h]]);
        long long fix = 0;
        for (int c : good) {
            int img = F.find(F.move(F.comps[c], Ai));
            if (img < 0) throw std::logic_error("component action not closed");
            if (img == c) ++fix;
        }
        fixes += fix;
        if (fix) {
            T += fix * F.det_quot(A, 1);
            S += fix * F.det_quot(A, -1);
        }
    }
    long long z = Z.size();
    if (T % z || S % z) throw std::logic_error("non-integral Burnside sum");
    b.tot = T / z;
    b.sgn = S / z;
    b.orbits = fixes / z;
    return b;
}

// q = 1: rational cohomology of the extended quotient of T_u by W0.
inline RankResult extended_quotient_ranks(const Weyl& W) {
    RankResult res;
    res.method = "extended quotient at q = 1";
    if (W.order() > 100000) throw size_limit("W0 too large");
    long long T = 0, S = 0;
    for (auto& cl : W.conj_classes()) {
        int w = cl.rep;
        IMat N = transpose(one_minus(W.mat[w]), W.r);
        FixedLocus F(N, RVec(N.size(), Rat(0)), W.r);
        std::vector<int> good(F.comps.size());
        std::iota(good.begin(), good.end(), 0);
        auto Z = W.centralizer(w);
        BurnsideSum b = burnside(W, F, good, Z);
        EQComponent e;
        e.cls = cl.label;
        e.source = "T";
        e.components = F.comps.size();
        e.orbits = b.orbits;
        e.stabilizer_order = Z.size();
        e.torus_rank = F.dim();
        e.even = (b.tot + b.sgn) / 2;
        e.odd = (b.tot - b.sgn) / 2;
        res.census.push_back(e);
        T += b.tot;
        S += b.sgn;
    }
    std::sort(res.census.begin(), res.census.end(), [](auto& a, auto& b) { return a.cls < b.cls; });
    res.k0 = (T + S) / 2;
    res.k1 = (T - S) / 2;
    return res;
}

// q ≠ 1, general engine: Prim components from residual cosets, with the
// fixed loci restricted to points where the element can preserve a chamber
// of the scalar-intertwiner roots.
class SpectrumEngine {
public:
    const Spectral& S;
    const Weyl& W;
    const RootDatum& d;

    explicit SpectrumEngine(const Spectral& s) : S(s), W(s.W), d(s.d) {}

    RankResult run(const ResidualReport& rep) const {
        RankResult res;
        res.method = "residual cosets";
        long long T = 0, Sg = 0;
        for (auto& o : rep.orbits) {
            const Coset& L = o.rep;
            auto G = S.stabilizer(L);
            TorusPoint r = S.base_point(L);
            for (auto& [g, cls] : classes_of(G)) {
                IMat N = L.M;
                RVec psi = L.chi_u;
                for (auto& row : transpose(one_minus(W.mat[g]), W.r)) N.push_back(row), psi.push_back(Rat(0));
                FixedLocus F(N, psi, W.r);
                std::vector<int> good;
                for (size_t c = 0; c < F.comps.size(); ++c)
                    if (component_good(L, G, g, F, c, r)) good.push_back(c);
                std::vector<int> Z;
                for (int h : G)
                    if (W.mul(h, g) == W.mul(g, h)) Z.push_back(h);
                BurnsideSum b = burnside(W, F, good, Z);
                EQComponent e;
                e.cls = W.class_label(g);
                e.source = S.point_str(r) + " dim " + std::to_string(o.dim);
                e.components = F.comps.size();
                e.orbits = b.orbits;
                e.stabilizer_order = Z.size();
                e.torus_rank = F.dim();
                e.even = (b.tot + b.sgn) / 2;
                e.odd = (b.tot - b.sgn) / 2;
                if (e.even || e.odd) res.census.push_back(e);
                T += b.tot;
                Sg += b.sgn;
            }
        }
        res.k0 = (T + Sg) / 2;
        res.k1 = (T - Sg) / 2;
        return res;
    }

private:
    // conjugacy classes of a subgroup G, as (representative, size)
    std::vector<std::pair<int, int>> classes_of(const std::vector<int>& G) const {
        std::vector<std::pair<int, int>> out;
        std::set<int> seen;
        for (int g : G) {
            if (seen.count(g)) continue;
            std::set<int> cl;
            for (int h : G) cl.insert(W.mul(W.mul(h, g), W.inv[h]));
            seen.insert(cl.begin(), cl.end());
            out.push_back({g, (int)cl.size()});
        }
        return out;
    }

    bool in_image(int g, const IVec& beta) const {
        // β ∈ Im(1-g) over Q iff Σ_k g^k β = 0
        IVec s(W.r, 0), v = beta;
        do {
            s = vadd(s, v);
            v = W.act(g, v);
        } while (v != beta);
        return is_zero(s);
    }

    // the roots β ∉ QR_L with θ_β = 1 on the locus, scalar intertwiner, s_β ∈ G
    std::vector<int> scalar_roots(const Coset& L, const std::vector<int>& G, const IMat& sat, const RVec& vals,
                                  const TorusPoint& r) const {
        std::vector<int> out;
        int nb = S.nb;
        auto value = [&](const IVec& x) -> std::optional<std::pair<Rat, RVec>> {
            auto c = coords(sat, x);
            if (!c) return std::nullopt;
            Rat u = 0;
            for (size_t i = 0; i < c->size(); ++i)
                if ((*c)[i]) u += Rat((*c)[i]) * vals[i];
            return std::make_pair(u.frac(), r.exp_at(x, nb));
        };
        for (size_t i = 0; i < d.r1.size(); ++i) {
            const auto& a = d.r1[i];
            if (coords(L.M, a.root)) continue;
            auto v = value(a.root);
            if (!v || !v->first.is_zero() || !rv_zero(v->second)) continue;
            bool numerator_zero;
            if (!a.doubled) numerator_zero = rv_zero(S.q_co[i]);
            else {
                auto gv = value(d.roots[a.base]);
                RVec half = rv_scale(S.q_co[i], Rat(1, 2));
                // θ_{-γ} = θ_γ^{-1}; on this locus |θ_γ| = 1 and θ_γ = ±1
                bool f1 = gv->first == Rat(1, 2) && rv_zero(half);
                bool f2 = gv->first.is_zero() && rv_zero(rv_add(half, S.q_2co[i]));
                numerator_zero = f1 || f2;
            }
            if (numerator_zero) continue;
            int sb = W.refl_elem[a.base];
            if (std::find(G.begin(), G.end(), sb) == G.end()) continue;
            out.push_back(i);
        }
        return out;
    }

    bool good_with(int g, const std::vector<int>& roots) const {
        for (int i : roots)
            if (in_image(g, d.r1[i].root)) return false;
        return true;
    }

    bool component_good(const Coset& L, const std::vector<int>& G, int g, const FixedLocus& F, size_t c,
                        const TorusPoint& r) const {
        if (g == 0) return true;
        IMat sat(F.vinv.begin(), F.vinv.begin() + F.rk);
        const RVec& vals = F.comps[c];
        bool generic = good_with(g, scalar_roots(L, G, sat, vals, r));
        if (F.dim() == 0) return generic;
        // special points: where some further root becomes trivial
        for (size_t i = 0; i < d.r1.size(); ++i) {
            const auto& a = d.r1[i];
            if (in_span_q(sat, a.root)) continue;
            if (!rv_zero(r.exp_at(a.root, S.nb))) continue;
            int sb = W.refl_elem[a.base];
            if (std::find(G.begin(), G.end(), sb) == G.end()) continue;
            IMat gens = sat;
            RVec psi = vals;
            gens.push_back(a.root);
            psi.push_back(Rat(0));
            CharSolutions cs = solve_characters(gens, psi, W.r);
            for (auto& sol : cs.solutions) {
                bool here = good_with(g, scalar_roots(L, G, cs.basis, sol, r));
                if (here != generic)
                    throw not_implemented("chamber condition is not constant on a fixed component");
            }
        }
        return generic;
    }
};

inline bool type_a_family(const RootDatum& d) {
    return d.family == Family::GL || d.family == Family::AWeight || d.family == Family::ARoot;
}

// closed forms for the type-A families at q ≠ 1
inline RankResult type_a_ranks(const RootDatum& d) {
    RankResult res;
    res.method = "partition census";
    int n = d.family_n;
    for (auto& mu : partitions(n)) {
        EQComponent e;
        e.cls = partition_str(mu);
        long long mult;
        int m;
        if (d.family == Family::GL) mult = 1, m = distinct_parts(mu);
        else if (d.family == Family::AWeight) mult = part_gcd(mu), m = distinct_parts(mu) - 1;
        else {
            Partition dm = dual(mu);
            mult = part_gcd(dm), m = distinct_parts(dm) - 1;
        }
        auto [a, b] = torus_k(m);
        e.components = mult;
        e.torus_rank = m;
        e.even = mult * a;
        e.odd = mult * b;
        res.k0 += e.even;
        res.k1 += e.odd;
        res.census.push_back(e);
    }
    return res;
}

inline RankResult spectrum_ranks(const Hecke& H) {
    const RootDatum& d = H.W.d;
    bool q_one = H.numeric();
    if (q_one)
        for (auto& v : H.class_value) q_one &= *v == 1;
    if (!q_one && type_a_family(d) && d.rank > 2) return type_a_ranks(d);
    if (d.rank > 2) throw not_implemented("spectrum ranks for " + d.name + " at these labels are not covered");
    if (H.numeric() && d.family == Family::B2Weight && !q_one) {
        Genericity g = genericity_class(H);
        if (g.special) throw not_implemented("B2 labels on the special line " + g.label + " are not covered");
    }
    Spectral S(H);
    auto rep = S.classify();
    SpectrumEngine E(S);
    return E.run(rep);
}

struct Comparison {
    bool equal = false;
    RankResult q1, q;
};
inline Comparison compare_q1(const Hecke& H) {
    Comparison c;
    c.q1 = extended_quotient_ranks(H.W);
    c.q = spectrum_ranks(H);
    c.equal = c.q1.k0 == c.q.k0 && c.q1.k1 == c.q.k1;
    return c;
}

} // namespace hk
