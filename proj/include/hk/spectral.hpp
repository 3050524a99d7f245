#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hecke.hpp"

namespace hk {

// Multiplicative basis for label values. Symbolic labels are independent
// generators; numeric labels are factored over the primes.
struct ExpBasis {
    std::vector<std::string> names;
    std::vector<double> values; // NaN for symbolic generators
    std::vector<RVec> class_exp; // per label class, exponents of q (not q^{1/2})

    int size() const { return names.size(); }
    RVec zero() const { return RVec(names.size(), Rat(0)); }
};

inline std::vector<std::pair<BigInt, int>> factor_int(BigInt n) {
    std::vector<std::pair<BigInt, int>> f;
    for (long long p = 2; p < 1000000 && BigInt(p) * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) n /= p, ++e;
        if (e) f.push_back({BigInt(p), e});
    }
    if (n > 1) f.push_back({n, 1});
    return f;
}

inline ExpBasis exp_basis(const Hecke& H) {
    ExpBasis b;
    std::map<std::string, int> sym;
    std::map<BigInt, int> prime;
    std::vector<std::vector<std::pair<int, int>>> raw(H.nclasses());
    for (int c = 0; c < H.nclasses(); ++c) {
        if (!H.class_value[c]) {
            std::string n = H.vars.names()[H.class_var[c]];
            if (!sym.count(n)) {
                sym[n] = b.names.size();
                b.names.push_back(n);
                b.values.push_back(std::nan(""));
            }
            raw[c].push_back({sym[n], 1});
        } else {
            BigRat v = *H.class_value[c];
            for (auto [p, e] : factor_int(boost::multiprecision::numerator(v))) {
                if (!prime.count(p)) {
                    prime[p] = b.names.size();
                    b.names.push_back("p" + p.str());
                    b.values.push_back(p.convert_to<double>());
                }
                raw[c].push_back({prime[p], e});
            }
            for (auto [p, e] : factor_int(boost::multiprecision::denominator(v))) {
                if (!prime.count(p)) {
                    prime[p] = b.names.size();
                    b.names.push_back("p" + p.str());
                    b.values.push_back(p.convert_to<double>());
                }
                raw[c].push_back({prime[p], -e});
            }
        }
    }
    for (int c = 0; c < H.nclasses(); ++c) {
        RVec e(b.names.size(), Rat(0));
        for (auto [i, k] : raw[c]) e[i] += Rat(k);
        b.class_exp.push_back(e);
    }
    return b;
}

inline RVec rv_add(RVec a, const RVec& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}
inline RVec rv_scale(RVec a, const Rat& s) {
    for (auto& x : a) x *= s;
    return a;
}
inline bool rv_zero(const RVec& a) {
    return std::all_of(a.begin(), a.end(), [](const Rat& x) { return x.is_zero(); });
}

// t ∈ T = Hom(X, C^×): values on the standard basis of X.
// t(e_j) = exp(2πi unit[j]) · Π_b base_b^{exps[j][b]}.
struct TorusPoint {
    RVec unit;
    RMat exps;

    Rat unit_at(const IVec& x) const {
        Rat s = 0;
        for (size_t j = 0; j < x.size(); ++j)
            if (x[j]) s += Rat(x[j]) * unit[j];
        return s.frac();
    }
    RVec exp_at(const IVec& x, int nb) const {
        RVec s(nb, Rat(0));
        for (size_t j = 0; j < x.size(); ++j)
            if (x[j])
                for (int b = 0; b < nb; ++b) s[b] += Rat(x[j]) * exps[j][b];
        return s;
    }
    std::complex<double> eval(const IVec& x, const ExpBasis& B) const {
        double mod = 0;
        RVec e = exp_at(x, B.size());
        for (int b = 0; b < B.size(); ++b)
            if (!e[b].is_zero()) mod += e[b].to_double() * std::log(B.values[b]);
        return std::polar(std::exp(mod), 2 * M_PI * unit_at(x).to_double());
    }
    friend bool operator==(const TorusPoint& a, const TorusPoint& b) {
        if (a.exps != b.exps) return false;
        for (size_t j = 0; j < a.unit.size(); ++j)
            if (!(a.unit[j] - b.unit[j]).frac().is_zero()) return false;
        return true;
    }
};

// (w t)(x) = t(w^{-1} x)
inline TorusPoint act(const Weyl& W, int w, const TorusPoint& t, int nb) {
    TorusPoint s;
    int r = W.r;
    s.unit.resize(r);
    s.exps.resize(r);
    for (int j = 0; j < r; ++j) {
        IVec e(r, 0);
        e[j] = 1;
        IVec y = W.act(W.inv[w], e);
        s.unit[j] = t.unit_at(y);
        s.exps[j] = t.exp_at(y, nb);
    }
    return s;
}

// σ_ε: keep the unitary part, scale the exponents
inline TorusPoint scale_point(const TorusPoint& t, const Rat& eps) {
    TorusPoint s = t;
    for (auto& row : s.exps) row = rv_scale(row, eps);
    return s;
}

// A coset L = {t : t|_M = χ} of the subtorus T^L, with M = QR_L ∩ X.
struct Coset {
    IMat M;          // HNF rows
    RVec chi_u;      // values mod 1 on rows of M
    RMat chi_e;      // exponent vectors on rows of M

    int codim() const { return M.size(); }
    friend bool operator<(const Coset& a, const Coset& b) {
        if (a.M.size() != b.M.size()) return a.M.size() > b.M.size();
        if (a.M != b.M) return a.M < b.M;
        if (a.chi_u != b.chi_u) return a.chi_u < b.chi_u;
        return a.chi_e < b.chi_e;
    }
    friend bool operator==(const Coset& a, const Coset& b) {
        return a.M == b.M && a.chi_u == b.chi_u && a.chi_e == b.chi_e;
    }
};

// value of θ_x on L for x ∈ M
inline std::optional<std::pair<Rat, RVec>> coset_value(const Coset& L, const IVec& x, int nb) {
    auto c = coords(L.M, x);
    if (!c) return std::nullopt;
    Rat u = 0;
    RVec e(nb, Rat(0));
    for (size_t i = 0; i < c->size(); ++i)
        if ((*c)[i]) {
            u += Rat((*c)[i]) * L.chi_u[i];
            e = rv_add(e, rv_scale(L.chi_e[i], Rat((*c)[i])));
        }
    return std::make_pair(u.frac(), e);
}

// Build the canonical coset from values on generators of a lattice whose
// saturation basis B and unit values on B are already known.
inline Coset canonical_coset(const IMat& B, const RVec& u_on_B, const RMat& e_on_B, int r, int nb) {
    Coset L;
    L.M = hnf(B, r);
    for (auto& h : L.M) {
        auto c = coords(B, h);
        Rat u = 0;
        RVec e(nb, Rat(0));
        for (size_t i = 0; i < c->size(); ++i)
            if ((*c)[i]) {
                u += Rat((*c)[i]) * u_on_B[i];
                e = rv_add(e, rv_scale(e_on_B[i], Rat((*c)[i])));
            }
        L.chi_u.push_back(u.frac());
        L.chi_e.push_back(e);
    }
    return L;
}

inline Coset act(const Weyl& W, int w, const Coset& L, int nb) {
    IMat wM;
    for (auto& m : L.M) wM.push_back(W.act(w, m));
    // χ'(w m) = χ(m): values on wM rows are the old values
    return canonical_coset(wM, L.chi_u, L.chi_e, W.r, nb);
}

struct ResidualOrbit {
    Coset rep;
    int size = 0;
    int dim = 0;
    std::vector<int> R_p, R_z; // R1 indices
    std::vector<Coset> members;
};

struct ResidualReport {
    std::vector<ResidualOrbit> orbits;
    bool search_complete = true;
    int points() const {
        int n = 0;
        for (auto& o : orbits)
            if (o.dim == 0) n += o.size;
        return n;
    }
    int point_orbits() const {
        int n = 0;
        for (auto& o : orbits)
            if (o.dim == 0) ++n;
        return n;
    }
    int cosets(int dim) const {
        int n = 0;
        for (auto& o : orbits)
            if (o.dim == dim) n += o.size;
        return n;
    }
    int coset_orbits(int dim) const {
        int n = 0;
        for (auto& o : orbits)
            if (o.dim == dim) ++n;
        return n;
    }
};

class Spectral {
public:
    const Hecke& H;
    const Weyl& W;
    const RootDatum& d;
    ExpBasis B;
    int nb;
    std::vector<RVec> q_co, q_2co; // exponents of q_{α∨}, q_{2α∨} per R1 index

    explicit Spectral(const Hecke& h) : H(h), W(h.W), d(h.W.d), B(exp_basis(h)), nb(B.size()) {
        for (auto& a : d.r1) {
            int fin = H.finite_reflection_class(a.base);
            if (!a.doubled) {
                q_co.push_back(B.class_exp[fin]);
                q_2co.push_back(B.zero());
            } else {
                int aff = H.affine_reflection_class(a.base);
                q_co.push_back(rv_add(B.class_exp[fin], rv_scale(B.class_exp[aff], Rat(-1))));
                q_2co.push_back(B.class_exp[aff]);
            }
        }
    }

    // numerator / denominator status of c_α on L
    struct FactorStatus {
        bool numerator_zero[2] = {false, false};
        bool denominator_zero = false;
        bool constant = false;
    };
    FactorStatus c_factor_status(int i, const Coset& L) const {
        FactorStatus s;
        const auto& a = d.r1[i];
        auto v = coset_value(L, vneg(a.root), nb);
        if (!v) return s;
        s.constant = true;
        s.denominator_zero = v->first.is_zero() && rv_zero(v->second);
        if (!a.doubled) {
            s.numerator_zero[0] = v->first.is_zero() && v->second == q_co[i];
        } else {
            auto g = coset_value(L, vneg(d.roots[a.base]), nb);
            RVec half = rv_scale(q_co[i], Rat(1, 2));
            s.numerator_zero[0] = g->first == Rat(1, 2) && g->second == half;
            s.numerator_zero[1] = g->first.is_zero() && g->second == rv_add(half, q_2co[i]);
        }
        return s;
    }

    void pole_zero(const Coset& L, std::vector<int>& Rp, std::vector<int>& Rz) const {
        Rp.clear(), Rz.clear();
        for (size_t i = 0; i < d.r1.size(); ++i) {
            auto s = c_factor_status(i, L);
            if (!s.constant) continue;
            if (s.numerator_zero[0] || s.numerator_zero[1]) Rp.push_back(i);
            if (s.denominator_zero) Rz.push_back(i);
        }
    }
    bool is_residual(const Coset& L) const {
        std::vector<int> Rp, Rz;
        pole_zero(L, Rp, Rz);
        return (int)Rp.size() - (int)Rz.size() == L.codim();
    }

    // the W0 orbit of L, sorted
    std::vector<Coset> orbit(const Coset& L) const {
        std::set<Coset> s;
        for (int w = 0; w < W.order(); ++w) s.insert(act(W, w, L, nb));
        return {s.begin(), s.end()};
    }
    std::vector<int> stabilizer(const Coset& L) const {
        std::vector<int> g;
        for (int w = 0; w < W.order(); ++w)
            if (act(W, w, L, nb) == L) g.push_back(w);
        return g;
    }

    ResidualReport classify(long long max_candidates = 2000000) const {
        ResidualReport rep;
        std::set<Coset> found;
        int npos = d.npos();
        int ssr = rank(d.simple_roots);
        // T itself
        found.insert(Coset{});
        long long work = 0;
        std::vector<int> pick;
        std::function<void(int, int)> rec = [&](int start, int k) {
            if ((int)pick.size() == k) {
                solve_branches(pick, found, work, max_candidates);
                return;
            }
            for (int i = start; i < npos; ++i) {
                IMat m;
                for (int j : pick) m.push_back(d.r1[j].root);
                m.push_back(d.r1[i].root);
                if (rank(m) < (int)m.size()) continue;
                pick.push_back(i);
                rec(i + 1, k);
                pick.pop_back();
            }
        };
        for (int k = 1; k <= ssr; ++k) rec(0, k);
        std::set<Coset> seen;
        for (auto& L : found) {
            if (seen.count(L)) continue;
            auto orb = orbit(L);
            for (auto& x : orb) seen.insert(x);
            ResidualOrbit o;
            o.rep = orb.front();
            o.size = orb.size();
            o.dim = d.rank - L.codim();
            o.members = orb;
            pole_zero(o.rep, o.R_p, o.R_z);
            rep.orbits.push_back(o);
        }
        std::sort(rep.orbits.begin(), rep.orbits.end(), [](const ResidualOrbit& a, const ResidualOrbit& b) {
            if (a.dim != b.dim) return a.dim < b.dim;
            return a.rep < b.rep;
        });
        return rep;
    }

    // base point r_L with |r_L| ∈ T_L, unitary part extended by 1 off M
    TorusPoint base_point(const Coset& L) const {
        int r = d.rank, k = L.codim();
        TorusPoint t;
        t.unit.assign(r, Rat(0));
        t.exps.assign(r, B.zero());
        if (k == 0) return t;
        // unitary part: extend along an adapted basis
        SNF s = smith(L.M, r);
        IMat vinv = inverse_unimodular(s.V);
        // vinv rows 0..k-1 span M (saturated); values there from χ, others 0
        RVec ub(r, Rat(0));
        for (int i = 0; i < k; ++i) ub[i] = coset_value(L, vinv[i], nb)->first;
        // t(e_j): e_j = Σ_i c_ji vinv_i with c = rows of V^T... solve directly
        IMat V = s.V; // vinv * V = I, so e_j = Σ_i V[j][i] vinv_i
        for (int j = 0; j < r; ++j) {
            Rat u = 0;
            for (int i = 0; i < r; ++i)
                if (V[j][i]) u += Rat(V[j][i]) * ub[i];
            t.unit[j] = u.frac();
        }
        // exponent part: log|r_L| = Σ c_l β_l∨ over independent coroots of R_L
        IMat cor;
        for (auto& a : d.r1)
            if (coords(L.M, a.root)) {
                IMat test = cor;
                test.push_back(a.coroot);
                if (rank(test) > (int)cor.size()) cor = test;
            }
        RMat A(k, RVec(k));
        for (int i = 0; i < k; ++i)
            for (int l = 0; l < k; ++l) A[i][l] = Rat(d.pair(L.M[i], cor[l]));
        for (int b = 0; b < nb; ++b) {
            RVec rhs(k);
            for (int i = 0; i < k; ++i) rhs[i] = L.chi_e[i][b];
            RVec c = *solve(A, rhs);
            for (int j = 0; j < r; ++j) {
                IVec e(r, 0);
                e[j] = 1;
                Rat v = 0;
                for (int l = 0; l < k; ++l) v += c[l] * Rat(d.pair(e, cor[l]));
                t.exps[j][b] = v;
            }
        }
        return t;
    }

    // L^temp = {t ∈ T_u : t|_M = χ_u}
    Coset tempered_form(const Coset& L) const {
        Coset T = L;
        for (auto& e : T.chi_e) e = B.zero();
        return T;
    }

    nlohmann::json rat_json(const Rat& r) const { return r.str(); }
    nlohmann::json coset_json(const Coset& L) const {
        TorusPoint t = base_point(L);
        nlohmann::json j;
        auto u = nlohmann::json::array(), ex = nlohmann::json::array();
        for (int i = 0; i < d.rank; ++i) {
            u.push_back(t.unit[i].str());
            auto row = nlohmann::json::array();
            for (auto& x : t.exps[i]) row.push_back(x.str());
            ex.push_back(row);
        }
        j["base_point"] = {{"unitary", u}, {"exponents", ex}};
        j["lattice"] = L.M;
        auto cu = nlohmann::json::array();
        for (auto& x : L.chi_u) cu.push_back(x.str());
        j["tempered_form"] = {{"lattice", L.M}, {"unitary", cu}};
        return j;
    }
    nlohmann::json report_json(const ResidualReport& rep) const {
        nlohmann::json j;
        j["exponent_basis"] = B.names;
        auto arr = nlohmann::json::array();
        for (auto& o : rep.orbits) {
            nlohmann::json e = coset_json(o.rep);
            e["dim"] = o.dim;
            e["orbit_size"] = o.size;
            auto rp = nlohmann::json::array(), rz = nlohmann::json::array();
            for (int i : o.R_p) rp.push_back(d.r1[i].root);
            for (int i : o.R_z) rz.push_back(d.r1[i].root);
            e["R_p"] = rp;
            e["R_z"] = rz;
            arr.push_back(e);
        }
        j["orbits"] = arr;
        j["points"] = rep.points();
        j["point_orbits"] = rep.point_orbits();
        j["completeness"] = "search-complete under genericity convention";
        return j;
    }
    std::string point_str(const TorusPoint& t) const {
        std::string s = "(";
        for (int j = 0; j < d.rank; ++j) {
            if (j) s += ", ";
            std::string part;
            if (!t.unit[j].is_zero()) {
                if (t.unit[j] == Rat(1, 2)) part = "-";
                else part = "exp(2pi i " + t.unit[j].str() + ")";
            }
            std::string m;
            for (int b = 0; b < nb; ++b)
                if (!t.exps[j][b].is_zero()) {
                    std::string base = B.names[b];
                    if (base[0] == 'p' && std::isdigit((unsigned char)base[1])) base = base.substr(1);
                    m += (m.empty() ? "" : "*") + base + (t.exps[j][b] == Rat(1) ? "" : "^(" + t.exps[j][b].str() + ")");
                }
            if (m.empty()) m = "1";
            s += (part == "-" ? "-" + m : (part.empty() ? m : part + (m == "1" ? "" : "*" + m)));
        }
        return s + ")";
    }

private:
    void solve_branches(const std::vector<int>& pick, std::set<Coset>& found, long long& work, long long limit) const {
        int k = pick.size(), r = d.rank;
        // branch values per root: (generator, unit, exponent)
        struct Br {
            IVec gen;
            Rat u;
            RVec e;
        };
        std::vector<std::vector<Br>> opts(k);
        for (int a = 0; a < k; ++a) {
            int i = pick[a];
            const auto& R = d.r1[i];
            if (!R.doubled) {
                for (int sg : {1, -1}) opts[a].push_back({vneg(R.root), Rat(0), rv_scale(q_co[i], Rat(sg))});
            } else {
                IVec g = vneg(d.roots[R.base]);
                RVec half = rv_scale(q_co[i], Rat(1, 2));
                RVec f2 = rv_add(half, q_2co[i]);
                for (int sg : {1, -1}) {
                    opts[a].push_back({g, Rat(1, 2), rv_scale(half, Rat(sg))});
                    opts[a].push_back({g, Rat(0), rv_scale(f2, Rat(sg))});
                }
            }
        }
        std::vector<int> idx(k, 0);
        for (;;) {
            if (++work > limit) throw size_limit("residual solver candidate limit exceeded");
            IMat G;
            RVec gu;
            RMat ge;
            for (int a = 0; a < k; ++a) {
                const Br& b = opts[a][idx[a]];
                G.push_back(b.gen);
                gu.push_back(b.u);
                ge.push_back(b.e);
            }
            CharSolutions cs = solve_characters(G, gu, r);
            if (!cs.solutions.empty()) {
                // exponents on the saturation basis, by Q-linearity
                RMat A(r, RVec(k));
                for (int j = 0; j < r; ++j)
                    for (int a = 0; a < k; ++a) A[j][a] = Rat(G[a][j]);
                RMat eB;
                for (auto& bv : cs.basis) {
                    RVec rhs(bv.begin(), bv.end());
                    RVec c = *solve_least(A, rhs);
                    RVec e(nb, Rat(0));
                    for (int a = 0; a < k; ++a) e = rv_add(e, rv_scale(ge[a], c[a]));
                    eB.push_back(e);
                }
                for (auto& sol : cs.solutions) {
                    Coset L = canonical_coset(cs.basis, sol, eB, r, nb);
                    if (found.count(L)) continue;
                    if (is_residual(L)) {
                        for (auto& x : orbit(L)) found.insert(x);
                    }
                }
            }
            int a = 0;
            while (a < k && ++idx[a] == (int)opts[a].size()) idx[a++] = 0;
            if (a == k) break;
        }
    }
    // solve A c = b for a full-column-rank A with b in its column span
    static std::optional<RVec> solve_least(const RMat& A, const RVec& b) {
        int rows = A.size(), cols = A.empty() ? 0 : A[0].size();
        RMat m(rows, RVec(cols + 1));
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) m[i][j] = A[i][j];
            m[i][cols] = b[i];
        }
        auto piv = rref(m);
        if (!piv.empty() && piv.back() == cols) return std::nullopt;
        RVec x(cols, Rat(0));
        for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = m[i][cols];
        return x;
    }
};

// Relations among numeric labels and the resulting genericity class.
struct Genericity {
    std::string label;
    std::vector<std::string> relations;
    bool special = false; // a coincidence that changes the residual census
    int points = 0, generic_points = 0;
};

inline Genericity genericity_class(const Hecke& H) {
    if (!H.numeric()) throw usage_error("genericity class needs numeric labels");
    Genericity g;
    int n = H.nclasses();
    bool all_one = true;
    for (int c = 0; c < n; ++c) all_one &= *H.class_value[c] == 1;
    Spectral S(H);
    auto rep = S.classify();
    g.points = rep.points();
    Hecke gen(H.Wp);
    Spectral SG(gen);
    auto grep = SG.classify();
    g.generic_points = grep.points();
    if (all_one) {
        g.label = "group case";
        return g;
    }
    auto name = [&](int c) { return H.class_names[c]; };
    for (int c = 0; c < n; ++c)
        if (*H.class_value[c] == 1) g.relations.push_back(name(c) + " = 1");
    auto pw = [](BigRat q, int k) {
        BigRat r = 1;
        for (int i = 0; i < std::abs(k); ++i) r *= q;
        return k < 0 ? BigRat(1 / r) : r;
    };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            BigRat qa = *H.class_value[a], qb = *H.class_value[b];
            if (qa == 1 || qb == 1) continue;
            for (int k : {1, -1, 2, -2}) {
                if (std::abs(k) == 1 && b < a) continue;
                if (qa == pw(qb, k)) {
                    std::string e = k == 1 ? "" : "^" + (k < 0 ? "(" + std::to_string(k) + ")" : std::to_string(k));
                    g.relations.push_back(name(a) + " = " + name(b) + e);
                }
            }
        }
    std::vector<int> sizes, gsizes;
    for (auto& o : rep.orbits) sizes.push_back(o.dim * 1000 + o.size);
    for (auto& o : grep.orbits) gsizes.push_back(o.dim * 1000 + o.size);
    bool same = sizes == gsizes;
    // a relation that leaves some label trivial or collides candidates
    bool mixed = false;
    for (auto& r : g.relations)
        if (r.size() > 4 && r.substr(r.size() - 4) == " = 1") mixed = true;
    if (g.relations.empty()) g.label = same ? "generic" : "special";
    else {
        std::string s;
        for (size_t i = 0; i < g.relations.size(); ++i) s += (i ? ", " : "") + g.relations[i];
        g.label = s;
    }
    g.special = !mixed && !g.relations.empty();
    return g;
}

} // namespace hk
