#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "root_datum.hpp"

namespace hk {

struct size_limit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// t_x * w, with w an index into the finite Weyl group
struct AffElem {
    IVec x;
    int w = 0;
    friend bool operator==(const AffElem& a, const AffElem& b) { return a.w == b.w && a.x == b.x; }
    friend bool operator<(const AffElem& a, const AffElem& b) {
        if (a.x != b.x) return a.x < b.x;
        return a.w < b.w;
    }
};

struct ConjClass {
    int rep;
    std::vector<int> members;
    std::string label;
};

class Weyl {
public:
    RootDatum d;
    int r = 0;

    // finite group
    std::vector<IMat> mat;                 // action on X
    std::vector<std::vector<int>> perm;    // action on root indices
    std::vector<int> inv, len;
    std::vector<std::vector<int>> word;    // reduced word, 0-based simple indices
    std::vector<int> simple_elem;          // element index of s_i
    std::vector<int> refl_elem;            // element index of s_alpha for each root

    // affine data
    std::vector<AffElem> gens;             // S_aff
    std::vector<std::string> gen_names;
    std::vector<int> gen_number;           // numeric index used in names: s0, s1, ...
    std::vector<int> gen_root;             // root index of the reflection part
    std::vector<bool> gen_affine;
    std::vector<AffElem> omega_gens;       // generators of Omega
    std::vector<long long> omega_orders;   // 0 = infinite order
    std::vector<int> omega_free;           // which omega_gens are free

    explicit Weyl(RootDatum datum, size_t max_order = 200000) : d(std::move(datum)), r(d.rank) {
        build_finite(max_order);
        build_affine();
        build_length_config();
    }

    int order() const { return mat.size(); }
    int identity_elem() const { return 0; }

    int mul(int a, int b) const {
        std::uint64_t k = 0;
        for (int i = 0; i < d.nsimple(); ++i) k = k * 256 + perm[a][perm[b][d.simple_index[i]]];
        return lookup_.at(k);
    }
    int elem_from_perm(const std::vector<int>& p) const {
        std::uint64_t k = 0;
        for (int i = 0; i < d.nsimple(); ++i) k = k * 256 + p[d.simple_index[i]];
        return lookup_.at(k);
    }
    int elem_from_matrix(const IMat& m) const {
        std::uint64_t k = 0;
        for (int i = 0; i < d.nsimple(); ++i) {
            int j = d.root_index(matvec(m, d.simple_roots[i]));
            if (j < 0) throw std::invalid_argument("matrix does not permute R0");
            k = k * 256 + j;
        }
        auto it = lookup_.find(k);
        if (it == lookup_.end() || mat[it->second] != m) throw std::invalid_argument("matrix not in W0");
        return it->second;
    }
    IVec act(int w, const IVec& x) const { return matvec(mat[w], x); }

    // ---- affine group ----
    AffElem identity() const { return {IVec(r, 0), 0}; }
    AffElem translation(const IVec& x) const { return {x, 0}; }
    AffElem finite(int w) const { return {IVec(r, 0), w}; }
    AffElem compose(const AffElem& a, const AffElem& b) const { return {vadd(a.x, act(a.w, b.x)), mul(a.w, b.w)}; }
    AffElem inverse(const AffElem& a) const { return {vneg(act(inv[a.w], a.x)), inv[a.w]}; }
    IVec act(const AffElem& a, const IVec& v) const { return vadd(a.x, act(a.w, v)); }

    int length(const AffElem& a) const {
        IVec xp = act(inv[a.w], a.x); // t_x u = u t_{u^{-1}x}
        int l = 0;
        const auto& p = perm[a.w];
        for (int i = 0; i < d.npos(); ++i) {
            long long k = d.pair(xp, d.coroots[i]);
            if (!d.positive[p[i]]) l += std::llabs(k + 1);
            else l += std::llabs(k);
        }
        return l;
    }

    // greedy reduced word: w = s_{i1} ... s_{ik} omega
    std::pair<std::vector<int>, AffElem> reduced_word(AffElem w) const {
        std::vector<int> out;
        int l = length(w);
        while (l > 0) {
            bool found = false;
            for (size_t p = 0; p < gens.size(); ++p) {
                AffElem v = compose(gens[p], w);
                int lv = length(v);
                if (lv < l) {
                    out.push_back(p);
                    w = v;
                    l = lv;
                    found = true;
                    break;
                }
            }
            if (!found) throw std::logic_error("no descent found");
        }
        return {out, w};
    }
    AffElem from_word(const std::vector<int>& word, const AffElem& omega) const {
        AffElem w = omega;
        for (auto it = word.rbegin(); it != word.rend(); ++it) w = compose(gens[*it], w);
        return w;
    }

    std::string gen_name(int p) const { return gen_names[p]; }
    int gen_by_name(const std::string& n) const {
        for (size_t p = 0; p < gens.size(); ++p)
            if (gen_names[p] == n) return p;
        return -1;
    }
    // order of a*b for generators a, b (0 when infinite)
    int coxeter_m(int a, int b) const {
        AffElem g = compose(gens[a], gens[b]), x = g;
        for (int m = 1; m <= 12; ++m) {
            if (x == identity()) return m;
            x = compose(x, g);
        }
        return 0;
    }

    // all of Omega when finite
    std::vector<AffElem> omega_elements() const {
        std::vector<AffElem> out{identity()};
        for (size_t i = 0; i < out.size(); ++i) {
            if (out.size() > 10000) throw size_limit("Omega is infinite");
            for (auto& g : omega_gens) {
                AffElem y = compose(g, out[i]);
                if (std::find(out.begin(), out.end(), y) == out.end()) out.push_back(y);
            }
        }
        return out;
    }
    bool omega_finite() const { return omega_free.empty(); }

    std::string elem_str(const AffElem& a) const {
        auto [w, om] = reduced_word(a);
        std::string s;
        for (int p : w) s += (s.empty() ? "" : " ") + gen_names[p];
        if (!(om == identity())) s += (s.empty() ? "" : " ") + omega_str(om);
        return s.empty() ? "e" : s;
    }
    std::string omega_str(const AffElem& om) const {
        std::ostringstream os;
        os << "omega" << vec_str(om.x);
        if (om.w) {
            os << "[";
            for (int i : word[om.w]) os << "s" << (i + 1);
            os << "]";
        }
        return os.str();
    }

    // ---- the f / script-N length ----
    IMat center_basis;      // integer basis of X^{W0} ∩ X
    RMat f_coeff;           // for each X basis vector, its coordinates along center_basis
    long long f_scale = 1;

    long long f(const IVec& x) const {
        if (center_basis.empty()) return 0;
        Rat s = 0;
        for (size_t j = 0; j < center_basis.size(); ++j) {
            Rat c = 0;
            for (int i = 0; i < r; ++i)
                if (x[i]) c += Rat(x[i]) * f_coeff[i][j];
            s += c < Rat(0) ? -c : c;
        }
        s *= Rat(f_scale);
        return s.num();
    }
    long long script_N(const AffElem& w) const { return length(w) + f(w.x); }

    // ---- conjugacy classes ----
    std::vector<ConjClass> conj_classes() const {
        std::vector<int> cls(order(), -1);
        std::vector<ConjClass> out;
        for (int w = 0; w < order(); ++w) {
            if (cls[w] >= 0) continue;
            ConjClass c;
            c.rep = w;
            std::vector<int> st{w};
            cls[w] = out.size();
            while (!st.empty()) {
                int a = st.back();
                st.pop_back();
                c.members.push_back(a);
                for (int s : simple_elem) {
                    int b = mul(mul(s, a), s);
                    if (cls[b] < 0) cls[b] = out.size(), st.push_back(b);
                }
            }
            std::sort(c.members.begin(), c.members.end());
            c.label = class_label(w);
            out.push_back(std::move(c));
        }
        return out;
    }
    std::vector<int> centralizer(int w) const {
        std::vector<int> z;
        for (int g = 0; g < order(); ++g)
            if (mul(g, w) == mul(w, g)) z.push_back(g);
        return z;
    }

    std::string class_label(int w) const {
        switch (d.family) {
        case Family::GL:
        case Family::AWeight:
        case Family::ARoot:
            return partition_label(w);
        case Family::BRoot:
        case Family::B2Weight:
            return bipartition_label(w);
        default:
            return "c" + std::to_string(w);
        }
    }

    // (rank of ker(1-w), invariant factors of the torsion of X/(1-w)X)
    std::pair<int, std::vector<long long>> fixed_subtorus(int w) const {
        IMat a = mat[w];
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) a[i][j] = (i == j) - a[i][j];
        int rk = hk::rank(a);
        return {r - rk, torsion_factors(transpose(a), r)};
    }

private:
    std::unordered_map<std::uint64_t, int> lookup_;

    void build_finite(size_t max_order) {
        int k = d.nsimple();
        if (d.nroots() > 255 || k > 8) throw size_limit("root system too large for the W0 enumerator");
        std::vector<int> idp(d.nroots());
        std::iota(idp.begin(), idp.end(), 0);
        auto key_of = [&](const std::vector<int>& p) {
            std::uint64_t key = 0;
            for (int i = 0; i < k; ++i) key = key * 256 + p[d.simple_index[i]];
            return key;
        };
        std::vector<std::vector<int>> sperm(k);
        std::vector<IMat> smat(k);
        for (int i = 0; i < k; ++i) {
            int ri = d.simple_index[i];
            smat[i] = d.reflection_matrix(ri);
            sperm[i].resize(d.nroots());
            for (int j = 0; j < d.nroots(); ++j) sperm[i][j] = d.root_index(d.reflect(d.roots[j], ri));
        }
        mat.push_back(hk::identity(r));
        perm.push_back(idp);
        word.push_back({});
        len.push_back(0);
        lookup_[key_of(idp)] = 0;
        for (size_t a = 0; a < mat.size(); ++a) {
            for (int i = 0; i < k; ++i) {
                std::vector<int> p(d.nroots());
                for (int j = 0; j < d.nroots(); ++j) p[j] = sperm[i][perm[a][j]];
                auto key = key_of(p);
                if (lookup_.count(key)) continue;
                if (mat.size() >= max_order) throw size_limit("W0 too large for enumeration");
                lookup_[key] = mat.size();
                mat.push_back(matmul(smat[i], mat[a]));
                perm.push_back(p);
                std::vector<int> wd{i};
                wd.insert(wd.end(), word[a].begin(), word[a].end());
                word.push_back(wd);
                len.push_back(len[a] + 1);
            }
        }
        inv.resize(mat.size());
        for (size_t a = 0; a < mat.size(); ++a) {
            std::vector<int> p(d.nroots());
            for (int j = 0; j < d.nroots(); ++j) p[perm[a][j]] = j;
            inv[a] = elem_from_perm(p);
        }
        for (int i = 0; i < k; ++i) simple_elem.push_back(elem_from_perm(sperm[i]));
        refl_elem.resize(d.nroots());
        for (int j = 0; j < d.nroots(); ++j) {
            std::vector<int> p(d.nroots());
            for (int m = 0; m < d.nroots(); ++m) p[m] = d.root_index(d.reflect(d.roots[m], j));
            refl_elem[j] = elem_from_perm(p);
        }
    }

    void build_affine() {
        int k = d.nsimple();
        std::vector<AffElem> aff;
        std::vector<int> aff_root;
        for (size_t c = 0; c < d.components.size(); ++c) {
            int h = d.highest_coroot(c);
            aff.push_back({d.roots[h], refl_elem[h]});
            aff_root.push_back(h);
        }
        // order: s0 (first component), s1..sk, then further affine reflections
        if (!aff.empty()) {
            gens.push_back(aff[0]);
            gen_names.push_back("s0");
            gen_number.push_back(0);
            gen_root.push_back(aff_root[0]);
            gen_affine.push_back(true);
        }
        for (int i = 0; i < k; ++i) {
            gens.push_back(finite(simple_elem[i]));
            gen_names.push_back("s" + std::to_string(i + 1));
            gen_number.push_back(i + 1);
            gen_root.push_back(d.simple_index[i]);
            gen_affine.push_back(false);
        }
        for (size_t c = 1; c < aff.size(); ++c) {
            gens.push_back(aff[c]);
            int num = k + c;
            gen_names.push_back("s" + std::to_string(num));
            gen_number.push_back(num);
            gen_root.push_back(aff_root[c]);
            gen_affine.push_back(true);
        }
        // Omega generators from X/Q
        SNF s = smith(d.simple_roots, r);
        IMat b = inverse_unimodular(s.V);
        for (int i = 0; i < r; ++i) {
            long long ord = i < s.rank ? s.diag[i] : 0;
            if (ord == 1) continue;
            AffElem w = translation(b[i]);
            int l = length(w);
            while (l > 0) {
                bool found = false;
                for (auto& g : gens) {
                    AffElem v = compose(g, w);
                    int lv = length(v);
                    if (lv < l) {
                        w = v, l = lv, found = true;
                        break;
                    }
                }
                if (!found) throw std::logic_error("Omega reduction failed");
            }
            if (ord == 0) omega_free.push_back(omega_gens.size());
            omega_gens.push_back(w);
            omega_orders.push_back(ord);
        }
    }

    void build_length_config() {
        IMat A;
        for (auto& c : d.simple_coroots) A.push_back(matvec(d.pairing, c));
        center_basis = A.empty() ? hk::identity(r) : int_kernel(A, r);
        if (center_basis.empty()) return;
        // decompose each basis vector e_i = q + z, q ∈ Q_Q, z ∈ span(center_basis)
        int k = d.nsimple(), m = center_basis.size();
        RMat M(r, RVec(k + m));
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < k; ++j) M[i][j] = d.simple_roots[j][i];
            for (int j = 0; j < m; ++j) M[i][k + j] = center_basis[j][i];
        }
        f_coeff.assign(r, RVec(m));
        long long l = 1;
        for (int i = 0; i < r; ++i) {
            RVec e(r, Rat(0));
            e[i] = 1;
            auto c = solve(M, e);
            for (int j = 0; j < m; ++j) {
                f_coeff[i][j] = (*c)[k + j];
                l = lcm_ll(l, f_coeff[i][j].den());
            }
        }
        f_scale = l;
    }

    // cycle type of the permutation action on Z^n from traces of powers
    std::string partition_label(int w) const {
        int n = d.family_n;
        int extra = (d.family == Family::GL) ? 0 : 1;
        std::vector<int> c(n + 1, 0);
        std::vector<int> fix(n + 1, 0); // fix[m] = # points fixed by w^m = trace on Z^n
        for (int m = 1; m <= n; ++m) {
            IMat p = hk::identity(r);
            for (int i = 0; i < m; ++i) p = matmul(p, mat[w]);
            long long tr = 0;
            for (int i = 0; i < r; ++i) tr += p[i][i];
            fix[m] = tr + extra;
        }
        // fix[m] = Σ_{j | m} j c_j
        for (int m = 1; m <= n; ++m) {
            int s = fix[m];
            for (int j = 1; j < m; ++j)
                if (m % j == 0) s -= j * c[j];
            c[m] = s / m;
        }
        std::vector<int> parts;
        for (int m = n; m >= 1; --m)
            for (int i = 0; i < c[m]; ++i) parts.push_back(m);
        std::string out;
        for (size_t i = 0; i < parts.size(); ++i) out += (i ? "+" : "") + std::to_string(parts[i]);
        return out;
    }

    // signed cycle type (μ|λ): μ positive cycles, λ negative cycles
    std::string bipartition_label(int w) const {
        const IMat& m = mat[w];
        std::vector<int> img(r), sgn(r);
        for (int c = 0; c < r; ++c)
            for (int i = 0; i < r; ++i)
                if (m[i][c]) img[c] = i, sgn[c] = m[i][c];
        std::vector<bool> seen(r, false);
        std::vector<int> pos, neg;
        for (int i = 0; i < r; ++i) {
            if (seen[i]) continue;
            int len = 0, s = 1, j = i;
            while (!seen[j]) {
                seen[j] = true;
                s *= sgn[j];
                j = img[j];
                ++len;
            }
            (s > 0 ? pos : neg).push_back(len);
        }
        std::sort(pos.rbegin(), pos.rend());
        std::sort(neg.rbegin(), neg.rend());
        auto j = [](const std::vector<int>& v) {
            std::string s;
            for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
            return s;
        };
        return "(" + j(pos) + "|" + j(neg) + ")";
    }
};

// ---- word-length oracle and growth census ----

// BFS distances in (W_aff, S_aff) from the identity, up to max_len.
inline std::map<AffElem, int> waff_ball(const Weyl& W, int max_len) {
    std::map<AffElem, int> dist;
    std::vector<AffElem> frontier{W.identity()};
    dist[W.identity()] = 0;
    for (int l = 1; l <= max_len; ++l) {
        std::vector<AffElem> next;
        for (auto& a : frontier)
            for (auto& g : W.gens) {
                AffElem b = W.compose(g, a);
                if (dist.emplace(b, l).second) next.push_back(b);
            }
        frontier.swap(next);
    }
    return dist;
}

struct BallCensus {
    std::vector<long long> counts; // #{w : N(w) = n}
    double C = 0;
    bool bound_ok = true;
    int first_failure = -1;
};

inline BallCensus ball_census(const Weyl& W, int n_max) {
    BallCensus bc;
    // W_aff level sizes by BFS
    std::vector<long long> A(n_max + 1, 0);
    for (auto& [e, l] : waff_ball(W, n_max)) A[l]++;
    // torsion of X/Q and the free part
    SNF s = smith(W.d.simple_roots, W.r);
    IMat b = inverse_unimodular(s.V);
    long long tors = 1;
    for (long long x : s.diag) tors *= x;
    IMat freeb(b.begin() + s.rank, b.end());
    std::vector<long long> fcount(n_max + 1, 0); // classes of X/Q with f = n (free part)
    int a = freeb.size();
    if (a == 0) fcount[0] = 1;
    else {
        auto fval = [&](const IVec& c) {
            IVec x(W.r, 0);
            for (int i = 0; i < a; ++i) x = vadd(x, vscale(freeb[i], c[i]));
            return W.f(x);
        };
        int B = 1;
        for (;; ++B) {
            // does the boundary of the box still hold small values?
            bool small = false;
            IVec c(a, -B);
            for (;;) {
                bool boundary = false;
                for (auto v : c) boundary |= std::llabs(v) == B;
                if (boundary && fval(c) <= n_max) small = true;
                int i = 0;
                while (i < a && c[i] == B) c[i] = -B, ++i;
                if (i == a) break;
                ++c[i];
            }
            if (!small) break;
        }
        IVec c(a, -B);
        for (;;) {
            long long v = fval(c);
            if (v <= n_max) fcount[v]++;
            int i = 0;
            while (i < a && c[i] == B) c[i] = -B, ++i;
            if (i == a) break;
            ++c[i];
        }
    }
    bc.counts.assign(n_max + 1, 0);
    for (int n = 0; n <= n_max; ++n)
        for (int k = 0; k <= n; ++k) bc.counts[n] += tors * fcount[k] * A[n - k];
    int r = W.r;
    double C = double(W.order()) * W.order() * 2 * std::pow(W.d.nroots() + 2.0, r);
    for (int n = 0; n <= std::min(n_max, W.d.nroots()); ++n)
        C = std::max(C, 1.0001 * bc.counts[n] / std::pow(n + 1.0, r - 1));
    bc.C = C;
    for (int n = 0; n <= n_max; ++n)
        if (!(bc.counts[n] < C * std::pow(n + 1.0, r - 1))) {
            bc.bound_ok = false;
            if (bc.first_failure < 0) bc.first_failure = n;
        }
    return bc;
}

} // namespace hk
