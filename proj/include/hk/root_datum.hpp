#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lattice.hpp"

namespace hk {

struct unsupported_family : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct invalid_datum : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Family { Custom, AWeight, ARoot, GL, BRoot, B2Weight };

// A root of R1 together with what the c-function needs to know about it.
struct R1Root {
    IVec root;       // α ∈ R1
    IVec coroot;     // α∨
    int base = -1;   // index in R0 of α (reduced) or of γ with α = 2γ
    bool doubled = false;
    bool positive = false;
};

class RootDatum {
public:
    std::string name = "custom";
    Family family = Family::Custom;
    int family_n = 0;
    int rank = 0;
    IMat pairing;          // <x,y> = x^T P y
    IMat simple_roots;     // rows, X-coordinates
    IMat simple_coroots;   // rows, Y-coordinates

    // derived
    IMat roots, coroots;            // R0 and matching R0∨
    std::vector<bool> positive;
    IMat root_coords;               // roots in F0 coordinates
    std::vector<int> simple_index;  // position of F0 inside roots
    std::vector<R1Root> r1;
    std::vector<std::vector<int>> components; // irreducible components, as F0 index sets

    RootDatum() = default;
    RootDatum(int r, IMat P, IMat f0, IMat f0v) : rank(r), pairing(std::move(P)),
        simple_roots(std::move(f0)), simple_coroots(std::move(f0v)) {
        derive();
    }

    long long pair(const IVec& x, const IVec& y) const {
        long long s = 0;
        for (int i = 0; i < rank; ++i) {
            if (!x[i]) continue;
            for (int j = 0; j < rank; ++j) s += x[i] * pairing[i][j] * y[j];
        }
        return s;
    }
    int nroots() const { return roots.size(); }
    int npos() const { return roots.size() / 2; }
    int nsimple() const { return simple_roots.size(); }
    bool semisimple() const { return nsimple() == rank; }

    int root_index(const IVec& v) const {
        auto it = root_lookup_.find(v);
        return it == root_lookup_.end() ? -1 : it->second;
    }
    IVec reflect(const IVec& x, int i) const { // s_{roots[i]}
        long long k = pair(x, coroots[i]);
        IVec r = x;
        for (int j = 0; j < rank; ++j) r[j] -= k * roots[i][j];
        return r;
    }
    IVec reflect_co(const IVec& y, int i) const {
        long long k = pair(roots[i], y);
        IVec r = y;
        for (int j = 0; j < rank; ++j) r[j] -= k * coroots[i][j];
        return r;
    }
    // matrix of s_{roots[i]} on X (column convention: x -> M x)
    IMat reflection_matrix(int i) const {
        IMat m(rank, IVec(rank));
        for (int c = 0; c < rank; ++c) {
            IVec e(rank, 0);
            e[c] = 1;
            IVec r = reflect(e, i);
            for (int j = 0; j < rank; ++j) m[j][c] = r[j];
        }
        return m;
    }
    bool coroot_in_2Y(int i) const {
        for (auto c : coroots[i])
            if (c % 2) return false;
        return true;
    }

    // highest coroot index (in roots) of component c
    int highest_coroot(int comp) const {
        const auto& cs = components.at(comp);
        int best = -1;
        long long bh = -1;
        for (int i = 0; i < nroots(); ++i) {
            if (!positive[i]) continue;
            auto cc = coroot_coords_[i];
            bool inside = true;
            long long h = 0;
            for (int j = 0; j < nsimple(); ++j) {
                if (cc[j] && std::find(cs.begin(), cs.end(), j) == cs.end()) inside = false;
                h += cc[j];
            }
            if (inside && h > bh) bh = h, best = i;
        }
        return best;
    }

    // Throws invalid_datum describing the first failed axiom.
    void derive() {
        roots.clear();
        coroots.clear();
        root_lookup_.clear();
        int k = simple_roots.size();
        if ((int)pairing.size() != rank) throw invalid_datum("pairing must be rank x rank");
        for (auto& row : pairing)
            if ((int)row.size() != rank) throw invalid_datum("pairing must be rank x rank");
        if ((int)simple_coroots.size() != k) throw invalid_datum("F0 and F0∨ differ in size");
        for (int i = 0; i < k; ++i)
            if ((int)simple_roots[i].size() != rank || (int)simple_coroots[i].size() != rank)
                throw invalid_datum("root vectors must have length rank");
        if (std::llabs(det(pairing)) != 1) throw invalid_datum("pairing is not perfect");
        for (int i = 0; i < k; ++i)
            if (pair(simple_roots[i], simple_coroots[i]) != 2)
                throw invalid_datum("<alpha,alpha^v> = " + std::to_string(pair(simple_roots[i], simple_coroots[i])) +
                                    " != 2 for simple root " + std::to_string(i + 1));
        if (k && rank_of(simple_roots) != k) throw invalid_datum("F0 is not linearly independent");
        // saturate under simple reflections
        std::vector<std::pair<IVec, IVec>> todo;
        auto add = [&](const IVec& a, const IVec& av) {
            if (root_lookup_.count(a)) {
                if (coroots[root_lookup_[a]] != av) throw invalid_datum("root with two coroots");
                return;
            }
            root_lookup_[a] = roots.size();
            roots.push_back(a);
            coroots.push_back(av);
            todo.push_back({a, av});
            if (roots.size() > 2000) throw invalid_datum("root system does not close (not finite)");
        };
        for (int i = 0; i < k; ++i) add(simple_roots[i], simple_coroots[i]);
        while (!todo.empty()) {
            auto [a, av] = todo.back();
            todo.pop_back();
            for (int i = 0; i < k; ++i) {
                long long c = pair(a, simple_coroots[i]);
                IVec b = a;
                for (int j = 0; j < rank; ++j) b[j] -= c * simple_roots[i][j];
                long long cv = pair(simple_roots[i], av);
                IVec bv = av;
                for (int j = 0; j < rank; ++j) bv[j] -= cv * simple_coroots[i][j];
                add(b, bv);
            }
        }
        for (size_t i = 0; i < roots.size(); ++i) {
            if (pair(roots[i], coroots[i]) != 2) throw invalid_datum("<alpha,alpha^v> != 2 for a root");
            IVec n = vneg(roots[i]);
            auto it = root_lookup_.find(n);
            if (it == root_lookup_.end() || coroots[it->second] != vneg(coroots[i]))
                throw invalid_datum("R0 is not symmetric");
            for (size_t j = 0; j < roots.size(); ++j) {
                if (i == j) continue;
                // reducedness: no root is a multiple c*alpha with c != ±1
                IMat m{roots[i], roots[j]};
                if (rank_of(m) == 1 && roots[j] != n) throw invalid_datum("R0 is not reduced");
            }
        }
        // closure under all reflections
        for (size_t i = 0; i < roots.size(); ++i)
            for (size_t j = 0; j < roots.size(); ++j)
                if (!root_lookup_.count(reflect(roots[j], i))) throw invalid_datum("R0 not closed under reflections");
        // F0 coordinates and positivity
        root_coords.assign(roots.size(), IVec(k));
        coroot_coords_.assign(roots.size(), IVec(k));
        positive.assign(roots.size(), false);
        for (size_t i = 0; i < roots.size(); ++i) {
            auto c = coords(simple_roots, roots[i]);
            auto cv = coords(simple_coroots, coroots[i]);
            if (!c || !cv) throw invalid_datum("F0 is not a basis of R0");
            bool pos = true, neg = true;
            for (auto x : *c) pos &= x >= 0, neg &= x <= 0;
            if (!pos && !neg) throw invalid_datum("root with mixed-sign F0 coordinates");
            root_coords[i] = *c;
            coroot_coords_[i] = *cv;
            positive[i] = pos;
        }
        // sort: positives first by height, then negatives in the same order
        std::vector<int> order;
        for (size_t i = 0; i < roots.size(); ++i)
            if (positive[i]) order.push_back(i);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            long long ha = 0, hb = 0;
            for (auto x : root_coords[a]) ha += x;
            for (auto x : root_coords[b]) hb += x;
            if (ha != hb) return ha < hb;
            return root_coords[a] > root_coords[b];
        });
        std::vector<int> full = order;
        for (int i : order) full.push_back(root_lookup_[vneg(roots[i])]);
        IMat r2, c2, rc2, cc2;
        for (int i : full) {
            r2.push_back(roots[i]);
            c2.push_back(coroots[i]);
            rc2.push_back(root_coords[i]);
            cc2.push_back(coroot_coords_[i]);
        }
        roots = r2, coroots = c2, root_coords = rc2, coroot_coords_ = cc2;
        positive.assign(roots.size(), false);
        for (size_t i = 0; i < order.size(); ++i) positive[i] = true;
        root_lookup_.clear();
        for (size_t i = 0; i < roots.size(); ++i) root_lookup_[roots[i]] = i;
        simple_index.clear();
        for (int i = 0; i < k; ++i) simple_index.push_back(root_lookup_[simple_roots[i]]);
        // components of the Dynkin diagram
        components.clear();
        std::vector<int> comp(k, -1);
        for (int i = 0; i < k; ++i) {
            if (comp[i] >= 0) continue;
            int c = components.size();
            components.push_back({});
            std::vector<int> st{i};
            comp[i] = c;
            while (!st.empty()) {
                int a = st.back();
                st.pop_back();
                components[c].push_back(a);
                for (int b = 0; b < k; ++b)
                    if (comp[b] < 0 && pair(simple_roots[a], simple_coroots[b]) != 0) comp[b] = c, st.push_back(b);
            }
            std::sort(components[c].begin(), components[c].end());
        }
        // R1
        r1.clear();
        for (int i = 0; i < nroots(); ++i) {
            R1Root r;
            r.base = i;
            r.positive = positive[i];
            if (coroot_in_2Y(i)) {
                r.doubled = true;
                r.root = vscale(roots[i], 2);
                r.coroot = coroots[i];
                for (auto& x : r.coroot) x /= 2;
            } else {
                r.root = roots[i];
                r.coroot = coroots[i];
            }
            r1.push_back(r);
        }
    }

    nlohmann::json to_json() const {
        return {{"name", name}, {"rank", rank}, {"pairing", pairing},
                {"simple_roots", simple_roots}, {"simple_coroots", simple_coroots}};
    }
    static RootDatum from_json(const nlohmann::json& j) {
        RootDatum d;
        d.rank = j.at("rank").get<int>();
        d.pairing = j.at("pairing").get<IMat>();
        d.simple_roots = j.at("simple_roots").get<IMat>();
        d.simple_coroots = j.at("simple_coroots").get<IMat>();
        if (j.contains("name")) d.name = j["name"].get<std::string>();
        d.derive();
        return d;
    }

private:
    std::map<IVec, int> root_lookup_;
    IMat coroot_coords_;

    static int rank_of(const IMat& m) { return hk::rank(m); }
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> failures;
};

inline ValidationReport validate(const RootDatum& d) {
    ValidationReport rep;
    RootDatum copy = d;
    try {
        copy.derive();
    } catch (const invalid_datum& e) {
        rep.ok = false;
        rep.failures.push_back(e.what());
    }
    return rep;
}

// Build without deriving; lets validate() see the raw input.
inline RootDatum raw_datum(int r, IMat P, IMat f0, IMat f0v) {
    RootDatum d;
    d.rank = r;
    d.pairing = std::move(P);
    d.simple_roots = std::move(f0);
    d.simple_coroots = std::move(f0v);
    return d;
}

inline RootDatum dual(const RootDatum& d) {
    RootDatum e(d.rank, transpose(d.pairing), d.simple_coroots, d.simple_roots);
    e.name = d.name + "^v";
    return e;
}

inline RootDatum product(const RootDatum& a, const RootDatum& b) {
    int r = a.rank + b.rank;
    IMat P(r, IVec(r, 0));
    for (int i = 0; i < a.rank; ++i)
        for (int j = 0; j < a.rank; ++j) P[i][j] = a.pairing[i][j];
    for (int i = 0; i < b.rank; ++i)
        for (int j = 0; j < b.rank; ++j) P[a.rank + i][a.rank + j] = b.pairing[i][j];
    auto lift = [&](const IVec& v, int off) {
        IVec w(r, 0);
        for (size_t i = 0; i < v.size(); ++i) w[off + i] = v[i];
        return w;
    };
    IMat f, fv;
    for (int i = 0; i < a.nsimple(); ++i) f.push_back(lift(a.simple_roots[i], 0)), fv.push_back(lift(a.simple_coroots[i], 0));
    for (int i = 0; i < b.nsimple(); ++i)
        f.push_back(lift(b.simple_roots[i], a.rank)), fv.push_back(lift(b.simple_coroots[i], a.rank));
    RootDatum d(r, P, f, fv);
    d.name = a.name + "x" + b.name;
    return d;
}

// vector in Z^(n-1) representing ē_i - ē_j of Z^n / Z(1,...,1), basis ē_1..ē_{n-1}
inline IVec quotient_diff(int n, int i, int j) {
    IVec v(n - 1, 0);
    auto addv = [&](int idx, long long c) {
        if (idx < n - 1) v[idx] += c;
        else
            for (auto& x : v) x -= c;
    };
    addv(i, 1);
    addv(j, -1);
    return v;
}

inline RootDatum build_family(Family f, int n) {
    RootDatum d;
    switch (f) {
    case Family::GL: {
        if (n < 1) throw unsupported_family("GL needs n >= 1");
        IMat F, Fv;
        for (int i = 0; i + 1 < n; ++i) {
            IVec a(n, 0);
            a[i] = 1, a[i + 1] = -1;
            F.push_back(a), Fv.push_back(a);
        }
        d = RootDatum(n, identity(n), F, Fv);
        d.name = "GL" + std::to_string(n);
        break;
    }
    case Family::AWeight: {
        if (n < 2) throw unsupported_family("A_weight needs n >= 2");
        int r = n - 1;
        IMat P(r, IVec(r, 0));
        for (int j = 0; j < r; ++j)
            for (int i = 0; i < r; ++i) P[j][i] = (i == j) - (j == i + 1);
        IMat F, Fv;
        for (int i = 0; i < r; ++i) {
            F.push_back(quotient_diff(n, i, i + 1));
            IVec c(r, 0);
            c[i] = 1;
            Fv.push_back(c);
        }
        d = RootDatum(r, P, F, Fv);
        d.name = "A" + std::to_string(r) + "~";
        break;
    }
    case Family::ARoot: {
        if (n < 2) throw unsupported_family("A_root needs n >= 2");
        int r = n - 1;
        IMat P(r, IVec(r, 0));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) P[i][j] = (i == j) - (i + 1 == j);
        IMat F, Fv;
        for (int i = 0; i < r; ++i) {
            IVec a(r, 0);
            a[i] = 1;
            F.push_back(a);
            Fv.push_back(quotient_diff(n, i, i + 1));
        }
        d = RootDatum(r, P, F, Fv);
        d.name = "A" + std::to_string(r);
        break;
    }
    case Family::BRoot: {
        if (n < 1) throw unsupported_family("B_root needs n >= 1");
        IMat F, Fv;
        for (int i = 0; i + 1 < n; ++i) {
            IVec a(n, 0);
            a[i] = 1, a[i + 1] = -1;
            F.push_back(a), Fv.push_back(a);
        }
        IVec a(n, 0), av(n, 0);
        a[n - 1] = 1, av[n - 1] = 2;
        F.push_back(a), Fv.push_back(av);
        d = RootDatum(n, identity(n), F, Fv);
        d.name = "B" + std::to_string(n) + "root";
        break;
    }
    case Family::B2Weight: {
        if (n != 2) throw unsupported_family("B2_weight is fixed at n = 2");
        d = RootDatum(2, identity(2), {{2, 0}, {-1, 1}}, {{1, 0}, {-1, 1}});
        d.name = "B2";
        break;
    }
    default:
        throw unsupported_family("unknown family");
    }
    d.family = f;
    d.family_n = n;
    return d;
}

// Shorthand: "A1~" weight lattice of rank 1, "A2" root lattice, "GL3", "B2", "B3".
inline RootDatum family_from_string(const std::string& s) {
    auto num = [&](size_t from, size_t to) {
        std::string t = s.substr(from, to - from);
        if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
            throw unsupported_family("unsupported family '" + s + "'");
        return std::stoi(t);
    };
    if (s.rfind("GL", 0) == 0) return build_family(Family::GL, num(2, s.size()));
    if (s.rfind("A", 0) == 0) {
        bool weight = !s.empty() && s.back() == '~';
        int n = num(1, s.size() - (weight ? 1 : 0));
        if (n < 1) throw unsupported_family("unsupported family '" + s + "'");
        return build_family(weight ? Family::AWeight : Family::ARoot, n + 1);
    }
    if (s == "B2") return build_family(Family::B2Weight, 2);
    if (s.rfind("B", 0) == 0) {
        bool root = s.size() > 4 && s.substr(s.size() - 4) == "root";
        int n = num(1, s.size() - (root ? 4 : 0));
        return build_family(Family::BRoot, n);
    }
    throw unsupported_family("unsupported family '" + s + "'");
}

struct ParabolicData {
    std::vector<int> P;          // indices into F0
    std::vector<int> R_P;        // root indices in QP
    IMat X_P_kernel;             // X ∩ (P∨)^⊥, so X_P = X / this
    IMat X_upper_kernel;         // X ∩ QP, so X^P = X / this
    IMat Y_P;                    // Y ∩ QP∨
    IMat Y_upper;                // Y ∩ P^⊥
    std::vector<long long> K_P;  // invariant factors of K_P
};

inline ParabolicData parabolic(const RootDatum& d, const std::vector<int>& P) {
    ParabolicData pd;
    pd.P = P;
    int r = d.rank;
    IMat PR, PC;
    for (int i : P) {
        if (i < 0 || i >= d.nsimple()) throw std::invalid_argument("P must be a subset of F0");
        PR.push_back(d.simple_roots[i]);
        PC.push_back(d.simple_coroots[i]);
    }
    for (int i = 0; i < d.nroots(); ++i)
        if (in_span_q(PR, d.roots[i])) pd.R_P.push_back(i);
    // X ∩ (P∨)^⊥: x with <x, p∨> = 0
    IMat A, B;
    for (auto& c : PC) A.push_back(matvec(d.pairing, c));
    pd.X_P_kernel = A.empty() ? identity(r) : int_kernel(A, r);
    pd.X_upper_kernel = saturate(PR, r);
    pd.Y_P = saturate(PC, r);
    IMat PT = transpose(d.pairing);
    for (auto& a : PR) B.push_back(matvec(PT, a));
    pd.Y_upper = B.empty() ? identity(r) : int_kernel(B, r);
    IMat N = pd.X_P_kernel;
    for (auto& v : pd.X_upper_kernel) N.push_back(v);
    pd.K_P = torsion_factors(N, r);
    return pd;
}

} // namespace hk
