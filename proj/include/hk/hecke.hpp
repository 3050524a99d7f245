#pragma once

#include <algorithm>
#include <cmath>
#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "laurent.hpp"
#include "weyl.hpp"

namespace hk {

struct degenerate_label : std::domain_error {
    using std::domain_error::domain_error;
};
struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// How each label class is specified: by a symbol (shared symbols identify
// classes) or by a positive rational.
struct LabelSpec {
    std::map<int, std::string> symbol; // class -> symbol
    std::map<int, BigRat> value;       // class -> numeric value
};

using HeckeElement = std::map<AffElem, LaurentPoly>;

struct BKey {
    int w;
    IVec x;
    friend bool operator<(const BKey& a, const BKey& b) {
        if (a.w != b.w) return a.w < b.w;
        return a.x < b.x;
    }
    friend bool operator==(const BKey& a, const BKey& b) { return a.w == b.w && a.x == b.x; }
};
// Σ c N_w θ_x with w ∈ W0
using BernsteinElement = std::map<BKey, LaurentPoly>;

template <class K>
inline void add_term(std::map<K, LaurentPoly>& m, const K& k, const LaurentPoly& c) {
    if (c.is_zero()) return;
    auto it = m.find(k);
    if (it == m.end()) m.emplace(k, c);
    else {
        it->second += c;
        if (it->second.is_zero()) m.erase(it);
    }
}
template <class K>
inline std::map<K, LaurentPoly> lin_comb(const std::map<K, LaurentPoly>& a, const std::map<K, LaurentPoly>& b,
                                         const LaurentPoly& cb = 1) {
    auto r = a;
    for (auto& [k, c] : b) add_term(r, k, c * cb);
    return r;
}
template <class K>
inline std::map<K, LaurentPoly> scaled(const std::map<K, LaurentPoly>& a, const LaurentPoly& s) {
    std::map<K, LaurentPoly> r;
    for (auto& [k, c] : a) add_term(r, k, c * s);
    return r;
}

// An element num / den with den a scalar Laurent polynomial.
struct FracHecke {
    HeckeElement num;
    LaurentPoly den;
};

class Hecke {
public:
    std::shared_ptr<const Weyl> Wp;
    const Weyl& W;

    std::vector<int> gen_class;                 // S_aff position -> class
    std::vector<std::string> class_names;
    std::vector<std::vector<int>> class_members;
    LabelVars vars;
    std::vector<int> class_var;
    std::vector<std::optional<BigRat>> class_value;
    std::vector<LaurentPoly> gen_v, gen_eta;    // q_s^{1/2}, η_s per S_aff position

    explicit Hecke(std::shared_ptr<const Weyl> w, const LabelSpec& spec = {}) : Wp(std::move(w)), W(*Wp) {
        build_classes();
        build_vars(spec);
    }

    int nclasses() const { return class_names.size(); }
    bool numeric() const {
        for (auto& v : class_value)
            if (!v) return false;
        return true;
    }
    // all numeric labels as an assignment of the variables
    LabelAssignment assignment() const {
        LabelAssignment a;
        for (int c = 0; c < nclasses(); ++c)
            if (class_value[c]) a.set(vars.names()[class_var[c]], *class_value[c]);
        return a;
    }
    std::vector<double> var_values_double() const {
        std::vector<double> q(vars.size(), 0);
        for (int c = 0; c < nclasses(); ++c) {
            if (!class_value[c]) throw unbound_label("label " + class_names[c] + " is symbolic");
            q[class_var[c]] = class_value[c]->convert_to<double>();
        }
        return q;
    }
    std::vector<BigRat> var_values_exact() const {
        std::vector<BigRat> q(vars.size(), 0);
        for (int c = 0; c < nclasses(); ++c) {
            if (!class_value[c]) throw unbound_label("label " + class_names[c] + " is symbolic");
            q[class_var[c]] = *class_value[c];
        }
        return q;
    }

    // class of an affine reflection, by conjugating it down to S_aff
    int reflection_class(AffElem r) const {
        int l = W.length(r);
        while (l > 1) {
            bool found = false;
            for (size_t p = 0; p < W.gens.size(); ++p) {
                AffElem c = W.compose(W.compose(W.gens[p], r), W.gens[p]);
                int lc = W.length(c);
                if (lc < l) {
                    r = c, l = lc, found = true;
                    break;
                }
            }
            if (!found) throw std::logic_error("reflection reduction failed");
        }
        for (size_t p = 0; p < W.gens.size(); ++p)
            if (W.gens[p] == r) return gen_class[p];
        throw std::logic_error("not a reflection");
    }
    // class of s_alpha and of t_alpha s_alpha for root index i
    int finite_reflection_class(int i) const { return reflection_class(W.finite(W.refl_elem[i])); }
    int affine_reflection_class(int i) const { return reflection_class({W.d.roots[i], W.refl_elem[i]}); }

    // label q(w)^{1/2}
    LaurentPoly q_half(const AffElem& w) const {
        auto [word, om] = W.reduced_word(w);
        LaurentPoly r = 1;
        for (int p : word) r *= gen_v[p];
        return r;
    }
    LaurentPoly class_v(int c, int k = 1) const { return LaurentPoly::var(vars, class_var[c], k); }
    LaurentPoly class_eta(int c) const { return LaurentPoly::eta(vars, class_var[c]); }

    // ---- N basis arithmetic ----
    HeckeElement basis(const AffElem& w) const { return {{w, LaurentPoly(1)}}; }
    HeckeElement unit() const { return basis(W.identity()); }
    HeckeElement scalar(const LaurentPoly& c) const {
        HeckeElement h;
        add_term(h, W.identity(), c);
        return h;
    }

    HeckeElement left_gen(int p, const HeckeElement& h) const {
        HeckeElement r;
        for (auto& [v, c] : h) {
            AffElem sv = W.compose(W.gens[p], v);
            add_term(r, sv, c);
            if (W.length(sv) < W.length(v)) add_term(r, v, c * gen_eta[p]);
        }
        return r;
    }
    HeckeElement right_gen(const HeckeElement& h, int p) const {
        HeckeElement r;
        for (auto& [v, c] : h) {
            AffElem vs = W.compose(v, W.gens[p]);
            add_term(r, vs, c);
            if (W.length(vs) < W.length(v)) add_term(r, v, c * gen_eta[p]);
        }
        return r;
    }
    HeckeElement left_elem_length0(const AffElem& om, const HeckeElement& h) const {
        HeckeElement r;
        for (auto& [v, c] : h) add_term(r, W.compose(om, v), c);
        return r;
    }
    HeckeElement right_elem_length0(const HeckeElement& h, const AffElem& om) const {
        HeckeElement r;
        for (auto& [v, c] : h) add_term(r, W.compose(v, om), c);
        return r;
    }
    // N_u * h
    HeckeElement left_basis(const AffElem& u, const HeckeElement& h) const {
        auto [word, om] = W.reduced_word(u);
        HeckeElement r = left_elem_length0(om, h);
        for (auto it = word.rbegin(); it != word.rend(); ++it) r = left_gen(*it, r);
        return r;
    }
    HeckeElement mul(const HeckeElement& a, const HeckeElement& b) const {
        HeckeElement r;
        for (auto& [u, c] : a) {
            HeckeElement t = left_basis(u, b);
            for (auto& [w, d] : t) add_term(r, w, c * d);
        }
        return r;
    }
    // N_s^{-1} = N_s - η_s
    HeckeElement gen_inverse(int p) const {
        HeckeElement h = basis(W.gens[p]);
        add_term(h, W.identity(), -gen_eta[p]);
        return h;
    }
    HeckeElement basis_inverse(const AffElem& u) const {
        auto [word, om] = W.reduced_word(u);
        // N_u = N_{s1}...N_{sk} N_om  =>  N_u^{-1} = N_om^{-1} N_sk^{-1} ... N_s1^{-1}
        HeckeElement r = basis(W.inverse(om));
        for (auto it = word.rbegin(); it != word.rend(); ++it) r = right_inverse_gen(r, *it);
        return r;
    }
    HeckeElement right_inverse_gen(const HeckeElement& h, int p) const {
        return lin_comb(right_gen(h, p), h, -gen_eta[p]);
    }

    HeckeElement star(const HeckeElement& a) const {
        HeckeElement r;
        for (auto& [w, c] : a) add_term(r, W.inverse(w), c); // labels are real
        return r;
    }
    LaurentPoly trace(const HeckeElement& a) const {
        auto it = a.find(W.identity());
        return it == a.end() ? LaurentPoly(0) : it->second;
    }
    LaurentPoly inner(const HeckeElement& a, const HeckeElement& b) const { return trace(mul(star(a), b)); }

    // T_w = q(w)^{1/2} N_w
    HeckeElement T(const AffElem& w) const { return {{w, q_half(w)}}; }

    // ---- θ_x ----
    bool dominant(const IVec& x) const {
        for (auto& c : W.d.simple_coroots)
            if (W.d.pair(x, c) < 0) return false;
        return true;
    }
    // small dominant z with x + z dominant
    IVec dominant_shift(const IVec& x) const {
        if (dom_candidates_.empty()) {
            std::set<IVec> c;
            IVec rho(W.r, 0);
            for (int i = 0; i < W.d.npos(); ++i) rho = vadd(rho, W.d.roots[i]);
            c.insert(rho);
            auto add_dom = [&](IVec v) {
                for (int w = 0; w < W.order(); ++w) {
                    IVec u = W.act(w, v);
                    if (dominant(u) && !is_zero(u)) {
                        c.insert(u);
                        return;
                    }
                }
            };
            // dominant representatives of the vectors with entries in {-1, 0, 1}
            IVec e(W.r, -1);
            while (true) {
                if (!is_zero(e)) add_dom(e);
                int j = 0;
                while (j < W.r && e[j] == 1) e[j++] = -1;
                if (j == W.r) break;
                ++e[j];
            }
            for (auto& a : W.d.simple_roots) add_dom(a);
            dom_candidates_.assign(c.begin(), c.end());
        }
        auto deficit = [&](const IVec& v) {
            long long s = 0;
            for (auto& c : W.d.simple_coroots) s += std::max(0LL, -W.d.pair(v, c));
            return s;
        };
        IVec z(W.r, 0);
        while (deficit(vadd(x, z)) > 0) {
            long long best = -1, best_len = 0;
            IVec pick;
            long long d0 = deficit(vadd(x, z));
            for (auto& c : dom_candidates_) {
                IVec zc = vadd(z, c);
                long long gain = d0 - deficit(vadd(x, zc));
                long long l = W.length(W.translation(c));
                if (gain <= 0) continue;
                // maximise gain per unit length
                if (best < 0 || gain * best_len > best * l) best = gain, best_len = l, pick = c;
            }
            z = vadd(z, pick);
        }
        return z;
    }
    const HeckeElement& theta(const IVec& x) const {
        auto it = theta_cache_.find(x);
        if (it != theta_cache_.end()) return it->second;
        HeckeElement h;
        if (dominant(x)) h = basis(W.translation(x));
        else {
            IVec z = dominant_shift(x), y = vadd(x, z);
            h = mul(basis(W.translation(y)), basis_inverse(W.translation(z)));
        }
        return theta_cache_.emplace(x, std::move(h)).first->second;
    }

    // ---- Bernstein presentation ----
    // θ_x N_{s_i} - N_{s_i} θ_{s_i x}, as an element of A (pure θ terms)
    BernsteinElement bernstein_defect(const IVec& x, int i) const {
        const auto& d = W.d;
        const IVec& a = d.simple_roots[i];
        long long k = d.pair(x, d.simple_coroots[i]);
        BernsteinElement out;
        int p = simple_gen(i);
        auto telescope = [&](long long kk, const IVec& step) {
            BernsteinElement t;
            if (kk > 0)
                for (long long j = 0; j < kk; ++j) add_term(t, BKey{0, vsub(x, vscale(step, j))}, LaurentPoly(1));
            else
                for (long long j = 1; j <= -kk; ++j) add_term(t, BKey{0, vadd(x, vscale(step, j))}, LaurentPoly(-1));
            return t;
        };
        if (!d.coroot_in_2Y(d.simple_index[i])) {
            out = scaled(telescope(k, a), gen_eta[p]);
        } else {
            BernsteinElement t = telescope(k / 2, vscale(a, 2));
            LaurentPoly e0 = class_eta(affine_reflection_class(d.simple_index[i]));
            for (auto& [key, c] : t) {
                add_term(out, key, c * gen_eta[p]);
                add_term(out, BKey{0, vsub(key.x, a)}, c * e0);
            }
        }
        return out;
    }

    // N_s * B for a finite simple reflection (index i into F0)
    BernsteinElement bleft_simple(int i, const BernsteinElement& b) const {
        BernsteinElement r;
        int s = W.simple_elem[i];
        int p = simple_gen(i);
        for (auto& [k, c] : b) {
            int sv = W.mul(s, k.w);
            add_term(r, BKey{sv, k.x}, c);
            if (W.len[sv] < W.len[k.w]) add_term(r, k, c * gen_eta[p]);
        }
        return r;
    }
    // N_u * B for u ∈ W0
    BernsteinElement bleft_finite(int u, const BernsteinElement& b) const {
        BernsteinElement r = b;
        const auto& wd = W.word[u];
        for (auto it = wd.rbegin(); it != wd.rend(); ++it) r = bleft_simple(*it, r);
        return r;
    }
    // θ_x N_u = Σ c N_v θ_y
    const BernsteinElement& theta_times_finite(const IVec& x, int u) const {
        auto key = std::make_pair(x, u);
        auto it = tn_cache_.find(key);
        if (it != tn_cache_.end()) return it->second;
        BernsteinElement r;
        if (u == 0) r[BKey{0, x}] = 1;
        else {
            int i = W.word[u][0];
            int rest = W.mul(W.simple_elem[i], u);
            // θ_x N_{s_i} N_rest = N_{s_i} θ_{s_i x} N_rest + defect * N_rest
            IVec sx = W.act(W.simple_elem[i], x);
            r = bleft_simple(i, theta_times_finite(sx, rest));
            for (auto& [k, c] : bernstein_defect(x, i)) {
                for (auto& [k2, c2] : theta_times_finite(k.x, rest)) add_term(r, k2, c * c2);
            }
        }
        return tn_cache_.emplace(key, std::move(r)).first->second;
    }
    BernsteinElement bmul(const BernsteinElement& a, const BernsteinElement& b) const {
        BernsteinElement r;
        for (auto& [ka, ca] : a)
            for (auto& [kb, cb] : b) {
                const auto& t = theta_times_finite(ka.x, kb.w);
                for (auto& [kt, ct] : t) {
                    BernsteinElement single{{BKey{kt.w, vadd(kt.x, kb.x)}, ca * cb * ct}};
                    for (auto& [kf, cf] : bleft_finite(ka.w, single)) add_term(r, kf, cf);
                }
            }
        return r;
    }

    // Bernstein form of N_g for each generator and each Omega generator
    BernsteinElement bernstein_of_gen(int p) const {
        if (!W.gen_affine[p]) {
            int i = W.gen_number[p] - 1;
            return {{BKey{W.simple_elem[i], IVec(W.r, 0)}, 1}};
        }
        // s0 = t_a s_a with l(t_a) = 1 + l(s_a): N_{s0} = θ_a N_{s_a}^{-1}
        int h = W.gen_root[p];
        const IVec& a = W.d.roots[h];
        int sa = W.refl_elem[h];
        if (W.length(W.translation(a)) != 1 + W.len[sa])
            throw std::logic_error("affine generator does not factor length-additively");
        BernsteinElement inv{{BKey{0, IVec(W.r, 0)}, 1}};
        // N_{s_a}^{-1} = Π over reversed word of (N_s - η_s)
        for (int i : W.word[sa]) {
            BernsteinElement t = bleft_simple(i, inv);
            for (auto& [k, c] : inv) add_term(t, k, -c * gen_eta[simple_gen(i)]);
            inv = t;
        }
        BernsteinElement th{{BKey{0, a}, 1}};
        return bmul(th, inv);
    }
    BernsteinElement bernstein_of_length0(const AffElem& om) const {
        // ω = t_x u = u t_{u^{-1}x}: N_ω = N_u θ_{u^{-1}x}
        return {{BKey{om.w, W.act(W.inv[om.w], om.x)}, 1}};
    }
    BernsteinElement to_bernstein(const HeckeElement& h) const {
        BernsteinElement r;
        for (auto& [w, c] : h) {
            auto [word, om] = W.reduced_word(w);
            BernsteinElement b = bernstein_of_length0(om);
            for (auto it = word.rbegin(); it != word.rend(); ++it) b = bmul(gen_form(*it), b);
            for (auto& [k, cc] : b) add_term(r, k, c * cc);
        }
        return r;
    }
    HeckeElement from_bernstein(const BernsteinElement& b) const {
        HeckeElement r;
        for (auto& [k, c] : b) {
            HeckeElement t = mul(basis(W.finite(k.w)), theta(k.x));
            for (auto& [w, cc] : t) add_term(r, w, c * cc);
        }
        return r;
    }

    // eq. (θ_x N_s - N_s θ_{sx}) (θ_0 - θ_{-a}) = η (θ_x - θ_{sx}) checked in the N basis,
    // with the doubled variant when a∨ ∈ 2Y.
    bool check_bernstein_relation(int i, const IVec& x) const {
        const auto& d = W.d;
        int p = simple_gen(i);
        IVec a = d.simple_roots[i];
        IVec sx = W.act(W.simple_elem[i], x);
        HeckeElement Ns = basis(W.gens[p]);
        HeckeElement lhs = lin_comb(mul(theta(x), Ns), mul(Ns, theta(sx)), LaurentPoly(-1));
        HeckeElement diff = lin_comb(theta(x), theta(sx), LaurentPoly(-1));
        bool doubled = d.coroot_in_2Y(d.simple_index[i]);
        IVec den_x = doubled ? vscale(a, -2) : vneg(a);
        HeckeElement den = lin_comb(unit(), theta(den_x), LaurentPoly(-1));
        HeckeElement num;
        if (!doubled) num = scaled(unit(), gen_eta[p]);
        else {
            LaurentPoly e0 = class_eta(affine_reflection_class(d.simple_index[i]));
            num = lin_comb(scaled(unit(), gen_eta[p]), theta(vneg(a)), e0);
        }
        HeckeElement L = mul(lhs, den), R = mul(num, diff);
        if (L != R) return false;
        // the telescoped form used by the Bernstein conversion
        HeckeElement tel = from_bernstein(bernstein_defect(x, i));
        return tel == lhs;
    }

    // ---- idempotents of finite parabolic subalgebras ----
    std::vector<int> parabolic_subgroup(const std::vector<int>& P) const {
        std::vector<int> out{0};
        for (size_t a = 0; a < out.size(); ++a)
            for (int i : P) {
                int b = W.mul(W.simple_elem[i], out[a]);
                if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
            }
        std::sort(out.begin(), out.end());
        return out;
    }
    FracHecke finite_idempotent(const std::string& kind, const std::vector<int>& P) const {
        FracHecke f;
        f.den = 0;
        for (int w : parabolic_subgroup(P)) {
            AffElem e = W.finite(w);
            LaurentPoly qh = q_half(e);
            if (kind == "triv") {
                add_term(f.num, e, qh);
                f.den += qh * qh;
            } else if (kind == "sign") {
                LaurentPoly qi = qh.pow(-1);
                add_term(f.num, e, (W.len[w] % 2 ? LaurentPoly(-1) : LaurentPoly(1)) * qi);
                f.den += qi * qi;
            } else {
                throw usage_error("idempotent kind must be triv or sign");
            }
        }
        if (numeric()) {
            auto v = f.den.eval_exact(var_values_exact());
            if (v.terms.empty()) throw degenerate_label("idempotent denominator vanishes at these labels");
        }
        return f;
    }
    bool is_idempotent(const FracHecke& p) const { return mul(p.num, p.num) == scaled(p.num, p.den); }

    // ---- serialization ----
    std::string str(const HeckeElement& h) const {
        if (h.empty()) return "0";
        std::vector<std::pair<std::pair<int, std::string>, std::string>> terms;
        for (auto& [w, c] : h) {
            std::string cs = c.str(&vars);
            bool compound = c.size() > 1;
            std::string name = W.elem_str(w);
            std::string t;
            if (c == LaurentPoly(1)) t = "N[" + name + "]";
            else if (c == LaurentPoly(-1)) t = "-N[" + name + "]";
            else t = (compound ? "(" + cs + ")" : cs) + "*N[" + name + "]";
            terms.push_back({{W.length(w), name}, t});
        }
        std::sort(terms.begin(), terms.end());
        std::string s;
        for (size_t i = 0; i < terms.size(); ++i) {
            const std::string& t = terms[i].second;
            if (!i) s = t;
            else if (t[0] == '-') s += " - " + t.substr(1);
            else s += " + " + t;
        }
        return s;
    }
    std::string str(const BernsteinElement& b) const {
        if (b.empty()) return "0";
        std::string s;
        bool first = true;
        for (auto& [k, c] : b) {
            std::string cs = c.str(&vars);
            std::string t = (c == LaurentPoly(1)) ? "" : (c == LaurentPoly(-1)) ? "-" : (c.size() > 1 ? "(" + cs + ")*" : cs + "*");
            std::string nw;
            if (k.w) {
                nw = "N[";
                for (size_t j = 0; j < W.word[k.w].size(); ++j) nw += (j ? " " : "") + std::string("s") + std::to_string(W.word[k.w][j] + 1);
                nw += "]";
            }
            std::string th = is_zero(k.x) ? "" : "theta" + vec_str(k.x);
            std::string body = nw + (nw.empty() || th.empty() ? "" : "*") + th;
            std::string term;
            if (body.empty()) term = c.str(&vars);
            else term = t + body;
            if (first) s = term;
            else if (term[0] == '-') s += " - " + term.substr(1);
            else s += " + " + term;
            first = false;
        }
        return s;
    }
    nlohmann::json to_json(const HeckeElement& h) const {
        std::vector<std::pair<std::pair<int, std::vector<int>>, nlohmann::json>> rows;
        for (auto& [w, c] : h) {
            auto [word, om] = W.reduced_word(w);
            std::vector<int> names;
            for (int p : word) names.push_back(W.gen_number[p]);
            nlohmann::json j = {{"x", w.x}, {"w0", W.word[w.w]}, {"word", names}, {"coeff", c.to_json()}};
            rows.push_back({{W.length(w), names}, j});
        }
        std::sort(rows.begin(), rows.end(), [](auto& a, auto& b) { return a.first < b.first; });
        auto arr = nlohmann::json::array();
        for (auto& r : rows) arr.push_back(r.second);
        return arr;
    }

    int simple_gen(int i) const {
        for (size_t p = 0; p < W.gens.size(); ++p)
            if (!W.gen_affine[p] && W.gen_number[p] == i + 1) return p;
        throw std::logic_error("no such simple reflection");
    }

private:
    mutable std::map<IVec, HeckeElement> theta_cache_;
    mutable std::vector<IVec> dom_candidates_;
    mutable std::map<std::pair<IVec, int>, BernsteinElement> tn_cache_;
    mutable std::map<int, BernsteinElement> gen_form_cache_;

    const BernsteinElement& gen_form(int p) const {
        auto it = gen_form_cache_.find(p);
        if (it != gen_form_cache_.end()) return it->second;
        return gen_form_cache_.emplace(p, bernstein_of_gen(p)).first->second;
    }

    void build_classes() {
        int n = W.gens.size();
        std::vector<int> parent(n);
        for (int i = 0; i < n; ++i) parent[i] = i;
        std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
        auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                int m = W.coxeter_m(a, b);
                if (m % 2 == 1) unite(a, b);
            }
        for (auto& om : W.omega_gens) {
            AffElem oi = W.inverse(om);
            for (int a = 0; a < n; ++a) {
                AffElem c = W.compose(W.compose(om, W.gens[a]), oi);
                for (int b = 0; b < n; ++b)
                    if (W.gens[b] == c) unite(a, b);
            }
        }
        std::map<int, int> root_to_class;
        gen_class.assign(n, -1);
        // order classes by their smallest nonzero generator number
        std::vector<std::pair<int, int>> keyed;
        std::map<int, std::vector<int>> groups;
        for (int a = 0; a < n; ++a) groups[find(a)].push_back(a);
        for (auto& [root, mem] : groups) {
            int key = 1 << 20;
            for (int a : mem)
                if (W.gen_number[a] != 0) key = std::min(key, W.gen_number[a]);
            if (key == (1 << 20)) key = 0;
            keyed.push_back({key, root});
        }
        std::sort(keyed.begin(), keyed.end());
        for (auto& [key, root] : keyed) {
            int c = class_names.size();
            class_members.push_back(groups[root]);
            for (int a : groups[root]) gen_class[a] = c;
            class_names.push_back(keyed.size() == 1 ? "q" : "q" + std::to_string(key));
        }
    }

    void build_vars(const LabelSpec& spec) {
        std::vector<std::string> names;
        class_var.assign(nclasses(), -1);
        class_value.assign(nclasses(), std::nullopt);
        for (int c = 0; c < nclasses(); ++c) {
            std::string sym = class_names[c];
            if (spec.symbol.count(c)) sym = spec.symbol.at(c);
            if (spec.value.count(c)) {
                class_value[c] = spec.value.at(c);
                if (*class_value[c] <= 0) throw std::domain_error("labels must be positive");
            }
            auto it = std::find(names.begin(), names.end(), sym);
            if (it == names.end()) {
                class_var[c] = names.size();
                names.push_back(sym);
            } else {
                class_var[c] = it - names.begin();
            }
        }
        // classes sharing a symbol must agree numerically
        for (int a = 0; a < nclasses(); ++a)
            for (int b = 0; b < a; ++b)
                if (class_var[a] == class_var[b] && class_value[a] != class_value[b])
                    throw usage_error("conflicting values for label " + names[class_var[a]]);
        vars = LabelVars(names);
        for (size_t p = 0; p < W.gens.size(); ++p) {
            gen_v.push_back(class_v(gen_class[p]));
            gen_eta.push_back(class_eta(gen_class[p]));
        }
    }
};

// Parse "generic", "q=2", "q0=2,q1=3", "q0=g,q1=g", "q1=2/3".
inline LabelSpec parse_labels(const Weyl& W, const Hecke& proto, const std::string& s) {
    LabelSpec spec;
    if (s.empty() || s == "generic" || s == "q=generic") return spec;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw usage_error("label assignment '" + item + "' needs '='");
        std::string key = item.substr(0, eq), val = item.substr(eq + 1);
        std::vector<int> classes;
        if (key == "q") {
            for (int c = 0; c < proto.nclasses(); ++c) classes.push_back(c);
        } else {
            int c = -1;
            for (int k = 0; k < proto.nclasses(); ++k)
                if (proto.class_names[k] == key) c = k;
            if (c < 0 && key.size() > 1 && key[0] == 'q') {
                int p = W.gen_by_name("s" + key.substr(1));
                if (p >= 0) c = proto.gen_class[p];
            }
            if (c < 0) throw usage_error("unknown label '" + key + "'");
            classes.push_back(c);
        }
        for (int c : classes) {
            bool numeric = !val.empty() && (std::isdigit((unsigned char)val[0]) || val[0] == '.');
            if (val == "generic") {
                continue;
            } else if (numeric) {
                BigRat v;
                if (val.find('.') != std::string::npos) {
                    // decimal literal, read exactly
                    auto dot = val.find('.');
                    std::string ip = val.substr(0, dot), fp = val.substr(dot + 1);
                    BigInt den = 1;
                    for (size_t i = 0; i < fp.size(); ++i) den *= 10;
                    v = BigRat(BigInt(ip.empty() ? "0" : ip) * den + BigInt(fp.empty() ? "0" : fp), den);
                } else if (val.find('/') != std::string::npos) {
                    auto sl = val.find('/');
                    v = BigRat(BigInt(val.substr(0, sl)), BigInt(val.substr(sl + 1)));
                } else {
                    v = BigRat(BigInt(val));
                }
                if (v <= 0) throw usage_error("labels must be positive");
                if (spec.value.count(c) && spec.value[c] != v) throw usage_error("conflicting values for " + key);
                spec.value[c] = v;
            } else {
                if (spec.symbol.count(c) && spec.symbol[c] != val) throw usage_error("conflicting symbols for " + key);
                spec.symbol[c] = val;
            }
        }
    }
    return spec;
}

inline std::shared_ptr<Hecke> make_hecke(std::shared_ptr<const Weyl> W, const std::string& labels) {
    Hecke proto(W);
    return std::make_shared<Hecke>(W, parse_labels(*W, proto, labels));
}

// ---- Schwartz norms ----

inline double pn_norm(const Hecke& H, const HeckeElement& a, int n) {
    auto q = H.var_values_double();
    double m = 0;
    for (auto& [w, c] : a) m = std::max(m, std::abs(c.eval_double(q)) * std::pow(H.W.script_N(w) + 1.0, n));
    return m;
}

struct NormConstants {
    int b = 0, bprime = 0;
    double C_b = 0, eta = 0, C_eta = 0;
    BallCensus census;
};

inline NormConstants norm_constants(const Hecke& H, int n_max = 30) {
    NormConstants k;
    const Weyl& W = H.W;
    k.b = W.r + 1;
    k.bprime = 2 * k.b + W.d.npos();
    k.census = ball_census(W, n_max);
    for (int n = 0; n <= n_max; ++n) k.C_b += k.census.counts[n] * std::pow(n + 1.0, -k.b);
    // counts_n <= C (n+1)^{r-1}, so the tail is at most C Σ_{n > n_max} (n+1)^{-2}
    k.C_b += k.census.C / (n_max + 1.0);
    auto q = H.var_values_double();
    for (double qi : q) k.eta = std::max(k.eta, std::abs(std::sqrt(qi) - 1 / std::sqrt(qi)));
    k.C_eta = 3 * k.C_b * std::max(1.0, std::pow(k.eta, W.d.npos()));
    return k;
}

struct NormCheck {
    double lhs = 0, rhs = 0;
    bool ok = false;
};

// p_n(xy) <= C_η C_b p_{n+b'}(x) p_{n+b'}(y)
inline NormCheck check_norm_inequality(const Hecke& H, const NormConstants& k, const HeckeElement& x,
                                       const HeckeElement& y, int n) {
    NormCheck c;
    c.lhs = pn_norm(H, H.mul(x, y), n);
    c.rhs = k.C_eta * k.C_b * pn_norm(H, x, n + k.bprime) * pn_norm(H, y, n + k.bprime);
    c.ok = c.lhs <= c.rhs * (1 + 1e-12);
    return c;
}

// Structure of N_u N_v: coefficients are η-polynomials of degree <= |R0+|
// with at most 3(ℓ(u)+1)^{|R0+|} terms.
struct ProductShape {
    int max_degree = 0;
    size_t terms = 0;
    double term_bound = 0;
    bool degree_ok = true, eta_ok = true, count_ok = true;
    bool ok() const { return degree_ok && eta_ok && count_ok; }
};

inline ProductShape product_shape(const Hecke& H, const AffElem& u, const AffElem& v) {
    ProductShape s;
    HeckeElement p = H.mul(H.basis(u), H.basis(v));
    int np = H.W.d.npos();
    s.terms = p.size();
    s.term_bound = 3 * std::pow(H.W.length(u) + 1.0, np);
    for (auto& [w, c] : p) {
        int d = c.max_abs_degree();
        s.max_degree = std::max(s.max_degree, d);
        if (d > np) s.degree_ok = false;
        if (!c.is_eta_polynomial()) s.eta_ok = false;
    }
    s.count_ok = s.terms <= s.term_bound;
    return s;
}

} // namespace hk
