#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "rational.hpp"

namespace hk {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

struct incompatible_variables : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct unbound_label : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

constexpr int kMaxVars = 8;

// Ordered label names; variable i stands for q_i^{1/2}.
class LabelVars {
public:
    LabelVars() = default;
    explicit LabelVars(std::vector<std::string> names) : names_(std::move(names)) {
        if (names_.size() > kMaxVars) throw std::invalid_argument("too many label variables");
        for (size_t i = 0; i < names_.size(); ++i)
            for (size_t j = 0; j < i; ++j)
                if (names_[i] == names_[j]) throw std::invalid_argument("duplicate label " + names_[i]);
        std::uint64_t h = 1469598103934665603ull;
        for (auto& n : names_) {
            for (char c : n) h = (h ^ (unsigned char)c) * 1099511628211ull;
            h = (h ^ 0xff) * 1099511628211ull;
        }
        sig_ = h | 1;
    }
    const std::vector<std::string>& names() const { return names_; }
    int size() const { return names_.size(); }
    std::uint64_t sig() const { return sig_; }
    int index(const std::string& n) const {
        for (size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == n) return i;
        return -1;
    }
    bool operator==(const LabelVars& o) const { return names_ == o.names_; }

private:
    std::vector<std::string> names_;
    std::uint64_t sig_ = 0;
};

using Exps = std::array<int, kMaxVars>;

// Exact value of a Laurent polynomial at rational labels: sum of r * sqrt(m)
// with m squarefree. Distinct radicands are linearly independent over Q.
struct SurdSum {
    std::map<BigInt, BigRat> terms;

    bool is_rational() const { return terms.empty() || (terms.size() == 1 && terms.begin()->first == 1); }
    BigRat rational() const {
        if (!is_rational()) throw std::domain_error("value is irrational");
        return terms.empty() ? BigRat(0) : terms.begin()->second;
    }
    double to_double() const {
        double s = 0;
        for (auto& [m, r] : terms) s += r.convert_to<double>() * std::sqrt(m.convert_to<double>());
        return s;
    }
    void add(const BigInt& m, const BigRat& r) {
        auto& x = terms[m];
        x += r;
        if (x == 0) terms.erase(m);
    }
    bool operator==(const SurdSum& o) const { return terms == o.terms; }
    std::string str() const {
        if (terms.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [m, r] : terms) {
            if (!first) os << " + ";
            first = false;
            os << r;
            if (m != 1) os << "*sqrt(" << m << ")";
        }
        return os.str();
    }
};

namespace detail {

// n = s^2 * f with f squarefree (trial division; large cofactors assumed squarefree)
inline std::pair<BigInt, BigInt> square_split(BigInt n) {
    BigInt s = 1, f = 1;
    for (long p = 2; p < 100000 && BigInt(p) * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) n /= p, ++e;
        for (int i = 0; i < e / 2; ++i) s *= p;
        if (e % 2) f *= p;
    }
    BigInt r = boost::multiprecision::sqrt(n);
    if (r * r == n) s *= r;
    else f *= n;
    return {s, f};
}

inline BigRat rpow(const BigRat& q, int e) {
    BigRat r = 1;
    BigRat b = e >= 0 ? q : BigRat(1) / q;
    for (int i = 0; i < std::abs(e); ++i) r *= b;
    return r;
}

} // namespace detail

class LaurentPoly {
public:
    LaurentPoly() = default;
    LaurentPoly(long long c) {
        if (c) terms_[Exps{}] = c;
    }
    LaurentPoly(const BigInt& c) {
        if (c != 0) terms_[Exps{}] = c;
    }

    static LaurentPoly monomial(const LabelVars& vars, const Exps& e, BigInt c = 1) {
        LaurentPoly p;
        p.nv_ = vars.size();
        p.sig_ = vars.sig();
        if (c != 0) p.terms_[e] = c;
        return p;
    }
    // v_i = q_i^{1/2} raised to k
    static LaurentPoly var(const LabelVars& vars, int i, int k = 1) {
        Exps e{};
        e[i] = k;
        return monomial(vars, e);
    }
    // η_i = q_i^{1/2} - q_i^{-1/2}
    static LaurentPoly eta(const LabelVars& vars, int i) { return var(vars, i, 1) - var(vars, i, -1); }

    const std::map<Exps, BigInt>& terms() const { return terms_; }
    int nvars() const { return nv_; }
    std::uint64_t sig() const { return sig_; }
    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exps{}); }
    BigInt constant_term() const {
        auto it = terms_.find(Exps{});
        return it == terms_.end() ? BigInt(0) : it->second;
    }

    LaurentPoly operator-() const {
        LaurentPoly r = *this;
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }
    LaurentPoly& operator+=(const LaurentPoly& o) {
        merge_vars(o);
        for (auto& [e, c] : o.terms_) {
            auto it = terms_.find(e);
            if (it == terms_.end()) terms_.emplace(e, c);
            else {
                it->second += c;
                if (it->second == 0) terms_.erase(it);
            }
        }
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& o) { return *this += -o; }
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r;
        r.nv_ = a.nv_;
        r.sig_ = a.sig_;
        r.merge_vars(b);
        for (auto& [ea, ca] : a.terms_)
            for (auto& [eb, cb] : b.terms_) {
                Exps e;
                for (int i = 0; i < kMaxVars; ++i) e[i] = ea[i] + eb[i];
                auto it = r.terms_.find(e);
                if (it == r.terms_.end()) r.terms_.emplace(e, ca * cb);
                else {
                    it->second += ca * cb;
                    if (it->second == 0) r.terms_.erase(it);
                }
            }
        return r;
    }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
    LaurentPoly pow(int k) const {
        if (k < 0) {
            if (terms_.size() != 1 || abs(terms_.begin()->second) != 1)
                throw std::domain_error("only monomial units can be inverted");
            Exps e = terms_.begin()->first;
            BigInt c = terms_.begin()->second;
            for (auto& x : e) x = -x;
            LaurentPoly m = *this;
            m.terms_.clear();
            m.terms_[e] = c;
            return m.pow(-k);
        }
        LaurentPoly r = 1;
        r.nv_ = nv_;
        r.sig_ = sig_;
        for (int i = 0; i < k; ++i) r *= *this;
        return r;
    }
    // exact division by a monomial unit
    bool is_unit_monomial() const { return terms_.size() == 1 && abs(terms_.begin()->second) == 1; }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        if (a.sig_ && b.sig_ && a.sig_ != b.sig_) throw incompatible_variables("mismatched label variables");
        return a.terms_ == b.terms_;
    }

    // Substitute v_i -> v_{map[i]}^{sign[i]} (used to identify label classes).
    LaurentPoly substitute(const LabelVars& target, const std::vector<int>& map) const {
        LaurentPoly r;
        r.nv_ = target.size();
        r.sig_ = target.sig();
        for (auto& [e, c] : terms_) {
            Exps f{};
            for (int i = 0; i < nv_; ++i)
                if (e[i]) f[map[i]] += e[i];
            LaurentPoly m;
            m.nv_ = r.nv_;
            m.sig_ = r.sig_;
            m.terms_[f] = c;
            r += m;
        }
        return r;
    }

    // value at q_i = vals[i] (doubles)
    double eval_double(const std::vector<double>& q) const {
        double s = 0;
        for (auto& [e, c] : terms_) {
            double t = c.convert_to<double>();
            for (int i = 0; i < nv_; ++i)
                if (e[i]) t *= std::pow(q.at(i), 0.5 * e[i]);
            s += t;
        }
        return s;
    }
    // exact value at rational q_i
    SurdSum eval_exact(const std::vector<BigRat>& q) const {
        std::vector<std::pair<BigInt, BigInt>> split; // sqrt(q_i) = (s_i / den_i) sqrt(f_i)
        std::vector<BigRat> root_coeff;
        for (int i = 0; i < nv_; ++i) {
            const BigRat& qi = q.at(i);
            if (qi <= 0) throw std::domain_error("labels must be positive");
            BigInt a = numerator(qi), b = denominator(qi);
            auto [s, f] = detail::square_split(a * b);
            split.push_back({s, f});
            root_coeff.push_back(BigRat(s, b));
        }
        SurdSum out;
        for (auto& [e, c] : terms_) {
            BigRat r = BigRat(c);
            BigInt rad = 1;
            for (int i = 0; i < nv_; ++i) {
                if (!e[i]) continue;
                int half = e[i] >= 0 ? e[i] / 2 : -((-e[i] + 1) / 2);
                int odd = e[i] - 2 * half;
                r *= detail::rpow(q[i], half);
                if (odd) {
                    r *= root_coeff[i];
                    rad *= split[i].second;
                }
            }
            auto [s, f] = detail::square_split(rad);
            out.add(f, r * BigRat(s));
        }
        return out;
    }
    // value with every v_i = 1 (the group case q = 1)
    BigInt at_one() const {
        BigInt s = 0;
        for (auto& [e, c] : terms_) s += c;
        return s;
    }

    // Σ|e_i| over terms, maximized
    int max_abs_degree() const {
        int d = 0;
        for (auto& [e, c] : terms_) {
            int s = 0;
            for (int i = 0; i < kMaxVars; ++i) s += std::abs(e[i]);
            d = std::max(d, s);
        }
        return d;
    }
    // invariant under v_i -> -v_i^{-1} for all i ⟺ polynomial in the η_i
    bool is_eta_polynomial() const {
        LaurentPoly r;
        r.nv_ = nv_;
        r.sig_ = sig_;
        for (auto& [e, c] : terms_) {
            Exps f{};
            int s = 0;
            for (int i = 0; i < kMaxVars; ++i) f[i] = -e[i], s += e[i];
            r.terms_[f] = (s % 2) ? BigInt(-c) : c;
        }
        return r.terms_ == terms_;
    }

    std::string str(const LabelVars* vars = nullptr) const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            auto& [e, c] = *it;
            BigInt a = abs(c);
            bool neg = c < 0;
            if (first) os << (neg ? "-" : "");
            else os << (neg ? " - " : " + ");
            first = false;
            std::string mono;
            for (int i = 0; i < kMaxVars; ++i) {
                if (!e[i]) continue;
                std::string name = vars && i < vars->size() ? vars->names()[i] : "v" + std::to_string(i);
                if (!mono.empty()) mono += "*";
                if (e[i] % 2 == 0) {
                    mono += name;
                    if (e[i] != 2) mono += "^" + std::to_string(e[i] / 2);
                } else {
                    mono += name + "^(" + std::to_string(e[i]) + "/2)";
                }
            }
            if (mono.empty()) os << a;
            else {
                if (a != 1) os << a << "*";
                os << mono;
            }
        }
        return os.str();
    }

    nlohmann::json to_json() const {
        auto arr = nlohmann::json::array();
        for (auto& [e, c] : terms_) {
            std::vector<int> ex(e.begin(), e.begin() + nv_);
            arr.push_back({{"exponents", ex}, {"coeff", c.str()}});
        }
        return arr;
    }

private:
    std::map<Exps, BigInt> terms_;
    int nv_ = 0;
    std::uint64_t sig_ = 0;

    void merge_vars(const LaurentPoly& o) {
        if (o.sig_ == 0) return;
        if (sig_ == 0) {
            sig_ = o.sig_;
            nv_ = o.nv_;
        } else if (sig_ != o.sig_) {
            throw incompatible_variables("mismatched label variables");
        }
    }
};

// Positive label values by name, exact or floating.
struct LabelAssignment {
    std::map<std::string, BigRat> exact;
    std::map<std::string, double> approx;
    bool exact_mode = true;

    void set(const std::string& name, const BigRat& v) {
        if (v <= 0) throw std::domain_error("label " + name + " must be positive");
        exact[name] = v;
        approx[name] = v.convert_to<double>();
    }
    void set_double(const std::string& name, double v) {
        if (!(v > 0)) throw std::domain_error("label " + name + " must be positive");
        approx[name] = v;
        exact_mode = false;
    }
};

inline SurdSum lp_eval(const LaurentPoly& p, const LabelVars& vars, const LabelAssignment& a) {
    std::vector<BigRat> q;
    for (auto& n : vars.names()) {
        auto it = a.exact.find(n);
        if (it == a.exact.end()) throw unbound_label("unbound label " + n);
        q.push_back(it->second);
    }
    return p.eval_exact(q);
}

inline double lp_eval_double(const LaurentPoly& p, const LabelVars& vars, const LabelAssignment& a) {
    std::vector<double> q;
    for (auto& n : vars.names()) {
        auto it = a.approx.find(n);
        if (it == a.approx.end()) throw unbound_label("unbound label " + n);
        q.push_back(it->second);
    }
    return p.eval_double(q);
}

} // namespace hk
