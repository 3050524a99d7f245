#pragma once

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "ktheory.hpp"
#include "random.hpp"
#include "reps.hpp"
#include "spectral.hpp"

namespace hk {

enum ExitCode { kOk = 0, kUsage = 2, kNotImplemented = 3, kVerification = 4 };

struct verification_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- datum loading

inline RootDatum datum_from_json(const nlohmann::json& j) {
    try {
        int r = j.at("rank").get<int>();
        IMat P = j.contains("pairing") ? j.at("pairing").get<IMat>() : IMat();
        if (P.empty()) {
            P.assign(r, IVec(r, 0));
            for (int i = 0; i < r; ++i) P[i][i] = 1;
        }
        RootDatum d(r, P, j.at("simple_roots").get<IMat>(), j.at("simple_coroots").get<IMat>());
        if (j.contains("name")) d.name = j.at("name").get<std::string>();
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw usage_error(std::string("bad datum json: ") + e.what());
    }
}

inline RootDatum load_datum(const std::string& family, const std::string& json_file) {
    if (!family.empty() && !json_file.empty()) throw usage_error("give either --family or --datum-json, not both");
    if (!json_file.empty()) {
        std::ifstream in(json_file);
        if (!in) throw usage_error("cannot read " + json_file);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw usage_error(std::string("bad datum json: ") + e.what());
        }
        return datum_from_json(j);
    }
    if (family.empty()) throw usage_error("--family or --datum-json is required");
    return family_from_string(family);
}

// ---------------------------------------------------------------- element grammar

// value = h / den
struct ElemValue {
    HeckeElement h;
    BigInt den = 1;
};

inline BigInt content_gcd(const HeckeElement& h) {
    BigInt g = 0;
    for (auto& [w, c] : h)
        for (auto& [e, k] : c.terms()) g = boost::multiprecision::gcd(g, BigInt(abs(k)));
    return g;
}
inline ElemValue normalize(const LabelVars& vars, ElemValue v) {
    if (v.h.empty()) return {{}, 1};
    if (v.den < 0) {
        v.den = -v.den;
        v.h = scaled(v.h, LaurentPoly(-1));
    }
    BigInt g = boost::multiprecision::gcd(content_gcd(v.h), v.den);
    if (g > 1) {
        HeckeElement r;
        for (auto& [w, c] : v.h) {
            LaurentPoly q;
            for (auto& [e, k] : c.terms()) q += LaurentPoly::monomial(vars, e, k / g);
            r[w] = q;
        }
        v.h = r;
        v.den /= g;
    }
    return v;
}

class ElementParser {
public:
    ElementParser(const Hecke& H, std::string s) : H_(H), W_(H.W), s_(std::move(s)) {}

    ElemValue parse() {
        ElemValue v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + s_.substr(pos_, 1) + "'");
        return normalize(H_.vars, v);
    }

private:
    const Hecke& H_;
    const Weyl& W_;
    std::string s_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& m) const {
        throw usage_error("element syntax error at position " + std::to_string(pos_) + ": " + m);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool starts(const std::string& t) {
        skip();
        return s_.compare(pos_, t.size(), t) == 0;
    }

    ElemValue add(const ElemValue& a, const ElemValue& b, int sign) {
        HeckeElement x = scaled(a.h, LaurentPoly(b.den)), y = scaled(b.h, LaurentPoly(a.den * sign));
        return {lin_comb(x, y), BigInt(a.den * b.den)};
    }
    ElemValue mul(const ElemValue& a, const ElemValue& b) { return normalize(H_.vars, {H_.mul(a.h, b.h), a.den * b.den}); }

    ElemValue expr() {
        ElemValue v = term();
        while (true) {
            if (eat('+')) v = add(v, term(), 1);
            else if (eat('-')) v = add(v, term(), -1);
            else return v;
        }
    }
    ElemValue term() {
        ElemValue v = unary();
        while (eat('*')) v = mul(v, unary());
        return v;
    }
    ElemValue unary() {
        if (eat('-')) {
            ElemValue v = unary();
            return {scaled(v.h, LaurentPoly(-1)), v.den};
        }
        return power();
    }
    ElemValue power() {
        ElemValue b = primary();
        if (!eat('^')) return b;
        skip();
        bool neg = eat('-');
        long long k = integer();
        if (neg) {
            // only single basis elements are inverted
            if (b.h.size() != 1 || !(b.h.begin()->second == LaurentPoly(1)) || b.den != 1)
                fail("negative powers are only allowed for basis elements");
            b = {H_.basis_inverse(b.h.begin()->first), 1};
        }
        ElemValue r{H_.unit(), 1};
        for (long long i = 0; i < k; ++i) r = mul(r, b);
        return r;
    }
    long long integer() {
        skip();
        size_t st = pos_;
        while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
        if (st == pos_) fail("integer expected");
        return std::stoll(s_.substr(st, pos_ - st));
    }
    ElemValue primary() {
        skip();
        if (eat('(')) {
            ElemValue v = expr();
            if (!eat(')')) fail("')' expected");
            return v;
        }
        if (starts("N[")) {
            pos_ += 2;
            AffElem w = word_until(']');
            return {H_.basis(w), 1};
        }
        if (starts("theta[")) {
            pos_ += 6;
            IVec x = int_list(']');
            if ((int)x.size() != W_.r) fail("theta needs " + std::to_string(W_.r) + " coordinates");
            return {H_.theta(x), 1};
        }
        if (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) {
            BigInt n(std::to_string(integer()));
            BigInt d = 1;
            if (pos_ < s_.size() && s_[pos_] == '/') {
                ++pos_;
                d = BigInt(std::to_string(integer()));
                if (d == 0) fail("zero denominator");
            }
            return {H_.scalar(LaurentPoly(n)), d};
        }
        fail("term expected");
    }
    IVec int_list(char close) {
        IVec x;
        while (true) {
            skip();
            bool neg = eat('-');
            x.push_back(neg ? -integer() : integer());
            if (eat(close)) return x;
            if (!eat(',')) fail("',' expected");
        }
    }
    // word in s0..sk, omega_j, t(x) and e; the product is taken in W
    AffElem word_until(char close) {
        AffElem w = W_.identity();
        while (true) {
            skip();
            if (eat(close)) return w;
            if (eat(',') || eat('*')) continue;
            AffElem g;
            if (starts("omega")) {
                pos_ += 5;
                eat('_');
                long long j = integer();
                if (j < 1 || j > (long long)W_.omega_gens.size()) fail("no such omega generator");
                g = W_.omega_gens[j - 1];
            } else if (starts("t(")) {
                pos_ += 2;
                IVec x = int_list(')');
                if ((int)x.size() != W_.r) fail("translation needs " + std::to_string(W_.r) + " coordinates");
                g = W_.translation(x);
            } else if (starts("s")) {
                ++pos_;
                long long j = integer();
                int p = W_.gen_by_name("s" + std::to_string(j));
                if (p < 0) fail("no generator s" + std::to_string(j));
                g = W_.gens[p];
            } else if (starts("e")) {
                ++pos_;
                continue;
            } else {
                fail("generator expected");
            }
            w = W_.compose(w, g);
        }
    }
};

inline std::string value_str(const Hecke& H, const ElemValue& v) {
    std::string body = H.str(v.h);
    if (v.den == 1) return body;
    return "(1/" + v.den.str() + ")*(" + body + ")";
}

// ---------------------------------------------------------------- numeric input

inline cplx parse_complex(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return std::isspace((unsigned char)c); }), s.end());
    if (s.empty()) throw usage_error("empty complex number");
    try {
        auto at = s.find('@');
        if (at != std::string::npos) return std::polar(std::stod(s.substr(0, at)), std::stod(s.substr(at + 1)));
        if (s.back() != 'i') {
            size_t used;
            double x = std::stod(s, &used);
            if (used != s.size()) throw usage_error("bad number '" + s + "'");
            return x;
        }
        std::string body = s.substr(0, s.size() - 1);
        size_t split = std::string::npos;
        for (size_t k = body.size(); k-- > 1;)
            if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
                split = k;
                break;
            }
        auto imag = [](const std::string& t) {
            if (t.empty() || t == "+") return 1.0;
            if (t == "-") return -1.0;
            return std::stod(t);
        };
        if (split == std::string::npos) return {0.0, imag(body)};
        return {std::stod(body.substr(0, split)), imag(body.substr(split))};
    } catch (const std::logic_error&) {
        throw usage_error("bad complex number '" + s + "'");
    }
}

inline CPoint parse_point(const std::string& s) {
    CPoint t;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) t.push_back(parse_complex(tok));
    return t;
}

inline std::string cstr(cplx z) {
    auto r = [](double x) {
        double y = std::round(x * 1e10) / 1e10;
        return y == 0 ? 0.0 : y;
    };
    std::ostringstream os;
    os << std::setprecision(10) << r(z.real());
    if (r(z.imag()) != 0) os << (r(z.imag()) > 0 ? "+" : "") << r(z.imag()) << "i";
    return os.str();
}

// "steinberg", "trivial", "one_dim:<+-per class>[;<omega values>]", "triv:<F0 list>", "sign:<F0 list>"
inline ProjectorSpec parse_projector(std::shared_ptr<const Hecke> H, const std::string& s) {
    auto colon = s.find(':');
    std::string kind = s.substr(0, colon), arg = colon == std::string::npos ? "" : s.substr(colon + 1);
    if (kind == "steinberg") return {steinberg(H), std::nullopt};
    if (kind == "trivial") return {trivial_rep(H), std::nullopt};
    if (kind == "one_dim") {
        auto semi = arg.find(';');
        std::string signs = arg.substr(0, semi);
        std::vector<int> sg;
        for (char c : signs) {
            if (c == '+') sg.push_back(1);
            else if (c == '-') sg.push_back(-1);
            else throw usage_error("one_dim signs must be + or -");
        }
        std::vector<cplx> om(H->W.omega_gens.size(), 1.0);
        if (semi != std::string::npos) {
            CPoint v = parse_point(arg.substr(semi + 1));
            if (v.size() != om.size()) throw usage_error("one value per Omega generator required");
            om = v;
        }
        return {one_dim(H, sg, om), std::nullopt};
    }
    if (kind == "triv" || kind == "sign") {
        std::vector<int> P;
        for (int i : parse_index_list(arg)) {
            if (i < 1 || i > H->W.d.nsimple()) throw usage_error("parabolic index out of range");
            P.push_back(i - 1);
        }
        auto delta = kind == "triv" ? trivial_rep(H) : steinberg(H);
        return {delta, P};
    }
    throw usage_error("unknown projector '" + s + "'");
}

// ---------------------------------------------------------------- golden tables

struct GoldenCase {
    std::string name;
    bool census = false;
    int points = 0, point_orbits = 0, circles = 0, circle_orbits = 0, components = 0;
    bool split = true;  // k0 and k1 given separately; otherwise only k0 + k1
    long long k0 = 0, k1 = 0;
};

inline const std::vector<GoldenCase>& golden_cases() {
    static const std::vector<GoldenCase> g = {
        {"A1~", true, 4, 2, 0, 0, 3, true, 3, 0},
        {"A1", true, 4, 2, 0, 0, 3, true, 3, 0},
        {"GL2", true, 0, 0, 2, 1, 2, true, 2, 2},
        {"A2~", true, 18, 3, 6, 1, 5, true, 5, 1},
        {"A2", true, 6, 1, 6, 1, 3, true, 5, 1},
        {"B2", true, 40, 5, 24, 3, 9, true, 9, 0},
        {"GL3", false, 0, 0, 0, 0, 0, true, 4, 4},
        {"GL4", false, 0, 0, 0, 0, 0, true, 7, 7},
        {"GL5", false, 0, 0, 0, 0, 0, true, 12, 12},
        {"GL6", false, 0, 0, 0, 0, 0, true, 20, 20},
        {"A3~", false, 0, 0, 0, 0, 0, false, 11, 0},
        {"A3", false, 0, 0, 0, 0, 0, false, 11, 0},
        {"A4~", false, 0, 0, 0, 0, 0, false, 16, 0},
        {"A4", false, 0, 0, 0, 0, 0, false, 16, 0},
        {"A5~", false, 0, 0, 0, 0, 0, false, 30, 0},
        {"A5", false, 0, 0, 0, 0, 0, false, 30, 0},
        {"A6~", false, 0, 0, 0, 0, 0, false, 38, 0},
        {"A6", false, 0, 0, 0, 0, 0, false, 38, 0},
    };
    return g;
}

struct TableLine {
    std::string item, expected, got;
    bool ok() const { return expected == got; }
};

inline std::vector<TableLine> run_table(const GoldenCase& g) {
    std::vector<TableLine> out;
    auto W = std::make_shared<const Weyl>(family_from_string(g.name));
    Hecke Hgen(W);
    if (g.census) {
        Spectral S(Hgen);
        auto rep = S.classify();
        out.push_back({"residual points", std::to_string(g.points), std::to_string(rep.points())});
        out.push_back({"residual point orbits", std::to_string(g.point_orbits), std::to_string(rep.point_orbits())});
        int circles = 0, circle_orbits = 0;
        for (auto& ob : rep.orbits)
            if (ob.dim == 1 && ob.dim < W->r) circles += ob.size, ++circle_orbits;
        out.push_back({"residual circles", std::to_string(g.circles), std::to_string(circles)});
        out.push_back({"residual circle orbits", std::to_string(g.circle_orbits), std::to_string(circle_orbits)});
        out.push_back({"spectrum components", std::to_string(g.components), std::to_string(rep.orbits.size())});
    }
    auto pair_str = [](long long a, long long b) { return "(" + std::to_string(a) + "," + std::to_string(b) + ")"; };
    RankResult q1 = extended_quotient_ranks(*W);
    RankResult q = spectrum_ranks(Hgen);
    if (g.split) {
        out.push_back({"ranks at q = 1", pair_str(g.k0, g.k1), pair_str(q1.k0, q1.k1)});
        out.push_back({"ranks at generic q", pair_str(g.k0, g.k1), pair_str(q.k0, q.k1)});
    } else {
        out.push_back({"rank total at q = 1", std::to_string(g.k0 + g.k1), std::to_string(q1.k0 + q1.k1)});
        out.push_back({"rank total at generic q", std::to_string(g.k0 + g.k1), std::to_string(q.k0 + q.k1)});
    }
    return out;
}

// ---------------------------------------------------------------- selftest

struct SelfCheck {
    std::string name;
    bool ok;
    std::string detail;
};

inline std::vector<SelfCheck> selftest_family(const std::string& fam, unsigned seed) {
    std::vector<SelfCheck> out;
    auto W = std::make_shared<const Weyl>(family_from_string(fam));
    auto rec = [&](const std::string& n, bool ok, const std::string& d = "") { out.push_back({fam + ": " + n, ok, d}); };
    Hecke H(W);
    std::mt19937 rng(seed);
    bool ok = true;
    for (size_t p = 0; p < W->gens.size(); ++p) {
        HeckeElement s = H.basis(W->gens[p]);
        ok &= H.mul(s, s) == lin_comb(H.unit(), s, H.gen_eta[p]);
    }
    rec("quadratic relations", ok);
    ok = true;
    for (int i = 0; i < W->d.nsimple(); ++i)
        for (int j = 0; j < W->r; ++j) {
            IVec e(W->r, 0);
            e[j] = 1;
            ok &= H.check_bernstein_relation(i, e);
        }
    rec("Bernstein relations", ok);
    ok = true;
    for (int k = 0; k < 10; ++k) {
        auto a = random_element(H, rng, 3), b = random_element(H, rng, 3), c = random_element(H, rng, 3);
        ok &= H.mul(H.mul(a, b), c) == H.mul(a, H.mul(b, c));
    }
    rec("associativity", ok);
    ok = true;
    for (int k = 0; k < 5; ++k) {
        auto a = random_element(H, rng, 3);
        ok &= H.from_bernstein(H.to_bernstein(a)) == a;
    }
    rec("Bernstein round trip", ok);
    ok = true;
    for (int k = 0; k < 6; ++k) {
        auto u = random_affelem(*W, rng, 3), v = random_affelem(*W, rng, 3);
        LaurentPoly ip = H.inner(H.basis(u), H.basis(v));
        ok &= ip == LaurentPoly(u == v ? 1 : 0);
    }
    rec("orthonormal basis", ok);

    auto Hn = make_hecke(W, fam == "B2" ? "q1=2,q2=3" : (fam == "A1" ? "q0=2,q1=3" : "q=2"));
    std::uniform_real_distribution<double> U(-1, 1);
    CPoint t;
    for (int j = 0; j < W->r; ++j) t.push_back(std::polar(std::exp(0.3 * U(rng)), 3.0 * U(rng)));
    auto R = principal_series(Hn, t);
    double rel = R.check_relations().worst();
    rec("principal series relations", rel < 1e-9, "residual " + cstr(rel));
    auto w = a_weights(R);
    double dist = 0;
    for (int u = 0; u < W->order(); ++u) {
        double best = 1e9;
        for (auto& x : w) best = std::min(best, point_dist(x.point, point_act(*W, u, t)));
        dist = std::max(dist, best);
    }
    rec("weights form the W0-orbit", dist < 1e-9 && (int)w.size() == W->order());
    double iw = 0;
    for (int i = 0; i < W->d.nsimple(); ++i) {
        CMat A = intertwiner(Hn, i, t);
        auto S = principal_series(Hn, point_act(*W, W->simple_elem[i], t));
        for (size_t p = 0; p < W->gens.size(); ++p) iw = std::max(iw, sup_norm(A * R.gen[p] - S.gen[p] * A));
    }
    rec("intertwiners", iw < 1e-9);
    auto cmp = compare_q1(H);
    rec("K-ranks agree at q = 1 and generic q", cmp.equal,
        "(" + std::to_string(cmp.q1.k0) + "," + std::to_string(cmp.q1.k1) + ") vs (" + std::to_string(cmp.q.k0) + "," +
            std::to_string(cmp.q.k1) + ")");
    return out;
}

// ---------------------------------------------------------------- front end

struct CliOptions {
    std::string family, datum_json, labels = "generic", format = "text";
    int depth = -1;
    double tol = 1e-9;
    std::optional<unsigned> seed;
    std::string expr, rep = "principal", point, projector, table_case;
    int intertwiner = 0;
};

inline std::shared_ptr<Hecke> hecke_from(const CliOptions& o) {
    auto W = std::make_shared<const Weyl>(load_datum(o.family, o.datum_json));
    return make_hecke(W, o.labels);
}

inline void out_json(std::ostream& out, const nlohmann::json& j) { out << j.dump(2) << "\n"; }

inline int cmd_describe(const CliOptions& o, std::ostream& out) {
    auto H = hecke_from(o);
    const Weyl& W = H->W;
    const RootDatum& d = W.d;
    nlohmann::json gens = nlohmann::json::array(), oms = nlohmann::json::array(), cls = nlohmann::json::array();
    for (size_t p = 0; p < W.gens.size(); ++p)
        gens.push_back({{"name", W.gen_names[p]}, {"affine", (bool)W.gen_affine[p]}, {"root", d.roots[W.gen_root[p]]},
                        {"class", H->class_names[H->gen_class[p]]}});
    for (size_t i = 0; i < W.omega_gens.size(); ++i)
        oms.push_back({{"name", "omega" + std::to_string(i + 1)}, {"element", W.omega_str(W.omega_gens[i])},
                       {"order", W.omega_orders[i]}});
    for (int c = 0; c < H->nclasses(); ++c) {
        nlohmann::json mem = nlohmann::json::array();
        for (int p : H->class_members[c]) mem.push_back(W.gen_names[p]);
        cls.push_back({{"label", H->class_names[c]}, {"generators", mem},
                       {"value", H->class_value[c] ? H->class_value[c]->str() : "generic"}});
    }
    nlohmann::json j = {{"name", d.name}, {"rank", d.rank}, {"pairing", d.pairing}, {"simple_roots", d.simple_roots},
                        {"simple_coroots", d.simple_coroots}, {"positive_roots", d.npos()}, {"W0_order", W.order()},
                        {"generators", gens}, {"omega_generators", oms}, {"label_classes", cls}};
    if (H->numeric()) j["genericity"] = genericity_class(*H).label;
    if (o.format == "json") {
        out_json(out, j);
        return kOk;
    }
    out << "datum " << d.name << ", rank " << d.rank << ", |W0| = " << W.order() << ", |R0+| = " << d.npos() << "\n";
    out << "simple roots:";
    for (auto& a : d.simple_roots) out << " " << vec_str(a);
    out << "\nsimple coroots:";
    for (auto& a : d.simple_coroots) out << " " << vec_str(a);
    out << "\ngenerators:";
    for (size_t p = 0; p < W.gens.size(); ++p)
        out << " " << W.gen_names[p] << (W.gen_affine[p] ? "(affine)" : "") << "[" << H->class_names[H->gen_class[p]]
            << "]";
    out << "\nOmega:";
    if (W.omega_gens.empty()) out << " trivial";
    for (size_t i = 0; i < W.omega_gens.size(); ++i)
        out << " omega" << i + 1 << " = " << W.omega_str(W.omega_gens[i]) << " (order "
            << (W.omega_orders[i] ? std::to_string(W.omega_orders[i]) : "inf") << ")";
    out << "\nlabels:";
    for (int c = 0; c < H->nclasses(); ++c)
        out << " " << H->class_names[c] << "=" << (H->class_value[c] ? H->class_value[c]->str() : "generic");
    out << "\n";
    if (j.contains("genericity")) out << "genericity class: " << j["genericity"].get<std::string>() << "\n";
    return kOk;
}

inline int cmd_mult(const CliOptions& o, std::ostream& out, bool bernstein) {
    if (o.expr.empty()) throw usage_error("an element expression is required");
    auto H = hecke_from(o);
    ElemValue v = ElementParser(*H, o.expr).parse();
    if (!bernstein) {
        if (o.format == "json") out_json(out, {{"denominator", v.den.str()}, {"terms", H->to_json(v.h)}});
        else out << value_str(*H, v) << "\n";
        return kOk;
    }
    BernsteinElement b = H->to_bernstein(v.h);
    if (o.format == "json") {
        auto arr = nlohmann::json::array();
        for (auto& [k, c] : b) arr.push_back({{"w0", H->W.word[k.w]}, {"theta", k.x}, {"coeff", c.to_json()}});
        out_json(out, {{"denominator", v.den.str()}, {"terms", arr}});
    } else {
        std::string body = H->str(b);
        out << (v.den == 1 ? body : "(1/" + v.den.str() + ")*(" + body + ")") << "\n";
    }
    return kOk;
}

inline int cmd_residual(const CliOptions& o, std::ostream& out) {
    auto H = hecke_from(o);
    Spectral S(*H);
    auto rep = S.classify();
    std::string gclass = H->numeric() ? genericity_class(*H).label : "generic";
    if (o.format == "json") {
        auto j = S.report_json(rep);
        j["genericity"] = gclass;
        out_json(out, j);
        return kOk;
    }
    out << "datum " << H->W.d.name << ", genericity class: " << gclass << "\n";
    out << "residual points: " << rep.points() << " in " << rep.point_orbits() << " orbits\n";
    for (int dim = 1; dim <= H->W.r; ++dim)
        if (rep.coset_orbits(dim))
            out << "residual cosets of dimension " << dim << ": " << rep.cosets(dim) << " in " << rep.coset_orbits(dim)
                << " orbits\n";
    for (auto& ob : rep.orbits) {
        out << "  dim " << ob.dim << ", orbit size " << ob.size << ", base " << S.point_str(S.base_point(ob.rep));
        if (ob.dim == H->W.r) out << ", whole torus";
        else if (ob.dim) {
            out << ", constant on";
            for (auto& row : ob.rep.M) out << " " << vec_str(row);
        }
        out << "\n";
    }
    out << "completeness: search-complete under genericity convention\n";
    return kOk;
}

inline int cmd_reps(const CliOptions& o, std::ostream& out) {
    auto H = hecke_from(o);
    const Weyl& W = H->W;
    CPoint t;
    if (!o.point.empty()) t = parse_point(o.point);
    else if (o.seed) {
        std::mt19937 rng(*o.seed);
        std::uniform_real_distribution<double> U(-1, 1);
        for (int j = 0; j < W.r; ++j) t.push_back(std::polar(std::exp(0.3 * U(rng)), 3.0 * U(rng)));
    }
    std::optional<MatrixRep> R;
    if (o.rep == "principal") {
        if (t.empty()) throw usage_error("principal series needs --point or --seed");
        R = principal_series(H, t);
    } else if (o.rep == "steinberg") R = steinberg(H);
    else if (o.rep == "trivial") R = trivial_rep(H);
    else throw usage_error("unknown rep '" + o.rep + "'");
    nlohmann::json j = rep_summary_json(*R, o.tol);
    j["rep"] = o.rep;
    double rel = R->check_relations().worst();
    j["relation_residual"] = rel;
    if (rel > 1e-9) throw verification_failure("generator matrices violate the defining relations");
    if (o.intertwiner) {
        if (!R->t) throw usage_error("--intertwiner needs the principal series");
        int i = o.intertwiner - 1;
        CMat A = intertwiner(H, i, t);
        auto S = principal_series(H, point_act(W, W.simple_elem[i], t));
        double err = 0;
        for (size_t p = 0; p < W.gens.size(); ++p) err = std::max(err, sup_norm(A * R->gen[p] - S.gen[p] * A));
        for (size_t p = 0; p < W.omega_gens.size(); ++p)
            err = std::max(err, sup_norm(A * R->omega[p] - S.omega[p] * A));
        j["intertwiner"] = {{"s", "s" + std::to_string(o.intertwiner)}, {"intertwining_error", err},
                            {"determinant", cstr(A.determinant())}};
    }
    if (!o.projector.empty()) {
        ProjectorSpec spec = parse_projector(H, o.projector);
        ProjectorResult pr = o.depth >= 0 ? truncated_projector(spec, *R, o.depth)
                                          : converge_projector(spec, *R, std::max(o.tol, 1e-12));
        nlohmann::json m = nlohmann::json::array();
        for (int a = 0; a < pr.value.rows(); ++a) {
            nlohmann::json row = nlohmann::json::array();
            for (int b = 0; b < pr.value.cols(); ++b) row.push_back(cstr(pr.value(a, b)));
            m.push_back(row);
        }
        j["projector"] = {{"spec", o.projector}, {"depth", pr.depth}, {"last_increment", pr.increment},
                          {"converged", o.depth >= 0 ? pr.increment < o.tol / 10 : pr.converged}, {"value", m}};
    }
    if (o.format == "json") {
        out_json(out, j);
        return kOk;
    }
    out << o.rep << " representation of dimension " << R->dim << "\n";
    out << "weights:\n";
    for (auto& w : j["weights"]) {
        out << "  (";
        for (size_t k = 0; k < w["point"].size(); ++k)
            out << (k ? ", " : "") << cstr({w["point"][k][0].get<double>(), w["point"][k][1].get<double>()});
        out << ")  multiplicity " << w["multiplicity"] << "\n";
    }
    out << "tempered: " << (j["tempered"].get<bool>() ? "yes" : "no")
        << ", discrete series: " << (j["discrete_series"].get<bool>() ? "yes" : "no") << "\n";
    if (j.contains("intertwiner"))
        out << "intertwiner " << j["intertwiner"]["s"].get<std::string>() << ": intertwining error "
            << j["intertwiner"]["intertwining_error"].get<double>() << "\n";
    if (j.contains("projector")) {
        auto& p = j["projector"];
        out << "projector " << o.projector << " at depth " << p["depth"] << ", last increment "
            << p["last_increment"].get<double>() << "\n";
        for (auto& row : p["value"]) {
            out << " ";
            for (auto& x : row) out << " " << x.get<std::string>();
            out << "\n";
        }
    }
    return kOk;
}

inline int cmd_ktheory(const CliOptions& o, std::ostream& out) {
    auto H = hecke_from(o);
    bool q_one = H->numeric();
    if (q_one)
        for (auto& v : H->class_value) q_one &= *v == 1;
    RankResult r = q_one ? extended_quotient_ranks(H->W) : spectrum_ranks(*H);
    if (o.format == "json") {
        out_json(out, r.to_json());
        return kOk;
    }
    out << "k0 = " << r.k0 << ", k1 = " << r.k1 << "  (" << r.method << ")\n";
    for (auto& c : r.census)
        out << "  " << std::left << std::setw(16) << c.cls << " " << std::setw(10) << c.source << " torus rank "
            << c.torus_rank << ", contribution (" << c.even << "," << c.odd << ")\n";
    return kOk;
}

inline int cmd_tables(const CliOptions& o, std::ostream& out) {
    std::vector<GoldenCase> todo;
    for (auto& g : golden_cases())
        if (o.table_case.empty() || g.name == o.table_case) todo.push_back(g);
    if (todo.empty()) throw not_implemented("no golden table for case '" + o.table_case + "'");
    bool all = true;
    nlohmann::json j = nlohmann::json::array();
    for (auto& g : todo) {
        auto lines = run_table(g);
        nlohmann::json items = nlohmann::json::array();
        for (auto& l : lines) {
            all &= l.ok();
            items.push_back({{"item", l.item}, {"expected", l.expected}, {"computed", l.got}, {"ok", l.ok()}});
            if (o.format != "json")
                out << (l.ok() ? "ok   " : "DIFF ") << std::left << std::setw(5) << g.name << " " << std::setw(24)
                    << l.item << " expected " << l.expected << ", computed " << l.got << "\n";
        }
        j.push_back({{"case", g.name}, {"items", items}});
    }
    if (o.format == "json") out_json(out, j);
    return all ? kOk : kVerification;
}

inline int cmd_selftest(const CliOptions& o, std::ostream& out) {
    bool all = true;
    unsigned seed = o.seed.value_or(1);
    for (std::string fam : {"A1~", "A1", "GL2", "A2~", "A2", "B2"})
        for (auto& c : selftest_family(fam, seed)) {
            all &= c.ok;
            out << (c.ok ? "ok   " : "FAIL ") << c.name << (c.detail.empty() ? "" : "  [" + c.detail + "]") << "\n";
        }
    out << (all ? "selftest passed" : "selftest FAILED") << "\n";
    return all ? kOk : kVerification;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"hk: exact computations in affine Hecke algebras"};
    app.require_subcommand(1, 1);
    CliOptions o;
    auto common = [&](CLI::App* s) {
        s->add_option("--family", o.family, "built-in root datum, e.g. A1~, A2, GL3, B2");
        s->add_option("--datum-json", o.datum_json, "root datum from a JSON file");
        s->add_option("--labels", o.labels, "label values: generic | q=2 | q0=2,q1=3 | q1=g");
        s->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
        s->add_option("--depth", o.depth, "projector truncation depth");
        s->add_option("--tol", o.tol, "numeric tolerance");
        s->add_option("--seed", o.seed, "random seed");
    };
    auto describe = app.add_subcommand("describe", "root datum, generators and label classes");
    auto mult = app.add_subcommand("mult", "evaluate an element expression in the N basis");
    auto bern = app.add_subcommand("bernstein", "rewrite an element in the Bernstein basis");
    auto resid = app.add_subcommand("residual", "classify residual points and cosets");
    auto reps = app.add_subcommand("reps", "principal series and one-dimensional representations");
    auto kth = app.add_subcommand("ktheory", "K-theory ranks");
    auto tables = app.add_subcommand("tables", "recompute the case tables and compare with golden values");
    auto self = app.add_subcommand("selftest", "run the invariant suite");
    for (auto* s : {describe, mult, bern, resid, reps, kth, tables, self}) common(s);
    mult->add_option("expr", o.expr, "element, e.g. 'N[s1]*N[s1]'");
    bern->add_option("expr", o.expr, "element");
    reps->add_option("--rep", o.rep, "principal | steinberg | trivial");
    reps->add_option("--point", o.point, "torus point, comma separated complex numbers (a+bi or r@phi)");
    reps->add_option("--projector", o.projector, "steinberg | trivial | one_dim:<signs>[;<omega values>] | triv:<F0> | sign:<F0>");
    reps->add_option("--intertwiner", o.intertwiner, "check the intertwiner of s_i (1-based)");
    tables->add_option("case", o.table_case, "case name; all cases when omitted");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    try {
        if (*describe) return cmd_describe(o, out);
        if (*mult) return cmd_mult(o, out, false);
        if (*bern) return cmd_mult(o, out, true);
        if (*resid) return cmd_residual(o, out);
        if (*reps) return cmd_reps(o, out);
        if (*kth) return cmd_ktheory(o, out);
        if (*tables) return cmd_tables(o, out);
        if (*self) return cmd_selftest(o, out);
    } catch (const not_implemented& e) {
        err << "not implemented: " << e.what() << "\n";
        return kNotImplemented;
    } catch (const size_limit& e) {
        err << "not implemented: " << e.what() << "\n";
        return kNotImplemented;
    } catch (const verification_failure& e) {
        err << "verification failure: " << e.what() << "\n";
        return kVerification;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace hk
