#pragma once

#include <complex>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "hecke.hpp"

namespace hk {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct singular_intertwiner : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct wrong_branch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// numeric torus point: t(e_j) = z[j]
using CPoint = std::vector<cplx>;

inline cplx point_eval(const CPoint& t, const IVec& x) {
    cplx r = 1;
    for (size_t j = 0; j < t.size(); ++j)
        if (x[j]) r *= std::pow(t[j], (int)x[j]);
    return r;
}
// (w t)(x) = t(w^{-1} x)
inline CPoint point_act(const Weyl& W, int w, const CPoint& t) {
    CPoint out(t.size());
    for (int j = 0; j < W.r; ++j) {
        IVec e(W.r, 0);
        e[j] = 1;
        out[j] = point_eval(t, W.act(W.inv[w], e));
    }
    return out;
}
inline double point_dist(const CPoint& a, const CPoint& b) {
    double d = 0;
    for (size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
    return d;
}

struct Weight {
    CPoint point;
    int multiplicity = 1;
};
using WeightList = std::vector<Weight>;

struct RelationReport {
    double quadratic = 0, braid = 0, omega = 0;
    double worst() const { return std::max({quadratic, braid, omega}); }
};

class MatrixRep {
public:
    std::shared_ptr<const Hecke> H;
    std::string kind;
    int dim = 0;
    std::vector<CMat> gen;                    // per S_aff position
    std::vector<CMat> omega;                  // per Omega generator
    std::function<CMat(const AffElem&)> length0;
    std::function<CMat(const IVec&)> theta_fn;
    bool irreducible = false;
    std::optional<CPoint> t;                  // principal series parameter

    double gen_v(int p) const { return H->gen_v[p].eval_double(qv()); }
    const std::vector<double>& qv() const {
        if (qv_.empty()) qv_ = H->var_values_double();
        return qv_;
    }
    CMat identity() const { return CMat::Identity(dim, dim); }

    CMat basis(const AffElem& w) const {
        auto [word, om] = H->W.reduced_word(w);
        CMat m = length0(om);
        for (auto it = word.rbegin(); it != word.rend(); ++it) m = gen[*it] * m;
        return m;
    }
    CMat eval(const HeckeElement& h) const {
        CMat m = CMat::Zero(dim, dim);
        for (auto& [w, c] : h) m += c.eval_double(qv()) * basis(w);
        return m;
    }
    CMat theta(const IVec& x) const { return theta_fn(x); }

    RelationReport check_relations() const {
        RelationReport r;
        const Weyl& W = H->W;
        auto rel = [&](const CMat& a, const CMat& b) {
            return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()));
        };
        int ng = W.gens.size();
        for (int p = 0; p < ng; ++p) {
            double v = gen_v(p);
            CMat z = (gen[p] - v * identity()) * (gen[p] + identity() / v);
            r.quadratic = std::max(r.quadratic, z.cwiseAbs().maxCoeff());
        }
        for (int a = 0; a < ng; ++a)
            for (int b = a + 1; b < ng; ++b) {
                int m = W.coxeter_m(a, b);
                if (!m) continue;
                CMat x = identity(), y = identity();
                for (int k = 0; k < m; ++k) {
                    x = x * gen[k % 2 ? b : a];
                    y = y * gen[k % 2 ? a : b];
                }
                r.braid = std::max(r.braid, rel(x, y));
            }
        for (size_t o = 0; o < W.omega_gens.size(); ++o) {
            const AffElem& g = W.omega_gens[o];
            AffElem gi = W.inverse(g);
            for (int p = 0; p < ng; ++p) {
                AffElem c = W.compose(W.compose(g, W.gens[p]), gi);
                int q = -1;
                for (int k = 0; k < ng; ++k)
                    if (W.gens[k] == c) q = k;
                if (q < 0) throw std::logic_error("Omega does not normalize S_aff");
                r.omega = std::max(r.omega, rel(omega[o] * gen[p], gen[q] * omega[o]));
            }
            for (size_t o2 = o + 1; o2 < W.omega_gens.size(); ++o2)
                r.omega = std::max(r.omega, rel(omega[o] * omega[o2], omega[o2] * omega[o]));
            long long ord = W.omega_orders[o];
            if (ord > 0) {
                CMat x = identity();
                for (long long k = 0; k < ord; ++k) x = x * omega[o];
                r.omega = std::max(r.omega, rel(x, identity()));
            }
        }
        return r;
    }

private:
    mutable std::vector<double> qv_;
};

inline void require_numeric(const Hecke& H) {
    if (!H.numeric()) throw usage_error("representations need numeric labels");
    for (auto& v : H.class_value)
        if (*v <= 0) throw usage_error("labels must be positive");
}

// I_t on the basis N_w ⊗ 1, w ∈ W0
inline MatrixRep principal_series(std::shared_ptr<const Hecke> Hp, const CPoint& t) {
    const Hecke& H = *Hp;
    require_numeric(H);
    const Weyl& W = H.W;
    if ((int)t.size() != W.r) throw usage_error("torus point has wrong rank");
    for (auto z : t)
        if (std::abs(z) == 0) throw usage_error("torus point coordinates must be nonzero");
    MatrixRep R;
    R.H = Hp;
    R.kind = "principal_series";
    R.dim = W.order();
    R.t = t;
    std::vector<double> q = H.var_values_double();
    int n = R.dim;
    auto image = [&H, t, q, n](const BernsteinElement& b) {
        CMat m = CMat::Zero(n, n);
        for (int u = 0; u < n; ++u) {
            BernsteinElement e{{BKey{u, IVec(t.size(), 0)}, LaurentPoly(1)}};
            for (auto& [k, c] : H.bmul(b, e)) m(k.w, u) += c.eval_double(q) * point_eval(t, k.x);
        }
        return m;
    };
    for (size_t p = 0; p < W.gens.size(); ++p) R.gen.push_back(image(H.bernstein_of_gen(p)));
    for (auto& g : W.omega_gens) R.omega.push_back(image(H.bernstein_of_length0(g)));
    R.length0 = [image, &H](const AffElem& om) { return image(H.bernstein_of_length0(om)); };
    R.theta_fn = [image](const IVec& x) { return image({{BKey{0, x}, LaurentPoly(1)}}); };
    return R;
}

// Express ω ∈ Omega through the Omega generators by a bounded search.
inline std::vector<long long> omega_exponents(const Weyl& W, const AffElem& om, int box = 12) {
    int k = W.omega_gens.size();
    std::vector<long long> e(k, 0);
    std::function<bool(int, AffElem)> rec = [&](int i, AffElem acc) {
        if (i == k) return acc == om;
        long long ord = W.omega_orders[i];
        long long lo = ord ? 0 : -box, hi = ord ? ord - 1 : box;
        AffElem gi = W.inverse(W.omega_gens[i]);
        AffElem start = acc;
        for (long long j = 0; j < -lo; ++j) start = W.compose(start, gi);
        AffElem cur = start;
        for (long long j = lo; j <= hi; ++j) {
            e[i] = j;
            if (rec(i + 1, cur)) return true;
            cur = W.compose(cur, W.omega_gens[i]);
        }
        return false;
    };
    if (!rec(0, W.identity())) throw std::logic_error("element of Omega not reached by its generators");
    return e;
}

// One-dimensional rep: N_s ↦ q_s^{1/2} (sign +1) or -q_s^{-1/2} (sign -1) per class; N_ω by a character.
inline MatrixRep one_dim(std::shared_ptr<const Hecke> Hp, const std::vector<int>& class_sign,
                         const std::vector<cplx>& omega_values, const std::string& name = "one_dim") {
    const Hecke& H = *Hp;
    require_numeric(H);
    const Weyl& W = H.W;
    if ((int)class_sign.size() != H.nclasses()) throw usage_error("one sign per label class required");
    if (omega_values.size() != W.omega_gens.size()) throw usage_error("one value per Omega generator required");
    MatrixRep R;
    R.H = Hp;
    R.kind = name;
    R.dim = 1;
    R.irreducible = true;
    for (size_t p = 0; p < W.gens.size(); ++p) {
        double v = R.gen_v(p);
        R.gen.push_back(CMat::Constant(1, 1, class_sign[H.gen_class[p]] > 0 ? cplx(v) : cplx(-1.0 / v)));
    }
    for (auto z : omega_values) R.omega.push_back(CMat::Constant(1, 1, z));
    const Weyl* Wp = &W;
    R.length0 = [Wp, omega_values](const AffElem& om) {
        auto e = omega_exponents(*Wp, om);
        cplx z = 1;
        for (size_t i = 0; i < e.size(); ++i) z *= std::pow(omega_values[i], (int)e[i]);
        return CMat::Constant(1, 1, z);
    };
    auto Hc = Hp;
    auto gens = R.gen;
    auto l0 = R.length0;
    R.theta_fn = [Hc, gens, l0](const IVec& x) {
        const Hecke& HH = *Hc;
        std::vector<double> q = HH.var_values_double();
        cplx s = 0;
        for (auto& [w, c] : HH.theta(x)) {
            auto [word, om] = HH.W.reduced_word(w);
            cplx m = l0(om)(0, 0);
            for (int p : word) m *= gens[p](0, 0);
            s += c.eval_double(q) * m;
        }
        return CMat::Constant(1, 1, s);
    };
    if (R.check_relations().worst() > 1e-9) throw usage_error("character values violate the defining relations");
    return R;
}

inline MatrixRep steinberg(std::shared_ptr<const Hecke> Hp) {
    return one_dim(Hp, std::vector<int>(Hp->nclasses(), -1), std::vector<cplx>(Hp->W.omega_gens.size(), 1.0),
                   "steinberg");
}
inline MatrixRep trivial_rep(std::shared_ptr<const Hecke> Hp) {
    return one_dim(Hp, std::vector<int>(Hp->nclasses(), 1), std::vector<cplx>(Hp->W.omega_gens.size(), 1.0),
                   "trivial");
}

// ---- weights ----

inline bool weight_less(const CPoint& a, const CPoint& b) {
    for (size_t j = 0; j < a.size(); ++j) {
        double aa = std::round(std::arg(a[j]) * 1e8), ba = std::round(std::arg(b[j]) * 1e8);
        if (aa != ba) return aa < ba;
        double am = std::round(std::abs(a[j]) * 1e8), bm = std::round(std::abs(b[j]) * 1e8);
        if (am != bm) return am < bm;
    }
    return false;
}

inline WeightList a_weights(const MatrixRep& R, double cluster_tol = 1e-6, unsigned seed = 12345) {
    const int r = R.H->W.r, n = R.dim;
    std::vector<CMat> th;
    for (int j = 0; j < r; ++j) {
        IVec e(r, 0);
        e[j] = 1;
        th.push_back(R.theta(e));
    }
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> U(0.5, 1.5);
    CMat Th = CMat::Zero(n, n);
    for (int j = 0; j < r; ++j) Th += cplx(U(rng), U(rng) - 1.0) * th[j];
    Eigen::ComplexEigenSolver<CMat> es(Th, false);
    if (es.info() != Eigen::Success) throw precision_error("eigenvalue extraction failed; use exact mode");
    std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
    double scale = 1;
    for (auto z : ev) scale = std::max(scale, std::abs(z));
    // cluster eigenvalues
    std::vector<std::vector<cplx>> clusters;
    for (auto z : ev) {
        bool placed = false;
        for (auto& c : clusters)
            if (std::abs(c[0] - z) < cluster_tol * scale * 100) {
                c.push_back(z);
                placed = true;
                break;
            }
        if (!placed) clusters.push_back({z});
    }
    WeightList out;
    for (auto& c : clusters) {
        int m = c.size();
        cplx lam = 0;
        for (auto z : c) lam += z;
        lam /= double(m);
        CMat P = Th - lam * CMat::Identity(n, n), Pm = CMat::Identity(n, n);
        for (int k = 0; k < m; ++k) Pm = Pm * P;
        Eigen::JacobiSVD<CMat> svd(Pm, Eigen::ComputeFullV);
        CMat V = svd.matrixV().rightCols(m);
        Weight w;
        w.multiplicity = m;
        for (int j = 0; j < r; ++j) {
            CMat A = V.adjoint() * th[j] * V;
            Eigen::ComplexEigenSolver<CMat> ea(A, false);
            cplx s = 0, lo = ea.eigenvalues()(0);
            double spread = 0;
            for (int k = 0; k < m; ++k) {
                s += ea.eigenvalues()(k);
                spread = std::max(spread, std::abs(ea.eigenvalues()(k) - lo));
            }
            if (spread > 1e-3 * std::max(1.0, std::abs(lo)))
                throw precision_error("ill-conditioned weight extraction; use exact mode");
            w.point.push_back(s / double(m));
        }
        out.push_back(w);
    }
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return weight_less(a.point, b.point); });
    return out;
}

// log|t| written as -Σ c_i α_i∨ ; residual measures the central part
struct CoordsOnCoroots {
    std::vector<double> c;
    double residual = 0;
};
inline CoordsOnCoroots log_abs_on_coroots(const RootDatum& d, const CPoint& t) {
    int r = d.rank, m = d.nsimple();
    Eigen::VectorXd l(r);
    for (int j = 0; j < r; ++j) l(j) = std::log(std::abs(t[j]));
    Eigen::MatrixXd A(r, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < r; ++j) {
            double s = 0;
            for (int k = 0; k < r; ++k) s += d.pairing[j][k] * d.simple_coroots[i][k];
            A(j, i) = -s;
        }
    CoordsOnCoroots out;
    Eigen::VectorXd c = m ? Eigen::VectorXd(A.colPivHouseholderQr().solve(l)) : Eigen::VectorXd(0);
    out.c.assign(c.data(), c.data() + m);
    out.residual = m ? (A * c - l).cwiseAbs().maxCoeff() : (l.size() ? l.cwiseAbs().maxCoeff() : 0);
    return out;
}

inline bool weight_tempered(const RootDatum& d, const CPoint& t, double tol = 1e-9) {
    auto k = log_abs_on_coroots(d, t);
    if (k.residual > tol) return false;
    for (double c : k.c)
        if (c < -tol) return false;
    return true;
}
inline bool weight_square_integrable(const RootDatum& d, const CPoint& t, double tol = 1e-9) {
    auto k = log_abs_on_coroots(d, t);
    if (k.residual > tol) return false;
    for (double c : k.c)
        if (c <= tol) return false;
    return true;
}
inline bool is_tempered(const MatrixRep& R, const WeightList& w, double tol = 1e-9) {
    for (auto& x : w)
        if (!weight_tempered(R.H->W.d, x.point, tol)) return false;
    return true;
}
inline bool is_discrete_series(const MatrixRep& R, const WeightList& w, double tol = 1e-9) {
    if (!R.irreducible) return false;
    for (auto& x : w)
        if (!weight_square_integrable(R.H->W.d, x.point, tol)) return false;
    return true;
}

inline nlohmann::json rep_summary_json(const MatrixRep& R, double tol = 1e-9) {
    auto rnd = [](double x) {
        double y = std::round(x * 1e10) / 1e10;
        return y == 0 ? 0.0 : y;
    };
    WeightList w = a_weights(R);
    nlohmann::json ws = nlohmann::json::array();
    for (auto& x : w) {
        nlohmann::json p = nlohmann::json::array();
        for (auto z : x.point) p.push_back({rnd(z.real()), rnd(z.imag())});
        ws.push_back({{"point", p}, {"multiplicity", x.multiplicity}});
    }
    return {{"dim", R.dim}, {"weights", ws}, {"tempered", is_tempered(R, w, tol)},
            {"discrete_series", is_discrete_series(R, w, tol)}};
}

// ---- intertwiners ----

// ι⁰_s ⊗ 1_{st} = (N_s - g(st)) / (q_s^{-1/2} + g(t)) with g the Bernstein defect function of s.
// Returns the coefficients of N_e and N_s, denominators cleared.
inline std::pair<cplx, cplx> intertwiner_vector(const Hecke& H, int i, const CPoint& t) {
    const RootDatum& d = H.W.d;
    std::vector<double> q = H.var_values_double();
    int p = H.simple_gen(i);
    double v = H.gen_v[p].eval_double(q), es = H.gen_eta[p].eval_double(q);
    cplx b = point_eval(t, d.simple_roots[i]);
    cplx ce, cs, E;
    if (!d.coroot_in_2Y(d.simple_index[i])) {
        E = (1.0 - 1.0 / b) / v + es;
        cs = 1.0 - 1.0 / b;
        ce = es / b;
    } else {
        double e0 = H.class_eta(H.affine_reflection_class(d.simple_index[i])).eval_double(q);
        E = (1.0 - 1.0 / (b * b)) / v + es + e0 / b;
        cs = 1.0 - 1.0 / (b * b);
        ce = (es + e0 * b) / (b * b);
    }
    if (std::abs(E) < 1e-12) throw singular_intertwiner("intertwiner has a pole at this point");
    return {ce / E, cs / E};
}

// matrix of I_t -> I_{st}, h ⊗ 1 ↦ h ι⁰_s ⊗ 1
inline CMat intertwiner(std::shared_ptr<const Hecke> Hp, int i, const CPoint& t) {
    const Hecke& H = *Hp;
    const Weyl& W = H.W;
    if (i < 0 || i >= W.d.nsimple()) throw usage_error("no such simple reflection");
    auto [ce, cs] = intertwiner_vector(H, i, t);
    CPoint st = point_act(W, W.simple_elem[i], t);
    MatrixRep target = principal_series(Hp, st);
    int n = W.order();
    CVec v = CVec::Zero(n);
    v(0) += ce;
    v(W.simple_elem[i]) += cs;
    CMat A(n, n);
    for (int w = 0; w < n; ++w) {
        CVec c = v;
        const auto& wd = W.word[w];
        for (auto it = wd.rbegin(); it != wd.rend(); ++it) c = target.gen[H.simple_gen(*it)] * c;
        A.col(w) = c;
    }
    return A;
}

// ---- truncated affine projectors ----

// p = Σ conj(δ(N_w)) N_w / Σ |δ(N_w)|², summed over W (or over a finite parabolic W_P when given)
struct ProjectorSpec {
    MatrixRep delta;
    std::optional<std::vector<int>> parabolic;
};

struct ProjectorResult {
    CMat value;
    double increment = 0;
    int depth = 0;
    bool converged = false;
};

inline std::vector<CMat> projector_partial_sums(const ProjectorSpec& spec, const MatrixRep& rep, int depth) {
    const Hecke& H = *rep.H;
    const Weyl& W = H.W;
    const MatrixRep& delta = spec.delta;
    if (delta.dim != 1) throw usage_error("projector series needs a one-dimensional character");
    if (!spec.parabolic) {
        if (!W.omega_finite()) throw wrong_branch("series does not converge: Omega is infinite");
        if (!is_discrete_series(delta, a_weights(delta)))
            throw wrong_branch("series does not converge for these labels (character is not square integrable)");
    }
    std::vector<int> allowed;
    if (spec.parabolic)
        for (int i : *spec.parabolic) allowed.push_back(H.simple_gen(i));
    else
        for (size_t p = 0; p < W.gens.size(); ++p) allowed.push_back(p);

    struct Entry {
        CMat m;
        cplx d;
    };
    std::map<AffElem, Entry> layer;
    if (spec.parabolic) layer[W.identity()] = {rep.identity(), 1.0};
    else
        for (auto& om : W.omega_elements()) layer[om] = {rep.length0(om), delta.length0(om)(0, 0)};
    std::vector<CMat> sums;
    CMat num = CMat::Zero(rep.dim, rep.dim);
    double den = 0;
    for (int l = 0; l <= depth; ++l) {
        for (auto& [w, e] : layer) {
            num += std::conj(e.d) * e.m;
            den += std::norm(e.d);
        }
        sums.push_back(num / den);
        if (l == depth) break;
        std::map<AffElem, Entry> next;
        for (auto& [w, e] : layer)
            for (int p : allowed) {
                AffElem y = W.compose(W.gens[p], w);
                if (next.count(y) || W.length(y) != l + 1) continue;
                next[y] = {rep.gen[p] * e.m, delta.gen[p](0, 0) * e.d};
            }
        layer = std::move(next);
    }
    return sums;
}

inline double sup_norm(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline ProjectorResult truncated_projector(const ProjectorSpec& spec, const MatrixRep& rep, int depth) {
    auto s = projector_partial_sums(spec, rep, depth);
    ProjectorResult r;
    r.value = s.back();
    r.depth = depth;
    r.increment = depth > 0 ? sup_norm(s[depth] - s[depth - 1]) : sup_norm(s[0]);
    return r;
}

// depth doubles until consecutive truncations differ by less than tol/10
inline ProjectorResult converge_projector(const ProjectorSpec& spec, const MatrixRep& rep, double tol,
                                          int max_depth = 128) {
    int d = 1;
    auto s = projector_partial_sums(spec, rep, std::min(2, max_depth));
    ProjectorResult r;
    while (true) {
        int d2 = std::min(2 * d, max_depth);
        if ((int)s.size() <= d2) s = projector_partial_sums(spec, rep, std::min(2 * d2, max_depth));
        r.value = s[d2];
        r.depth = d2;
        r.increment = sup_norm(s[d2] - s[d]);
        if (r.increment < tol / 10) {
            r.converged = true;
            return r;
        }
        if (d2 == max_depth) return r;
        d = d2;
    }
}

inline std::vector<int> parse_index_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stoi(tok));
    return out;
}

}  // namespace hk
