#include <gtest/gtest.h>

#include <random>

#include "hk/random.hpp"

using namespace hk;

namespace {

std::shared_ptr<Hecke> hecke(const std::string& fam, const std::string& labels = "generic") {
    auto W = std::make_shared<const Weyl>(family_from_string(fam));
    return make_hecke(W, labels);
}

const char* kFamilies[] = {"A1~", "A1", "GL2", "A2~", "A2", "B2"};

} // namespace

TEST(Hecke, QuadraticRelation) {
    for (const char* f : kFamilies) {
        auto H = hecke(f);
        for (size_t p = 0; p < H->W.gens.size(); ++p) {
            auto Ns = H->basis(H->W.gens[p]);
            auto rhs = lin_comb(H->unit(), Ns, H->gen_eta[p]);
            EXPECT_EQ(H->mul(Ns, Ns), rhs) << f;
        }
    }
}

TEST(Hecke, A1Square) {
    auto H = hecke("A1", "q0=g,q1=g");
    auto Ns = H->basis(H->W.gens[1]);
    EXPECT_EQ(H->str(H->mul(Ns, Ns)), "N[e] + (g^(1/2) - g^(-1/2))*N[s1]");
}

TEST(Hecke, BraidRelations) {
    for (const char* f : {"A2", "A2~", "B2"}) {
        auto H = hecke(f);
        const Weyl& W = H->W;
        for (size_t a = 0; a < W.gens.size(); ++a)
            for (size_t b = 0; b < a; ++b) {
                int m = W.coxeter_m(a, b);
                if (m == 0) continue;
                HeckeElement x = H->unit(), y = H->unit();
                for (int k = 0; k < m; ++k) {
                    x = H->mul(x, H->basis(W.gens[k % 2 ? b : a]));
                    y = H->mul(y, H->basis(W.gens[k % 2 ? a : b]));
                }
                EXPECT_EQ(x, y) << f;
            }
    }
}

TEST(Hecke, ReducedProductIsBasis) {
    std::mt19937 rng(1);
    auto H = hecke("B2");
    const Weyl& W = H->W;
    for (int it = 0; it < 50; ++it) {
        AffElem w = random_affelem(W, rng, 7);
        auto [word, om] = W.reduced_word(w);
        HeckeElement x = H->unit();
        for (int p : word) x = H->mul(x, H->basis(W.gens[p]));
        x = H->mul(x, H->basis(om));
        EXPECT_EQ(x, H->basis(w));
    }
}

TEST(Hecke, Associativity) {
    std::mt19937 rng(2);
    for (const char* f : {"A1~", "GL2", "A2~", "B2"}) {
        auto H = hecke(f);
        for (int it = 0; it < 15; ++it) {
            auto a = random_element(*H, rng, 4), b = random_element(*H, rng, 4), c = random_element(*H, rng, 4);
            EXPECT_EQ(H->mul(H->mul(a, b), c), H->mul(a, H->mul(b, c))) << f;
        }
    }
}

TEST(Hecke, Inverses) {
    std::mt19937 rng(4);
    for (const char* f : {"A1~", "A2", "B2"}) {
        auto H = hecke(f);
        for (int it = 0; it < 20; ++it) {
            AffElem w = random_affelem(H->W, rng, 6);
            EXPECT_EQ(H->mul(H->basis(w), H->basis_inverse(w)), H->unit()) << f;
        }
    }
}

TEST(Hecke, TraceAndInner) {
    std::mt19937 rng(6);
    auto H = hecke("A2~");
    const Weyl& W = H->W;
    for (int it = 0; it < 30; ++it) {
        AffElem u = random_affelem(W, rng, 5), v = random_affelem(W, rng, 5);
        // the standard basis is orthonormal
        EXPECT_EQ(H->inner(H->basis(u), H->basis(v)), LaurentPoly(u == v ? 1 : 0));
        auto a = random_element(*H, rng, 4), b = random_element(*H, rng, 4);
        EXPECT_EQ(H->trace(H->mul(a, b)), H->trace(H->mul(b, a)));
    }
}

TEST(Hecke, GroupAlgebraAtOne) {
    std::mt19937 rng(8);
    auto H = hecke("B2");
    const Weyl& W = H->W;
    for (int it = 0; it < 30; ++it) {
        AffElem u = random_affelem(W, rng, 5), v = random_affelem(W, rng, 5);
        auto p = H->mul(H->basis(u), H->basis(v));
        AffElem uv = W.compose(u, v);
        for (auto& [w, c] : p) EXPECT_EQ(c.at_one(), BigInt(w == uv ? 1 : 0));
    }
}

TEST(Hecke, BernsteinRelation) {
    for (const char* f : kFamilies) {
        auto H = hecke(f);
        const auto& d = H->W.d;
        for (int i = 0; i < d.nsimple(); ++i)
            for (int a = -2; a <= 2; ++a)
                for (int j = 0; j < d.rank; ++j) {
                    IVec x(d.rank, 0);
                    x[j] = a;
                    EXPECT_TRUE(H->check_bernstein_relation(i, x)) << f;
                }
    }
}

TEST(Hecke, ThetaIsHomomorphism) {
    for (const char* f : {"A1~", "GL2", "A2", "B2"}) {
        auto H = hecke(f);
        int r = H->W.r;
        for (int a = -1; a <= 1; ++a)
            for (int b = -1; b <= 1; ++b) {
                IVec x(r, 0), y(r, 0);
                x[0] = a;
                y[r - 1] = b;
                EXPECT_EQ(H->mul(H->theta(x), H->theta(y)), H->theta(vadd(x, y))) << f;
                EXPECT_EQ(H->mul(H->theta(x), H->theta(y)), H->mul(H->theta(y), H->theta(x))) << f;
            }
    }
}

TEST(Hecke, BernsteinRoundTrip) {
    std::mt19937 rng(9);
    for (const char* f : kFamilies) {
        auto H = hecke(f);
        for (int it = 0; it < 20; ++it) {
            auto a = random_element(*H, rng, 5);
            EXPECT_EQ(H->from_bernstein(H->to_bernstein(a)), a) << f;
        }
    }
}

TEST(Hecke, BernsteinExample) {
    auto H = hecke("A1~");
    EXPECT_EQ(H->str(H->to_bernstein(H->basis(H->W.omega_gens[0]))), "N[s1]*theta(-1)");
}

TEST(Hecke, CenterCommutes) {
    for (const char* f : {"A1", "A2", "B2"}) {
        auto H = hecke(f);
        const Weyl& W = H->W;
        IVec x(W.r, 0);
        x[0] = 1;
        std::set<IVec> orbit;
        for (int w = 0; w < W.order(); ++w) orbit.insert(W.act(w, x));
        HeckeElement z;
        for (auto& y : orbit) z = lin_comb(z, H->theta(y));
        for (auto& g : W.gens) {
            auto Ng = H->basis(g);
            EXPECT_EQ(H->mul(z, Ng), H->mul(Ng, z)) << f;
        }
    }
}

TEST(Hecke, FiniteIdempotents) {
    for (const char* f : {"A1", "A2", "B2"}) {
        auto H = hecke(f);
        std::vector<int> P;
        for (int i = 0; i < H->W.d.nsimple(); ++i) P.push_back(i);
        auto tr = H->finite_idempotent("triv", P), sg = H->finite_idempotent("sign", P);
        EXPECT_TRUE(H->is_idempotent(tr)) << f;
        EXPECT_TRUE(H->is_idempotent(sg)) << f;
        EXPECT_TRUE(H->mul(tr.num, sg.num).empty()) << f;
    }
    auto H = hecke("A1");
    EXPECT_THROW(H->finite_idempotent("other", {0}), usage_error);
}

TEST(Hecke, NumericLabels) {
    auto H = hecke("B2", "q1=4,q2=2");
    EXPECT_TRUE(H->numeric());
    auto q = H->var_values_double();
    EXPECT_EQ(q.size(), 2u);
    EXPECT_THROW(hecke("B2", "q1=0"), usage_error);
    EXPECT_THROW(hecke("B2", "q1"), usage_error);
    EXPECT_THROW(hecke("A1", "q0=g,q1=h,q0=k"), usage_error);
}

TEST(Hecke, ProductShape) {
    std::mt19937 rng(10);
    for (const char* f : {"A1~", "A2~", "B2"}) {
        auto H = hecke(f);
        for (int it = 0; it < 30; ++it) {
            auto s = product_shape(*H, random_affelem(H->W, rng, 6), random_affelem(H->W, rng, 6));
            EXPECT_TRUE(s.ok()) << f << " degree " << s.max_degree << " terms " << s.terms;
        }
    }
}

TEST(Hecke, NormInequality) {
    std::mt19937 rng(12);
    for (const char* lab : {"q=1/2", "q=1", "q=3"}) {
        auto H = hecke("A2", lab);
        auto k = norm_constants(*H);
        for (int it = 0; it < 20; ++it) {
            auto x = random_element(*H, rng, 5), y = random_element(*H, rng, 5);
            for (int n = 0; n <= 3; ++n) EXPECT_TRUE(check_norm_inequality(*H, k, x, y, n).ok) << lab;
        }
    }
}

TEST(Hecke, StringOutput) {
    auto H = hecke("A1");
    auto Ns = H->basis(H->W.gens[1]);
    EXPECT_EQ(H->str(HeckeElement{}), "0");
    EXPECT_EQ(H->str(scaled(Ns, LaurentPoly(-1))), "-N[s1]");
    EXPECT_FALSE(H->to_json(Ns).is_null());
}
