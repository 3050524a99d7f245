#include <gtest/gtest.h>

#include <random>

#include "hk/random.hpp"
#include "hk/weyl.hpp"

using namespace hk;

TEST(Weyl, FiniteOrders) {
    EXPECT_EQ(Weyl(family_from_string("A1")).order(), 2);
    EXPECT_EQ(Weyl(family_from_string("A2~")).order(), 6);
    EXPECT_EQ(Weyl(family_from_string("B2")).order(), 8);
    EXPECT_EQ(Weyl(family_from_string("B3")).order(), 48);
    EXPECT_EQ(Weyl(family_from_string("GL4")).order(), 24);
}

TEST(Weyl, SizeLimit) { EXPECT_THROW(Weyl(family_from_string("GL6"), 100), size_limit); }

TEST(Weyl, GeneratorLengths) {
    for (const char* f : {"A1~", "A1", "GL2", "A2", "B2", "B3"}) {
        Weyl W(family_from_string(f));
        for (auto& g : W.gens) EXPECT_EQ(W.length(g), 1) << f;
        for (auto& o : W.omega_gens) EXPECT_EQ(W.length(o), 0) << f;
    }
}

TEST(Weyl, TranslationLength) {
    // ℓ(t_x) = Σ_{α>0} |<x, α∨>|
    Weyl W(family_from_string("A1"));
    IVec a = W.d.simple_roots[0];
    EXPECT_EQ(W.length(W.translation(a)), 2);
    EXPECT_EQ(W.length(W.translation(vscale(a, 3))), 6);
}

TEST(Weyl, ReducedWordRoundTrip) {
    std::mt19937 rng(3);
    for (const char* f : {"A1~", "GL2", "A2~", "B2", "GL3"}) {
        Weyl W(family_from_string(f));
        for (int it = 0; it < 100; ++it) {
            AffElem w = random_affelem(W, rng, 8);
            auto [word, om] = W.reduced_word(w);
            EXPECT_EQ((int)word.size(), W.length(w)) << f;
            EXPECT_EQ(W.from_word(word, om), w) << f;
            EXPECT_EQ(W.length(om), 0) << f;
        }
    }
}

TEST(Weyl, LengthMatchesBfs) {
    for (const char* f : {"A1", "A2", "B2"}) {
        Weyl W(family_from_string(f));
        for (auto& [w, l] : waff_ball(W, 6)) EXPECT_EQ(W.length(w), l) << f << " " << W.elem_str(w);
    }
}

TEST(Weyl, LengthProperties) {
    std::mt19937 rng(5);
    for (const char* f : {"A1~", "A2~", "B2"}) {
        Weyl W(family_from_string(f));
        for (int it = 0; it < 100; ++it) {
            AffElem u = random_affelem(W, rng, 6), v = random_affelem(W, rng, 6);
            EXPECT_EQ(W.length(W.inverse(u)), W.length(u));
            EXPECT_LE(W.length(W.compose(u, v)), W.length(u) + W.length(v));
            for (auto& g : W.gens) EXPECT_EQ(std::abs(W.length(W.compose(g, u)) - W.length(u)), 1);
        }
    }
}

TEST(Weyl, CoxeterRelations) {
    Weyl W(family_from_string("B2"));
    int n = W.gens.size();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            int m = W.coxeter_m(a, b);
            if (m == 0) continue;
            AffElem x = W.identity();
            for (int k = 0; k < m; ++k) x = W.compose(x, W.compose(W.gens[a], W.gens[b]));
            EXPECT_EQ(x, W.identity());
        }
}

TEST(Weyl, BallCensus) {
    auto a1 = ball_census(Weyl(family_from_string("A1")), 30);
    EXPECT_EQ(a1.counts[0], 1);
    for (int n = 1; n <= 30; ++n) EXPECT_EQ(a1.counts[n], 2);
    EXPECT_TRUE(a1.bound_ok);
    for (const char* f : {"A1~", "GL2", "A2~", "B2"}) EXPECT_TRUE(ball_census(Weyl(family_from_string(f)), 20).bound_ok) << f;
}

TEST(Weyl, ConjugacyClasses) {
    EXPECT_EQ(Weyl(family_from_string("A2")).conj_classes().size(), 3u);
    EXPECT_EQ(Weyl(family_from_string("B2")).conj_classes().size(), 5u);
    EXPECT_EQ(Weyl(family_from_string("B3")).conj_classes().size(), 10u);
    EXPECT_EQ(Weyl(family_from_string("GL4")).conj_classes().size(), 5u);
    for (const char* f : {"A2", "B2", "GL4"}) {
        Weyl W(family_from_string(f));
        size_t tot = 0;
        for (auto& c : W.conj_classes()) {
            tot += c.members.size();
            EXPECT_EQ(W.centralizer(c.rep).size() * c.members.size(), (size_t)W.order());
        }
        EXPECT_EQ(tot, (size_t)W.order());
    }
}

TEST(Weyl, FixedSubtorus) {
    Weyl A(family_from_string("A2~"));
    Weyl B(family_from_string("B2"));
    Weyl G(family_from_string("GL3"));
    auto find = [](const Weyl& W, const std::string& label) {
        for (auto& c : W.conj_classes())
            if (c.label == label) return W.fixed_subtorus(c.rep);
        throw std::runtime_error("no class " + label);
    };
    EXPECT_EQ(find(A, "3").first, 0);
    EXPECT_EQ(find(A, "3").second, (std::vector<long long>{3}));
    EXPECT_EQ(find(G, "3").first, 1);
    EXPECT_TRUE(find(G, "3").second.empty());
    EXPECT_EQ(find(B, "(|1,1)").second, (std::vector<long long>{2, 2}));
    EXPECT_EQ(find(B, "(1|1)").first, 1);
}

TEST(Weyl, OmegaOrders) {
    EXPECT_EQ(Weyl(family_from_string("A2~")).omega_orders, (std::vector<long long>{3}));
    EXPECT_EQ(Weyl(family_from_string("GL2")).omega_orders, (std::vector<long long>{0}));
    EXPECT_TRUE(Weyl(family_from_string("A2")).omega_gens.empty());
}
