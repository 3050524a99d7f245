#include <gtest/gtest.h>

#include "hk/spectral.hpp"

using namespace hk;

namespace {

std::shared_ptr<Hecke> hecke(const std::string& fam, const std::string& labels = "generic") {
    return make_hecke(std::make_shared<const Weyl>(family_from_string(fam)), labels);
}

} // namespace

TEST(Spectral, GenericPointCensus) {
    struct Case {
        const char* fam;
        int points, orbits;
    } cases[] = {{"A1~", 4, 2}, {"A1", 4, 2}, {"GL2", 0, 0}, {"A2~", 18, 3}, {"A2", 6, 1}, {"B2", 40, 5}};
    for (auto& c : cases) {
        auto H = hecke(c.fam);
        auto rep = Spectral(*H).classify();
        EXPECT_TRUE(rep.search_complete) << c.fam;
        EXPECT_EQ(rep.points(), c.points) << c.fam;
        EXPECT_EQ(rep.point_orbits(), c.orbits) << c.fam;
    }
}

TEST(Spectral, CircleCensus) {
    auto rep = Spectral(*hecke("A2~")).classify();
    EXPECT_EQ(rep.cosets(1), 6);
    EXPECT_EQ(rep.coset_orbits(1), 1);
    auto gl = Spectral(*hecke("GL2")).classify();
    EXPECT_EQ(gl.cosets(1), 2);
    EXPECT_EQ(gl.coset_orbits(1), 1);
}

TEST(Spectral, WholeTorusIsResidual) {
    for (const char* f : {"A1", "GL2", "A2", "B2"}) {
        auto rep = Spectral(*hecke(f)).classify();
        int r = family_from_string(f).rank;
        EXPECT_EQ(rep.coset_orbits(r), 1) << f;
    }
}

TEST(Spectral, OrbitsAreStable) {
    for (const char* f : {"A1~", "A2~", "B2"}) {
        auto H = hecke(f);
        Spectral S(*H);
        auto rep = S.classify();
        for (auto& o : rep.orbits) {
            EXPECT_EQ((int)o.members.size(), o.size);
            std::set<Coset> mem(o.members.begin(), o.members.end());
            for (auto& L : o.members) {
                EXPECT_TRUE(S.is_residual(L)) << f;
                for (int w = 0; w < S.W.order(); ++w) EXPECT_TRUE(mem.count(act(S.W, w, L, S.nb))) << f;
            }
            EXPECT_EQ(S.W.order() % o.size, 0) << f;
            EXPECT_EQ((int)S.stabilizer(o.rep).size() * o.size, S.W.order()) << f;
        }
    }
}

TEST(Spectral, GenericityClasses) {
    EXPECT_EQ(genericity_class(*hecke("B2", "q1=2,q2=7")).label, "generic");
    EXPECT_EQ(genericity_class(*hecke("B2", "q1=1,q2=1")).label, "group case");
    auto g = genericity_class(*hecke("B2", "q1=4,q2=2"));
    EXPECT_EQ(g.label, "q1 = q2^2");
    EXPECT_TRUE(g.special);
    auto h = genericity_class(*hecke("B2", "q1=2,q2=1"));
    EXPECT_EQ(h.label, "q2 = 1");
    EXPECT_FALSE(h.special);
    EXPECT_EQ(genericity_class(*hecke("B2", "q1=2,q2=7")).points, 40);
    EXPECT_THROW(genericity_class(*hecke("B2")), usage_error);
}

TEST(Spectral, NumericMatchesGeneric) {
    auto rep = Spectral(*hecke("A2~", "q=3")).classify();
    EXPECT_EQ(rep.points(), 18);
    EXPECT_EQ(Spectral(*hecke("A1~", "q=1")).classify().points(), 0);
}

TEST(Spectral, ScalePoint) {
    TorusPoint t;
    t.unit = {Rat(1, 2), Rat(0)};
    t.exps = {{Rat(1)}, {Rat(-2)}};
    auto s = scale_point(t, Rat(1, 2));
    EXPECT_EQ(s.unit, t.unit);
    EXPECT_EQ(s.exps[0][0], Rat(1, 2));
    EXPECT_EQ(s.exps[1][0], Rat(-1));
    auto z = scale_point(t, Rat(0));
    EXPECT_TRUE(rv_zero(z.exps[0]) && rv_zero(z.exps[1]));
    EXPECT_EQ(scale_point(t, Rat(1)), t);
}

TEST(Spectral, PointAction) {
    auto H = hecke("A2", "q=2");
    Spectral S(*H);
    TorusPoint t;
    t.unit = {Rat(1, 3), Rat(1, 5)};
    t.exps = {{Rat(1)}, {Rat(0)}};
    for (int w = 0; w < S.W.order(); ++w)
        for (int u = 0; u < S.W.order(); ++u)
            EXPECT_EQ(act(S.W, w, act(S.W, u, t, S.nb), S.nb), act(S.W, S.W.mul(w, u), t, S.nb));
}
