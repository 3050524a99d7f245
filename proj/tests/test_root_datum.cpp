#include <gtest/gtest.h>

#include <set>

#include "hk/root_datum.hpp"

using namespace hk;

TEST(RootDatum, FamilySizes) {
    struct Case {
        const char* name;
        int rank, npos;
    } cases[] = {{"A1~", 1, 1}, {"A1", 1, 1}, {"GL2", 2, 1}, {"A2~", 2, 3}, {"A2", 2, 3},
                 {"B2", 2, 4},  {"GL4", 4, 6}, {"A3", 3, 6}, {"B3", 3, 9}};
    for (auto& c : cases) {
        auto d = family_from_string(c.name);
        EXPECT_EQ(d.rank, c.rank) << c.name;
        EXPECT_EQ(d.npos(), c.npos) << c.name;
        EXPECT_EQ((int)d.roots.size(), 2 * c.npos) << c.name;
        EXPECT_TRUE(validate(d).ok) << c.name;
    }
}

TEST(RootDatum, UnsupportedFamily) {
    EXPECT_THROW(family_from_string("E8"), unsupported_family);
    EXPECT_THROW(family_from_string("GL0"), unsupported_family);
    EXPECT_THROW(family_from_string("Ax"), unsupported_family);
}

TEST(RootDatum, ValidationCatchesBadPairing) {
    auto bad = raw_datum(1, {{1}}, {{2}}, {{2}});
    auto rep = validate(bad);
    EXPECT_FALSE(rep.ok);
    EXPECT_FALSE(rep.failures.empty());
    EXPECT_THROW(RootDatum(1, {{1}}, {{2}}, {{2}}), invalid_datum);
}

TEST(RootDatum, PairingOnRoots) {
    for (const char* f : {"A2~", "B2", "GL3", "B3"}) {
        auto d = family_from_string(f);
        for (size_t i = 0; i < d.roots.size(); ++i) {
            EXPECT_EQ(d.pair(d.roots[i], d.coroots[i]), 2) << f;
            for (size_t j = 0; j < d.roots.size(); ++j) {
                IVec r = vsub(d.roots[j], vscale(d.roots[i], d.pair(d.roots[j], d.coroots[i])));
                EXPECT_GE(d.root_index(r), 0) << f << " R0 not closed under reflections";
            }
        }
    }
}

TEST(RootDatum, DualIsInvolution) {
    for (const char* f : {"A1~", "A2", "B2", "GL3"}) {
        auto d = family_from_string(f);
        auto dd = dual(dual(d));
        EXPECT_EQ(dd.simple_roots, d.simple_roots) << f;
        EXPECT_EQ(dd.simple_coroots, d.simple_coroots) << f;
        EXPECT_EQ(dual(d).npos(), d.npos()) << f;
    }
}

TEST(RootDatum, Product) {
    auto p = product(family_from_string("A1"), family_from_string("GL2"));
    EXPECT_EQ(p.rank, 3);
    EXPECT_EQ(p.npos(), 2);
    EXPECT_EQ(p.components.size(), 2u);
    EXPECT_TRUE(validate(p).ok);
}

TEST(RootDatum, ParabolicTorsion) {
    auto gl = parabolic(family_from_string("GL2"), {0});
    EXPECT_EQ(gl.K_P, (std::vector<long long>{2}));
    EXPECT_EQ(gl.R_P.size(), 2u);

    auto b2 = family_from_string("B2");
    EXPECT_EQ(parabolic(b2, {1}).K_P, (std::vector<long long>{2}));
    EXPECT_TRUE(parabolic(b2, {0}).K_P.empty());
    auto empty = parabolic(b2, {});
    EXPECT_TRUE(empty.K_P.empty());
    EXPECT_TRUE(empty.R_P.empty());
}

TEST(RootDatum, JsonRoundTrip) {
    auto d = family_from_string("B2");
    auto e = RootDatum::from_json(d.to_json());
    EXPECT_EQ(e.simple_roots, d.simple_roots);
    EXPECT_EQ(e.simple_coroots, d.simple_coroots);
    EXPECT_EQ(e.pairing, d.pairing);
    EXPECT_EQ(e.npos(), d.npos());
}
