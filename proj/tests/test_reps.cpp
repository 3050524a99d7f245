#include <gtest/gtest.h>

#include <random>

#include "hk/random.hpp"
#include "hk/reps.hpp"

using namespace hk;

namespace {

std::shared_ptr<const Hecke> hecke(const std::string& fam, const std::string& labels) {
    return make_hecke(std::make_shared<const Weyl>(family_from_string(fam)), labels);
}

struct Case {
    const char* fam;
    const char* labels;
};
const Case kCases[] = {{"A1~", "q=2"}, {"A1", "q0=2,q1=3"}, {"GL2", "q=2"},
                       {"A2~", "q=2"}, {"A2", "q=2"},       {"B2", "q1=2,q2=3"}};

CPoint random_point(int r, std::mt19937& rng, double spread) {
    std::uniform_real_distribution<double> U(-1, 1);
    CPoint t;
    for (int j = 0; j < r; ++j) t.push_back(std::polar(std::exp(spread * U(rng)), 3.0 * U(rng)));
    return t;
}

} // namespace

TEST(Reps, PrincipalSeriesRelations) {
    std::mt19937 rng(1);
    for (auto& c : kCases) {
        auto H = hecke(c.fam, c.labels);
        for (int it = 0; it < 3; ++it) {
            auto R = principal_series(H, random_point(H->W.r, rng, 0.4));
            EXPECT_LT(R.check_relations().worst(), 1e-9) << c.fam;
            EXPECT_EQ(R.dim, H->W.order());
        }
    }
}

TEST(Reps, WeightsFormOrbit) {
    std::mt19937 rng(2);
    for (auto& c : kCases) {
        auto H = hecke(c.fam, c.labels);
        const Weyl& W = H->W;
        CPoint t = random_point(W.r, rng, 0.4);
        auto w = a_weights(principal_series(H, t));
        int total = 0;
        for (auto& x : w) total += x.multiplicity;
        EXPECT_EQ(total, W.order()) << c.fam;
        for (int u = 0; u < W.order(); ++u) {
            double best = 1e9;
            for (auto& x : w) best = std::min(best, point_dist(x.point, point_act(W, u, t)));
            EXPECT_LT(best, 1e-8) << c.fam;
        }
    }
}

TEST(Reps, IntertwinersCommute) {
    std::mt19937 rng(3);
    for (auto& c : kCases) {
        auto H = hecke(c.fam, c.labels);
        const Weyl& W = H->W;
        CPoint t = random_point(W.r, rng, 0.4);
        auto R = principal_series(H, t);
        for (int i = 0; i < W.d.nsimple(); ++i) {
            CMat A = intertwiner(H, i, t);
            CPoint st = point_act(W, W.simple_elem[i], t);
            auto S = principal_series(H, st);
            for (size_t p = 0; p < W.gens.size(); ++p) EXPECT_LT(sup_norm(A * R.gen[p] - S.gen[p] * A), 1e-9) << c.fam;
            for (size_t o = 0; o < W.omega_gens.size(); ++o)
                EXPECT_LT(sup_norm(A * R.omega[o] - S.omega[o] * A), 1e-9) << c.fam;
            // normalised so that the composite is the identity
            CMat B = intertwiner(H, i, st);
            EXPECT_LT(sup_norm(B * A - CMat::Identity(R.dim, R.dim)), 1e-9) << c.fam;
        }
    }
}

TEST(Reps, SingularIntertwiner) {
    // E = (1 - 1/b)/v + η vanishes at b = q^{-1}
    auto H = hecke("A1", "q0=4,q1=4");
    IVec a = H->W.d.simple_roots[0];
    ASSERT_EQ(a.size(), 1u);
    cplx t0 = std::pow(cplx(0.25), 1.0 / a[0]);
    EXPECT_THROW(intertwiner(H, 0, {t0}), singular_intertwiner);
}

TEST(Reps, UnitaryPointsAreHermitian) {
    std::mt19937 rng(4);
    for (auto& c : kCases) {
        auto H = hecke(c.fam, c.labels);
        auto R = principal_series(H, random_point(H->W.r, rng, 0.0));
        for (auto& g : R.gen) EXPECT_LT(sup_norm(g - g.adjoint()), 1e-9) << c.fam;
        EXPECT_TRUE(is_tempered(R, a_weights(R))) << c.fam;
    }
}

TEST(Reps, TemperedAndDiscreteSeries) {
    std::mt19937 rng(5);
    for (auto& c : kCases) {
        auto H = hecke(c.fam, c.labels);
        auto R = principal_series(H, random_point(H->W.r, rng, 0.4));
        if (H->W.d.nsimple() > 0) EXPECT_FALSE(is_tempered(R, a_weights(R))) << c.fam;
        EXPECT_FALSE(is_discrete_series(R, a_weights(R))) << c.fam;
        auto triv = trivial_rep(H);
        EXPECT_FALSE(is_tempered(triv, a_weights(triv))) << c.fam;
    }
    for (auto& c : kCases) {
        auto H = hecke(c.fam, c.labels);
        if (!H->W.d.semisimple()) continue;
        auto St = steinberg(H);
        EXPECT_TRUE(is_discrete_series(St, a_weights(St))) << c.fam;
    }
}

TEST(Reps, GroupCase) {
    // at q = 1 and t = 1 the principal series is the regular representation of W0
    auto H = hecke("A2", "q=1");
    auto R = principal_series(H, {1.0, 1.0});
    EXPECT_LT(R.check_relations().worst(), 1e-12);
    for (auto& g : R.gen) EXPECT_LT(sup_norm(g * g - CMat::Identity(R.dim, R.dim)), 1e-12);
}

TEST(Reps, Faithfulness) {
    // different basis elements act by different matrices on I_t at a generic point
    std::mt19937 rng(6);
    auto H = hecke("A1~", "q=3");
    auto R = principal_series(H, random_point(1, rng, 0.3));
    std::vector<CMat> seen;
    for (auto& [w, l] : waff_ball(H->W, 4)) {
        CMat m = R.basis(w);
        for (auto& s : seen) EXPECT_GT(sup_norm(m - s), 1e-6);
        seen.push_back(m);
    }
}

TEST(Reps, EvalIsHomomorphism) {
    std::mt19937 rng(7);
    for (auto& c : kCases) {
        auto H = hecke(c.fam, c.labels);
        auto R = principal_series(H, random_point(H->W.r, rng, 0.3));
        for (int it = 0; it < 5; ++it) {
            auto a = random_element(*H, rng, 3), b = random_element(*H, rng, 3);
            CMat ab = R.eval(H->mul(a, b)), prod = R.eval(a) * R.eval(b);
            EXPECT_LT(sup_norm(ab - prod), 1e-8 * (1 + sup_norm(prod))) << c.fam;
        }
    }
}

TEST(Reps, OneDimValidation) {
    auto H = hecke("A1~", "q=2");
    EXPECT_NO_THROW(one_dim(H, {-1}, {cplx(1)}));
    EXPECT_THROW(one_dim(H, {-1}, {}), usage_error);
    EXPECT_THROW(principal_series(hecke("A1", "generic"), {1.0}), usage_error);
}

TEST(Reps, SteinbergProjector) {
    auto H = hecke("A1", "q0=4,q1=4");
    ProjectorSpec sp{steinberg(H), std::nullopt};
    auto self = truncated_projector(sp, steinberg(H), 30);
    EXPECT_NEAR(std::abs(self.value(0, 0) - 1.0), 0.0, 1e-9);
    auto I = principal_series(H, {std::polar(1.0, 0.7)});
    auto c = converge_projector(sp, I, 1e-6);
    EXPECT_TRUE(c.converged);
    EXPECT_LT(sup_norm(c.value), 1e-5);
}

TEST(Reps, FiniteProjectorMatchesIdempotent) {
    auto H = hecke("A1", "q0=4,q1=4");
    auto I = principal_series(H, {std::polar(1.3, 0.7)});
    ProjectorSpec fp{trivial_rep(H), std::vector<int>{0}};
    auto f = truncated_projector(fp, I, 1);
    auto fi = H->finite_idempotent("triv", {0});
    CMat ex = I.eval(fi.num) / fi.den.eval_double(H->var_values_double());
    EXPECT_LT(sup_norm(f.value - ex), 1e-12);
}

TEST(Reps, OmegaTwistedProjectors) {
    auto H = hecke("A1~", "q=2");
    for (cplx om : {cplx(1), cplx(-1)}) {
        auto d = one_dim(H, {-1}, {om});
        ProjectorSpec s{d, std::nullopt};
        EXPECT_NEAR(std::abs(converge_projector(s, d, 1e-8).value(0, 0) - 1.0), 0.0, 1e-7);
        auto I = principal_series(H, {std::polar(1.0, 0.4)});
        EXPECT_LT(sup_norm(converge_projector(s, I, 1e-6).value), 1e-5);
    }
}

TEST(Reps, WrongBranch) {
    auto H = hecke("A1", "q0=1/2,q1=1/2");
    EXPECT_THROW(truncated_projector({steinberg(H), std::nullopt}, steinberg(H), 5), wrong_branch);
    auto G = hecke("GL2", "q=2");
    EXPECT_THROW(truncated_projector({steinberg(G), std::nullopt}, steinberg(G), 5), wrong_branch);
}

TEST(Reps, SummaryJson) {
    auto H = hecke("A2~", "q=2");
    auto j = rep_summary_json(steinberg(H));
    EXPECT_EQ(j["dim"], 1);
    EXPECT_TRUE(j["discrete_series"].get<bool>());
}
