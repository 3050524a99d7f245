#include <gtest/gtest.h>

#include <random>

#include "hk/laurent.hpp"
#include "hk/rational.hpp"

using namespace hk;

namespace {

LabelVars one_var() { return LabelVars({"q"}); }

LaurentPoly v(const LabelVars& V, int k = 1) { return LaurentPoly::var(V, 0, k); }

LaurentPoly random_poly(const LabelVars& V, std::mt19937& rng) {
    std::uniform_int_distribution<int> c(-4, 4), e(-3, 3), n(0, 4);
    LaurentPoly p(0);
    int k = n(rng);
    for (int i = 0; i < k; ++i) {
        Exps x{};
        for (int j = 0; j < V.size(); ++j) x[j] = e(rng);
        p += LaurentPoly::monomial(V, x, c(rng));
    }
    return p;
}

} // namespace

TEST(Laurent, DifferenceOfSquares) {
    auto V = one_var();
    LaurentPoly a = v(V), b = v(V, -1);
    EXPECT_EQ((a + b) * (a - b), v(V, 2) - v(V, -2));
}

TEST(Laurent, EtaSquared) {
    auto V = one_var();
    LaurentPoly e = LaurentPoly::eta(V, 0);
    EXPECT_EQ(e * e, v(V, 2) - LaurentPoly(2) + v(V, -2));
}

TEST(Laurent, ExactEvaluation) {
    auto V = one_var();
    LabelAssignment a;
    a.set("q", BigRat(4));
    LaurentPoly e = LaurentPoly::eta(V, 0);
    // (2 - 1/2)^2
    EXPECT_EQ(lp_eval(e * e, V, a).rational(), BigRat(9, 4));
    a.set("q", BigRat(1));
    EXPECT_EQ(lp_eval(e, V, a).rational(), BigRat(0));
    EXPECT_EQ(lp_eval(LaurentPoly(1) + v(V, 2), V, a).rational(), BigRat(2));
}

TEST(Laurent, SurdValue) {
    auto V = one_var();
    LabelAssignment a;
    a.set("q", BigRat(2));
    auto s = lp_eval(v(V), V, a);
    EXPECT_NEAR(s.to_double(), std::sqrt(2.0), 1e-14);
}

TEST(Laurent, UnboundLabel) {
    auto V = one_var();
    LabelAssignment a;
    EXPECT_THROW(lp_eval(v(V), V, a), unbound_label);
}

TEST(Laurent, IncompatibleVariables) {
    LaurentPoly a = LaurentPoly::var(LabelVars({"q"}), 0);
    LaurentPoly b = LaurentPoly::var(LabelVars({"q1", "q2"}), 0);
    EXPECT_THROW(a + b, incompatible_variables);
}

TEST(Laurent, RingAxioms) {
    LabelVars V({"q1", "q2"});
    std::mt19937 rng(7);
    for (int it = 0; it < 200; ++it) {
        auto a = random_poly(V, rng), b = random_poly(V, rng), c = random_poly(V, rng);
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a - a, LaurentPoly(0));
    }
}

TEST(Laurent, EvaluationIsHomomorphism) {
    LabelVars V({"q1", "q2"});
    std::mt19937 rng(11);
    LabelAssignment asg;
    asg.set("q1", BigRat(3));
    asg.set("q2", BigRat(1, 2));
    std::vector<double> qd{3.0, 0.5};
    for (int it = 0; it < 100; ++it) {
        auto a = random_poly(V, rng), b = random_poly(V, rng);
        double x = a.eval_double(qd), y = b.eval_double(qd);
        EXPECT_NEAR((a * b).eval_double(qd), x * y, 1e-9 * (1 + std::abs(x * y)));
        EXPECT_NEAR((a + b).eval_double(qd), x + y, 1e-9 * (1 + std::abs(x + y)));
        EXPECT_NEAR(lp_eval(a * b, V, asg).to_double(), x * y, 1e-9 * (1 + std::abs(x * y)));
    }
}

TEST(Laurent, PowerAndAtOne) {
    auto V = one_var();
    LaurentPoly p = v(V) + v(V, -1);
    EXPECT_EQ(p.pow(3), p * p * p);
    EXPECT_EQ(p.pow(4).at_one(), BigInt(16));
}

TEST(Laurent, Json) {
    auto V = one_var();
    LaurentPoly p = LaurentPoly(3) - v(V, 2);
    auto j = p.to_json();
    EXPECT_TRUE(j.is_array() || j.is_object());
    EXPECT_FALSE(p.str(&V).empty());
}

TEST(Rat, CheckedArithmetic) {
    Rat a(1, 3), b(1, 6);
    EXPECT_EQ(a + b, Rat(1, 2));
    EXPECT_EQ(a * b, Rat(1, 18));
    EXPECT_EQ(Rat(7, 3).frac(), Rat(1, 3));
    EXPECT_EQ(Rat(-1, 3).frac(), Rat(2, 3));
    Rat big(1LL << 62);
    EXPECT_THROW(big * big, hk::overflow_error);
}
