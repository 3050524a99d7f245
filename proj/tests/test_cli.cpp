#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "hk/cli.hpp"

using namespace hk;

namespace {

struct Out {
    int code;
    std::string out, err;
};

Out hk_run(std::vector<std::string> args) {
    std::ostringstream o, e;
    int c = run(args, o, e);
    return {c, o.str(), e.str()};
}

} // namespace

TEST(Cli, Mult) {
    auto r = hk_run({"mult", "--family", "A1", "--labels", "q0=g,q1=g", "N[s1]*N[s1]"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "N[e] + (g^(1/2) - g^(-1/2))*N[s1]\n");
}

TEST(Cli, MultJson) {
    auto r = hk_run({"mult", "--family", "A2", "--format", "json", "N[s1 s2]*N[s2]"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NO_THROW(nlohmann::json::parse(r.out));
}

TEST(Cli, InverseAndScalars) {
    auto r = hk_run({"mult", "--family", "A1~", "N[s1]^-1*N[s1] - 1"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "0\n");
    auto h = hk_run({"mult", "--family", "A1~", "1/2*N[e] + 1/2"});
    EXPECT_EQ(h.code, 0) << h.err;
    EXPECT_EQ(h.out.find("N[e]") != std::string::npos, true);
}

TEST(Cli, Bernstein) {
    auto r = hk_run({"bernstein", "--family", "A1~", "N[omega1]"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "N[s1]*theta(-1)\n");
}

TEST(Cli, ThetaProduct) {
    auto a = hk_run({"mult", "--family", "B2", "theta[1,0]*theta[0,1]"});
    auto b = hk_run({"mult", "--family", "B2", "theta[1,1]"});
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, Describe) {
    auto r = hk_run({"describe", "--family", "B2", "--labels", "q1=4,q2=2"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("q1 = q2^2"), std::string::npos);
    auto j = hk_run({"describe", "--family", "A2~", "--format", "json"});
    EXPECT_EQ(j.code, 0) << j.err;
    EXPECT_NO_THROW(nlohmann::json::parse(j.out));
}

TEST(Cli, DatumJson) {
    std::string path = testing::TempDir() + "hk_datum.json";
    std::ofstream(path) << R"({"rank": 1, "simple_roots": [[2]], "simple_coroots": [[1]], "name": "sl2"})";
    auto r = hk_run({"mult", "--datum-json", path, "N[s1]*N[s0]"});
    EXPECT_EQ(r.code, 0) << r.err;
    std::ofstream(path) << R"({"rank": 1, "simple_roots": [[2]], "simple_coroots": [[2]]})";
    EXPECT_EQ(hk_run({"describe", "--datum-json", path}).code, 2);
}

TEST(Cli, Residual) {
    auto r = hk_run({"residual", "--family", "A1~"});
    EXPECT_EQ(r.code, 0) << r.err;
    auto j = hk_run({"residual", "--family", "A2~", "--format", "json"});
    EXPECT_EQ(j.code, 0) << j.err;
    EXPECT_NO_THROW(nlohmann::json::parse(j.out));
}

TEST(Cli, Reps) {
    auto r = hk_run({"reps", "--family", "A2", "--labels", "q=2", "--point", "1@0.3,1@1.1", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j.dump().find("tempered") != std::string::npos);
    auto s = hk_run({"reps", "--family", "A1", "--labels", "q0=4,q1=4", "--rep", "steinberg", "--projector",
                     "steinberg"});
    EXPECT_EQ(s.code, 0) << s.err;
    EXPECT_EQ(hk_run({"reps", "--family", "A1", "--labels", "q0=4,q1=4", "--seed", "3"}).code, 0);
    EXPECT_EQ(hk_run({"reps", "--family", "A1", "--labels", "generic", "--seed", "3"}).code, 2);
}

TEST(Cli, KTheory) {
    auto r = hk_run({"ktheory", "--family", "B2", "--labels", "q0=1,q1=1,q2=1"});
    EXPECT_EQ(r.code, 0) << r.err;
    auto j = hk_run({"ktheory", "--family", "A2~", "--format", "json"});
    ASSERT_EQ(j.code, 0) << j.err;
    auto v = nlohmann::json::parse(j.out);
    EXPECT_NE(v.dump().find("\"k0\":5"), std::string::npos);
    EXPECT_EQ(hk_run({"ktheory", "--family", "B3", "--labels", "q=2"}).code, 3);
    EXPECT_EQ(hk_run({"ktheory", "--family", "B2", "--labels", "q1=4,q2=2"}).code, 3);
}

TEST(Cli, Tables) {
    auto r = hk_run({"tables", "A2~"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_EQ(hk_run({"tables", "E8"}).code, 3);
}

TEST(Cli, Selftest) {
    auto r = hk_run({"selftest", "--family", "A2~", "--seed", "1"});
    EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(hk_run({}).code, 2);
    EXPECT_EQ(hk_run({"mult", "--family", "A1", "N[s1"}).code, 2);
    EXPECT_EQ(hk_run({"mult", "--family", "Q7", "N[s1]"}).code, 2);
    EXPECT_EQ(hk_run({"mult", "--family", "A1", "--format", "xml", "N[s1]"}).code, 2);
    EXPECT_EQ(hk_run({"mult", "--family", "A1", "N[s9]"}).code, 2);
    EXPECT_EQ(hk_run({"--help"}).code, 0);
}
