#include <gtest/gtest.h>

#include <sstream>

#include "qseries_app.hpp"

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "qseries");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = qseries::app::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const std::string& rel) { return std::string(QSERIES_FIXTURE_DIR) + "/" + rel; }

}  // namespace

TEST(Cli, HelpAndUsage) {
    EXPECT_EQ(run({"--help"}).code, 0);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"verify", "--suite", "thm99"}).code, 2);
}

TEST(Cli, ExpandPhi) {
    const auto r = run({"expand", "phi(q)", "--order", "10"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "1 + 2q + 2q^4 + 2q^9\n");
}

TEST(Cli, ExpandS1LeadingTerm) {
    const auto r = run({"expand", "S1", "--order", "5"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("q^{1/4}", 0), 0u) << r.out;
}

TEST(Cli, ExpandParseErrorIsPositioned) {
    const auto r = run({"expand", "q^^"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("1:3:"), std::string::npos) << r.err;
}

TEST(Cli, ExpandJson) {
    const auto r = run({"expand", "psi(q)", "--order", "4", "--format", "json"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["tool_version"], "0.1.0");
    EXPECT_EQ(j["command"], "expand");
    EXPECT_EQ(j["elapsed_ms"], 0);
    EXPECT_EQ(j["results"][0]["text"], "1 + q + q^3");
}

TEST(Cli, VerifyAllAtOrder60) { EXPECT_EQ(run({"verify", "--suite", "all", "--order", "60"}).code, 0); }

TEST(Cli, VerifyExitCodeFollowsResults) {
    EXPECT_EQ(run({"verify", "--suite", "thm22", "--order", "40"}).code, 0);
    EXPECT_EQ(run({"verify", "--suite", "thm22", "--order", "40", "--seed-fault", "10"}).code, 1);
    EXPECT_EQ(run({"verify", "--file", fixture("perturbed.qid")}).code, 1);
    EXPECT_EQ(run({"verify", "--file", fixture("malformed/double_caret.qid")}).code, 2);
    EXPECT_EQ(run({"verify", "--file", fixture("does_not_exist.qid")}).code, 2);
}

TEST(Cli, VerifyThm23Json) {
    const auto r = run({"verify", "--suite", "thm23", "--order", "40", "--json"});
    EXPECT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["results"].size(), 12u);
    EXPECT_EQ(j["order"]["num"], 40);
    EXPECT_EQ(j["order"]["den"], 1);
    EXPECT_EQ(j["results"][0]["status"], "pass");
}

TEST(Cli, MismatchJson) {
    const auto r = run({"verify", "--file", fixture("perturbed.qid"), "--json"});
    const auto j = nlohmann::json::parse(r.out);
    const auto& bad = j["results"][1];
    EXPECT_EQ(bad["status"], "fail");
    EXPECT_EQ(bad["first_mismatch"]["exp"]["num"], 10);
    EXPECT_EQ(bad["first_mismatch"]["lhs"], 0);
    EXPECT_EQ(bad["first_mismatch"]["rhs"], 1);
}

TEST(Cli, Partitions) {
    EXPECT_EQ(run({"partitions", "--spec", "C1", "--n", "7"}).out, "3\n");
    EXPECT_EQ(run({"partitions", "--spec", "D2", "--n", "0"}).out, "1\n");
    EXPECT_EQ(run({"partitions", "--spec", "mod=28; parts=1±,13±; parts2=6±,14±", "--n", "7"}).out, "3\n");
    EXPECT_EQ(run({"partitions", "--spec", "mod=28; parts=1+-,13+-; parts2=6+-,14+-", "--n", "7", "--method", "enum"}).out,
              "3\n");
    EXPECT_EQ(run({"partitions", "--theorem", "32", "--n", "200"}).code, 0);
    EXPECT_EQ(run({"partitions", "--spec", "mod=0; parts=1"}).code, 2);
    EXPECT_EQ(run({"partitions", "--spec", "mod=5; parts=x"}).code, 2);
}

TEST(Cli, Dissect) {
    EXPECT_EQ(run({"dissect", "--t", "14", "--r", "3", "--s", "7", "--p", "7", "--order", "120"}).code, 0);
    const auto bad = run({"dissect", "--t", "14", "--r", "7", "--s", "7", "--p", "7"});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("gcd"), std::string::npos) << bad.err;
}

TEST(Cli, Vanish) {
    const auto r = run({"vanish", "--family", "V1", "--max", "500"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("alpha'_{14n+7} = 0 verified through q^500, 36 coefficients checked"), std::string::npos) << r.out;
    EXPECT_EQ(run({"vanish", "--family", "S1*", "--residue", "2"}).code, 1);
    EXPECT_EQ(run({"vanish", "--family", "W9"}).code, 2);
}

TEST(Cli, ContinuedFraction) {
    EXPECT_EQ(run({"cf", "--name", "V2", "--order", "40"}).code, 0);
    EXPECT_EQ(run({"cf", "--a", "q^1/4", "--b", "q^13/4", "--qpow", "7/2", "--order", "30"}).code, 0);
    EXPECT_EQ(run({"cf", "--name", "V2", "--order", "200", "--depth-cap", "2"}).code, 1);
    EXPECT_EQ(run({"cf", "--name", "X"}).code, 2);
}
