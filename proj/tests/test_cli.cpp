#include <nlohmann/json.hpp>

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

struct CliRun {
    int status = -1;
    std::string out;
};

CliRun invoke(const std::string& args) {
    const std::string cmd = std::string(FUNCASA_CLI) + " " + args + " 2>/dev/null";
    CliRun r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

const std::string kBall = R"('{"s":1,"n":1,"family":{"kind":"generalized_ball","params":{"r":1}}}')";
const std::string kCap = R"('{"s":1,"n":1,"family":{"kind":"cap_quadratic","params":{"b":1,"R":1}}}')";

}  // namespace

TEST(Cli, EvalBall) {
    const CliRun r = invoke("eval --function " + kBall + " --lambda 0.25");
    ASSERT_EQ(r.status, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j.at("value").get<double>(), 1.5707963, 1e-6);
    EXPECT_EQ(j.at("citation"), "Lemma 2.3(i)");
    EXPECT_TRUE(j.contains("error"));
    EXPECT_EQ(j.at("config").at("lambda"), 0.25);
    EXPECT_EQ(j.at("config").at("quadrature").at("seed"), 0);
}

TEST(Cli, ExtremalOutOfRange) {
    const CliRun r = invoke("extremal --function " + kBall + " --kind IS --lambda 0.7");
    EXPECT_EQ(r.status, 3);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("error").at("type"), "domain");
    EXPECT_NE(j.at("error").at("message").get<std::string>().find("the only meaningful lambda-ranges"),
              std::string::npos);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(invoke("eval --lambda 0.3").status, 2);
    EXPECT_EQ(invoke("eval --function " + kBall + " --lambda 0.3 --format xml").status, 2);
    EXPECT_EQ(invoke("eval --function /does/not/exist.json --lambda 0.3").status, 2);
    EXPECT_EQ(invoke("frobnicate").status, 2);
    EXPECT_EQ(invoke("isotropy --function " + kBall + " --mc-samples 10").status, 2);
}

TEST(Cli, DomainErrors) {
    const std::string half = R"('{"s":2,"n":1,"family":{"kind":"generalized_ball"}}')";
    EXPECT_EQ(invoke("isotropy --function " + half + " --lifted").status, 3);
}

TEST(Cli, CsvColumns) {
    const CliRun r = invoke("eval --function " + kCap + " --lambda 0 --format csv");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "name,value,error,citation,verdict");
    EXPECT_NE(r.out.find("asa,1.333333333"), std::string::npos);
}

TEST(Cli, EmitTable) {
    const CliRun r = invoke("eval --function " + kCap + " --emit-table --table-lambdas 0,0.5,1");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "lambda,value,error");
    int lines = 0;
    for (char c : r.out) lines += c == '\n';
    EXPECT_EQ(lines, 4);
}

TEST(Cli, DescriptorRoundTrip) {
    const std::string f =
        R"('{"s":1,"n":2,"family":{"kind":"cap_sqrt","params":{"R":1,"eps":0.25}},"affine":{"alpha":1.3,"T":[[1.2,0.1],[0,0.9]],"shift":[0.1,0]}}')";
    const CliRun a = invoke("eval --function " + f + " --lambda 0.3");
    ASSERT_EQ(a.status, 0);
    const auto desc = nlohmann::json::parse(a.out).at("config").at("function");
    const CliRun b = invoke("eval --function '" + desc.dump() + "' --lambda 0.3");
    ASSERT_EQ(b.status, 0);
    EXPECT_EQ(nlohmann::json::parse(b.out).at("value"), nlohmann::json::parse(a.out).at("value"));
}

TEST(Cli, DualAndIsotropy) {
    const CliRun d = invoke("dual --function " + kCap + " --at 0.5");
    ASSERT_EQ(d.status, 0);
    const auto j = nlohmann::json::parse(d.out);
    bool found = false;
    for (const auto& r : j.at("results"))
        if (r.at("name") == "santalo_product") {
            found = true;
            EXPECT_EQ(r.at("verdict"), "pass");
        }
    EXPECT_TRUE(found);
    const CliRun i = invoke("isotropy --function " + kBall + " --mc-samples 200000");
    ASSERT_EQ(i.status, 0);
    for (const auto& r : nlohmann::json::parse(i.out).at("results")) EXPECT_TRUE(r.contains("error"));
}

TEST(Cli, VerifyDeterministic) {
    const std::string args = "verify --seed 0 --only ball_scaling --only lifted_volume --only endpoints";
    const CliRun a = invoke(args), b = invoke(args);
    ASSERT_EQ(a.status, 0);
    EXPECT_FALSE(a.out.empty());
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(invoke("verify --only negative_control").status, 1);
    EXPECT_EQ(invoke("verify --only no_such_family").status, 2);
}
