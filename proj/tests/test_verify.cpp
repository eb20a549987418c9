#include "funcasa/verify.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace funcasa;

namespace {

SuiteConfig small_config(std::vector<std::string> only) {
    SuiteConfig cfg;
    cfg.s_values = {1.0};
    cfg.dims = {1};
    cfg.only = std::move(only);
    return cfg;
}

}  // namespace

TEST(Suite, FamiliesListed) {
    const std::vector<std::string> fams = check_families();
    EXPECT_GE(std::set<std::string>(fams.begin(), fams.end()).size(), 12u);
}

TEST(Suite, NegativeControlFails) {
    SuiteConfig cfg = small_config({"negative_control", "scale_covariance"});
    cfg.negative_control = true;
    const auto rows = run_property_suite(cfg);
    int neg = 0;
    for (const auto& c : rows) {
        if (c.family == "negative_control") {
            ++neg;
            EXPECT_EQ(c.verdict, Verdict::Fail) << c.name;
        } else {
            EXPECT_EQ(c.verdict, Verdict::Pass) << c.name;
        }
    }
    EXPECT_GT(neg, 0);
}

TEST(Suite, MonotoneLambdaOnCaps) {
    const auto rows = run_property_suite(small_config({"monotone_lambda"}));
    ASSERT_FALSE(rows.empty());
    for (const auto& c : rows) EXPECT_EQ(c.verdict, Verdict::Pass) << c.name;
}

TEST(Suite, CoreFamiliesPass) {
    const auto rows = run_property_suite(small_config(
        {"ball_normalization", "ball_scaling", "holder", "asa_duality", "form_equivalence", "endpoints",
         "range_validity", "santalo", "lifted_volume", "graph_volume", "involution", "order_reversal"}));
    const SuiteSummary s = summarize(rows);
    EXPECT_EQ(s.fail, 0);
    EXPECT_EQ(s.inconclusive, 0);
    EXPECT_GE(s.families.size(), 10u);
    for (const auto& c : rows) EXPECT_FALSE(c.citation.empty()) << c.name;
}

TEST(Suite, ReportIsDeterministic) {
    const SuiteConfig cfg = small_config({"ball_scaling", "lifted_volume", "endpoints"});
    const std::string a = suite_report_json(cfg, run_property_suite(cfg), false).dump();
    const std::string b = suite_report_json(cfg, run_property_suite(cfg), false).dump();
    EXPECT_EQ(a, b);
}

TEST(Suite, RowsSortedByName) {
    const auto rows = run_property_suite(small_config({"ball_scaling", "santalo"}));
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(rows[i - 1].name, rows[i].name);
}

TEST(Suite, RejectsBadConfig) {
    SuiteConfig cfg;
    cfg.s_values = {-1.0};
    EXPECT_THROW(run_property_suite(cfg), ParameterError);
    cfg = {};
    cfg.dims = {5};
    EXPECT_THROW(run_property_suite(cfg), ParameterError);
}

TEST(Decide, ThreeValued) {
    EXPECT_EQ(decide(Relation::LessEq, 1.0, 2.0, 0.1, 0.0), Verdict::Pass);
    EXPECT_EQ(decide(Relation::LessEq, 2.0, 1.0, 0.1, 0.0), Verdict::Fail);
    EXPECT_EQ(decide(Relation::LessEq, 1.0, 1.1, 0.1, 0.0), Verdict::Inconclusive);
    EXPECT_EQ(decide(Relation::Equal, 1.0, 1.0005, 0.0, 1e-3), Verdict::Pass);
    EXPECT_EQ(decide(Relation::Equal, 1.0, 1.1, 0.0, 1e-3), Verdict::Fail);
}
