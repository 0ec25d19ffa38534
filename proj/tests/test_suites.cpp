#include <gtest/gtest.h>

#include "expsum/suites.hpp"

using namespace expsum;

namespace {
SweepSpec spec(const std::string& name) {
    SweepSpec s;
    s.suite = name;
    return s;
}
} // namespace

TEST(Suites, Names) {
    const auto names = suite_names();
    EXPECT_EQ(names.size(), 6u);
    EXPECT_THROW((void)run_suite(spec("nope")), unknown_suite);
}

TEST(Suites, CosetStructureSmallSweep) {
    auto s = spec("coset-structure");
    s.p_list = {3, 5};
    s.k_range = IntRange{2, 3};
    s.m_range = s.n_range = IntRange{1, 6};
    s.b_list = {1, 2};
    s.samples = 2;
    const auto r = run_suite(s);
    EXPECT_TRUE(r.pass);
    EXPECT_TRUE(r.report["failures"].empty());
    EXPECT_LT(r.report["max_deviation"].get<double>(), 1e-8);
    // every r from k to 2k+1 appears
    std::set<int> rs;
    for (const auto& t : r.report["tuples"]) rs.insert(t["r"].get<int>());
    EXPECT_EQ(*rs.begin(), 2);
    EXPECT_EQ(*rs.rbegin(), 7);
}

TEST(Suites, CosetStructureSamplingRecorded) {
    auto s = spec("coset-structure");
    s.p_list = {3};
    s.k_range = IntRange{2, 2};
    s.m_range = s.n_range = IntRange{1, 2};
    s.b_list = {1};
    const auto r = run_suite(s);
    ASSERT_TRUE(r.report.contains("sampling"));
    const auto& info = r.report["sampling"][0];
    // mod 9 only four characters have a primitive square, fewer than the requested 20
    EXPECT_EQ(info["available"].get<int>(), 4);
    EXPECT_EQ(info["sampled"].get<int>(), 4);
}

TEST(Suites, FourierSuites) {
    auto a = spec("kloosterman-fourier");
    a.c_list = {9, 25};
    a.m_range = IntRange{1, 10};
    EXPECT_TRUE(run_suite(a).pass);
    auto b = spec("coset-fourier");
    b.k_range = IntRange{2, 2};
    b.m_range = IntRange{1, 8};
    EXPECT_TRUE(run_suite(b).pass);
}

TEST(Suites, WeilSuites) {
    auto a = spec("weil-flrt");
    a.c_list = {27};
    a.m_range = a.n_range = IntRange{1, 10};
    const auto ra = run_suite(a);
    EXPECT_TRUE(ra.pass);
    EXPECT_LE(ra.report["max_ratio"].get<double>(), 1.0);
    auto b = spec("weil-avg");
    b.c_list = {27};
    b.ab_list = {{1, 60}};
    const auto rb = run_suite(b);
    EXPECT_TRUE(rb.pass);
    EXPECT_GT(rb.report["constant_estimate"].get<double>(), 0.0);
    b.max_constant = 1e-6;
    EXPECT_FALSE(run_suite(b).pass);
}

TEST(Suites, DensityIdentities) {
    auto s = spec("density-identities");
    s.q_list = {7, 11};
    const auto r = run_suite(s);
    EXPECT_TRUE(r.pass);
    EXPECT_TRUE(r.report["failures"].empty());
}

TEST(Suites, InfeasibleSpecsRejected) {
    auto a = spec("coset-structure");
    a.p_list = {9};
    EXPECT_THROW((void)run_suite(a), invalid_input);
    auto b = spec("weil-avg");
    b.ab_list = {{10, 5}};
    EXPECT_THROW((void)run_suite(b), invalid_input);
    auto c = spec("density-identities");
    c.theta_list = {0.5};
    EXPECT_THROW((void)run_suite(c), invalid_input);
    auto d = spec("weil-flrt");
    d.threads = 0;
    EXPECT_THROW((void)run_suite(d), invalid_input);
}

TEST(Suites, ThreadCountDoesNotChangeReport) {
    auto s = spec("weil-flrt");
    s.c_list = {27, 125};
    s.m_range = s.n_range = IntRange{1, 5};
    const auto one = dump(run_suite(s).report);
    s.threads = 4;
    EXPECT_EQ(one, dump(run_suite(s).report));
}
