#include <array>
#include <cstdio>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "expsum/json_io.hpp"

using namespace expsum;

namespace {

struct Run {
    int code;
    std::string out;
};

// stdout of the CLI and its exit status; stderr is discarded
Run cli(const std::string& args) {
    const std::string cmd = std::string(EXPSUM_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

} // namespace

// ---------------------------------------------------------------------------
// serialization

TEST(Json, DoublesKeepSeventeenDigits) {
    const double x = 0.1 + 0.2;
    const auto s = dump(json(x), 0);
    EXPECT_EQ(s, "0.30000000000000004");
    EXPECT_EQ(std::stod(s), x);
    EXPECT_EQ(dump(json(2.0), 0), "2.0");
    EXPECT_EQ(dump(json(1e300), 0), "1.0000000000000001e+300");
    EXPECT_EQ(dump(json(std::nan("")), 0), "\"nan\"");
    EXPECT_EQ(dump(json(-HUGE_VAL), 0), "\"-inf\"");
}

TEST(Json, RoundTripsThroughTheParser) {
    json j = {{"a", 1.0 / 3.0}, {"b", json::array({std::sqrt(2.0), -1e-300})}, {"c", "x\"y"}, {"d", 42}};
    const auto back = json::parse(dump(j));
    EXPECT_EQ(back["a"].get<double>(), 1.0 / 3.0);
    EXPECT_EQ(back["b"][0].get<double>(), std::sqrt(2.0));
    EXPECT_EQ(back["b"][1].get<double>(), -1e-300);
    EXPECT_EQ(back["c"].get<std::string>(), "x\"y");
    EXPECT_EQ(back["d"].get<int>(), 42);
}

TEST(Json, SumReportShape) {
    const auto j = sum_report("kloosterman", {{"m", 1}, {"n", 1}, {"c", 5}}, kloosterman(1, 1, 5));
    EXPECT_EQ(j["sum_kind"], "kloosterman");
    ASSERT_TRUE(j["value"].is_array());
    EXPECT_NEAR(j["value"][0].get<double>(), 0.381966011250105, 1e-12);
    EXPECT_TRUE(j.contains("err_radius"));
}

TEST(Json, CharacterForms) {
    const DirichletCharacter chi(45, {1, 3});
    EXPECT_EQ(character_from_json(to_json(chi)), chi);
    EXPECT_EQ(parse_character("45:1,3"), chi);
    EXPECT_EQ(parse_character(dump(to_json(chi), 0)), chi);
    EXPECT_EQ(parse_character("27"), DirichletCharacter::principal(27));
    for (const char* bad : {"", "27:", "27:x", "x:1", "27:1,2", "{\"modulus\":27,\"components\":[{\"p\":5,\"e\":1,\"t\":0}]}", "{oops"})
        EXPECT_THROW((void)parse_character(bad), invalid_input) << bad;
}

TEST(Json, CsvFlattensNestedRows) {
    json rows = json::array({{{"a", 1}, {"z", json::array({1.5, -2.0})}, {"s", "x,y"}}, {{"a", 2}, {"t", {{"u", true}}}}});
    EXPECT_EQ(to_csv(rows), "a,z.re,z.im,s,t.u\n1,1.5,-2.0,\"x,y\",\n2,,,,true\n");
}

TEST(Json, DensityReportSchema) {
    DensityParams prm;
    prm.q = 101;
    const auto j = to_json(assemble_report(1, prm, ils_pair(0.8)));
    for (const char* key : {"theorem", "symmetry", "R", "log_R", "theta", "leading_term", "terms", "total"}) EXPECT_TRUE(j.contains(key)) << key;
    for (const char* key : {"hatphi", "I", "J", "L", "N"}) EXPECT_TRUE(j["terms"].contains(key)) << key;
    EXPECT_TRUE(j["terms"]["L"].is_null());
    EXPECT_TRUE(j["terms"]["I"].contains("quad_error"));
}

// ---------------------------------------------------------------------------
// command line

TEST(Cli, KloostermanExample) {
    const auto r = cli("compute sum kloosterman --m 1 --n 1 --c 5");
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j["value"][0].get<double>(), 0.381966, 1e-6);
    EXPECT_NEAR(j["value"][1].get<double>(), 0.0, 1e-12);
}

TEST(Cli, NonvanishingExample) {
    const auto r = cli("compute density nonvanishing --G so-even --theta 2 --mode even");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out)["value"].get<double>(), 0.5625);
}

TEST(Cli, TheoremTwoReport) {
    const auto r = cli("compute density report --theorem 2 --p 3 --k 3 --j 1 --kappa 4 --epsilon 1 --theta 1.3");
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["symmetry"], "SO(even)");
    EXPECT_FALSE(j["terms"]["L"].is_null());
    EXPECT_FALSE(j["terms"]["N"].is_null());
}

TEST(Cli, VerifyExamplesExitZero) {
    const auto a = cli("verify coset-structure --p 3 --k 2..3 --j 1 --seed 7");
    ASSERT_EQ(a.code, 0);
    const auto ja = json::parse(a.out);
    EXPECT_TRUE(ja["failures"].empty());
    EXPECT_GT(ja["tuples_tested"].get<u64>(), 0u);
    const auto b = cli("verify weil-flrt --c 27,125 --mn 1..30");
    ASSERT_EQ(b.code, 0);
    EXPECT_TRUE(json::parse(b.out)["violations"].empty());
}

TEST(Cli, Deterministic) {
    const std::string args = "verify coset-structure --p 3 --k 2 --j 1 --mn 1..8 --samples 3 --seed 11";
    const auto a = cli(args), b = cli(args), c = cli(args + " --threads 3");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, c.out);
    const auto d = cli("verify coset-structure --p 3 --k 2 --j 1 --mn 1..8 --samples 3 --seed 12");
    EXPECT_NE(a.out, d.out);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(cli("verify no-such-suite").code, 64);
    EXPECT_EQ(cli("frobnicate").code, 64);
    EXPECT_EQ(cli("verify").code, 64);
    EXPECT_EQ(cli("compute sum kloosterman --m 1 --n 1 --c 5 --bogus").code, 64);
    EXPECT_EQ(cli("compute sum twisted --chi 27:x --m 1 --n 1").code, 65);
    EXPECT_EQ(cli("compute sum twisted --chi '{\"modulus\":27' --m 1 --n 1").code, 65);
    EXPECT_EQ(cli("verify weil-flrt --c 28").code, 65);
    EXPECT_EQ(cli("verify coset-structure --p 4").code, 65);
    EXPECT_EQ(cli("verify coset-structure --k 3..2").code, 65);
    EXPECT_EQ(cli("compute density nonvanishing --G so-even --theta 0.5").code, 65);
    // a tolerance far below rounding makes the identity suite fail honestly
    EXPECT_EQ(cli("verify kloosterman-fourier --c 9 --m 1..4 --tol 1e-30").code, 1);
    EXPECT_EQ(cli("--help").code, 0);
}

TEST(Cli, CsvOutput) {
    const auto r = cli("--format csv compute density wg --G o --theta 1:2:0.5");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "G,theta,value\nO,1.0,1.5\nO,1.5,1.1666666666666665\nO,2.0,1.0\n");
    const auto v = cli("verify weil-flrt --c 27 --mn 1..3 --format csv");
    ASSERT_EQ(v.code, 0);
    EXPECT_EQ(v.out.substr(0, v.out.find('\n')), "c,chi,checks,deviation,tolerance,worst_m,worst_n,pass");
}

TEST(Cli, SieveLimitFromEnvironment) {
    const auto ok = cli("compute density integral-J --q 101 --theta 1");
    ASSERT_EQ(ok.code, 0);
    const std::string cmd = "EXPSUM_SIEVE_LIMIT=5 " + std::string(EXPSUM_CLI_PATH) + " compute density integral-J --q 101 --theta 2 >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    EXPECT_EQ(WEXITSTATUS(status), 65);
}
