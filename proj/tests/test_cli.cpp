// test_cli.cpp — Command-line driver: exit codes, output layout, determinism.

#include <gtest/gtest.h>

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "gtdnoise/app.hpp"

namespace {
struct Result {
    int code;
    std::string out, err;
};

Result cli(std::initializer_list<const char*> args) {
    std::vector<const char*> argv{"gtdnoise"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream out, err;
    const int code = gtd::app::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) v.push_back(l);
    return v;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream is(s);
    for (std::string f; std::getline(is, f, ',');) v.push_back(f);
    return v;
}
} // namespace

TEST(Cli, UsageErrors) {
    EXPECT_EQ(cli({}).code, 2);
    EXPECT_EQ(cli({"bogus"}).code, 2);
    EXPECT_EQ(cli({"tables", "nope"}).code, 2);
    EXPECT_EQ(cli({"--format", "xml", "tables", "populated"}).code, 2);
    EXPECT_EQ(cli({"scan", "--param", "gamma"}).code, 2); // --range required
    EXPECT_EQ(cli({"scan", "--observable", "nope", "--range", "1:2:3"}).code, 2);
    EXPECT_EQ(cli({"scan", "--range", "5:1:0"}).code, 2);
    EXPECT_EQ(cli({"dephase", "--T-grid", "-1,2"}).code, 2);
    EXPECT_EQ(cli({"--params", "/nonexistent.json", "verify", "wick"}).code, 2);
    EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, TablesPopulated) {
    const auto r = cli({"tables", "populated"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 5u);
    EXPECT_EQ(l[0].rfind("# {", 0), 0u);
    EXPECT_EQ(l[1], "beta_hbar_omega0,n_F,backward_over_forward,pedestal_over_AJ");
    const auto row = split(l[3]);
    EXPECT_NEAR(std::stod(row[1]), 1.8639e-3, 1e-7);
    const auto meta = nlohmann::json::parse(l[0].substr(2));
    EXPECT_EQ(meta.at("seed").get<std::uint64_t>(), 20240601u);
    EXPECT_EQ(meta.at("command"), "tables");
}

TEST(Cli, TablesSuppressionAndThresholds) {
    const auto s = cli({"--sig-figs", "3", "tables", "suppression"});
    ASSERT_EQ(s.code, 0);
    const auto l = lines(s.out);
    ASSERT_EQ(l.size(), 7u);
    EXPECT_EQ(split(l[4])[0], "mechanical_1Hz");
    EXPECT_EQ(split(l[4])[2], "1.2e-37");
    const auto t = cli({"--format", "json", "tables", "thresholds"});
    ASSERT_EQ(t.code, 0);
    const auto j = nlohmann::json::parse(t.out);
    EXPECT_EQ(j.at("rows").size(), 4u);
    EXPECT_TRUE(j.contains("metadata"));
}

TEST(Cli, VerifySuitesPass) {
    for (const char* suite : {"hasvac", "bateman", "dephasing"}) {
        const auto r = cli({"verify", suite});
        EXPECT_EQ(r.code, 0) << suite << '\n' << r.out << r.err;
        EXPECT_EQ(r.out.find(",false"), std::string::npos);
    }
}

TEST(Cli, VerifyFailsWithImpossibleTolerance) {
    const auto r = cli({"--tol-hasvac", "-1", "verify", "hasvac"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find(",false"), std::string::npos);
}

TEST(Cli, DephaseDeterministic) {
    const auto a = cli({"--seed", "7", "dephase", "--T-grid", "0.5,1,2", "--mc-samples", "2000"});
    const auto b = cli({"--seed", "7", "dephase", "--T-grid", "0.5,1,2", "--mc-samples", "2000"});
    const auto c = cli({"--seed", "8", "dephase", "--T-grid", "0.5,1,2", "--mc-samples", "2000"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, c.out);
    const auto l = lines(a.out);
    ASSERT_EQ(l.size(), 5u);
    EXPECT_EQ(l[1], "T,D_exact,D_broadened,regime,mc_estimate,mc_stderr");
}

TEST(Cli, ScanGammaPeaksAtTwiceOmega0) {
    // natural params via a file
    const std::string path = ::testing::TempDir() + "gtd_params.json";
    std::ofstream(path) << R"({"unit_system": "natural"})";
    const auto s = cli({"--params", path.c_str(), "scan", "--param", "gamma", "--range", "0.1:10:199", "--observable", "S0"});
    ASSERT_EQ(s.code, 0) << s.err;
    const auto l = lines(s.out);
    double best = -1, arg = 0;
    for (std::size_t i = 2; i < l.size(); ++i) {
        const auto f = split(l[i]);
        const double v = std::stod(f[1]);
        if (v > best) best = v, arg = std::stod(f[0]);
    }
    EXPECT_NEAR(arg, 2.0, 0.06);
    EXPECT_NEAR(best, 0.25 / 2.0, 1e-4);
}

TEST(Cli, ScanLogGrid) {
    const auto s = cli({"scan", "--param", "C_match", "--range", "1e-12:1:13", "--log", "--observable", "threshold_N"});
    ASSERT_EQ(s.code, 0) << s.err;
    const auto l = lines(s.out);
    ASSERT_EQ(l.size(), 15u);
    EXPECT_NEAR(std::stod(split(l[2])[0]), 1e-12, 1e-24);
    EXPECT_GT(std::stod(split(l[2])[1]), std::stod(split(l[14])[1]));
}

TEST(Cli, SpectrumModels) {
    const auto w = cli({"spectrum"});
    ASSERT_EQ(w.code, 0) << w.err;
    EXPECT_EQ(lines(w.out).size(), 4u); // meta, header, line, pedestal
    const auto b = cli({"--format", "json", "spectrum", "--model", "fermion", "--n-b", "0.2", "--n-d", "0.3", "--broaden", "1e-18"});
    ASSERT_EQ(b.code, 0) << b.err;
    const auto j = nlohmann::json::parse(b.out);
    EXPECT_EQ(j.at("spectrum").at("lorentzians").size(), 3u);
    EXPECT_EQ(cli({"spectrum", "--model", "fermion", "--n-b", "2"}).code, 2);
}

TEST(Cli, GridParser) {
    EXPECT_EQ(gtd::app::parse_grid("0:1:3"), (std::vector<double>{0.0, 0.5, 1.0}));
    EXPECT_EQ(gtd::app::parse_grid("1,2.5"), (std::vector<double>{1.0, 2.5}));
    EXPECT_THROW(gtd::app::parse_grid(""), std::invalid_argument);
    EXPECT_THROW(gtd::app::parse_grid("0:1:3", true), std::invalid_argument);
}

TEST(Cli, BinaryRuns) {
    const std::string cmd = std::string(GTDNOISE_CLI) + " tables populated > /dev/null";
    EXPECT_EQ(std::system(cmd.c_str()), 0);
}
