#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "ahgeom/report.hpp"

using namespace ahgeom;

namespace {

struct CliResult {
    int status = -1;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    CliResult r;
    const std::string cmd = std::string(AHGEOM_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int st = pclose(pipe);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

AnalysisReport model_report(const std::string& name, const AnalysisOptions& opts = {}) {
    const ModelDescriptor md = model_by_name(name);
    return analyze(*md.source, md.source->default_points(), opts, md.expected, "model");
}

}  // namespace

class EveryModel : public ::testing::TestWithParam<std::string> {};

TEST_P(EveryModel, MeetsItsExpectations) {
    const AnalysisReport r = model_report(GetParam());
    for (const auto& p : r.points) {
        EXPECT_FALSE(p.error.has_value()) << *p.error;
        for (const auto& f : p.expectation_failures) ADD_FAILURE() << f;
    }
    EXPECT_TRUE(r.global.consistent);
    EXPECT_EQ(std::optional<bool>(true), r.global.expectations_pass);
    EXPECT_EQ(0, exit_code(r));
    EXPECT_EQ(model_by_name(GetParam()).expected.verdict, r.global.overall.kind);
}

INSTANTIATE_TEST_SUITE_P(Models, EveryModel, ::testing::ValuesIn(model_names()));

TEST(Report, JsonLayoutAndDeterminism) {
    AnalysisOptions opts;
    opts.samples = 64;
    const AnalysisReport a = model_report("cp2", opts);
    const AnalysisReport b = model_report("cp2", opts);
    const auto j = to_json(a);
    EXPECT_EQ(j.dump(), to_json(b).dump());
    ASSERT_TRUE(j.contains("meta") && j.contains("points") && j.contains("global"));
    EXPECT_EQ("model", j["meta"]["source"]["kind"]);
    EXPECT_EQ(2, j["meta"]["m"]);
    EXPECT_EQ(a.points.size(), j["points"].size());
    const auto& p0 = j["points"][0];
    for (const char* k : {"K", "NK", "AK", "AH1", "AH2", "AH3"}) EXPECT_TRUE(p0["classes"].contains(k)) << k;
    EXPECT_EQ("ComplexSpaceForm", j["global"]["overall_verdict"]["kind"]);
    EXPECT_EQ(0, j["global"]["exit_code"]);

    opts.seed = 43;
    EXPECT_NE(j.dump(), to_json(model_report("cp2", opts)).dump());
}

TEST(Report, TextAgreesWithJson) {
    AnalysisOptions opts;
    opts.samples = 64;
    const AnalysisReport r = model_report("s6", opts);
    const std::string text = to_text(r);
    const auto j = to_json(r);
    for (const auto& p : j["points"]) {
        EXPECT_NE(std::string::npos,
                  text.find(fmt::format("mean {:.12g}", p["antiholomorphic"]["mean"].get<double>())));
        EXPECT_NE(std::string::npos, text.find(fmt::format("{:.12g}", p["einstein"]["lambda"].get<double>())));
        EXPECT_NE(std::string::npos,
                  text.find(fmt::format("residual {:.12g}", p["classes"]["NK"]["residual"].get<double>())));
    }
    EXPECT_NE(std::string::npos, text.find("RealSpaceForm"));
}

TEST(Report, SchurBlock) {
    AnalysisOptions opts;
    opts.samples = 64;
    const AnalysisReport r = model_report("cp3", opts);
    ASSERT_TRUE(r.global.schur.has_value());
    EXPECT_TRUE(r.global.schur->applies);
    EXPECT_LT(r.global.schur->spread, 1e-3);
    EXPECT_EQ(r.points.size(), r.global.schur->nu_per_point.size());
    for (std::size_t i = 0; i < r.points.size(); ++i)
        EXPECT_EQ(r.points[i].antiholomorphic->mean, r.global.schur->nu_per_point[i]);

    EXPECT_FALSE(model_report("cp1", opts).global.schur.has_value());
}

TEST(Report, ChartModeHasNoExpectations) {
    const ModelDescriptor md = model_flat(2);
    const AnalysisReport r = analyze(*md.source, md.source->default_points(), {});
    EXPECT_EQ("chart", r.source_kind);
    EXPECT_FALSE(r.global.expectations_pass.has_value());
    for (const auto& p : r.points) EXPECT_TRUE(p.expectation_failures.empty());
    EXPECT_EQ(0, exit_code(r));
    EXPECT_TRUE(to_json(r)["points"][0]["expectations"].is_null() || !to_json(r)["points"][0].contains("expectations"));
}

TEST(Report, BadPointIsAnError) {
    const ModelDescriptor md = model_complex_hyperbolic(1, -4.0);
    Vector out(2);
    out << 5.0, 0.0;
    const AnalysisReport r = analyze(*md.source, {Vector::Zero(2), out}, {}, md.expected, "model");
    EXPECT_TRUE(r.has_errors());
    ASSERT_TRUE(r.points[1].error.has_value());
    EXPECT_FALSE(r.points[0].error.has_value());
    EXPECT_EQ(2, exit_code(r));
}

TEST(Report, MismatchGivesExitOne) {
    ModelDescriptor md = model_by_name("cp2");
    md.expected.verdict_constant = 3.0;
    AnalysisOptions opts;
    opts.samples = 32;
    const AnalysisReport r = analyze(*md.source, md.source->default_points(), opts, md.expected, "model");
    EXPECT_EQ(std::optional<bool>(false), r.global.expectations_pass);
    EXPECT_EQ(1, exit_code(r));
    EXPECT_NE(std::string::npos, to_text(r).find("MISMATCH"));
}

TEST(Report, ModelsTable) {
    const std::string t = models_table();
    int rows = 0;
    for (char c : t) rows += c == '\n';
    EXPECT_GE(rows, 8);
    EXPECT_NE(std::string::npos, t.find("s6"));
    EXPECT_NE(std::string::npos, t.find("cp2"));
}

TEST(Selftest, PassesAcrossSeeds) {
    for (std::uint64_t seed : {1u, 42u, 1234u}) {
        std::ostringstream out;
        SelftestOptions o;
        o.seed = seed;
        o.instances = 50;
        EXPECT_EQ(0, run_selftest(out, o)) << out.str();
        EXPECT_EQ(std::string::npos, out.str().find("FAIL"));
    }
}

TEST(Cli, AnalyzeModelAndChart) {
    const CliResult s6 = run_cli("analyze --model s6 --samples 64");
    EXPECT_EQ(0, s6.status);
    EXPECT_NE(std::string::npos, s6.out.find("RealSpaceForm(1"));

    const CliResult chart = run_cli(fmt::format("analyze --chart {}/cp2.ahm --samples 64 --format json", AHGEOM_MODELS_DIR));
    EXPECT_EQ(0, chart.status);
    const auto j = nlohmann::json::parse(chart.out);
    EXPECT_EQ("chart", j["meta"]["source"]["kind"]);
    EXPECT_EQ("ComplexSpaceForm", j["global"]["overall_verdict"]["kind"]);
}

TEST(Cli, ExplicitPoints) {
    const CliResult r = run_cli("analyze --model cp1 --point 0,0 --point 0.1,-0.2 --format json --samples 16");
    EXPECT_EQ(0, r.status);
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(2u, j["points"].size());
    EXPECT_DOUBLE_EQ(-0.2, j["points"][1]["point"][1].get<double>());
}

TEST(Cli, Errors) {
    EXPECT_EQ(2, run_cli("analyze --chart /nonexistent/missing.ahm").status);
    EXPECT_EQ(2, run_cli("analyze --model nosuch").status);
    EXPECT_EQ(2, run_cli("analyze --model cp1 --point 1,2,3").status);
    EXPECT_EQ(2, run_cli("analyze --model cp1 --chart x.ahm").status);
    EXPECT_EQ(2, run_cli("analyze --model cp1 --format yaml").status);
}

TEST(Cli, ChartRoundTrip) {
    const CliResult r = run_cli("chart --model ch2");
    ASSERT_EQ(0, r.status);
    std::ifstream f(std::string(AHGEOM_MODELS_DIR) + "/ch2.ahm");
    std::stringstream ss;
    ss << f.rdbuf();
    EXPECT_EQ(ss.str(), r.out);
}
