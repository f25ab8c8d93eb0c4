// ahgeom: curvature analysis of almost Hermitian charts.
//
//   ahgeom analyze --model s6 --format json
//   ahgeom analyze --chart my.ahm --point 0.1,0,0,0.2
//   ahgeom models
//   ahgeom selftest
//   ahgeom chart --model cp2 > cp2.ahm

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ahgeom/report.hpp"

namespace {

using namespace ahgeom;

Vector parse_point(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const char* begin = item.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        while (end && *end == ' ') ++end;
        if (end == begin || *end != '\0') throw Error(fmt::format("bad coordinate '{}' in --point '{}'", item, text));
        vals.push_back(v);
    }
    if (vals.empty()) throw Error("empty --point");
    return Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

struct AnalyzeArgs {
    std::string model;
    std::string chart;
    std::vector<std::string> points;
    AnalysisOptions opts;
    std::string format = "text";
};

int run_analyze(const AnalyzeArgs& a) {
    std::shared_ptr<const MetricSource> src;
    std::optional<ModelExpectation> expected;
    std::string kind;
    if (!a.model.empty()) {
        ModelDescriptor md = model_by_name(a.model);
        src = md.source;
        expected = md.expected;
        kind = "model";
    } else {
        std::ifstream in(a.chart);
        if (!in) throw Error(fmt::format("cannot read chart file '{}'", a.chart));
        std::stringstream buf;
        buf << in.rdbuf();
        src = std::make_shared<ExprChart>(parse_chart(buf.str()), std::filesystem::path(a.chart).stem().string());
        kind = "chart";
    }

    std::vector<Vector> points;
    for (const auto& p : a.points) points.push_back(parse_point(p));
    if (points.empty()) points = src->default_points();
    if (points.empty()) throw Error("no points to analyze: pass --point or add point lines to the chart");

    const AnalysisReport rep = analyze(*src, points, a.opts, expected, kind);
    if (a.format == "json")
        std::cout << to_json(rep).dump(2) << '\n';
    else
        std::cout << to_text(rep);
    return exit_code(rep);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curvature analysis of almost Hermitian manifolds given in coordinate charts"};
    app.require_subcommand(1);

    AnalyzeArgs aa;
    auto* analyze_cmd = app.add_subcommand("analyze", "Analyze a bundled model or a chart file");
    auto* model_opt = analyze_cmd->add_option("--model", aa.model, "Bundled model name (see 'models')");
    auto* chart_opt = analyze_cmd->add_option("--chart", aa.chart, "Chart file");
    model_opt->excludes(chart_opt);
    analyze_cmd->add_option("--point", aa.points, "Point as v1,v2,... (repeatable)")->take_all();
    analyze_cmd->add_option("--tol", aa.opts.tol, "Threshold for class flags and constancy")->capture_default_str()
        ->check(CLI::PositiveNumber);
    analyze_cmd->add_option("--fd-step", aa.opts.fd.step, "Finite-difference base step")->capture_default_str()
        ->check(CLI::PositiveNumber);
    analyze_cmd->add_option("--samples", aa.opts.samples, "Planes per kind per point")->capture_default_str()
        ->check(CLI::Range(2, 1000000));
    analyze_cmd->add_option("--seed", aa.opts.seed, "Sampling seed")->capture_default_str();
    analyze_cmd->add_option("--format", aa.format, "Output format")->capture_default_str()
        ->check(CLI::IsMember({"text", "json"}));

    app.add_subcommand("models", "List bundled models with their expected results");

    SelftestOptions st;
    auto* selftest_cmd = app.add_subcommand("selftest", "Run the algebraic property suite");
    selftest_cmd->add_option("--seed", st.seed, "Seed")->capture_default_str();

    std::string chart_model;
    auto* chart_cmd = app.add_subcommand("chart", "Print the chart file of a chart-backed model");
    chart_cmd->add_option("--model", chart_model, "Model name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (analyze_cmd->parsed()) {
            if (aa.model.empty() == aa.chart.empty()) {
                std::cerr << "error: analyze needs exactly one of --model or --chart\n";
                return 2;
            }
            return run_analyze(aa);
        }
        if (app.got_subcommand("models")) {
            std::cout << models_table();
            return 0;
        }
        if (selftest_cmd->parsed()) return run_selftest(std::cout, st);
        if (chart_cmd->parsed()) {
            const ModelDescriptor md = model_by_name(chart_model);
            if (!md.chart) {
                std::cerr << fmt::format("error: model '{}' is not chart-backed\n", chart_model);
                return 2;
            }
            std::cout << serialize_chart(*md.chart, md.name + ": " + md.description);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
