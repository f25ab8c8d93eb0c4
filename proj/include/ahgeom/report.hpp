#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ahgeom/analysis.hpp"
#include "ahgeom/models.hpp"

namespace ahgeom {

struct AnalysisOptions {
    double tol = 1e-4;              ///< class flags, constancy and verdict threshold
    FdOptions fd;
    int samples = 256;              ///< planes per kind per point
    std::uint64_t seed = 42;
    double expectation_tol = 1e-3;  ///< model mode: allowed error on expected constants
};

struct ResidualFlag {
    double residual = 0.0;
    bool pass = false;
};

struct PointReport {
    Vector point;
    std::optional<std::string> error;  ///< set when the point could not be analyzed

    ResidualFlag kahler, nearly_kahler, almost_kahler, ah1, ah2, ah3;
    EinsteinFit einstein;
    CurvatureStats holomorphic;
    std::optional<CurvatureStats> antiholomorphic;  ///< empty for m = 1
    std::optional<double> decomposition;            ///< empty when nu is undefined or S fails its gates
    double bianchi = 0.0;
    double riemann_symmetry = 0.0;
    double gray_ak2 = 0.0;
    std::optional<std::vector<double>> ricci_eigenvalues;
    std::optional<double> frame_relation;  ///< empty when no adapted eigenframe exists
    Verdict verdict;

    std::vector<std::string> expectation_failures;

    ClassFlags flags() const;
};

struct GlobalReport {
    std::optional<SchurReport> schur;  ///< needs m >= 2 and two analyzed points
    Verdict overall;
    bool consistent = false;  ///< every analyzed point reached the same verdict
    std::optional<bool> expectations_pass;
};

struct AnalysisReport {
    std::string source_kind;  ///< "model" or "chart"
    std::string source_name;
    int m = 0;
    AnalysisOptions options;
    std::vector<PointReport> points;
    GlobalReport global;

    bool has_errors() const;
};

/// Full pointwise pipeline at p. Samples antiholomorphic planes, then holomorphic ones,
/// from stream `index` of the seed.
PointReport analyze_point(const MetricSource& src, const Vector& p, std::size_t index, const AnalysisOptions& opts);

/// Analyzes every point concurrently and assembles the report in the given order.
/// With `expected` set, each point is checked against it.
AnalysisReport analyze(const MetricSource& src, const std::vector<Vector>& points, const AnalysisOptions& opts,
                       const std::optional<ModelExpectation>& expected = std::nullopt,
                       std::string source_kind = "chart");

/// Human-readable failures of one point against a model expectation.
std::vector<std::string> check_expectation(const PointReport& pr, const ModelExpectation& ex,
                                           const AnalysisOptions& opts);

nlohmann::ordered_json to_json(const AnalysisReport& report);
std::string to_text(const AnalysisReport& report);

/// 0 when every expectation holds (or analysis completed in chart mode),
/// 1 on an expectation mismatch, 2 when a point could not be analyzed.
int exit_code(const AnalysisReport& report);

std::string models_table();

struct SelftestOptions {
    std::uint64_t seed = 42;
    int instances = 200;
    int planes = 256;
};

/// Algebraic property suite, no chart differentiation. Writes one line per check.
int run_selftest(std::ostream& out, const SelftestOptions& opts = {});

}  // namespace ahgeom
