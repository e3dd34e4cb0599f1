#pragma once

// Aggregated analysis of a chain file plus the structured-text (JSON) report
// and plot-data tables emitted by the command line tool.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "mcout/chain.hpp"
#include "mcout/inference.hpp"
#include "mcout/lcd.hpp"
#include "mcout/mcse.hpp"
#include "mcout/quantiles.hpp"

namespace mcout {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kOutDirEnv = "MCOUT_OUT_DIR";

struct AnalysisOptions {
    double alpha = 0.05;
    double epsilon = 0.05;
    std::optional<std::size_t> batch_size;
    BatchRule batch_rule = BatchRule::CubeRoot;
    bool flat_top = false;
    std::vector<double> quantiles{0.025, 0.5, 0.975};
    std::size_t discard = 0;
    std::optional<std::size_t> n_star;
    std::string input;  // echoed only
};

/// Estimator matrix and its metadata as reported.
struct MatrixSummary {
    Eigen::MatrixXd matrix;
    std::string kind;
    std::size_t batch_size = 0;
    std::size_t n_used = 0;
    bool positive_definite = false;
};

struct RegionSummary {
    Eigen::VectorXd center;
    Eigen::MatrixXd shape;
    double hotelling_t2 = 0.0;
    std::size_t df = 0;
    double volume = 0.0;
};

struct ColumnQuantiles {
    std::string label;
    std::vector<QuantileEstimate> estimates;
};

struct AnalysisReport {
    std::string tool_version = kToolVersion;
    AnalysisOptions config;
    std::size_t n = 0;
    std::size_t p = 0;
    std::vector<std::string> labels;
    Eigen::VectorXd mean;
    MatrixSummary lambda;
    MatrixSummary sigma;
    bool sigma_fallback = false;
    std::optional<double> ess;
    EssCutoff cutoff;
    std::optional<double> rhat;
    double rhat_cutoff = 0.0;
    bool terminate = false;
    std::vector<ColumnQuantiles> quantiles;
    std::optional<RegionSummary> region;
    /// Why an optional field is null, keyed by field name.
    std::map<std::string, std::string> null_reasons;
};

/// Runs mean, Lambda, Sigma, ESS, stopping verdict, quantiles and the
/// Hotelling region. Throws DegenerateDataError for a constant column and
/// InsufficientDataError when p > n. A singular estimate or too few batches
/// leave the dependent fields null with a reason code instead of throwing.
AnalysisReport analyze(const ChainMatrix& chain, const AnalysisOptions& options);

nlohmann::ordered_json to_json(const AnalysisReport& report);
AnalysisReport analysis_report_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json to_json(const StoppingVerdict& verdict);
nlohmann::ordered_json to_json(const lcd::DemoReport& report);

/// Columnar plot data, header first.
struct PlotTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_plot_table(std::ostream& out, const PlotTable& table);

enum class PlotKind { Trace, Acf, Ccf, Density, Region };
PlotKind plot_kind_from_string(const std::string& name);
std::string to_string(PlotKind kind);

struct PlotOptions {
    std::size_t lags = 50;
    std::size_t grid_points = 512;
    std::size_t column = 0;       // density
    std::size_t column_b = 1;     // second column for ccf / region
    double alpha = 0.05;
    std::optional<std::size_t> batch_size;
    BatchRule batch_rule = BatchRule::CubeRoot;
};

/// trace: (index, one column per component)
/// acf:   (lag, one ACF column per component, band_lo, band_hi) with band +/- 3/sqrt(n)
/// ccf:   (lag, ccf, band_lo, band_hi) for the column pair
/// density: (x, density, mean, its band, lower/upper credible quantiles and
///          their bands); bands are Bonferroni-simultaneous over 3p estimates
/// region: 128 boundary points then the center, columns (x, y, is_center)
PlotTable plot_data(const ChainMatrix& chain, PlotKind kind, const PlotOptions& options);

/// Writes report.json, chain.csv, parameters.csv and plot-data files for the
/// demo into dir. Returns the written paths.
std::vector<std::filesystem::path> write_demo_outputs(const lcd::DemoReport& report,
                                                      const std::filesystem::path& dir);

}  // namespace mcout
