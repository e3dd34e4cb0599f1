#include "mcout/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "mcout/csv.hpp"
#include "mcout/distributions.hpp"
#include "mcout/errors.hpp"

namespace mcout {

using nlohmann::ordered_json;

namespace {

ordered_json matrix_json(const Eigen::MatrixXd& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const ordered_json& j) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(j.at(0).size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
    }
    return m;
}

ordered_json vector_json(const Eigen::VectorXd& v) {
    ordered_json out = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Eigen::VectorXd vector_from_json(const ordered_json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j.at(i).get<double>();
    return v;
}

MatrixSummary summarize(const CovarianceEstimate& est) {
    return {est.matrix, std::string(to_string(est.kind)), est.batch_size, est.n_used,
            est.positive_definite};
}

ordered_json summary_json(const MatrixSummary& m) {
    ordered_json j;
    j["kind"] = m.kind;
    j["batch_size"] = m.batch_size;
    j["n_used"] = m.n_used;
    j["positive_definite"] = m.positive_definite;
    j["matrix"] = matrix_json(m.matrix);
    return j;
}

MatrixSummary summary_from_json(const ordered_json& j) {
    return {matrix_from_json(j.at("matrix")), j.at("kind").get<std::string>(),
            j.at("batch_size").get<std::size_t>(), j.at("n_used").get<std::size_t>(),
            j.at("positive_definite").get<bool>()};
}

ordered_json quantile_json(const QuantileEstimate& q) {
    ordered_json j;
    j["q"] = q.q;
    j["point"] = q.point;
    j["indicator_sigma2"] = q.indicator_sigma2;
    j["density"] = q.density;
    j["ci_lo"] = q.lo;
    j["ci_hi"] = q.hi;
    j["alpha"] = q.alpha;
    j["batch_size"] = q.batch_size;
    j["bonferroni"] = q.bonferroni;
    return j;
}

QuantileEstimate quantile_from_json(const ordered_json& j) {
    QuantileEstimate q;
    q.q = j.at("q").get<double>();
    q.point = j.at("point").get<double>();
    q.indicator_sigma2 = j.at("indicator_sigma2").get<double>();
    q.density = j.at("density").get<double>();
    q.lo = j.at("ci_lo").get<double>();
    q.hi = j.at("ci_hi").get<double>();
    q.alpha = j.at("alpha").get<double>();
    q.batch_size = j.at("batch_size").get<std::size_t>();
    q.bonferroni = j.at("bonferroni").get<bool>();
    return q;
}

template <class T>
ordered_json optional_json(const std::optional<T>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <class T>
std::optional<T> optional_from_json(const ordered_json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<T>();
}

ordered_json region_json(const ConfidenceRegion& r) {
    ordered_json j;
    j["center"] = vector_json(r.center);
    j["shape"] = matrix_json(r.shape);
    j["hotelling_t2"] = r.hotelling_t2;
    j["df"] = r.df;
    j["alpha"] = r.alpha;
    j["volume"] = r.volume;
    ordered_json boundary = ordered_json::array();
    for (const auto& pt : r.boundary) boundary.push_back({pt.x(), pt.y()});
    j["boundary"] = std::move(boundary);
    return j;
}

void check_not_constant(const ChainMatrix& chain) {
    for (std::size_t c = 0; c < chain.cols(); ++c) {
        const double first = chain(0, c);
        bool varies = false;
        for (std::size_t r = 1; r < chain.rows() && !varies; ++r) varies = chain(r, c) != first;
        if (!varies) throw DegenerateDataError("column '" + chain.label(c) + "' is constant");
    }
}

}  // namespace

AnalysisReport analyze(const ChainMatrix& input, const AnalysisOptions& options) {
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
    const ChainMatrix chain = discard_first(input, options.discard);
    const std::size_t n = chain.rows();
    const std::size_t p = chain.cols();
    if (p > n) {
        throw InsufficientDataError("more columns (" + std::to_string(p) + ") than rows (" +
                                    std::to_string(n) + ")");
    }
    if (n < 8) throw InsufficientDataError("analysis needs at least 8 rows");
    check_not_constant(chain);

    AnalysisReport report;
    report.config = options;
    report.n = n;
    report.p = p;
    for (std::size_t c = 0; c < p; ++c) report.labels.push_back(chain.label(c));
    report.mean = column_means(chain);

    const auto lambda = sample_cov_lambda(chain);
    const std::size_t b = options.batch_size.value_or(batch_size_for(n, options.batch_rule));
    const auto choice = estimate_sigma(
        chain, options.flat_top ? EstimatorKind::FlatTop : EstimatorKind::BatchMeans, b);
    report.lambda = summarize(lambda);
    report.sigma = summarize(choice.sigma);
    report.sigma_fallback = choice.fallback_used;

    report.cutoff = min_ess_cutoff(options.alpha, options.epsilon, p);
    report.rhat_cutoff = rhat_cutoff(report.cutoff.value);
    try {
        report.ess = ess(n, lambda, choice.sigma);
        report.rhat = rhat_from_ess(*report.ess);
        const std::size_t n_star = options.n_star.value_or(report.cutoff.rounded);
        report.terminate = *report.ess >= report.cutoff.value && n >= n_star;
    } catch (const SingularEstimateError&) {
        report.null_reasons["ess"] = "singular-estimate";
        report.null_reasons["rhat"] = "singular-estimate";
    }

    for (std::size_t c = 0; c < p; ++c) {
        ColumnQuantiles cq{chain.label(c), {}};
        if (!options.quantiles.empty()) {
            try {
                cq.estimates =
                    bonferroni_quantile_cis(chain.column(c), options.quantiles, options.alpha, b);
            } catch (const DegenerateDataError&) {
                report.null_reasons["quantiles." + cq.label] =
                    "degenerate-data";
            }
        }
        report.quantiles.push_back(std::move(cq));
    }

    try {
        const auto region =
            hotelling_region(report.mean, choice.sigma, n, options.alpha, hotelling_dof(choice.sigma));
        report.region = RegionSummary{region.center, region.shape, region.hotelling_t2, region.df,
                                      region.volume};
    } catch (const DegreesOfFreedomError&) {
        report.null_reasons["region"] = "degrees-of-freedom";
    } catch (const SingularEstimateError&) {
        report.null_reasons["region"] = "singular-estimate";
    }
    return report;
}

ordered_json to_json(const AnalysisReport& r) {
    ordered_json j;
    j["tool_version"] = r.tool_version;
    ordered_json cfg;
    cfg["input"] = r.config.input;
    cfg["alpha"] = r.config.alpha;
    cfg["epsilon"] = r.config.epsilon;
    cfg["batch_size"] = optional_json(r.config.batch_size);
    cfg["batch_rule"] = std::string(to_string(r.config.batch_rule));
    cfg["estimator"] = r.config.flat_top ? "flat-top" : "batch-means";
    cfg["quantiles"] = r.config.quantiles;
    cfg["discard"] = r.config.discard;
    cfg["n_star"] = optional_json(r.config.n_star);
    cfg["density_estimator"] = "gaussian-kernel-silverman";
    cfg["simultaneous_quantiles"] = "bonferroni";
    j["config"] = std::move(cfg);
    j["n"] = r.n;
    j["p"] = r.p;
    j["labels"] = r.labels;
    j["mean"] = vector_json(r.mean);
    j["lambda"] = summary_json(r.lambda);
    j["sigma"] = summary_json(r.sigma);
    j["sigma_fallback"] = r.sigma_fallback;
    j["ess"] = optional_json(r.ess);
    j["cutoff"] = r.cutoff.value;
    j["cutoff_rounded"] = r.cutoff.rounded;
    j["rhat"] = optional_json(r.rhat);
    j["rhat_cutoff"] = r.rhat_cutoff;
    j["terminate"] = r.terminate;
    ordered_json quantiles = ordered_json::array();
    for (const auto& cq : r.quantiles) {
        ordered_json col;
        col["label"] = cq.label;
        ordered_json est = ordered_json::array();
        for (const auto& q : cq.estimates) est.push_back(quantile_json(q));
        col["estimates"] = std::move(est);
        quantiles.push_back(std::move(col));
    }
    j["quantiles"] = std::move(quantiles);
    if (r.region) {
        ordered_json reg;
        reg["center"] = vector_json(r.region->center);
        reg["shape"] = matrix_json(r.region->shape);
        reg["hotelling_t2"] = r.region->hotelling_t2;
        reg["df"] = r.region->df;
        reg["volume"] = r.region->volume;
        j["region"] = std::move(reg);
    } else {
        j["region"] = nullptr;
    }
    ordered_json reasons = ordered_json::object();
    for (const auto& [k, v] : r.null_reasons) reasons[k] = v;
    j["null_reasons"] = std::move(reasons);
    return j;
}

AnalysisReport analysis_report_from_json(const ordered_json& j) {
    AnalysisReport r;
    r.tool_version = j.at("tool_version").get<std::string>();
    const auto& cfg = j.at("config");
    r.config.input = cfg.at("input").get<std::string>();
    r.config.alpha = cfg.at("alpha").get<double>();
    r.config.epsilon = cfg.at("epsilon").get<double>();
    r.config.batch_size = optional_from_json<std::size_t>(cfg.at("batch_size"));
    r.config.batch_rule = batch_rule_from_string(cfg.at("batch_rule").get<std::string>());
    r.config.flat_top = cfg.at("estimator").get<std::string>() == "flat-top";
    r.config.quantiles = cfg.at("quantiles").get<std::vector<double>>();
    r.config.discard = cfg.at("discard").get<std::size_t>();
    r.config.n_star = optional_from_json<std::size_t>(cfg.at("n_star"));
    r.n = j.at("n").get<std::size_t>();
    r.p = j.at("p").get<std::size_t>();
    r.labels = j.at("labels").get<std::vector<std::string>>();
    r.mean = vector_from_json(j.at("mean"));
    r.lambda = summary_from_json(j.at("lambda"));
    r.sigma = summary_from_json(j.at("sigma"));
    r.sigma_fallback = j.at("sigma_fallback").get<bool>();
    r.ess = optional_from_json<double>(j.at("ess"));
    r.cutoff = {j.at("cutoff").get<double>(), j.at("cutoff_rounded").get<std::size_t>()};
    r.rhat = optional_from_json<double>(j.at("rhat"));
    r.rhat_cutoff = j.at("rhat_cutoff").get<double>();
    r.terminate = j.at("terminate").get<bool>();
    for (const auto& col : j.at("quantiles")) {
        ColumnQuantiles cq{col.at("label").get<std::string>(), {}};
        for (const auto& q : col.at("estimates")) cq.estimates.push_back(quantile_from_json(q));
        r.quantiles.push_back(std::move(cq));
    }
    if (!j.at("region").is_null()) {
        const auto& reg = j.at("region");
        r.region = RegionSummary{vector_from_json(reg.at("center")), matrix_from_json(reg.at("shape")),
                                 reg.at("hotelling_t2").get<double>(), reg.at("df").get<std::size_t>(),
                                 reg.at("volume").get<double>()};
    }
    for (const auto& [k, v] : j.at("null_reasons").items()) r.null_reasons[k] = v.get<std::string>();
    return r;
}

ordered_json to_json(const StoppingVerdict& v) {
    ordered_json j;
    j["n"] = v.n;
    j["ess"] = v.ess;
    j["cutoff"] = v.cutoff;
    j["rhat"] = v.rhat;
    j["terminate"] = v.terminate;
    j["fallback_used"] = v.fallback_used;
    j["batch_size"] = v.batch_size;
    j["sigma_kind"] = std::string(to_string(v.sigma_kind));
    return j;
}

ordered_json to_json(const lcd::DemoReport& r) {
    const auto& c = r.config;
    ordered_json j;
    j["tool_version"] = kToolVersion;
    ordered_json cfg;
    cfg["seed"] = c.seed;
    cfg["stream_id"] = c.stream_id;
    cfg["alpha"] = c.alpha;
    cfg["epsilon"] = c.epsilon;
    cfg["proposal_sd"] = c.proposal_sd;
    cfg["beta_start"] = optional_json(c.beta_start);
    cfg["n_star"] = optional_json(c.n_star);
    cfg["checkpoints"] = c.checkpoints;
    cfg["growth"] = c.growth;
    cfg["max_n"] = c.max_n;
    cfg["estimator"] = std::string(to_string(c.sigma_kind));
    cfg["batch_size"] = optional_json(c.batch_size);
    cfg["batch_rule"] = std::string(to_string(c.batch_rule));
    cfg["max_lag"] = c.max_lag;
    cfg["normal_method"] = "inversion";
    cfg["gamma_method"] = "marsaglia-tsang";
    cfg["rng"] = "xoshiro256starstar-splitmix64-jump";
    cfg["density_estimator"] = "gaussian-kernel-silverman";
    cfg["simultaneous_bands"] = "bonferroni";
    j["config"] = std::move(cfg);
    j["cutoff"] = r.cutoff.value;
    j["cutoff_rounded"] = r.cutoff.rounded;
    j["beta_start"] = r.beta_start;
    j["acceptance_rate"] = r.acceptance_rate;
    j["n"] = r.chain.rows();
    j["terminated"] = r.terminated;
    ordered_json history = ordered_json::array();
    for (const auto& v : r.history) history.push_back(to_json(v));
    j["history"] = std::move(history);
    j["labels"] = {lcd::kFunctionalLabels[0], lcd::kFunctionalLabels[1]};
    j["lambda"] = summary_json(summarize(r.lambda_hat));
    j["sigma"] = summary_json(summarize(r.sigma_hat));
    j["sigma_fallback"] = r.sigma_fallback;
    j["simultaneous_family"] = r.simultaneous_family;
    ordered_json comps = ordered_json::array();
    for (const auto& comp : r.components) {
        ordered_json cj;
        cj["label"] = comp.label;
        cj["mean"] = comp.mean;
        cj["mean_band"] = {comp.mean_band.lo, comp.mean_band.hi};
        cj["credible_interval"] = {comp.credible_lo, comp.credible_hi};
        cj["lower_quantile"] = quantile_json(comp.lower_band);
        cj["upper_quantile"] = quantile_json(comp.upper_band);
        comps.push_back(std::move(cj));
    }
    j["components"] = std::move(comps);
    j["region"] = region_json(r.region);
    return j;
}

void write_plot_table(std::ostream& out, const PlotTable& table) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
        out << '\n';
    }
}

PlotKind plot_kind_from_string(const std::string& name) {
    if (name == "trace") return PlotKind::Trace;
    if (name == "acf") return PlotKind::Acf;
    if (name == "ccf") return PlotKind::Ccf;
    if (name == "density") return PlotKind::Density;
    if (name == "region") return PlotKind::Region;
    throw ParameterError("unknown plot kind '" + name + "' (trace, acf, ccf, density, region)");
}

std::string to_string(PlotKind kind) {
    switch (kind) {
        case PlotKind::Trace: return "trace";
        case PlotKind::Acf: return "acf";
        case PlotKind::Ccf: return "ccf";
        case PlotKind::Density: return "density";
        case PlotKind::Region: return "region";
    }
    return "unknown";
}

PlotTable plot_data(const ChainMatrix& chain, PlotKind kind, const PlotOptions& opt) {
    const std::size_t n = chain.rows();
    const std::size_t p = chain.cols();
    if (n < 2) throw InsufficientDataError("plot data needs at least 2 rows");
    PlotTable table;
    const double band = 3.0 / std::sqrt(static_cast<double>(n));
    const std::size_t lags = std::min(opt.lags, n - 1);

    switch (kind) {
        case PlotKind::Trace: {
            table.columns.push_back("index");
            for (std::size_t c = 0; c < p; ++c) table.columns.push_back(chain.label(c));
            table.rows.reserve(n);
            for (std::size_t r = 0; r < n; ++r) {
                std::vector<double> row{static_cast<double>(r + 1)};
                const auto values = chain.row(r);
                row.insert(row.end(), values.begin(), values.end());
                table.rows.push_back(std::move(row));
            }
            break;
        }
        case PlotKind::Acf: {
            table.columns.push_back("lag");
            std::vector<CorrelogramSeries> series;
            for (std::size_t c = 0; c < p; ++c) {
                table.columns.push_back(chain.label(c));
                series.push_back(correlogram(chain, lags, c, c));
            }
            table.columns.push_back("band_lo");
            table.columns.push_back("band_hi");
            for (std::size_t k = 0; k <= lags; ++k) {
                std::vector<double> row{static_cast<double>(k)};
                for (const auto& s : series) row.push_back(s.values[k]);
                row.push_back(-band);
                row.push_back(band);
                table.rows.push_back(std::move(row));
            }
            break;
        }
        case PlotKind::Ccf: {
            if (p < 2) throw DimensionError("ccf needs at least two columns");
            const auto s = correlogram(chain, lags, opt.column, opt.column_b);
            table.columns = {"lag", chain.label(opt.column) + ":" + chain.label(opt.column_b),
                             "band_lo", "band_hi"};
            for (std::size_t k = 0; k <= lags; ++k) {
                table.rows.push_back({static_cast<double>(k), s.values[k], -band, band});
            }
            break;
        }
        case PlotKind::Density: {
            if (opt.column >= p) throw DimensionError("density column out of range");
            if (opt.grid_points < 2) throw ParameterError("density needs at least 2 grid points");
            const auto col = chain.column(opt.column);
            const KernelDensity kde(col);
            const std::size_t b = opt.batch_size.value_or(batch_size_for(n, opt.batch_rule));
            const double family_alpha = opt.alpha / static_cast<double>(3 * p);

            const ChainMatrix single(n, 1, col);
            const double mean = column_means(single)(0);
            const double z = normal_quantile(1.0 - family_alpha / 2.0);
            const double mean_half =
                z * std::sqrt(batch_means_sigma(single, b).matrix(0, 0) / static_cast<double>(n));
            const auto lower = quantile_ci(col, opt.alpha / 2.0, family_alpha, b);
            const auto upper = quantile_ci(col, 1.0 - opt.alpha / 2.0, family_alpha, b);

            table.columns = {"x",        "density",     "mean",        "mean_band_lo",
                             "mean_band_hi", "q_lo",    "q_lo_band_lo", "q_lo_band_hi",
                             "q_hi",     "q_hi_band_lo", "q_hi_band_hi"};
            const auto [mn, mx] = std::minmax_element(col.begin(), col.end());
            const double from = *mn - 3.0 * kde.bandwidth();
            const double to = *mx + 3.0 * kde.bandwidth();
            const double step = (to - from) / static_cast<double>(opt.grid_points - 1);
            for (std::size_t g = 0; g < opt.grid_points; ++g) {
                const double x = from + step * static_cast<double>(g);
                table.rows.push_back({x, kde(x), mean, mean - mean_half, mean + mean_half,
                                      lower.point, lower.lo, lower.hi, upper.point, upper.lo,
                                      upper.hi});
            }
            break;
        }
        case PlotKind::Region: {
            if (p < 2) throw DimensionError("region needs at least two columns");
            if (opt.column >= p || opt.column_b >= p || opt.column == opt.column_b) {
                throw DimensionError("region needs two distinct columns");
            }
            std::vector<double> pair;
            pair.reserve(2 * n);
            for (std::size_t r = 0; r < n; ++r) {
                pair.push_back(chain(r, opt.column));
                pair.push_back(chain(r, opt.column_b));
            }
            const ChainMatrix two(n, 2, std::move(pair),
                                  {chain.label(opt.column), chain.label(opt.column_b)});
            const std::size_t b = opt.batch_size.value_or(batch_size_for(n, opt.batch_rule));
            const auto sigma = batch_means_sigma(two, b);
            const auto region =
                hotelling_region(column_means(two), sigma, n, opt.alpha, hotelling_dof(sigma));
            table.columns = {"x", "y", "is_center"};
            for (const auto& pt : region.boundary) table.rows.push_back({pt.x(), pt.y(), 0.0});
            table.rows.push_back({region.center(0), region.center(1), 1.0});
            break;
        }
    }
    return table;
}

std::vector<std::filesystem::path> write_demo_outputs(const lcd::DemoReport& report,
                                                      const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    auto open = [&](const std::string& name) {
        written.push_back(dir / name);
        std::ofstream out(written.back());
        if (!out) throw DataError("cannot write " + written.back().string());
        return out;
    };

    {
        auto out = open("report.json");
        out << to_json(report).dump(2) << '\n';
    }
    {
        auto out = open("chain.csv");
        write_chain_csv(out, report.chain);
    }
    {
        auto out = open("parameters.csv");
        write_chain_csv(out, report.parameters);
    }

    PlotOptions opt;
    opt.lags = report.config.max_lag;
    opt.alpha = report.config.alpha;
    opt.batch_size = report.config.batch_size;
    opt.batch_rule = report.config.batch_rule;
    auto emit = [&](const std::string& name, const ChainMatrix& chain, PlotKind kind,
                    const PlotOptions& o) {
        auto out = open(name);
        write_plot_table(out, plot_data(chain, kind, o));
    };
    emit("trace.csv", report.parameters, PlotKind::Trace, opt);
    emit("acf.csv", report.chain, PlotKind::Acf, opt);
    emit("ccf.csv", report.chain, PlotKind::Ccf, opt);
    auto density_opt = opt;
    density_opt.column = 0;
    emit("density_mttf.csv", report.chain, PlotKind::Density, density_opt);
    density_opt.column = 1;
    emit("density_r1500.csv", report.chain, PlotKind::Density, density_opt);
    emit("region.csv", report.chain, PlotKind::Region, opt);
    return written;
}

}  // namespace mcout
