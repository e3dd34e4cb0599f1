// mcout: MCMC output analysis from the command line.
//
//   mcout analyze  <chain.csv> [--alpha --epsilon --batch-size --batch-rule --flat-top --quantiles]
//   mcout demo     [--seed --alpha --epsilon --max-n --out-dir]
//   mcout plotdata <chain.csv> --kind trace|acf|ccf|density|region [--lags --grid-points]
//
// Exit codes: 0 success (terminated), 2 success but ESS below the cutoff,
// 1 error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcout/csv.hpp"
#include "mcout/errors.hpp"
#include "mcout/lcd.hpp"
#include "mcout/report.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotTerminated = 2;

fs::path default_out_dir(const std::string& fallback) {
    if (const char* env = std::getenv(mcout::kOutDirEnv); env && *env) return env;
    return fallback;
}

std::vector<double> parse_quantiles(const std::string& list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        double q = 0.0;
        try {
            q = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size()) throw mcout::ParameterError("bad quantile level '" + item + "'");
        if (!(q > 0.0 && q < 1.0)) throw mcout::ParameterError("quantile levels must lie in (0, 1)");
        out.push_back(q);
    }
    return out;
}

// Writes to the file, or to stdout for "-".
template <class Fn>
void emit(const fs::path& path, Fn&& fn) {
    if (path == "-") {
        fn(std::cout);
        return;
    }
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw mcout::DataError("cannot write " + path.string());
    fn(out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MCMC output analysis: Monte Carlo error, effective sample size, stopping "
                 "rules, quantiles and confidence regions"};
    app.require_subcommand(1);
    app.footer(std::string("Environment: ") + mcout::kOutDirEnv +
               " sets the default output directory.\nExit codes: 0 terminated, 2 ESS below "
               "cutoff, 1 error.");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Analyze a chain file (CSV with header)");
    std::string analyze_input;
    mcout::AnalysisOptions aopt;
    std::optional<std::size_t> analyze_batch;
    std::string analyze_rule = "cube-root";
    std::string quantile_list = "0.025,0.5,0.975";
    std::string analyze_out;
    analyze->add_option("file", analyze_input, "Chain CSV: header row, one column per component")
        ->required();
    analyze->add_option("--alpha", aopt.alpha, "Confidence level complement")->capture_default_str();
    analyze->add_option("--epsilon", aopt.epsilon, "Relative tolerance for the ESS cutoff")
        ->capture_default_str();
    analyze->add_option("--batch-size", analyze_batch, "Fixed batch size b");
    analyze->add_option("--batch-rule", analyze_rule, "cube-root or square-root when b is not fixed")
        ->capture_default_str();
    analyze->add_flag("--flat-top", aopt.flat_top, "Use the flat-top batch means estimator");
    analyze->add_option("--quantiles", quantile_list, "Comma-separated quantile levels")
        ->capture_default_str();
    analyze->add_option("--discard", aopt.discard, "Drop the first k rows before analysis")
        ->capture_default_str();
    analyze->add_option("--out", analyze_out,
                        "Report path ('-' for stdout); default <out-dir>/<stem>.report.json");

    // demo
    auto* demo = app.add_subcommand("demo", "Run the built-in Weibull reliability example");
    mcout::lcd::DemoConfig dcfg;
    std::string demo_out;
    std::string demo_rule = "square-root";
    demo->add_option("--seed", dcfg.seed, "RNG seed")->capture_default_str();
    demo->add_option("--alpha", dcfg.alpha)->capture_default_str();
    demo->add_option("--epsilon", dcfg.epsilon)->capture_default_str();
    demo->add_option("--max-n", dcfg.max_n, "Safety cap on chain length")->capture_default_str();
    demo->add_option("--proposal-sd", dcfg.proposal_sd, "Random-walk sd for beta")
        ->capture_default_str();
    demo->add_option("--batch-rule", demo_rule, "cube-root or square-root")->capture_default_str();
    demo->add_option("--out-dir", demo_out, "Output directory; default $MCOUT_OUT_DIR or mcout_demo");

    // plotdata
    auto* plot = app.add_subcommand("plotdata", "Emit plot-ready columns for a chain file");
    std::string plot_input;
    std::string plot_kind;
    std::string plot_out;
    std::string plot_rule = "cube-root";
    mcout::PlotOptions popt;
    std::optional<std::size_t> plot_batch;
    plot->add_option("file", plot_input, "Chain CSV")->required();
    plot->add_option("--kind", plot_kind, "trace, acf, ccf, density or region")->required();
    plot->add_option("--lags", popt.lags, "Maximum lag for acf/ccf")->capture_default_str();
    plot->add_option("--grid-points", popt.grid_points, "Density grid size")->capture_default_str();
    plot->add_option("--column", popt.column, "0-based column for density (first of the pair for ccf/region)")
        ->capture_default_str();
    plot->add_option("--column-b", popt.column_b, "Second column for ccf/region")->capture_default_str();
    plot->add_option("--alpha", popt.alpha)->capture_default_str();
    plot->add_option("--batch-size", plot_batch, "Fixed batch size b");
    plot->add_option("--batch-rule", plot_rule, "cube-root or square-root")->capture_default_str();
    plot->add_option("--out", plot_out, "Output path ('-' for stdout); default <out-dir>/<stem>.<kind>.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (*analyze) {
            aopt.batch_size = analyze_batch;
            aopt.batch_rule = mcout::batch_rule_from_string(analyze_rule);
            aopt.quantiles = parse_quantiles(quantile_list);
            aopt.input = analyze_input;
            const auto chain = mcout::read_chain_csv(fs::path(analyze_input));
            const auto report = mcout::analyze(chain, aopt);
            fs::path out = analyze_out.empty()
                               ? default_out_dir(".") /
                                     (fs::path(analyze_input).stem().string() + ".report.json")
                               : fs::path(analyze_out);
            emit(out, [&](std::ostream& os) { os << mcout::to_json(report).dump(2) << '\n'; });
            std::cerr << "n=" << report.n << " p=" << report.p << " ess="
                      << (report.ess ? mcout::format_double(*report.ess) : "null")
                      << " cutoff=" << report.cutoff.rounded
                      << (report.terminate ? " terminate" : " run-longer") << '\n';
            return report.terminate ? kExitOk : kExitNotTerminated;
        }
        if (*demo) {
            dcfg.batch_rule = mcout::batch_rule_from_string(demo_rule);
            const auto report = mcout::lcd::run_demo(dcfg);
            const fs::path dir = demo_out.empty() ? default_out_dir("mcout_demo") : fs::path(demo_out);
            const auto files = mcout::write_demo_outputs(report, dir);
            const auto& last = report.history.back();
            std::cerr << "cutoff=" << report.cutoff.rounded << " n=" << last.n
                      << " ess=" << mcout::format_double(last.ess)
                      << " MTTF=" << mcout::format_double(report.components[0].mean)
                      << " R(1500)=" << mcout::format_double(report.components[1].mean) << '\n';
            for (const auto& f : files) std::cout << f.string() << '\n';
            return report.terminated ? kExitOk : kExitNotTerminated;
        }
        if (*plot) {
            popt.batch_size = plot_batch;
            popt.batch_rule = mcout::batch_rule_from_string(plot_rule);
            const auto kind = mcout::plot_kind_from_string(plot_kind);
            const auto chain = mcout::read_chain_csv(fs::path(plot_input));
            const auto table = mcout::plot_data(chain, kind, popt);
            fs::path out = plot_out.empty()
                               ? default_out_dir(".") / (fs::path(plot_input).stem().string() + "." +
                                                         mcout::to_string(kind) + ".csv")
                               : fs::path(plot_out);
            emit(out, [&](std::ostream& os) { mcout::write_plot_table(os, table); });
            return kExitOk;
        }
    } catch (const mcout::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
