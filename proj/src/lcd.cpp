#include "mcout/lcd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/digamma.hpp>

#include "mcout/csv.hpp"
#include "mcout/distributions.hpp"
#include "mcout/errors.hpp"

namespace mcout::lcd {

namespace {

// Projection hours to failure for 31 lamps.
constexpr std::array<double, kFailureCount> kTable = {
    387, 182, 244, 600, 627, 332, 418,  300, 798, 584, 660, 39,  274, 174, 50,  34,
    1895, 158, 974, 345, 1755, 1752, 473, 81, 954, 1407, 230, 464, 380, 131, 1205};

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

LcdData LcdData::table() { return LcdData(std::vector<double>(kTable.begin(), kTable.end())); }

LcdData LcdData::load_csv(const std::filesystem::path& path) {
    const auto chain = read_chain_csv(path);
    if (chain.cols() != 1) throw DataError("failure-time file must have exactly one column");
    auto times = chain.column(0);
    if (times.size() != kFailureCount) {
        throw DataError("expected " + std::to_string(kFailureCount) + " failure times, got " +
                        std::to_string(times.size()));
    }
    const double sum = std::accumulate(times.begin(), times.end(), 0.0);
    if (sum != kFailureTimeSum || !std::equal(times.begin(), times.end(), kTable.begin())) {
        throw DataError("failure times do not match the built-in table");
    }
    return LcdData(std::move(times));
}

LcdData::LcdData(std::vector<double> times) : times_(std::move(times)) {
    if (times_.empty()) throw DataError("no failure times");
    log_times_.reserve(times_.size());
    for (double t : times_) {
        if (!(t > 0.0) || !std::isfinite(t)) throw DataError("failure times must be positive");
        log_times_.push_back(std::log(t));
        sum_log_ += log_times_.back();
    }
}

double LcdData::sum_pow(double beta) const {
    double acc = 0.0;
    for (double lt : log_times_) acc += std::exp(beta * lt);
    return acc;
}

double log_unnormalized_posterior(const PosteriorState& state, const LcdData& data) {
    const double lambda = state.lambda;
    const double beta = state.beta;
    if (!(lambda > 0.0) || !(beta > 0.0)) return kNegInf;
    return 32.5 * std::log(lambda) + 31.0 * std::log(beta) + (beta - 1.0) * data.sum_log() -
           lambda * data.sum_pow(beta) - beta - kLambdaPriorRate * lambda;
}

double lambda_conditional_rate(double beta, const LcdData& data) {
    return kLambdaPriorRate + data.sum_pow(beta);
}

double gibbs_lambda(double beta, const LcdData& data, RngStream& rng) {
    if (!(beta > 0.0)) throw ParameterError("beta must be positive");
    return rng.gamma(kLambdaConditionalShape, lambda_conditional_rate(beta, data));
}

MhOutcome mh_beta_decide(const PosteriorState& state, double proposal, double uniform,
                         const LcdData& data) {
    if (!(proposal > 0.0)) return {state.beta, false};
    const double current = log_unnormalized_posterior(state, data);
    const double candidate = log_unnormalized_posterior({state.lambda, proposal}, data);
    if (std::log(uniform) < candidate - current) return {proposal, true};
    return {state.beta, false};
}

MhOutcome mh_beta(const PosteriorState& state, const LcdData& data, double proposal_sd,
                  RngStream& rng) {
    const double proposal = rng.normal(state.beta, proposal_sd);
    return mh_beta_decide(state, proposal, rng.uniform(), data);
}

double reliability(const PosteriorState& state, double t) {
    const double hazard = state.lambda * std::exp(state.beta * std::log(t));
    if (!std::isfinite(hazard)) return 0.0;
    return std::exp(-hazard);
}

Functional functional_h(const PosteriorState& state) {
    if (!(state.lambda > 0.0) || !(state.beta > 0.0)) {
        throw ParameterError("functional needs lambda > 0 and beta > 0");
    }
    const double inv_beta = 1.0 / state.beta;
    const double mttf = std::exp(-inv_beta * std::log(state.lambda) + std::lgamma(1.0 + inv_beta));
    return {mttf, reliability(state, kReliabilityTime)};
}

std::array<double, 2> mttf_gradient(const PosteriorState& state) {
    const double mttf = functional_h(state).mttf;
    const double beta = state.beta;
    const double d_lambda = -mttf / (beta * state.lambda);
    const double d_beta = mttf * (std::log(state.lambda) -
                                  boost::math::digamma(1.0 + 1.0 / beta)) / (beta * beta);
    return {d_lambda, d_beta};
}

double weibull_mle_beta(const std::vector<double>& times) {
    if (times.size() < 2) throw InsufficientDataError("MLE needs at least two times");
    std::vector<double> logs;
    logs.reserve(times.size());
    for (double t : times) {
        if (!(t > 0.0)) throw DataError("failure times must be positive");
        logs.push_back(std::log(t));
    }
    const double max_log = *std::max_element(logs.begin(), logs.end());
    const double mean_log =
        std::accumulate(logs.begin(), logs.end(), 0.0) / static_cast<double>(logs.size());

    // score(b) = 1/b + mean(log t) - sum t^b log t / sum t^b, strictly decreasing.
    // Weights are scaled by max(t)^b to keep t^b finite.
    struct Eval {
        double score;
        double slope;
    };
    auto eval = [&](double b) {
        double s0 = 0.0;
        double s1 = 0.0;
        double s2 = 0.0;
        for (double l : logs) {
            const double w = std::exp(b * (l - max_log));
            s0 += w;
            s1 += w * l;
            s2 += w * l * l;
        }
        const double m1 = s1 / s0;
        const double var = s2 / s0 - m1 * m1;
        return Eval{1.0 / b + mean_log - m1, -1.0 / (b * b) - var};
    };

    double lo = 1e-3;
    double hi = 1.0;
    while (eval(hi).score > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e4) throw NumericsError("Weibull shape MLE diverges (no spread in the data?)");
    }
    double b = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const auto e = eval(b);
        if (e.score > 0.0) {
            lo = b;
        } else {
            hi = b;
        }
        double next = b - e.score / e.slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - b) < 1e-8 * std::max(1.0, b) && hi - lo < 1e-6) return next;
        if (std::abs(next - b) < 1e-12) return next;
        b = next;
    }
    throw NumericsError("Weibull shape MLE did not converge");
}

Sampler::Sampler(LcdData data, double beta_start, double proposal_sd)
    : data_(std::move(data)), state_{1.0, beta_start}, proposal_sd_(proposal_sd) {
    if (!(beta_start > 0.0)) throw ParameterError("beta start must be positive");
    if (!(proposal_sd > 0.0)) throw ParameterError("proposal sd must be positive");
}

double Sampler::acceptance_rate() const {
    return steps_ == 0 ? 0.0 : static_cast<double>(accepted_) / static_cast<double>(steps_);
}

const PosteriorState& Sampler::step(RngStream& rng) {
    state_.lambda = gibbs_lambda(state_.beta, data_, rng);
    const auto outcome = mh_beta(state_, data_, proposal_sd_, rng);
    state_.beta = outcome.beta;
    ++steps_;
    accepted_ += outcome.accepted ? 1 : 0;
    return state_;
}

void DemoConfig::validate() const {
    if (!(proposal_sd > 0.0)) throw ParameterError("proposal sd must be positive");
    if (beta_start && !(*beta_start > 0.0)) throw ParameterError("beta start must be positive");
    stopping().validate();
}

StoppingConfig DemoConfig::stopping() const {
    StoppingConfig s;
    s.alpha = alpha;
    s.epsilon = epsilon;
    s.p = 2;
    s.n_star = n_star;
    s.growth = growth;
    s.max_n = max_n;
    s.sigma_kind = sigma_kind;
    s.batch_size = batch_size;
    s.batch_rule = batch_rule;
    // Drop scheduled checks that would precede n* (e.g. with a tiny epsilon).
    const std::size_t first = s.resolved_n_star();
    for (std::size_t c : checkpoints) {
        if (c > first && c <= max_n) s.checkpoints.push_back(c);
    }
    return s;
}

DemoReport run_demo(const DemoConfig& config) {
    config.validate();
    auto data = LcdData::table();
    const double beta_start = config.beta_start.value_or(weibull_mle_beta(data.times()));
    const auto stopping = config.stopping();

    RngStream rng(config.seed, config.stream_id);
    Sampler sampler(std::move(data), beta_start, config.proposal_sd);
    ChainMatrix parameters(2, {"lambda", "beta"});
    parameters.reserve(config.max_n);
    const StepFunction step = [&](RngStream& r, std::span<double> row) {
        const auto& s = sampler.step(r);
        const double pair[2] = {s.lambda, s.beta};
        parameters.append_row(pair);
        const auto h = functional_h(s);
        row[0] = h.mttf;
        row[1] = h.r1500;
    };
    auto run = stopping_controller(step, stopping, rng,
                                   ChainMatrix(2, {kFunctionalLabels[0], kFunctionalLabels[1]}));

    const auto& chain = run.chain;
    const std::size_t n = chain.rows();
    const std::size_t b = stopping.batch_size_at(n);
    auto lambda_hat = sample_cov_lambda(chain);
    auto sigma_choice = estimate_sigma(chain, config.sigma_kind, b);
    const Eigen::VectorXd mean = column_means(chain);

    DemoReport report{config,
                      stopping.cutoff(),
                      beta_start,
                      sampler.acceptance_rate(),
                      std::move(parameters),
                      chain,
                      std::move(run.history),
                      run.terminated,
                      lambda_hat,
                      sigma_choice.sigma,
                      sigma_choice.fallback_used,
                      {},
                      6,
                      {},
                      {}};

    // Six simultaneous estimates: mean, .025 and .975 quantiles per component.
    const double family_alpha = config.alpha / static_cast<double>(report.simultaneous_family);
    const double z = normal_quantile(1.0 - family_alpha / 2.0);
    for (std::size_t c = 0; c < 2; ++c) {
        const auto col = chain.column(c);
        auto& comp = report.components[c];
        comp.label = kFunctionalLabels[c];
        comp.mean = mean(static_cast<Eigen::Index>(c));
        comp.credible_lo = empirical_quantile(col, 0.025);
        comp.credible_hi = empirical_quantile(col, 0.975);
        const double mean_half =
            z * std::sqrt(report.sigma_hat.matrix(static_cast<Eigen::Index>(c),
                                                  static_cast<Eigen::Index>(c)) /
                          static_cast<double>(n));
        comp.mean_band = {comp.mean, comp.mean - mean_half, comp.mean + mean_half};
        comp.lower_band = quantile_ci(col, 0.025, family_alpha, b);
        comp.upper_band = quantile_ci(col, 0.975, family_alpha, b);
        comp.lower_band.bonferroni = comp.upper_band.bonferroni = true;
    }

    const std::size_t lag = std::min(config.max_lag, n - 1);
    report.correlograms.push_back(correlogram(chain, lag, 0, 0));
    report.correlograms.push_back(correlogram(chain, lag, 1, 1));
    report.correlograms.push_back(correlogram(chain, lag, 0, 1));

    report.region = hotelling_region(mean, report.sigma_hat, n, config.alpha,
                                     hotelling_dof(report.sigma_hat));
    return report;
}

}  // namespace mcout::lcd
