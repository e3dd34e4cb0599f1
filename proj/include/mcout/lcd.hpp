#pragma once

// Bayesian Weibull reliability model for LCD projector lamp failure times,
// sampled by Metropolis-within-Gibbs and analysed end to end.
//
// Model: t_i ~ Weibull(lambda, beta) with density lambda beta t^(beta-1)
// exp(-lambda t^beta), priors lambda ~ Gamma(2.5, rate 2350) and
// beta ~ Gamma(1, rate 1). The posterior kernel is
//   lambda^32.5 beta^31 (prod t_i)^(beta-1) exp(-lambda sum t_i^beta - beta - 2350 lambda).

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mcout/chain.hpp"
#include "mcout/inference.hpp"
#include "mcout/mcse.hpp"
#include "mcout/quantiles.hpp"
#include "mcout/rng.hpp"

namespace mcout::lcd {

inline constexpr std::size_t kFailureCount = 31;
inline constexpr double kFailureTimeSum = 17907.0;
inline constexpr double kLambdaPriorShape = 2.5;
inline constexpr double kLambdaPriorRate = 2350.0;
inline constexpr double kReliabilityTime = 1500.0;

/// The 31 lamp failure times (hours).
class LcdData {
public:
    /// Built-in table.
    static LcdData table();
    /// One value per line after a header; must match the built-in table.
    static LcdData load_csv(const std::filesystem::path& path);
    explicit LcdData(std::vector<double> times);

    const std::vector<double>& times() const noexcept { return times_; }
    std::size_t size() const noexcept { return times_.size(); }
    double sum_log() const noexcept { return sum_log_; }
    /// sum_i t_i^beta
    double sum_pow(double beta) const;

private:
    std::vector<double> times_;
    std::vector<double> log_times_;
    double sum_log_ = 0.0;
};

struct PosteriorState {
    double lambda = 1.0;
    double beta = 1.0;
};

/// Log posterior kernel; -infinity outside the positive orthant.
double log_unnormalized_posterior(const PosteriorState& state, const LcdData& data);

/// Exact draw from lambda | beta ~ Gamma(33.5, rate 2350 + sum t_i^beta).
double gibbs_lambda(double beta, const LcdData& data, RngStream& rng);
double lambda_conditional_rate(double beta, const LcdData& data);
inline constexpr double kLambdaConditionalShape = 33.5;

struct MhOutcome {
    double beta = 0.0;
    bool accepted = false;
};

/// Accept/reject of a given proposal with a given uniform; proposals <= 0 are
/// rejected outright.
MhOutcome mh_beta_decide(const PosteriorState& state, double proposal, double uniform,
                         const LcdData& data);
/// Random-walk Metropolis update of beta with N(beta, proposal_sd^2) proposals.
MhOutcome mh_beta(const PosteriorState& state, const LcdData& data, double proposal_sd,
                  RngStream& rng);

struct Functional {
    double mttf = 0.0;
    double r1500 = 0.0;
};

/// MTTF = lambda^(-1/beta) Gamma(1 + 1/beta) and R(1500) = exp(-lambda 1500^beta).
Functional functional_h(const PosteriorState& state);
/// Reliability exp(-lambda t^beta); 0 when lambda t^beta overflows.
double reliability(const PosteriorState& state, double t);
/// (dMTTF/dlambda, dMTTF/dbeta).
std::array<double, 2> mttf_gradient(const PosteriorState& state);

/// Root of the Weibull profile-likelihood score in beta, to 1e-8. Throws
/// NumericsError when the score has no root (e.g. all times equal).
double weibull_mle_beta(const std::vector<double>& times);

/// Metropolis-within-Gibbs chain: lambda by Gibbs first, then beta by MH using
/// the freshly drawn lambda.
class Sampler {
public:
    Sampler(LcdData data, double beta_start, double proposal_sd);

    const PosteriorState& state() const noexcept { return state_; }
    const LcdData& data() const noexcept { return data_; }
    std::size_t steps() const noexcept { return steps_; }
    std::size_t accepted() const noexcept { return accepted_; }
    double acceptance_rate() const;

    const PosteriorState& step(RngStream& rng);

private:
    LcdData data_;
    PosteriorState state_;
    double proposal_sd_;
    std::size_t steps_ = 0;
    std::size_t accepted_ = 0;
};

struct DemoConfig {
    double proposal_sd = 0.1;
    std::optional<double> beta_start;  // defaults to the MLE
    double alpha = 0.05;
    double epsilon = 0.05;
    std::uint64_t seed = 20190415;
    std::uint64_t stream_id = 0;
    std::optional<std::size_t> n_star;  // defaults to the rounded cutoff
    /// Checks after n*: a single long run to 1e5, then geometric growth.
    std::vector<std::size_t> checkpoints{100'000};
    double growth = 1.5;
    std::size_t max_n = 200'000;
    EstimatorKind sigma_kind = EstimatorKind::BatchMeans;
    std::optional<std::size_t> batch_size;
    BatchRule batch_rule = BatchRule::SquareRoot;
    std::size_t max_lag = 50;

    void validate() const;
    StoppingConfig stopping() const;
};

/// Interval for the posterior mean of one component, simultaneous with the
/// quantile intervals through a Bonferroni split.
struct MeanInterval {
    double point = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

struct ComponentSummary {
    std::string label;
    double mean = 0.0;
    double credible_lo = 0.0;  // .025 empirical quantile
    double credible_hi = 0.0;  // .975 empirical quantile
    MeanInterval mean_band;
    QuantileEstimate lower_band;  // Monte Carlo CI of the .025 quantile
    QuantileEstimate upper_band;  // Monte Carlo CI of the .975 quantile
};

struct DemoReport {
    DemoConfig config;
    EssCutoff cutoff;
    double beta_start = 0.0;
    double acceptance_rate = 0.0;
    ChainMatrix parameters;  // (lambda, beta) trace
    ChainMatrix chain;       // (MTTF, R(1500))
    std::vector<StoppingVerdict> history;
    bool terminated = false;
    CovarianceEstimate lambda_hat;
    CovarianceEstimate sigma_hat;
    bool sigma_fallback = false;
    std::array<ComponentSummary, 2> components;
    std::size_t simultaneous_family = 6;  // estimates sharing the Bonferroni split
    std::vector<CorrelogramSeries> correlograms;  // acf MTTF, acf R(1500), ccf
    ConfidenceRegion region;
};

inline constexpr std::array<const char*, 2> kFunctionalLabels = {"MTTF", "R(1500)"};

DemoReport run_demo(const DemoConfig& config);

}  // namespace mcout::lcd
