#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mcout/chain.hpp"
#include "mcout/mcse.hpp"
#include "mcout/rng.hpp"

namespace mcout {

/// Effective sample size n * (|Lambda| / |Sigma|)^(1/p), evaluated on the log
/// scale. Throws SingularEstimateError if either determinant is not positive.
double ess(std::size_t n, const CovarianceEstimate& lambda, const CovarianceEstimate& sigma);

struct EssCutoff {
    double value = 0.0;       // real-valued minimum ESS
    std::size_t rounded = 0;  // round-to-nearest of value
};

/// Minimum ESS for a 100(1 - alpha)% region whose volume is an epsilon
/// fraction of the target's generalized variance:
///   2^(2/p) pi / (p Gamma(p/2))^(2/p) * chi2_{1-alpha,p} / epsilon^2.
EssCutoff min_ess_cutoff(double alpha, double epsilon, std::size_t p);

/// Single-chain PSRF through its ESS relationship: sqrt(1 + 1/ess).
double rhat_from_ess(double ess);
/// Threshold on rhat equivalent to ess >= cutoff.
double rhat_cutoff(double cutoff);

/// 100(1 - alpha)% Hotelling region for the mean:
///   { mu : n (center - mu)^T Sigma^{-1} (center - mu) < T^2_{1-alpha,p,q} }.
struct ConfidenceRegion {
    Eigen::VectorXd center;
    Eigen::MatrixXd shape;  // Sigma / n
    double hotelling_t2 = 0.0;
    std::size_t df = 0;
    double alpha = 0.05;
    double volume = 0.0;
    std::vector<Eigen::Vector2d> boundary;  // 128 points, only when p == 2

    std::size_t dim() const { return static_cast<std::size_t>(center.size()); }
    /// (x - center)^T shape^{-1} (x - center); equals T^2 on the boundary.
    double quadratic_form(const Eigen::VectorXd& x) const;
    bool contains(const Eigen::VectorXd& x) const { return quadratic_form(x) < hotelling_t2; }
    /// Half-length of the region's shadow on coordinate axis i; for p = 1
    /// this is the interval half-width.
    double half_width(std::size_t i) const;
};

inline constexpr std::size_t kRegionBoundaryPoints = 128;

/// T^2_{1-alpha,p,q} = q p / (q - p + 1) * F_{1-alpha; p, q-p+1}.
double hotelling_t2_quantile(double alpha, std::size_t p, std::size_t q);

/// Degrees of freedom a - p, a being the number of batches behind sigma.
/// For a sample covariance the row count stands in for a.
std::size_t hotelling_dof(const CovarianceEstimate& sigma);

/// Throws DegreesOfFreedomError when q <= p and SingularEstimateError when
/// sigma is not positive definite.
ConfidenceRegion hotelling_region(const Eigen::VectorXd& mean, const CovarianceEstimate& sigma,
                                  std::size_t n, double alpha, std::size_t q);

struct StoppingConfig {
    double alpha = 0.05;
    double epsilon = 0.05;
    std::size_t p = 1;
    /// First check; defaults to the rounded cutoff.
    std::optional<std::size_t> n_star;
    /// Extra check points after n_star, ascending. Once exhausted the schedule
    /// continues geometrically from the last one.
    std::vector<std::size_t> checkpoints;
    double growth = 1.5;
    std::size_t max_n = 1'000'000;
    EstimatorKind sigma_kind = EstimatorKind::BatchMeans;
    /// Fixed batch size; when unset it is re-selected by batch_rule at every check.
    std::optional<std::size_t> batch_size;
    BatchRule batch_rule = BatchRule::CubeRoot;

    void validate() const;
    std::size_t batch_size_at(std::size_t n) const {
        return batch_size.value_or(batch_size_for(n, batch_rule));
    }
    EssCutoff cutoff() const { return min_ess_cutoff(alpha, epsilon, p); }
    std::size_t resolved_n_star() const { return n_star.value_or(cutoff().rounded); }
};

struct StoppingVerdict {
    std::size_t n = 0;
    double ess = 0.0;
    double cutoff = 0.0;
    double rhat = 0.0;
    bool terminate = false;
    bool fallback_used = false;  // flat-top was not PD, batch means used
    std::size_t batch_size = 0;
    EstimatorKind sigma_kind = EstimatorKind::BatchMeans;
};

/// Sigma under the configured estimator; a flat-top estimate that is not
/// positive definite is replaced by plain batch means and flagged.
struct SigmaChoice {
    CovarianceEstimate sigma;
    bool fallback_used = false;
};
SigmaChoice estimate_sigma(const ChainMatrix& chain, EstimatorKind kind, std::size_t b);

/// Verdict for the chain as it stands.
StoppingVerdict evaluate_verdict(const ChainMatrix& chain, const StoppingConfig& config);

/// The same decision expressed through rhat: rhat <= sqrt(1 + 1/cutoff).
bool rhat_rule_terminates(double rhat, double cutoff);

/// Writes one row h(X_t) for the next step of a sampler.
using StepFunction = std::function<void(RngStream&, std::span<double>)>;

struct StoppingResult {
    ChainMatrix chain;
    std::vector<StoppingVerdict> history;
    bool terminated = false;
};

/// Runs the sampler to n*, checks, and keeps growing the chain along the
/// check schedule until ESS reaches the cutoff or max_n is hit. Hitting max_n
/// returns terminated = false rather than throwing.
StoppingResult stopping_controller(const StepFunction& step, const StoppingConfig& config,
                                   RngStream& rng, ChainMatrix chain);

}  // namespace mcout
