#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mcout/chain.hpp"

namespace mcout {

enum class EstimatorKind { BatchMeans, FlatTop, SampleCov };

std::string_view to_string(EstimatorKind kind);
EstimatorKind estimator_kind_from_string(std::string_view name);

/// Symmetric p x p covariance estimate with its provenance. The matrix is
/// symmetrized on construction. positive_definite records whether a
/// Cholesky factorization succeeded; flat-top estimates can fail it.
struct CovarianceEstimate {
    Eigen::MatrixXd matrix;
    EstimatorKind kind = EstimatorKind::BatchMeans;
    std::size_t batch_size = 0;  // 0 for the sample covariance
    std::size_t n_used = 0;
    bool positive_definite = false;

    CovarianceEstimate(Eigen::MatrixXd m, EstimatorKind k, std::size_t b, std::size_t n);

    std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
};

/// log|A| through a Cholesky factorization; nullopt on a non-positive pivot.
std::optional<double> log_det_spd(const Eigen::MatrixXd& a);

/// Non-overlapping batch means estimate of the asymptotic covariance:
///   (b / (a - 1)) * sum_k (Ybar_k - mu)(Ybar_k - mu)^T,   a = floor(n / b).
/// Only the first a*b rows are used; a trailing partial batch is ignored.
/// Throws InsufficientDataError when a < 2 and ParameterError when b = 0.
CovarianceEstimate batch_means_sigma(const ChainMatrix& chain, std::size_t b);

/// Flat-top combination 2 * BM(b) - BM(b/2). Throws ParameterError for odd b.
CovarianceEstimate flat_top_sigma(const ChainMatrix& chain, std::size_t b);

/// Sample covariance with divisor n (not n - 1).
CovarianceEstimate sample_cov_lambda(const ChainMatrix& chain);

/// floor(n^(1/3)) rounded down to even, at least 2. Requires n >= 8.
std::size_t default_batch_size(std::size_t n);

/// How b grows with n when not fixed by the caller. Both rules round down to
/// an even integer (so flat-top is always available) with a minimum of 2.
enum class BatchRule { CubeRoot, SquareRoot };

std::string_view to_string(BatchRule rule);
BatchRule batch_rule_from_string(std::string_view name);
std::size_t batch_size_for(std::size_t n, BatchRule rule);

struct CorrelogramSeries {
    std::size_t col_i = 0;
    std::size_t col_j = 0;
    std::vector<double> values;  // values[k] is lag k

    std::size_t max_lag() const { return values.empty() ? 0 : values.size() - 1; }
};

/// Sample correlation between column i at time t and column j at time t + k,
/// for k = 0..max_lag (divisor n at every lag). i == j gives the ACF, whose
/// lag-0 value is exactly 1. Throws DegenerateDataError on a constant column.
CorrelogramSeries correlogram(const ChainMatrix& chain, std::size_t max_lag, std::size_t col_i,
                              std::size_t col_j);

}  // namespace mcout
