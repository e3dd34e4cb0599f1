#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <optional>

#include "mcout/ar1.hpp"
#include "mcout/distributions.hpp"
#include "mcout/errors.hpp"
#include "mcout/inference.hpp"
#include "oracles.hpp"

using namespace mcout;

namespace {

CovarianceEstimate cov(Eigen::MatrixXd m, EstimatorKind kind = EstimatorKind::BatchMeans,
                       std::size_t b = 10, std::size_t n = 1000) {
    return {std::move(m), kind, b, n};
}

Eigen::MatrixXd scalar(double v) { return Eigen::MatrixXd::Constant(1, 1, v); }

}  // namespace

TEST_CASE("ESS equals n when lambda equals sigma") {
    Eigen::MatrixXd m(2, 2);
    m << 2.0, 0.3, 0.3, 1.0;
    CHECK(ess(500, cov(m, EstimatorKind::SampleCov), cov(m)) == doctest::Approx(500.0).epsilon(1e-14));
}

TEST_CASE("ESS from analytic AR(1) values") {
    CHECK(ess(100000, cov(scalar(1.0)), cov(scalar(3.0))) == doctest::Approx(100000.0 / 3.0));
}

TEST_CASE("ESS on an AR(1) chain") {
    RngStream rng(31);
    const auto c = generate_ar1(Ar1Spec::unit_variance(0.5), 100000, rng);
    const double e = ess(c.rows(), sample_cov_lambda(c), batch_means_sigma(c, 46));
    CHECK(std::abs(e / (100000.0 / 3.0) - 1.0) < 0.15);
}

TEST_CASE("ESS rejects singular estimates") {
    CHECK_THROWS_AS(ess(10, cov(scalar(0.0)), cov(scalar(1.0))), SingularEstimateError);
    CHECK_THROWS_AS(ess(10, cov(scalar(1.0)), cov(scalar(-1.0))), SingularEstimateError);
    CHECK_THROWS_AS(ess(10, cov(scalar(1.0)), cov(Eigen::MatrixXd::Identity(2, 2))), DimensionError);
}

TEST_CASE("ESS is scale invariant") {
    RngStream rng(32);
    const auto c = generate_ar1(Ar1Spec::unit_variance(0.4, 3), 20000, rng);
    const double base = ess(c.rows(), sample_cov_lambda(c), batch_means_sigma(c, 26));
    for (double s : {1e-3, 1.0, 1e3, -7.0}) {
        std::vector<double> v(c.values().begin(), c.values().end());
        for (double& x : v) x *= s;
        const ChainMatrix sc(c.rows(), c.cols(), std::move(v));
        CHECK(ess(sc.rows(), sample_cov_lambda(sc), batch_means_sigma(sc, 26)) ==
              doctest::Approx(base).epsilon(1e-10));
    }
}

TEST_CASE("minimum ESS cutoff") {
    const auto m2 = min_ess_cutoff(0.05, 0.05, 2);
    CHECK(m2.rounded == 7529);
    CHECK(m2.value > 7529.0);
    CHECK(m2.value < 7529.5);
    // p = 2 reduces to pi * chi2 / eps^2 since 2^(2/2) pi / (2 Gamma(1)) = pi.
    CHECK(m2.value == doctest::Approx(std::numbers::pi * -2.0 * std::log(0.05) / 0.0025).epsilon(1e-12));

    const auto m1 = min_ess_cutoff(0.05, 0.05, 1);
    CHECK(m1.value == doctest::Approx(4.0 * 3.841458820694124 / 0.0025).epsilon(1e-10));
    CHECK(m1.rounded == 6146);

    CHECK(min_ess_cutoff(0.05, 0.025, 2).value / m2.value == doctest::Approx(4.0).epsilon(1e-12));

    CHECK_THROWS_AS(min_ess_cutoff(0.0, 0.05, 2), ParameterError);
    CHECK_THROWS_AS(min_ess_cutoff(0.05, 1.0, 2), ParameterError);
    CHECK_THROWS_AS(min_ess_cutoff(0.05, 0.05, 0), ParameterError);
}

TEST_CASE("cutoff is monotone in epsilon and alpha") {
    for (std::size_t p : {1u, 2u, 5u, 20u}) {
        double prev = INFINITY;
        for (double eps : {0.01, 0.02, 0.05, 0.1, 0.2}) {
            const double m = min_ess_cutoff(0.05, eps, p).value;
            CHECK(m < prev);
            prev = m;
        }
        prev = 0.0;
        for (double alpha : {0.2, 0.1, 0.05, 0.01, 0.001}) {
            const double m = min_ess_cutoff(alpha, 0.05, p).value;
            CHECK(m > prev);
            prev = m;
        }
    }
}

TEST_CASE("rhat from ESS") {
    CHECK(rhat_from_ess(1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(rhat_from_ess(1e12) < 1.0 + 1e-12);
    CHECK(rhat_from_ess(1e12) >= 1.0);
    CHECK(rhat_from_ess(7529.19) == doctest::Approx(1.0000664060010507).epsilon(1e-15));
    CHECK(rhat_from_ess(7529.19) == doctest::Approx(rhat_cutoff(7529.19)));
    CHECK(rhat_from_ess(10.0) > rhat_from_ess(11.0));
    CHECK_THROWS_AS(rhat_from_ess(0.0), ParameterError);
    CHECK_THROWS_AS(rhat_from_ess(-3.0), ParameterError);
}

TEST_CASE("ESS rule and rhat rule agree") {
    const double m = min_ess_cutoff(0.05, 0.05, 2).value;
    for (int i = -500; i <= 500; ++i) {
        const double e = m * (1.0 + i * 1e-4);
        CHECK((e >= m) == rhat_rule_terminates(rhat_from_ess(e), m));
    }
}

TEST_CASE("Hotelling quantile reduces to F for p = 1") {
    // T^2_{1,q} = q / q * F_{1, q}
    CHECK(hotelling_t2_quantile(0.05, 1, 10) == doctest::Approx(f_quantile(0.95, 1, 10)).epsilon(1e-14));
    CHECK(hotelling_t2_quantile(0.05, 1, 10) == doctest::Approx(4.9646027437307120).epsilon(1e-10));
    CHECK(hotelling_t2_quantile(0.05, 2, 283) == doctest::Approx(6.077039665311401).epsilon(1e-9));
    CHECK_THROWS_AS(hotelling_t2_quantile(0.05, 2, 2), DegreesOfFreedomError);
}

TEST_CASE("Hotelling region for p = 1 is an interval") {
    const Eigen::VectorXd mean = Eigen::VectorXd::Constant(1, 3.0);
    const auto sigma = cov(scalar(2.0));
    const auto region = hotelling_region(mean, sigma, 50, 0.05, 10);
    const double f = f_quantile(0.95, 1, 10);
    const double half = region.half_width(0);
    CHECK(half * half * 50.0 / 2.0 == doctest::Approx(f).epsilon(1e-10));
    CHECK(region.boundary.empty());
    // length of the interval
    CHECK(region.volume == doctest::Approx(2.0 * half).epsilon(1e-12));
    Eigen::VectorXd edge = mean;
    edge(0) += half;
    CHECK(region.quadratic_form(edge) == doctest::Approx(region.hotelling_t2).epsilon(1e-12));
}

TEST_CASE("Hotelling region for p = 2 with identity sigma is a circle") {
    const Eigen::VectorXd mean = Eigen::Vector2d(1.0, -2.0);
    const auto sigma = cov(Eigen::MatrixXd::Identity(2, 2));
    const auto region = hotelling_region(mean, sigma, 100, 0.1, 40);
    REQUIRE(region.boundary.size() == kRegionBoundaryPoints);
    const double radius = std::sqrt(region.hotelling_t2 / 100.0);
    for (const auto& pt : region.boundary) {
        CHECK((pt - Eigen::Vector2d(mean)).norm() == doctest::Approx(radius).epsilon(1e-12));
    }
    CHECK(region.volume == doctest::Approx(std::numbers::pi * radius * radius).epsilon(1e-12));
}

TEST_CASE("Hotelling region boundary satisfies the quadratic form") {
    Eigen::MatrixXd s(2, 2);
    s << 4.0, -1.5, -1.5, 1.0;
    const Eigen::VectorXd mean = Eigen::Vector2d(10.0, 0.5);
    const auto region = hotelling_region(mean, cov(s), 400, 0.05, 50);
    for (const auto& pt : region.boundary) {
        const Eigen::VectorXd d = Eigen::VectorXd(pt) - mean;
        const double q = 400.0 * d.dot(s.inverse() * d);
        CHECK(std::abs(q / region.hotelling_t2 - 1.0) < 1e-8);
    }
    // ellipse area: pi * T2/n * sqrt(det S)
    CHECK(region.volume ==
          doctest::Approx(std::numbers::pi * region.hotelling_t2 / 400.0 * std::sqrt(s.determinant()))
              .epsilon(1e-12));
    CHECK(region.contains(mean));
}

TEST_CASE("Hotelling region errors") {
    const Eigen::VectorXd mean = Eigen::Vector2d(0.0, 0.0);
    CHECK_THROWS_AS(hotelling_region(mean, cov(Eigen::MatrixXd::Identity(2, 2)), 10, 0.05, 2),
                    DegreesOfFreedomError);
    CHECK_THROWS_AS(hotelling_region(mean, cov(Eigen::MatrixXd::Zero(2, 2)), 10, 0.05, 10),
                    SingularEstimateError);
}

TEST_CASE("Hotelling degrees of freedom are batches minus dimension") {
    CHECK(hotelling_dof(cov(Eigen::MatrixXd::Identity(2, 2), EstimatorKind::BatchMeans, 14, 3990)) == 283);
    CHECK(hotelling_dof(cov(Eigen::MatrixXd::Identity(2, 2), EstimatorKind::SampleCov, 0, 50)) == 48);
    CHECK_THROWS_AS(hotelling_dof(cov(Eigen::MatrixXd::Identity(2, 2), EstimatorKind::BatchMeans, 10, 20)),
                    DegreesOfFreedomError);
}

TEST_CASE("verdict falls back from a non-PD flat-top estimate") {
    // Alternating series: BM(b/2 = 1) dominates 2 * BM(2), so flat-top < 0.
    std::vector<double> v;
    for (int i = 0; i < 64; ++i) v.push_back(i % 2 ? 1.0 : -1.0);
    v[5] = 0.3;
    const ChainMatrix c(v.size(), 1, v);
    const auto flat = flat_top_sigma(c, 2);
    REQUIRE_FALSE(flat.positive_definite);
    const auto choice = estimate_sigma(c, EstimatorKind::FlatTop, 2);
    CHECK(choice.fallback_used);
    CHECK(choice.sigma.kind == EstimatorKind::BatchMeans);

    StoppingConfig cfg;
    cfg.sigma_kind = EstimatorKind::FlatTop;
    cfg.batch_size = 2;
    cfg.n_star = 8;
    const auto verdict = evaluate_verdict(c, cfg);
    CHECK(verdict.fallback_used);
    CHECK(verdict.sigma_kind == EstimatorKind::BatchMeans);
}

namespace {

StepFunction ar1_step(double rho) {
    const double sd = std::sqrt(1.0 - rho * rho);
    auto state = std::make_shared<std::optional<double>>();
    return [rho, sd, state](RngStream& rng, std::span<double> row) {
        if (!*state) {
            *state = rng.normal();
        } else {
            *state = rho * **state + sd * rng.normal();
        }
        row[0] = **state;
    };
}

void check_history(const StoppingResult& result, const StoppingConfig& cfg) {
    for (const auto& v : result.history) {
        CHECK(v.terminate == (v.ess >= v.cutoff && v.n >= cfg.resolved_n_star()));
    }
    CHECK(result.terminated == result.history.back().terminate);
    CHECK(result.chain.rows() == result.history.back().n);
}

}  // namespace

TEST_CASE("stopping controller on iid normals") {
    StoppingConfig cfg;
    cfg.p = 1;
    int first_check = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        RngStream rng(seed);
        const auto result = stopping_controller(ar1_step(0.0), cfg, rng, ChainMatrix(1));
        check_history(result, cfg);
        CHECK(result.terminated);
        CHECK(result.history.front().n == 6146);
        // ESS ~ n for iid draws, so the first or second check suffices.
        CHECK(result.history.size() <= 2);
        first_check += result.history.size() == 1 ? 1 : 0;
    }
    CHECK(first_check >= 2);
}

TEST_CASE("stopping controller on AR(1) rho = 0.9") {
    StoppingConfig cfg;
    cfg.p = 1;
    RngStream rng(77);
    const auto result = stopping_controller(ar1_step(0.9), cfg, rng, ChainMatrix(1));
    check_history(result, cfg);
    REQUIRE(result.terminated);
    const double target = cfg.cutoff().value * 19.0;
    CHECK(std::abs(static_cast<double>(result.chain.rows()) / target - 1.0) < 0.25);
    // schedule: n*, then x1.5
    REQUIRE(result.history.size() >= 2);
    CHECK(result.history[1].n == static_cast<std::size_t>(std::ceil(6146 * 1.5)));
}

TEST_CASE("stopping controller stops unterminated at max-n") {
    StoppingConfig cfg;
    cfg.p = 1;
    cfg.max_n = 20000;
    RngStream rng(5);
    const auto result = stopping_controller(ar1_step(0.99), cfg, rng, ChainMatrix(1));
    CHECK_FALSE(result.terminated);
    CHECK(result.chain.rows() == 20000);
    CHECK(result.history.back().n == 20000);
    check_history(result, cfg);
}

TEST_CASE("stopping controller honours explicit checkpoints") {
    StoppingConfig cfg;
    cfg.p = 1;
    cfg.checkpoints = {7000, 30000};
    cfg.max_n = 40000;
    RngStream rng(6);
    const auto result = stopping_controller(ar1_step(0.995), cfg, rng, ChainMatrix(1));
    REQUIRE(result.history.size() == 4);
    CHECK(result.history[0].n == 6146);
    CHECK(result.history[1].n == 7000);
    CHECK(result.history[2].n == 30000);
    CHECK(result.history[3].n == 40000);
}

TEST_CASE("stopping config validation") {
    StoppingConfig cfg;
    cfg.growth = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg = {};
    cfg.n_star = 100;
    cfg.checkpoints = {50};
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg = {};
    cfg.max_n = 10;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg = {};
    cfg.alpha = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
}
