#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "mcout/ar1.hpp"
#include "mcout/chain.hpp"
#include "mcout/errors.hpp"
#include "oracles.hpp"

using namespace mcout;

namespace {

ChainMatrix counting_chain(std::size_t n, std::size_t cols = 1) {
    std::vector<double> v(n * cols);
    std::iota(v.begin(), v.end(), 1.0);
    return {n, cols, std::move(v)};
}

}  // namespace

TEST_CASE("append onto an empty chain") {
    const auto c = append(ChainMatrix(2), {{1.0, 2.0}});
    CHECK(c.rows() == 1);
    CHECK(c.cols() == 2);
    CHECK(c(0, 0) == 1.0);
    CHECK(c(0, 1) == 2.0);
}

TEST_CASE("append keeps the prefix untouched") {
    const auto first = ChainMatrix::from_rows({{1.0, 2.0}});
    const auto grown = append(first, {{3.0, 4.0}});
    REQUIRE(grown.rows() == 2);
    CHECK(grown(0, 0) == 1.0);
    CHECK(grown(0, 1) == 2.0);
    CHECK(grown(1, 0) == 3.0);
    CHECK(first.rows() == 1);
}

TEST_CASE("append 92471 rows to a 7529-row chain") {
    auto chain = counting_chain(7529);
    const auto before = chain;
    std::vector<double> block(92471, 0.5);
    chain.append_block(block);
    CHECK(chain.rows() == 100000);
    for (std::size_t r = 0; r < before.rows(); ++r) CHECK_EQ(chain(r, 0), before(r, 0));
}

TEST_CASE("append rejects bad rows without partial writes") {
    auto chain = ChainMatrix::from_rows({{1.0, 2.0}});
    CHECK_THROWS_AS(chain.append_row(std::vector<double>{1.0}), DimensionError);
    CHECK_THROWS_AS(append(chain, {{1.0, 2.0}, {1.0, std::numeric_limits<double>::quiet_NaN()}}),
                    DataError);
    CHECK_THROWS_AS(chain.append_row(std::vector<double>{1.0, INFINITY}), DataError);
    CHECK(chain.rows() == 1);
}

TEST_CASE("append is associative over blocks") {
    const auto base = counting_chain(3, 2);
    const std::vector<std::vector<double>> a{{10, 11}, {12, 13}};
    const std::vector<std::vector<double>> b{{20, 21}};
    auto ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    CHECK(append(append(base, a), b) == append(base, ab));
}

TEST_CASE("thin keeps rows 1, 1+m, ...") {
    const auto c = counting_chain(10);
    CHECK(thin(c, 1) == c);

    const auto t3 = thin(c, 3);
    REQUIRE(t3.rows() == 4);
    CHECK(t3.column(0) == std::vector<double>{1, 4, 7, 10});

    const auto t2 = thin(counting_chain(5), 2);
    CHECK(t2.column(0) == std::vector<double>{1, 3, 5});

    CHECK_THROWS_AS(thin(c, 0), ParameterError);
}

TEST_CASE("thin composes multiplicatively") {
    for (std::size_t n = 1; n <= 30; ++n) {
        const auto c = counting_chain(n);
        for (std::size_t a = 1; a <= 5; ++a) {
            for (std::size_t b = 1; b <= 5; ++b) {
                CAPTURE(n);
                CAPTURE(a);
                CAPTURE(b);
                const auto twice = thin(thin(c, a), b);
                CHECK(twice == thin(c, a * b));
                CHECK(twice.rows() == (n + a * b - 1) / (a * b));
            }
        }
    }
}

TEST_CASE("discard_first") {
    const auto c = counting_chain(5);
    CHECK(discard_first(c, 0) == c);
    CHECK(discard_first(c, 2).column(0) == std::vector<double>{3, 4, 5});
    CHECK_THROWS_AS(discard_first(c, 5), InsufficientDataError);
}

TEST_CASE("labels") {
    ChainMatrix c(2, {"a", "b"});
    CHECK(c.label(1) == "b");
    CHECK(ChainMatrix(2).label(1) == "V2");
    CHECK_THROWS_AS(ChainMatrix(2, {"only"}), DimensionError);
    CHECK_THROWS_AS(ChainMatrix(0), DimensionError);
}

TEST_CASE("AR(1) white noise has no lag-1 correlation") {
    RngStream rng(11);
    const auto c = generate_ar1(Ar1Spec::unit_variance(0.0), 100000, rng);
    const auto x = c.column(0);
    CHECK(std::abs(oracle::sample_acf(x, 1)) < 0.02);
    // mean within 4 sd / sqrt(n)
    CHECK(std::abs(oracle::mean(x)) < 4.0 / std::sqrt(100000.0));
    CHECK(oracle::variance(x) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("AR(1) lag-1 correlation matches rho") {
    RngStream rng(12);
    Ar1Spec spec;
    spec.rho = 0.5;
    spec.innovation_sd = 1.0;
    const auto c = generate_ar1(spec, 100000, rng);
    const auto x = c.column(0);
    CHECK(oracle::sample_acf(x, 1) == doctest::Approx(0.5).epsilon(0.04));
    CHECK(std::abs(oracle::sample_acf(x, 1) - 0.5) < 0.02);
    CHECK(oracle::variance(x) == doctest::Approx(spec.stationary_variance()).epsilon(0.05));
}

TEST_CASE("AR(1) is deterministic per (seed, stream)") {
    const auto spec = Ar1Spec::unit_variance(0.3, 2);
    RngStream a(99, 4);
    RngStream b(99, 4);
    RngStream other(99, 5);
    const auto ca = generate_ar1(spec, 1000, a);
    CHECK(ca == generate_ar1(spec, 1000, b));
    CHECK_FALSE(ca == generate_ar1(spec, 1000, other));
}

TEST_CASE("AR(1) cross-correlated innovations") {
    Ar1Spec spec = Ar1Spec::unit_variance(0.0, 2);
    Eigen::MatrixXd corr(2, 2);
    corr << 1.0, 0.6, 0.6, 1.0;
    spec.cross_correlation = corr;
    RngStream rng(5);
    const auto c = generate_ar1(spec, 50000, rng);
    const auto x = c.column(0);
    const auto y = c.column(1);
    const double mx = oracle::mean(x);
    const double my = oracle::mean(y);
    double sxy = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) sxy += (x[t] - mx) * (y[t] - my);
    sxy /= static_cast<double>(x.size() - 1);
    CHECK(sxy / std::sqrt(oracle::variance(x) * oracle::variance(y)) ==
          doctest::Approx(0.6).epsilon(0.05));
}

TEST_CASE("AR(1) parameter errors") {
    RngStream rng(1);
    Ar1Spec spec;
    spec.rho = 1.0;
    CHECK_THROWS_AS(generate_ar1(spec, 10, rng), ParameterError);
    spec.rho = -1.2;
    CHECK_THROWS_AS(generate_ar1(spec, 10, rng), ParameterError);
    spec.rho = 0.2;
    spec.innovation_sd = 0.0;
    CHECK_THROWS_AS(generate_ar1(spec, 10, rng), ParameterError);
}
