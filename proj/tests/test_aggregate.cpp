#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "sieverank/aggregate.hpp"
#include "sieverank/errors.hpp"
#include "oracles.hpp"

using namespace sieverank;

namespace {

LocalEstimateSet make_set(Matrix curves, std::optional<std::vector<double>> weights = std::nullopt) {
    LocalEstimateSet s;
    s.grid = Matrix(curves.cols(), 1);
    for (std::size_t g = 0; g < curves.cols(); ++g) s.grid(g, 0) = static_cast<double>(g);
    s.w_draws.assign(curves.rows(), 0.0);
    s.curves = std::move(curves);
    s.weights = std::move(weights);
    return s;
}

}  // namespace

TEST(AggregateLs, SingleCurveAndSymmetricPair) {
    const auto one = make_set(Matrix{{1.0, -2.0, 3.5}});
    EXPECT_EQ(aggregate_ls(one), (std::vector<double>{1.0, -2.0, 3.5}));
    EXPECT_EQ(aggregate_lad(one), (std::vector<double>{1.0, -2.0, 3.5}));
    const auto pair = make_set(Matrix{{1.0, -2.0, 3.5}, {-1.0, 2.0, -3.5}});
    EXPECT_EQ(aggregate_ls(pair), (std::vector<double>{0.0, 0.0, 0.0}));
}

TEST(AggregateLs, MatchesQuadraticMinimization) {
    std::mt19937_64 rng(30);
    const std::vector<double> w{0.5, 0.2, 0.1, 0.1, 0.1};
    Matrix curves(5, 20);
    for (std::size_t r = 0; r < 5; ++r)
        for (std::size_t g = 0; g < 20; ++g) curves(r, g) = oracle::uniform_vector(rng, 1, -3, 3)[0];
    const auto out = aggregate_ls(make_set(curves, w));
    for (std::size_t g = 0; g < 20; ++g) {
        const auto col = curves.col(g);
        // A comparison-based line search only resolves a quadratic's minimizer to about sqrt(eps).
        EXPECT_NEAR(out[g], oracle::min_squared_loss(col, w), 1e-7);
    }
}

TEST(AggregateLad, OutlierExample) {
    const auto s = make_set(Matrix{{1.0}, {2.0}, {100.0}});
    EXPECT_EQ(aggregate_lad(s)[0], 2.0);
    EXPECT_NEAR(aggregate_ls(s)[0], 103.0 / 3.0, 1e-13);
}

TEST(AggregateLad, EvenCountTakesMidpoint) {
    EXPECT_EQ(weighted_median({4.0, 1.0, 3.0, 2.0}, {}), 2.5);
    EXPECT_EQ(weighted_median({1.0, 2.0}, {0.5, 0.5}), 1.5);
    EXPECT_EQ(weighted_median({1.0, 2.0, 3.0}, {0.2, 0.0, 0.8}), 3.0);
}

TEST(AggregateLad, MatchesAbsoluteLossMinimization) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 200; ++t) {
        const std::size_t m = 1 + rng() % 12;
        auto values = (t % 3) ? oracle::uniform_vector(rng, m, -2, 2) : oracle::tied_vector(rng, m, 4);
        auto w = oracle::uniform_vector(rng, m, 0.01, 1);
        double total = 0;
        for (double x : w) total += x;
        for (auto& x : w) x /= total;
        const double med = weighted_median(values, w);
        EXPECT_NEAR(oracle::absolute_loss(values, w, med), oracle::min_absolute_loss(values, w), 1e-12) << t;
        std::vector<double> uniform(m, 1.0 / static_cast<double>(m));
        const double umed = weighted_median(values, {});
        EXPECT_NEAR(oracle::absolute_loss(values, uniform, umed), oracle::min_absolute_loss(values, uniform), 1e-12);
    }
}

TEST(LocalEstimateSet, ValidationCatchesBadWeightsAndShapes) {
    EXPECT_THROW(aggregate_ls(make_set(Matrix{{1.0}, {2.0}}, std::vector<double>{0.6, 0.6})), ConfigError);
    EXPECT_THROW(aggregate_ls(make_set(Matrix{{1.0}, {2.0}}, std::vector<double>{1.2, -0.2})), ConfigError);
    EXPECT_THROW(aggregate_lad(make_set(Matrix{{1.0}, {2.0}}, std::vector<double>{1.0})), ConfigError);
    auto s = make_set(Matrix{{1.0, 2.0}});
    s.grid = Matrix(3, 1);
    EXPECT_THROW(s.validate(), ConfigError);
}
