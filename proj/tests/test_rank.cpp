#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "sieverank/errors.hpp"
#include "sieverank/rank.hpp"
#include "oracles.hpp"

using namespace sieverank;

namespace {

struct Instance {
    Sample sample;
    std::vector<double> phi;
    std::vector<double> w0;
};

Instance random_instance(std::mt19937_64& rng, std::size_t n, bool discrete_w, bool ties) {
    auto y = oracle::uniform_vector(rng, n, -1, 2);
    auto phi = ties ? oracle::tied_vector(rng, n, 6) : oracle::uniform_vector(rng, n, -3, 3);
    Matrix z(n, 1);
    Matrix w(n, 1);
    std::uniform_int_distribution<int> cell(0, 2);
    std::normal_distribution<double> normal;
    for (std::size_t i = 0; i < n; ++i) {
        z(i, 0) = phi[i];
        w(i, 0) = discrete_w ? cell(rng) : normal(rng);
    }
    std::vector<double> w0{discrete_w ? 1.0 : normal(rng) * 0.5};
    return {Sample(std::move(y), std::move(z), std::move(w)), std::move(phi), std::move(w0)};
}

// Evaluates a prepared criterion on phi given for every sample row.
double evaluate(const PreparedCriterion& c, std::span<const double> phi) {
    std::vector<double> active;
    for (auto r : c.rows()) active.push_back(phi[r]);
    return c(active);
}

}  // namespace

TEST(RankStrictLess, Examples) {
    const std::vector<double> a{3, 1, 2};
    EXPECT_EQ(rank_strict_less(a), (std::vector<std::int64_t>{2, 0, 1}));
    const std::vector<double> b{5, 5, 5};
    EXPECT_EQ(rank_strict_less(b), (std::vector<std::int64_t>{0, 0, 0}));
    EXPECT_TRUE(rank_strict_less({}).empty());
}

TEST(RankStrictLess, MatchesQuadraticOracleWithTies) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + rng() % 200;
        const auto v = (t % 2) ? oracle::tied_vector(rng, n, 1 + t % 9) : oracle::uniform_vector(rng, n, 0, 1);
        ASSERT_EQ(rank_strict_less(v), oracle::ranks(v)) << "instance " << t;
    }
}

TEST(RankCriterion, Examples) {
    const Sample s({1, 1}, Matrix{{0}, {0}});
    const std::vector<double> phi{2, 1};
    EXPECT_DOUBLE_EQ(rank_criterion(s, phi), 0.5);
    const std::vector<double> flat{3, 3};
    EXPECT_EQ(rank_criterion(s, flat), 0.0);
    const Sample one({1}, Matrix{{0}});
    const std::vector<double> phi1{1};
    EXPECT_THROW(rank_criterion(one, phi1), DataError);
}

TEST(RankCriterion, MatchesPairwiseOracle) {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 100; ++t) {
        auto inst = random_instance(rng, 100, false, t % 2);
        EXPECT_NEAR(rank_criterion(inst.sample, inst.phi), oracle::full(inst.sample.y(), inst.phi), 1e-12);
    }
}

TEST(KernelWeight, Examples) {
    const std::vector<double> w0{0.0};
    const std::vector<double> same{0.0}, far{2.0}, one{1.0};
    EXPECT_EQ(kernel_weight({KernelFamily::Uniform, {1.0}}, same, w0), 1.0);
    EXPECT_EQ(kernel_weight({KernelFamily::Uniform, {1.0}}, far, w0), 0.0);
    EXPECT_NEAR(kernel_weight({KernelFamily::Gaussian, {2.0}}, one, w0), 0.3520653267642995, 1e-15);
    EXPECT_NEAR(0.3520653267642995, std::exp(-1.0 / 8.0) / std::sqrt(2.0 * std::numbers::pi), 1e-16);
    EXPECT_EQ(kernel_value(KernelFamily::Epanechnikov, 0.5), 0.75 * 0.75);
    EXPECT_THROW(parse_kernel_family("triangle"), ConfigError);
    EXPECT_THROW((KernelSpec{KernelFamily::Uniform, {0.0}}.validate(1)), ConfigError);
}

TEST(DiscreteW, Examples) {
    std::mt19937_64 rng(9);
    auto inst = random_instance(rng, 50, true, false);
    Matrix all_w0(50, 1, 1.0);
    const Sample same(std::vector<double>(inst.sample.y().begin(), inst.sample.y().end()), inst.sample.z(), all_w0);
    const std::vector<double> w0{1.0}, missing{7.0};
    const auto v = rank_criterion_discrete_w(same, inst.phi, w0);
    EXPECT_FALSE(v.empty);
    EXPECT_NEAR(v.value, rank_criterion(same, inst.phi), 1e-15);
    const auto e = rank_criterion_discrete_w(same, inst.phi, missing);
    EXPECT_TRUE(e.empty);
    EXPECT_EQ(e.value, 0.0);
}

TEST(DiscreteW, MatchesOracle) {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 50; ++t) {
        auto inst = random_instance(rng, 100, true, t % 2);
        const auto v = rank_criterion_discrete_w(inst.sample, inst.phi, inst.w0);
        EXPECT_NEAR(v.value, oracle::discrete_w(inst.sample.y(), inst.phi, inst.sample.w(), inst.w0), 1e-12);
    }
}

TEST(Weighted, WideUniformWindowEqualsFullCriterion) {
    std::mt19937_64 rng(11);
    auto inst = random_instance(rng, 100, false, false);
    const KernelSpec k{KernelFamily::Uniform, {1e6}};
    const auto v = rank_criterion_weighted(inst.sample, inst.phi, inst.w0, k);
    EXPECT_NEAR(v.value, rank_criterion(inst.sample, inst.phi), 1e-12);
}

TEST(Weighted, MatchesOracleForEveryKernel) {
    std::mt19937_64 rng(12);
    for (auto fam : {KernelFamily::Uniform, KernelFamily::Gaussian, KernelFamily::Epanechnikov}) {
        for (int t = 0; t < 10; ++t) {
            auto inst = random_instance(rng, 100, false, t % 2);
            const KernelSpec k{fam, {0.3 + 0.2 * t}};
            const auto v = rank_criterion_weighted(inst.sample, inst.phi, inst.w0, k);
            EXPECT_NEAR(v.value, oracle::weighted(inst.sample.y(), inst.phi, inst.sample.w(), inst.w0, k), 1e-12);
        }
    }
}

TEST(Weighted, UniformFastPathEqualsGeneralPath) {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 50; ++t) {
        auto inst = random_instance(rng, 150, false, t % 2);
        CriterionSelector fast{CriterionKind::Weighted, inst.w0, {KernelFamily::Uniform, {0.2 + 0.05 * t}}, true};
        CriterionSelector slow = fast;
        slow.window_fast_path = false;
        const PreparedCriterion a(inst.sample, fast), b(inst.sample, slow);
        EXPECT_NEAR(evaluate(a, inst.phi), evaluate(b, inst.phi), 1e-12) << t;
    }
}

TEST(Pairwise, BandwidthLimits) {
    std::mt19937_64 rng(14);
    auto inst = random_instance(rng, 100, false, false);
    EXPECT_NEAR(rank_criterion_pairwise(inst.sample, inst.phi, {KernelFamily::Uniform, {1e9}}),
                rank_criterion(inst.sample, inst.phi), 1e-12);
    EXPECT_EQ(rank_criterion_pairwise(inst.sample, inst.phi, {KernelFamily::Uniform, {1e-12}}), 0.0);
}

TEST(Pairwise, MatchesOracle) {
    std::mt19937_64 rng(15);
    for (auto fam : {KernelFamily::Uniform, KernelFamily::Gaussian}) {
        for (int t = 0; t < 10; ++t) {
            auto inst = random_instance(rng, 100, false, t % 2);
            const KernelSpec k{fam, {0.5}};
            EXPECT_NEAR(rank_criterion_pairwise(inst.sample, inst.phi, k),
                        oracle::pairwise(inst.sample.y(), inst.phi, inst.sample.w(), k), 1e-12);
        }
    }
}

TEST(Criteria, MonotoneTransformInvarianceIsBitExact) {
    std::mt19937_64 rng(16);
    auto transform = [](double x) { return std::exp(0.5 * x) + x * x * x; };  // strictly increasing
    for (int t = 0; t < 100; ++t) {
        auto inst = random_instance(rng, 80, t % 2 == 0, t % 3 == 0);
        std::vector<double> moved(inst.phi.size());
        for (std::size_t i = 0; i < moved.size(); ++i) moved[i] = transform(inst.phi[i]);
        const KernelSpec k{t % 2 ? KernelFamily::Gaussian : KernelFamily::Uniform, {0.7}};

        EXPECT_EQ(rank_criterion(inst.sample, inst.phi), rank_criterion(inst.sample, moved));
        EXPECT_EQ(rank_criterion_discrete_w(inst.sample, inst.phi, inst.w0).value,
                  rank_criterion_discrete_w(inst.sample, moved, inst.w0).value);
        EXPECT_EQ(rank_criterion_weighted(inst.sample, inst.phi, inst.w0, k).value,
                  rank_criterion_weighted(inst.sample, moved, inst.w0, k).value);
        EXPECT_EQ(rank_criterion_pairwise(inst.sample, inst.phi, k),
                  rank_criterion_pairwise(inst.sample, moved, k));
    }
}

TEST(Criteria, LinearInY) {
    std::mt19937_64 rng(17);
    auto inst = random_instance(rng, 60, false, true);
    auto y2 = oracle::uniform_vector(rng, 60, -1, 1);
    std::vector<double> combo(60);
    for (std::size_t i = 0; i < 60; ++i) combo[i] = 2.0 * inst.sample.y()[i] - 3.0 * y2[i];
    const Sample s2(y2, inst.sample.z(), inst.sample.w());
    const Sample sc(combo, inst.sample.z(), inst.sample.w());
    const KernelSpec k{KernelFamily::Gaussian, {0.5}};
    EXPECT_NEAR(rank_criterion(sc, inst.phi),
                2.0 * rank_criterion(inst.sample, inst.phi) - 3.0 * rank_criterion(s2, inst.phi), 1e-12);
    EXPECT_NEAR(rank_criterion_pairwise(sc, inst.phi, k),
                2.0 * rank_criterion_pairwise(inst.sample, inst.phi, k) - 3.0 * rank_criterion_pairwise(s2, inst.phi, k),
                1e-12);
}

TEST(PreparedCriterion, AgreesWithFreeFunctions) {
    std::mt19937_64 rng(18);
    auto inst = random_instance(rng, 120, true, true);
    const KernelSpec k{KernelFamily::Epanechnikov, {1.5}};
    EXPECT_NEAR(evaluate(PreparedCriterion(inst.sample, {CriterionKind::Full, {}, {}, true}), inst.phi),
                rank_criterion(inst.sample, inst.phi), 1e-13);
    const PreparedCriterion cell(inst.sample, {CriterionKind::DiscreteW, inst.w0, {}, true});
    EXPECT_NEAR(evaluate(cell, inst.phi), rank_criterion_discrete_w(inst.sample, inst.phi, inst.w0).value, 1e-13);
    EXPECT_NEAR(evaluate(PreparedCriterion(inst.sample, {CriterionKind::Pairwise, {}, k, true}), inst.phi),
                rank_criterion_pairwise(inst.sample, inst.phi, k), 1e-13);
    const PreparedCriterion none(inst.sample, {CriterionKind::DiscreteW, {9.0}, {}, true});
    EXPECT_TRUE(none.empty());
}
