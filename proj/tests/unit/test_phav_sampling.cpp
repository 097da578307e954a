#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "phav/error.hpp"
#include "phav/phav_sampling.hpp"

namespace phav {
namespace {

constexpr double kPi = std::numbers::pi;

double ks_to_uniform(const QuadratureDataset& d, double alpha, std::uint64_t seed) {
    const auto ref = sample_phav(alpha, d.samples.size(), seed);
    return ks_distance(histogram(d.samples, 0.1), histogram(ref.samples, 0.1));
}

TEST(SamplePhav, VacuumVariance) {
    const auto d = sample_phav(0.0, 1'000'000, 11);
    EXPECT_NEAR(testing::sample_variance(d.samples), 0.5, 3.0 * 0.5 * std::sqrt(2.0 / 1e6));
}

TEST(SamplePhav, BrightVarianceAndMean) {
    const auto d = sample_phav(std::sqrt(13.8), 1'000'000, 12);
    EXPECT_NEAR(testing::sample_variance(d.samples), 14.3, 0.15);
    const auto e = sample_phav(std::sqrt(2.9), 1'000'000, 13);
    EXPECT_NEAR(testing::sample_mean(e.samples), 0.0, 3.0 * std::sqrt(3.4 / 1e6));
}

TEST(SamplePhav, MomentLaws) {
    for (double a2 : {0.0, 2.9, 13.8}) {
        const auto d = sample_phav(std::sqrt(a2), 1'000'000, 100 + static_cast<std::uint64_t>(a2 * 10));
        const auto m1 = testing::batch_estimate(d.samples, 100, [](double x) { return x; });
        const auto m2 = testing::batch_estimate(d.samples, 100, [](double x) { return x * x; });
        const auto m4 = testing::batch_estimate(d.samples, 100, [](double x) { return x * x * x * x; });
        EXPECT_NEAR(m1.mean, 0.0, 4.0 * m1.standard_error) << a2;
        EXPECT_NEAR(m2.mean, a2 + 0.5, 4.0 * m2.standard_error) << a2;
        EXPECT_NEAR(m4.mean, 1.5 * a2 * a2 + 3.0 * a2 + 0.75, 4.0 * m4.standard_error) << a2;
    }
}

TEST(SamplePhav, ReproducibleAndErrors) {
    const auto a = sample_phav(2.0, 5000, 42);
    const auto b = sample_phav(2.0, 5000, 42);
    EXPECT_EQ(a.samples, b.samples);
    EXPECT_NE(a.samples, sample_phav(2.0, 5000, 43).samples);
    EXPECT_THROW(sample_phav(2.0, 0, 1), ArgumentError);
    EXPECT_THROW(sample_phav(-1.0, 10, 1), ArgumentError);
    const auto s = sample_with_strategy(2.0, 5000, JitteredScan{0.01, 0.05, 0.01, kPi / 2}, 9);
    EXPECT_EQ(s.samples, sample_with_strategy(2.0, 5000, JitteredScan{0.01, 0.05, 0.01, kPi / 2}, 9).samples);
}

TEST(Strategies, Validation) {
    EXPECT_THROW(validate(FiniteSet{0}), ArgumentError);
    EXPECT_THROW(validate(JitteredScan{0.1, -1.0, 0.0, 0.0}), ArgumentError);
    EXPECT_THROW(validate(JitteredScan{0.1, 0.0, 1.5, 0.0}), ArgumentError);
    EXPECT_NO_THROW(validate(DriftingScan{0.01, 1e-7}));
}

TEST(Strategies, FiniteSetSingleVacuumIsGaussian) {
    const auto d = sample_with_strategy(0.0, 200'000, FiniteSet{1}, 5);
    EXPECT_NEAR(testing::sample_variance(d.samples), 0.5, 0.01);
    EXPECT_NEAR(testing::sample_mean(d.samples), 0.0, 0.01);
}

TEST(Strategies, GoldenLinearScanMatchesUniform) {
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    const auto d = sample_with_strategy(2.0, 100'000, LinearScan{2.0 * kPi * golden}, 21);
    EXPECT_LE(ks_to_uniform(d, 2.0, 22), 0.01);
}

TEST(Strategies, FiniteSetArtifacts) {
    EXPECT_GT(ks_to_uniform(sample_with_strategy(2.0, 100'000, FiniteSet{4}, 31), 2.0, 32), 0.03);
    EXPECT_GT(ks_to_uniform(sample_with_strategy(2.0, 100'000, FiniteSet{2}, 33), 2.0, 34), 0.05);
}

TEST(Strategies, ArtifactDetectionAboveNullScale) {
    // Bright state so that phase artifacts dominate the vacuum blur.
    const double alpha = std::sqrt(13.8);
    const std::size_t n = 100'000;
    const double threshold = 3.0 * ks_null_scale(n, n);
    for (int k = 1; k <= 8; ++k)
        EXPECT_GT(ks_to_uniform(sample_with_strategy(alpha, n, FiniteSet{k}, 40 + k), alpha, 50), threshold) << k;
    EXPECT_GT(ks_to_uniform(sample_with_strategy(alpha, n, DriftingScan{2.0 * kPi / 3000.0, 1e-7}, 61), alpha, 62), threshold);
    EXPECT_GT(ks_to_uniform(sample_with_strategy(alpha, n, JitteredScan{2.0 * kPi / 1e4, 0.05, 1e-3, kPi / 2}, 63), alpha, 64),
              threshold);
}

TEST(LagCorrelation, Examples) {
    const auto u = sample_phav(2.0, 100'000, 71);
    const auto r = lag_correlation(u.samples, 10);
    ASSERT_EQ(r.size(), 11u);
    EXPECT_DOUBLE_EQ(r[0], 1.0);
    for (int lag = 1; lag <= 10; ++lag) EXPECT_LE(std::abs(r[static_cast<std::size_t>(lag)]), 3.0 / std::sqrt(1e5)) << lag;

    const auto lin = sample_with_strategy(std::sqrt(13.8), 100'000, LinearScan{0.01}, 72);
    EXPECT_GT(lag_correlation(lin.samples, 1)[1], 0.9);
}

TEST(LagCorrelation, Errors) {
    const std::vector<double> flat(100, 1.0);
    EXPECT_THROW(lag_correlation(flat, 3), ValidationError);
    const std::vector<double> tiny{1.0, 2.0};
    EXPECT_THROW(lag_correlation(tiny, 3), ValidationError);
}

TEST(Histogram, VacuumMatchesGaussian) {
    const auto d = sample_phav(0.0, 1'000'000, 81);
    const auto h = histogram(d.samples, 0.1);
    double worst = 0.0;
    for (std::size_t i = 0; i < h.bins(); ++i) {
        // Average of the Gaussian over the bin.
        const double lo = h.edges()[i];
        const double hi = h.edges()[i + 1];
        const double ref = (std::erf(hi) - std::erf(lo)) / (2.0 * (hi - lo));
        worst = std::max(worst, std::abs(h.densities()[i] - ref));
    }
    EXPECT_LE(worst, 0.01);
}

TEST(Histogram, NormalizedAndAligned) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto d = sample_phav(1.3 * static_cast<double>(seed), 20'000, seed);
        const auto h = histogram(d.samples, 0.1);
        double mass = 0.0;
        for (std::size_t i = 0; i < h.bins(); ++i) mass += h.densities()[i] * h.width(i);
        EXPECT_NEAR(mass, 1.0, 1e-9);
        const double k = h.edges()[0] / 0.1;
        EXPECT_NEAR(k, std::round(k), 1e-6);
        const auto [lo, hi] = std::minmax_element(d.samples.begin(), d.samples.end());
        EXPECT_LE(h.edges().front(), *lo - 3 * 0.1 + 1e-9);
        EXPECT_GE(h.edges().back(), *hi + 3 * 0.1 - 1e-9);
    }
    EXPECT_THROW(histogram(std::vector<double>{}, 0.1), ArgumentError);
    EXPECT_THROW(histogram(std::vector<double>{1.0}, 0.0), ArgumentError);
}

TEST(Histogram, BrightStateIsBimodal) {
    const double alpha = std::sqrt(13.8);
    const auto h = histogram(sample_phav(alpha, 1'000'000, 91).samples, 0.1);
    double best_pos = 0.0, best_neg = 0.0, dpos = -1.0, dneg = -1.0;
    for (std::size_t i = 0; i < h.bins(); ++i) {
        const double c = h.center(i);
        if (c > 0 && h.densities()[i] > dpos) { dpos = h.densities()[i]; best_pos = c; }
        if (c < 0 && h.densities()[i] > dneg) { dneg = h.densities()[i]; best_neg = c; }
    }
    // The horns of sqrt(2) alpha cos(phi) sit at +-5.25; vacuum blur moves the
    // modes inward. Locate the mode of the exact blurred density numerically
    // and require the histogram to find it, and to stay within one vacuum
    // standard deviation of the turning point.
    double mode = 0.0, peak = -1.0;
    for (double x = 0.0; x < 8.0; x += 1e-3) {
        double f = 0.0;
        for (int k = 0; k < 2000; ++k) {
            const double phi = 2.0 * kPi * (k + 0.5) / 2000.0;
            f += testing::gaussian_pdf(x, std::numbers::sqrt2 * alpha * std::cos(phi), 0.5);
        }
        if (f > peak) {
            peak = f;
            mode = x;
        }
    }
    EXPECT_NEAR(best_pos, mode, 0.15);
    EXPECT_NEAR(best_neg, -mode, 0.15);
    EXPECT_NEAR(mode, std::sqrt(2.0 * 13.8), std::sqrt(0.5));
    double centre = 0.0;
    for (std::size_t i = 0; i < h.bins(); ++i)
        if (std::abs(h.center(i)) < 0.05) centre = h.densities()[i];
    EXPECT_LT(centre, 0.8 * std::min(dpos, dneg));
}

TEST(Histogram, FromBinsValidation) {
    const auto h = QuadratureHistogram::from_bins({0.15, 0.05, -0.05}, {2.0, 5.0, 3.0});
    ASSERT_EQ(h.bins(), 3u);
    EXPECT_NEAR(h.center(0), -0.05, 1e-12);
    EXPECT_NEAR(h.densities()[1], 5.0, 1e-12);
    EXPECT_THROW(QuadratureHistogram::from_bins({0.0, 0.1, 0.3}, {3.0, 3.0, 3.0}), ValidationError);
    EXPECT_THROW(QuadratureHistogram({0.0, 1.0}, {0.5}), ValidationError);
    EXPECT_THROW(QuadratureHistogram({0.0, 1.0, 0.5}, {0.5, 0.5}), ValidationError);
}

TEST(KsDistance, Examples) {
    const auto a = histogram(sample_phav(2.0, 100'000, 101).samples, 0.1);
    const auto b = histogram(sample_phav(2.0, 100'000, 102).samples, 0.1);
    EXPECT_EQ(ks_distance(a, a), 0.0);
    EXPECT_LE(ks_distance(a, b), 0.01);
    EXPECT_NEAR(ks_null_scale(100'000, 100'000), 1.63 * std::sqrt(2.0 / 1e5), 1e-15);
    const auto left = QuadratureHistogram({0.0, 1.0}, {1.0});
    const auto right = QuadratureHistogram({2.0, 3.0}, {1.0});
    EXPECT_THROW(ks_distance(left, right), ValidationError);
}

}  // namespace
}  // namespace phav
