#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "phav/error.hpp"
#include "phav/tomography.hpp"

namespace phav {
namespace {

double reconstructed_mean(const FockDistribution& d) { return distribution_stats(d).mean; }

// Exact phase-averaged density of a photon-number law on bins of width h.
QuadratureHistogram mixture_histogram(const FockDistribution& law, double lo, double hi, double h) {
    std::vector<double> centers, dens;
    for (double c = lo + 0.5 * h; c < hi; c += h) {
        double f = 0.0;
        for (int n = 0; n <= law.n_max(); ++n) f += law[n] * testing::hermite_density_direct(n, c);
        centers.push_back(c);
        dens.push_back(f);
    }
    double mass = 0.0;
    for (double f : dens) mass += f * h;
    for (double& f : dens) f /= mass;
    return QuadratureHistogram::from_bins(centers, dens);
}

TEST(PhavProjector, Examples) {
    EXPECT_NEAR(phav_projector(0, 0.0), 1.0 / std::sqrt(std::numbers::pi), 1e-15);
    for (int n : {0, 3, 77, 150})
        for (double x : {-10.0, -4.2, 0.0, 3.3, 10.0}) EXPECT_EQ(phav_projector(n, x), fock_quadrature_density(n, x));
}

TEST(TomographyConfig, Validation) {
    TomographyConfig c;
    EXPECT_NO_THROW(c.validate());
    c.n_max = 151;
    EXPECT_THROW(c.validate(), ArgumentError);
    c = {};
    c.iterations = 0;
    EXPECT_THROW(c.validate(), ArgumentError);
    c = {};
    c.early_stop_delta = -1.0;
    EXPECT_THROW(c.validate(), ArgumentError);
}

TEST(Reconstruct, Vacuum) {
    const auto h = histogram(sample_phav(0.0, 100'000, 1).samples, 0.1);
    TomographyConfig c;
    c.n_max = 20;
    const auto r = reconstruct(h, c);
    EXPECT_GE(r.distribution[0], 0.99);
    EXPECT_FALSE(r.support_warning);
}

TEST(Reconstruct, PoissonAt29) {
    const auto h = histogram(sample_phav(std::sqrt(2.9), 200'000, 2).samples, 0.1);
    const auto r = reconstruct(h);
    EXPECT_LE(total_variation(r.distribution, poisson_distribution(2.9, 150)), 0.02);
    EXPECT_NEAR(reconstructed_mean(r.distribution), 2.9, 0.05);
    EXPECT_EQ(r.log_likelihood_per_iteration.size(), static_cast<std::size_t>(r.iterations_run) + 1);
}

TEST(Reconstruct, PoissonAt138) {
    const auto h = histogram(sample_phav(std::sqrt(13.8), 200'000, 3).samples, 0.1);
    const auto r = reconstruct(h);
    EXPECT_LE(total_variation(r.distribution, poisson_distribution(13.8, 150)), 0.03);
}

TEST(Reconstruct, AnalyticHistogramIsNearFixedPoint) {
    const auto law = poisson_distribution(2.9, 150);
    const auto h = mixture_histogram(law, -12.0, 12.0, 0.05);
    const auto r = reconstruct(h);
    EXPECT_LE(total_variation(r.distribution, law), 5e-3);
}

TEST(Reconstruct, MonotoneLikelihoodOnRandomInputs) {
    std::mt19937_64 gen(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const double a2 = std::uniform_real_distribution<double>(0.0, 15.0)(gen);
        const std::size_t n = 2000 + gen() % 20000;
        const double bw = std::uniform_real_distribution<double>(0.05, 0.3)(gen);
        const auto h = histogram(sample_phav(std::sqrt(a2), n, gen()).samples, bw);
        TomographyConfig c;
        c.n_max = 20 + static_cast<int>(gen() % 100);
        c.early_stop_delta = 0.0;
        c.iterations = 60;
        const auto r = reconstruct(h, c);
        const auto& ll = r.log_likelihood_per_iteration;
        ASSERT_EQ(ll.size(), 61u);
        for (std::size_t k = 1; k < ll.size(); ++k) ASSERT_GE(ll[k], ll[k - 1] - 1e-9) << "trial " << trial << " step " << k;
        double s = 0.0;
        for (double p : r.distribution.probs()) {
            ASSERT_GE(p, 0.0);
            s += p;
        }
        EXPECT_NEAR(s, 1.0, 1e-9);
        EXPECT_NEAR(ll.back(), log_likelihood(h, r.distribution), 1e-9 * std::max(1.0, std::abs(ll.back())));
    }
}

TEST(Reconstruct, PermutationSafeAndDeterministic) {
    const auto h = histogram(sample_phav(1.5, 20'000, 4).samples, 0.1);
    auto centers = h.centers();
    std::vector<double> dens(h.densities().begin(), h.densities().end());
    std::vector<std::size_t> idx(centers.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), std::mt19937_64(7));
    std::vector<double> c2, d2;
    for (auto i : idx) {
        c2.push_back(centers[i]);
        d2.push_back(dens[i]);
    }
    const auto shuffled = QuadratureHistogram::from_bins(c2, d2);
    TomographyConfig c;
    c.n_max = 40;
    const auto a = reconstruct(h, c);
    const auto b = reconstruct(shuffled, c);
    for (int n = 0; n <= 40; ++n) EXPECT_NEAR(a.distribution[n], b.distribution[n], 1e-12);
    EXPECT_EQ(reconstruct(h, c).distribution, a.distribution);
}

TEST(Reconstruct, SharedProjector) {
    const auto h = histogram(sample_phav(1.5, 20'000, 5).samples, 0.1);
    TomographyConfig c;
    c.n_max = 30;
    const ProjectorMatrix pm(h, 30);
    EXPECT_TRUE(pm.matches(h));
    EXPECT_EQ(reconstruct(h, c, pm).distribution, reconstruct(h, c).distribution);
    const ProjectorMatrix wrong(h, 20);
    EXPECT_THROW(reconstruct(h, c, wrong), ArgumentError);
}

TEST(Reconstruct, EarlyStopAndWarnings) {
    const auto h = histogram(sample_phav(0.0, 50'000, 6).samples, 0.1);
    TomographyConfig c;
    c.n_max = 5;
    c.iterations = 5000;
    const auto r = reconstruct(h, c);
    EXPECT_TRUE(r.converged);
    EXPECT_LT(r.iterations_run, 5000);

    // A bright state with a tiny truncation spills mass past the turning point.
    const auto bright = histogram(sample_phav(std::sqrt(30.0), 20'000, 7).samples, 0.1);
    TomographyConfig small;
    small.n_max = 4;
    EXPECT_TRUE(reconstruct(bright, small).support_warning);

    TomographyConfig narrow;
    narrow.quadrature_support = 2.0;
    EXPECT_THROW(reconstruct(h, narrow), ValidationError);
}

TEST(LogLikelihood, Examples) {
    const auto vac = histogram(sample_phav(0.0, 100'000, 8).samples, 0.1);
    const auto p0 = FockDistribution::point_mass(0, 10);
    double ref = 0.0;
    for (std::size_t i = 0; i < vac.bins(); ++i) {
        const double f = vac.densities()[i];
        if (f > 0.0) ref += f * vac.width(i) * std::log(testing::gaussian_pdf(vac.center(i), 0.0, 0.5));
    }
    EXPECT_NEAR(log_likelihood(vac, p0), ref, 1e-9);

    const auto h = histogram(sample_phav(std::sqrt(2.9), 100'000, 9).samples, 0.1);
    EXPECT_GT(log_likelihood(h, poisson_distribution(2.9, 150)), log_likelihood(h, poisson_distribution(5.0, 150)));
}

}  // namespace
}  // namespace phav
