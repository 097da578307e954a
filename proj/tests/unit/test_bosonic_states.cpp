#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "phav/bosonic_states.hpp"
#include "phav/error.hpp"

namespace phav {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Moments, CoherentExamples) {
    const auto s = PhononState::coherent({2.0, 0.0});
    const auto m0 = moments(s, 0.0);
    EXPECT_NEAR(std::abs(m0.b_mean - complex{2.0, 0.0}), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(m0.b_sq - complex{4.0, 0.0}), 0.0, 1e-15);
    EXPECT_NEAR(m0.n_mean, 4.0, 1e-15);
    const auto half = moments(s, kPi / s.omega);
    EXPECT_NEAR(half.b_mean.real(), -2.0, 1e-12);
    EXPECT_NEAR(half.b_mean.imag(), 0.0, 1e-12);
}

TEST(Moments, ThermalAddsOccupation) {
    const auto m = moments(PhononState::thermal(1.0, {2.0, 0.0}), 0.0);
    EXPECT_NEAR(m.n_mean, 5.0, 1e-12);
    EXPECT_NEAR(m.b_mean.real(), 2.0, 1e-15);
    EXPECT_NEAR(std::abs(m.central_b_sq()), 0.0, 1e-12);
}

TEST(Moments, RotationCovariance) {
    for (const auto& s : {PhononState::coherent({2.0, 0.5}), PhononState::thermal(1.0, {2.0, 0.0}),
                          PhononState::squeezed({-0.2, 0.0}, {2.0, 0.0})}) {
        const complex b0 = moments(s, 0.0).b_mean;
        for (double t : {0.013, 0.05, 0.125, 1.7}) {
            const complex expect = b0 * std::exp(complex{0.0, -s.omega * t});
            EXPECT_NEAR(std::abs(moments(s, t).b_mean - expect), 0.0, 1e-13);
        }
    }
}

TEST(DisplacementVariance, Examples) {
    const auto coh = PhononState::coherent({2.0, 0.0});
    const auto th = PhononState::thermal(1.0, {2.0, 0.0});
    for (int k = 0; k < 32; ++k) {
        const double t = 0.01 * k;
        EXPECT_NEAR(displacement_variance(coh, t), 0.5, 1e-12);
        EXPECT_NEAR(displacement_variance(th, t), 1.5, 1e-12);
    }
    const auto sq = PhononState::squeezed({-0.2, 0.0}, {2.0, 0.0});
    EXPECT_NEAR(displacement_variance(sq, 0.0), std::exp(0.4) / 2.0, 1e-12);
    EXPECT_NEAR(displacement_variance(sq, 0.0), 0.7459, 1e-4);
}

TEST(DisplacementVariance, SqueezedPeriodicAtHalfPeriod) {
    const auto sq = PhononState::squeezed({-0.2, 0.0}, {2.0, 0.0});
    const double period = kPi / sq.omega;
    bool varies = false;
    for (int k = 0; k < 32; ++k) {
        const double t = period * k / 32.0;
        EXPECT_NEAR(displacement_variance(sq, t), displacement_variance(sq, t + period), 1e-9);
        if (std::abs(displacement_variance(sq, t) - displacement_variance(sq, 0.0)) > 1e-3) varies = true;
    }
    EXPECT_TRUE(varies);
}

TEST(PhononState, Validation) {
    EXPECT_THROW(PhononState::thermal(-0.1, {}).validate(), ArgumentError);
    EXPECT_THROW(PhononState::squeezed({2.5, 0.0}, {}).validate(), ArgumentError);
    EXPECT_THROW(PhononState::coherent({1.0, 0.0}, -1.0).validate(), ArgumentError);
    EXPECT_NO_THROW(PhononState::squeezed({-0.2, 0.0}, {2.0, 0.0}).validate());
    EXPECT_EQ(parse_state_kind(to_string(StateKind::Squeezed)), StateKind::Squeezed);
    EXPECT_THROW(parse_state_kind("cat"), ArgumentError);
}

TEST(Wigner, VacuumAndCoherentPeak) {
    const auto axis = linspace_step(-6.0, 6.0, 0.05);
    const auto vac = wigner(PhononState::coherent({0.0, 0.0}), 0.0, axis, axis);
    const std::size_t mid = axis.size() / 2;
    ASSERT_NEAR(axis[mid], 0.0, 1e-12);
    EXPECT_NEAR(vac.at(mid, mid), 1.0 / kPi, 1e-12);

    const auto coh = wigner(PhononState::coherent({2.0, 0.0}), 0.0, axis, axis);
    std::size_t best = 0;
    for (std::size_t i = 1; i < coh.values.size(); ++i)
        if (coh.values[i] > coh.values[best]) best = i;
    const double bx = axis[best / axis.size()];
    const double by = axis[best % axis.size()];
    EXPECT_NEAR(bx, 2.0 * std::numbers::sqrt2, 0.05);
    EXPECT_NEAR(by, 0.0, 0.05);
}

TEST(Wigner, ThermalMarginalVariance) {
    const auto axis = linspace_step(-10.0, 10.0, 0.05);
    const auto g = wigner(PhononState::thermal(1.0, {0.0, 0.0}), 0.0, axis, axis);
    EXPECT_NEAR(g.integral(), 1.0, 1e-6);
    EXPECT_NEAR(g.integrate([](double x, double) { return x * x; }), 1.5, 1e-4);
    EXPECT_NEAR(g.integrate([](double, double y) { return y * y; }), 1.5, 1e-4);
}

TEST(PhavWigner, MatchesNumericalPhaseAverage) {
    for (double alpha : {0.5, 2.0, 3.7}) {
        for (double x : {-5.0, -2.3, 0.0, 0.7, 2.8, 5.2})
            for (double y : {-3.1, 0.0, 0.4, 2.2}) {
                const double ref = testing::phase_averaged_wigner(alpha, x, y, 64);
                EXPECT_NEAR(phav_wigner_value(alpha, x, y), ref, 1e-6) << alpha << " " << x << " " << y;
            }
    }
}

TEST(PhavWigner, ZeroAmplitudeIsVacuum) {
    for (double x : {-2.0, 0.0, 1.3})
        for (double y : {-1.0, 0.0, 0.5})
            EXPECT_NEAR(phav_wigner_value(0.0, x, y), testing::coherent_wigner(0.0, 0.0, x, y), 1e-15);
}

TEST(PhavWigner, RingRadiusAndNormalization) {
    const double alpha = std::sqrt(13.8);
    // Radial argmax of the closed form and of the independent phase average,
    // both on a 1e-3 grid. The Bessel envelope pulls the maximum inside
    // sqrt(2) alpha by about 1/(4 sqrt(2) alpha).
    auto argmax = [](auto&& f) {
        double best_r = 0.0, best_w = -1.0;
        for (double r = 0.0; r < 10.0; r += 1e-3)
            if (const double w = f(r); w > best_w) {
                best_w = w;
                best_r = r;
            }
        return best_r;
    };
    const double closed = argmax([&](double r) { return phav_wigner_value(alpha, r, 0.0); });
    const double oracle = argmax([&](double r) { return testing::phase_averaged_wigner(alpha, r, 0.0, 256); });
    EXPECT_NEAR(closed, oracle, 2e-3);
    const double grid_step = 0.05;
    EXPECT_NEAR(closed, std::numbers::sqrt2 * alpha, grid_step);

    for (double a : {0.0, 1.0, 2.0}) {
        const auto axis = linspace_step(-8.0, 8.0, grid_step);
        EXPECT_NEAR(phav_wigner(a, axis, axis).integral(), 1.0, 2e-3) << a;
    }
}

TEST(ExpectationViaWigner, Examples) {
    const auto axis = linspace_step(-9.0, 9.0, 0.05);
    const auto vac = wigner(PhononState::coherent({0.0, 0.0}), 0.0, axis, axis);
    EXPECT_NEAR(expectation_via_wigner(vac, WeylObservable::PhotonNumber), 0.0, 2e-3);
    EXPECT_NEAR(expectation_via_wigner(vac, WeylObservable::QuadXSquared), 0.5, 2e-3);

    const auto coh_state = PhononState::coherent({2.0, 0.0});
    const auto coh = wigner(coh_state, 0.0, axis, axis);
    EXPECT_NEAR(expectation_via_wigner(coh, WeylObservable::PhotonNumber), moments(coh_state, 0.0).n_mean, 2e-2);
    EXPECT_NEAR(expectation_via_wigner(coh, WeylObservable::QuadX), 2.0 * std::numbers::sqrt2, 2e-3);

    const auto ring = phav_wigner(2.0, axis, axis);
    EXPECT_NEAR(expectation_via_wigner(ring, WeylObservable::PhotonNumber), 4.0, 2e-2);
}

TEST(ExpectationViaWigner, RejectsUnnormalizedGrid) {
    const auto axis = linspace_step(-1.0, 1.0, 0.1);
    const auto g = wigner(PhononState::coherent({0.0, 0.0}), 0.0, axis, axis);
    EXPECT_THROW(expectation_via_wigner(g, WeylObservable::PhotonNumber), ValidationError);
}

TEST(Linspace, IncludesStop) {
    const auto v = linspace_step(0.0, 2.5, 0.0625);
    ASSERT_EQ(v.size(), 41u);
    EXPECT_DOUBLE_EQ(v.back(), 2.5);
}

}  // namespace
}  // namespace phav
