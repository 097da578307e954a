#include <gtest/gtest.h>

#include <cmath>

#include "phav/bosonic_states.hpp"
#include "phav/error.hpp"
#include "phav/fock_numerics.hpp"
#include "phav/fock_oracle.hpp"

namespace phav {
namespace {

std::vector<PhononState> reference_states() {
    return {PhononState::coherent({2.0, 0.0}), PhononState::thermal(1.0, {2.0, 0.0}),
            PhononState::squeezed({-0.2, 0.0}, {2.0, 0.0})};
}

double moment_gap(const PhononMoments& a, const PhononMoments& b) {
    return std::max({std::abs(a.b_mean - b.b_mean), std::abs(a.b_sq - b.b_sq), std::abs(a.n_mean - b.n_mean)});
}

TEST(FockOracle, MatrixExponentialOfDiagonal) {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = complex{0.0, 1.0};
    d(2, 2) = -2.0;
    const auto e = matrix_exponential(d);
    EXPECT_NEAR(std::abs(e(0, 0) - std::exp(1.0)), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(e(1, 1) - std::exp(complex{0.0, 1.0})), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(e(2, 2) - std::exp(-2.0)), 0.0, 1e-13);
}

TEST(FockOracle, CoherentDiagonalIsPoisson) {
    const auto rho = build_fock_density(PhononState::coherent({2.0, 0.0}), 60);
    std::vector<double> diag(60);
    for (int n = 0; n < 60; ++n) diag[static_cast<std::size_t>(n)] = rho(n, n).real();
    EXPECT_LT(total_variation(FockDistribution::normalized(diag), poisson_distribution(4.0, 59)), 1e-8);
}

TEST(FockOracle, ThermalDiagonalIsGeometric) {
    const auto rho = build_fock_density(PhononState::thermal(1.0, {0.0, 0.0}), 60);
    for (int n = 0; n < 60; ++n) EXPECT_NEAR(rho(n, n).real(), std::pow(0.5, n + 1), 1e-9) << n;
}

TEST(FockOracle, UnitTraceAndHermitian) {
    for (const auto& s : reference_states()) {
        const auto rho = build_fock_density(s, 60);
        EXPECT_NEAR(std::abs(rho.trace() - complex{1.0, 0.0}), 0.0, 1e-9);
        EXPECT_LT((rho - rho.adjoint()).norm(), 1e-12);
    }
}

TEST(FockOracle, TruncationGuard) {
    const auto s = PhononState::coherent({4.0, 0.0});
    EXPECT_THROW(build_fock_density(s, 10), TruncationError);
    EXPECT_GE(minimum_oracle_dimension(s), 84);
}

TEST(FockOracle, MomentsAgreeWithClosedForm) {
    for (const auto& s : reference_states()) {
        const auto rho = build_fock_density(s, 60);
        for (double t : {0.0, 0.05, 0.125}) {
            EXPECT_LT(moment_gap(moments(s, t), moments_from_density(rho, s.omega, t)), 1e-6)
                << to_string(s.kind) << " t=" << t;
        }
    }
}

TEST(FockOracle, AlternativeOrderAlsoAgrees) {
    const auto s = PhononState::squeezed({-0.2, 0.1}, {1.5, 0.5}, kDefaultPhononOmega, OperatorOrder::SqueezeAfterDisplace);
    const auto rho = build_fock_density(s, 60);
    EXPECT_LT(moment_gap(moments(s, 0.03), moments_from_density(rho, s.omega, 0.03)), 1e-6);
}

TEST(FockOracle, SqueezedVarianceAtCrest) {
    const auto s = PhononState::squeezed({-0.2, 0.0}, {2.0, 0.0});
    const auto m = moments_from_density(build_fock_density(s, 60), s.omega, 0.0);
    EXPECT_NEAR(displacement_variance(m), std::exp(0.4) / 2.0, 1e-6);
}

TEST(FockOracle, WignerMatchesClosedForm) {
    for (const auto& s : reference_states()) {
        const auto rho = build_fock_density(s, 60);
        const auto m = moments(s, 0.0);
        for (auto [x, y] : {std::pair{0.0, 0.0}, std::pair{2.5, 0.3}, std::pair{-1.0, 1.2}})
            EXPECT_NEAR(wigner_from_density(rho, x, y), gaussian_wigner(m, x, y), 1e-6) << to_string(s.kind);
    }
}

}  // namespace
}  // namespace phav
