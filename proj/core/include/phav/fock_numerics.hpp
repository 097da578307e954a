#pragma once

#include <optional>
#include <span>
#include <vector>

namespace phav {

// Largest photon number the Fock-basis routines are validated for.
inline constexpr int kMaxPhotonNumber = 150;

// Boltzmann constant in meV/K. Energies are in meV, temperatures in K.
inline constexpr double kBoltzmannMeVPerK = 0.0861733;

/// Photon-number probability vector p(N), N = 0..n_max.
///
/// Construction validates the invariants (n_max >= 1, entries >= 0, sum
/// within 1e-9 of one) and throws ValidationError otherwise. Use
/// `normalized()` to build one from unnormalized nonnegative weights.
class FockDistribution {
public:
    explicit FockDistribution(std::vector<double> probs);

    static FockDistribution normalized(std::vector<double> weights);
    static FockDistribution point_mass(int n, int n_max);

    int n_max() const { return static_cast<int>(probs_.size()) - 1; }
    std::span<const double> probs() const { return probs_; }
    double operator[](int n) const { return probs_[static_cast<std::size_t>(n)]; }

    bool operator==(const FockDistribution&) const = default;

private:
    std::vector<double> probs_;
};

/// |<N|X>|^2 for the quadrature X = (a + a^dagger)/sqrt(2) (vacuum variance 1/2),
/// i.e. H_N(X)^2 exp(-X^2) / (sqrt(pi) 2^N N!).
///
/// Evaluated through the normalized Hermite-function recurrence, so it is
/// overflow-free for every n <= kMaxPhotonNumber.
double fock_quadrature_density(int n, double x);

/// Fills out[k] = |<k|X>|^2 for k = 0..out.size()-1 in one recurrence pass.
void fock_quadrature_densities(double x, std::span<double> out);

/// e^-mean mean^n / n!, evaluated in log space.
double poisson_pmf(double mean, int n);

/// Poisson(mean) restricted to 0..n_max and renormalized.
FockDistribution poisson_distribution(double mean, int n_max);

/// Poisson-Gamma mixture (negative binomial) with the given mean and variance,
/// restricted to 0..n_max and renormalized. variance == mean gives Poisson.
FockDistribution negative_binomial_distribution(double mean, double variance, int n_max);

/// Mean Bose-Einstein occupation 1/(exp(E/(k_B T)) - 1).
double bose_einstein_occupation(double energy_mev, double temperature_k);

/// Temperature at which the Bose-Einstein occupation of a mode equals `occupation`.
double effective_temperature(double occupation, double energy_mev);

struct DistributionStats {
    double mean = 0.0;
    double variance = 0.0;
    std::optional<double> mandel_q;  // absent when mean == 0
};

DistributionStats distribution_stats(const FockDistribution& d);

/// Half the L1 distance; the shorter distribution is zero-padded.
double total_variation(const FockDistribution& a, const FockDistribution& b);

}  // namespace phav
