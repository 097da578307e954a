#include "phav/fock_numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "phav/error.hpp"

namespace phav {

namespace {

constexpr double kNormTolerance = 1e-9;

void validate_probs(const std::vector<double>& probs) {
    if (probs.size() < 2) throw ValidationError("FockDistribution needs n_max >= 1");
    double sum = 0.0;
    for (std::size_t n = 0; n < probs.size(); ++n) {
        if (!std::isfinite(probs[n]) || probs[n] < 0.0) {
            throw ValidationError("FockDistribution: p(" + std::to_string(n) +
                                  ") is negative or not finite");
        }
        sum += probs[n];
    }
    if (std::abs(sum - 1.0) > kNormTolerance) {
        throw ValidationError("FockDistribution: probabilities sum to " + std::to_string(sum));
    }
}

}  // namespace

FockDistribution::FockDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    validate_probs(probs_);
}

FockDistribution FockDistribution::normalized(std::vector<double> weights) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw NumericalError("cannot normalize Fock weights with total " + std::to_string(total));
    }
    for (double& w : weights) w /= total;
    return FockDistribution(std::move(weights));
}

FockDistribution FockDistribution::point_mass(int n, int n_max) {
    require_argument(n >= 0 && n <= n_max, "point mass index out of range");
    std::vector<double> probs(static_cast<std::size_t>(n_max) + 1, 0.0);
    probs[static_cast<std::size_t>(n)] = 1.0;
    return FockDistribution(std::move(probs));
}

void fock_quadrature_densities(double x, std::span<double> out) {
    require_argument(std::isfinite(x), "quadrature value must be finite");
    if (out.empty()) return;
    // Normalized Hermite functions phi_n; never form H_n or 2^n n! separately.
    const double phi0 = std::exp(-0.5 * x * x) / std::pow(std::numbers::pi, 0.25);
    double prev2 = phi0;
    out[0] = phi0 * phi0;
    if (out.size() == 1) return;
    double prev1 = std::numbers::sqrt2 * x * phi0;
    out[1] = prev1 * prev1;
    for (std::size_t n = 2; n < out.size(); ++n) {
        const double dn = static_cast<double>(n);
        const double phi = x * std::sqrt(2.0 / dn) * prev1 - std::sqrt((dn - 1.0) / dn) * prev2;
        out[n] = phi * phi;
        prev2 = prev1;
        prev1 = phi;
    }
}

double fock_quadrature_density(int n, double x) {
    require_argument(n >= 0, "photon number must be nonnegative");
    std::vector<double> buf(static_cast<std::size_t>(n) + 1);
    fock_quadrature_densities(x, buf);
    return buf.back();
}

double poisson_pmf(double mean, int n) {
    require_argument(mean >= 0.0 && std::isfinite(mean), "Poisson mean must be >= 0");
    require_argument(n >= 0, "photon number must be nonnegative");
    if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
    const double dn = static_cast<double>(n);
    return std::exp(dn * std::log(mean) - mean - std::lgamma(dn + 1.0));
}

FockDistribution poisson_distribution(double mean, int n_max) {
    require_argument(n_max >= 1, "n_max must be >= 1");
    std::vector<double> w(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) w[static_cast<std::size_t>(n)] = poisson_pmf(mean, n);
    return FockDistribution::normalized(std::move(w));
}

FockDistribution negative_binomial_distribution(double mean, double variance, int n_max) {
    require_argument(mean > 0.0, "negative binomial mean must be > 0");
    require_argument(variance >= mean, "negative binomial requires variance >= mean");
    const double excess = variance - mean;
    if (excess <= 1e-12 * mean) return poisson_distribution(mean, n_max);
    const double r = mean * mean / excess;
    const double log_q = std::log(r / (r + mean));
    const double log_p = std::log(mean / (r + mean));
    std::vector<double> w(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        const double dn = static_cast<double>(n);
        w[static_cast<std::size_t>(n)] = std::exp(std::lgamma(dn + r) - std::lgamma(r) -
                                                  std::lgamma(dn + 1.0) + r * log_q + dn * log_p);
    }
    return FockDistribution::normalized(std::move(w));
}

double bose_einstein_occupation(double energy_mev, double temperature_k) {
    require_argument(energy_mev > 0.0, "mode energy must be > 0 meV");
    require_argument(temperature_k > 0.0, "temperature must be > 0 K");
    return 1.0 / std::expm1(energy_mev / (kBoltzmannMeVPerK * temperature_k));
}

double effective_temperature(double occupation, double energy_mev) {
    require_argument(occupation > 0.0, "occupation must be > 0");
    require_argument(energy_mev > 0.0, "mode energy must be > 0 meV");
    return energy_mev / (kBoltzmannMeVPerK * std::log1p(1.0 / occupation));
}

DistributionStats distribution_stats(const FockDistribution& d) {
    double m1 = 0.0;
    double m2 = 0.0;
    const auto p = d.probs();
    for (std::size_t n = 0; n < p.size(); ++n) {
        const double dn = static_cast<double>(n);
        m1 += dn * p[n];
        m2 += dn * dn * p[n];
    }
    DistributionStats s;
    s.mean = m1;
    s.variance = std::max(0.0, m2 - m1 * m1);
    if (m1 > 0.0) s.mandel_q = (s.variance - m1) / m1;
    return s;
}

double total_variation(const FockDistribution& a, const FockDistribution& b) {
    const auto pa = a.probs();
    const auto pb = b.probs();
    const std::size_t len = std::max(pa.size(), pb.size());
    double l1 = 0.0;
    for (std::size_t n = 0; n < len; ++n) {
        const double x = n < pa.size() ? pa[n] : 0.0;
        const double y = n < pb.size() ? pb[n] : 0.0;
        l1 += std::abs(x - y);
    }
    return 0.5 * l1;
}

}  // namespace phav
