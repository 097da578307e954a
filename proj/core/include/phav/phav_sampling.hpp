#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace phav {

class RandomStream;

// Phase-control strategies for a phase-averaged quadrature acquisition.
// Phases are in rad, rates in rad/pulse.

// Independent phi ~ U[0, 2pi) per pulse.
struct UniformRandom {};

// phi_i cycles through k equispaced phases 2 pi j / k.
struct FiniteSet {
    int k = 1;
};

// phi_i = rate * i  (mod 2 pi).
struct LinearScan {
    double rate = 0.0;
};

// A repeated ramp with a quadratic nonlinearity: the scan restarts every
// L = round(2 pi / rate) pulses and, with j = i mod L,
// phi_i = rate * j + quadratic_coeff * j^2.
struct DriftingScan {
    double rate = 0.0;
    double quadratic_coeff = 0.0;  // rad/pulse^2
};

// phi_i = rate * i + N(0, jitter_sigma^2) + offset_i, where the offset takes a
// +/- jump_scale step (random sign) with probability jump_prob at every pulse.
struct JitteredScan {
    double rate = 0.0;
    double jitter_sigma = 0.0;
    double jump_prob = 0.0;
    double jump_scale = 0.0;
};

using PhaseStrategy = std::variant<UniformRandom, FiniteSet, LinearScan, DriftingScan, JitteredScan>;

std::string describe(const PhaseStrategy& strategy);
void validate(const PhaseStrategy& strategy);

/// Single-pulse quadrature values plus the provenance needed to regenerate them.
struct QuadratureDataset {
    std::vector<double> samples;
    std::uint64_t seed = 0;
    PhaseStrategy strategy = UniformRandom{};
};

/// X_i = sqrt(2) |alpha| cos(phi_i) + delta_i, phi_i ~ U[0, 2pi), delta_i ~ N(0, 1/2).
QuadratureDataset sample_phav(double alpha_mag, std::size_t n, std::uint64_t seed);

/// As sample_phav but with phases drawn from `strategy`.
QuadratureDataset sample_with_strategy(double alpha_mag, std::size_t n, const PhaseStrategy& strategy,
                                       std::uint64_t seed);

/// Appends n quadratures to `out` drawing from an existing stream. Used by the
/// pipeline, whose streams are derived per delay.
void sample_phav_into(double alpha_mag, std::size_t n, RandomStream& rng, std::vector<double>& out);

/// Pearson coefficients r(0..max_lag) between x_i and x_{i+lag}; r(0) = 1.
std::vector<double> lag_correlation(std::span<const double> samples, int max_lag);

/// Density-normalized histogram over strictly increasing edges.
class QuadratureHistogram {
public:
    QuadratureHistogram(std::vector<double> edges, std::vector<double> densities);

    /// From bin centers and densities in any order; bins must share one width.
    static QuadratureHistogram from_bins(std::vector<double> centers, std::vector<double> densities);

    std::span<const double> edges() const { return edges_; }
    std::span<const double> densities() const { return densities_; }
    std::size_t bins() const { return densities_.size(); }
    double center(std::size_t i) const { return 0.5 * (edges_[i] + edges_[i + 1]); }
    double width(std::size_t i) const { return edges_[i + 1] - edges_[i]; }
    std::vector<double> centers() const;

    /// Fraction of the mass in bins whose center satisfies |x| > threshold.
    double mass_beyond(double threshold) const;
    /// Empirical CDF at x with linear interpolation inside bins.
    double cdf(double x) const;

private:
    std::vector<double> edges_;
    std::vector<double> densities_;
};

/// Histogram with bins aligned to multiples of bin_width. Default range is
/// [min - 3 bin_width, max + 3 bin_width] snapped outward to the bin grid.
QuadratureHistogram histogram(std::span<const double> samples, double bin_width,
                              std::optional<std::pair<double, double>> range = std::nullopt);

/// sup |F1 - F2| over the union of both edge sets.
double ks_distance(const QuadratureHistogram& h1, const QuadratureHistogram& h2);

/// Two-sample Kolmogorov-Smirnov scale at the 1% level, 1.63 sqrt((n1 + n2)/(n1 n2)).
double ks_null_scale(std::size_t n1, std::size_t n2);

}  // namespace phav
