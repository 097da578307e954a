#include "phav/phav_sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "phav/error.hpp"
#include "phav/rng.hpp"

namespace phav {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kVacuumSigma = std::sqrt(0.5);

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Stateful phase generator; one instance per acquisition.
class PhaseSequence {
public:
    explicit PhaseSequence(const PhaseStrategy& strategy) : strategy_(strategy) {
        if (const auto* d = std::get_if<DriftingScan>(&strategy_)) {
            sweep_length_ = std::max<long long>(1, std::llround(kTwoPi / d->rate));
        }
    }

    double next(RandomStream& rng) {
        const auto i = index_++;
        const double di = static_cast<double>(i);
        return std::visit(
            overloaded{
                [&](const UniformRandom&) { return rng.uniform(0.0, kTwoPi); },
                [&](const FiniteSet& f) {
                    return kTwoPi * static_cast<double>(i % static_cast<std::uint64_t>(f.k)) / f.k;
                },
                [&](const LinearScan& l) { return std::fmod(l.rate * di, kTwoPi); },
                [&](const DriftingScan& d) {
                    const double j = static_cast<double>(static_cast<long long>(i) % sweep_length_);
                    return std::fmod(d.rate * j + d.quadratic_coeff * j * j, kTwoPi);
                },
                [&](const JitteredScan& s) {
                    double jitter = s.jitter_sigma > 0.0 ? rng.normal(0.0, s.jitter_sigma) : 0.0;
                    if (s.jump_prob > 0.0 && rng.bernoulli(s.jump_prob)) {
                        offset_ += rng.bernoulli(0.5) ? s.jump_scale : -s.jump_scale;
                    }
                    return std::fmod(s.rate * di + jitter + offset_, kTwoPi);
                },
            },
            strategy_);
    }

private:
    PhaseStrategy strategy_;
    std::uint64_t index_ = 0;
    long long sweep_length_ = 1;
    double offset_ = 0.0;
};

void check_sampling_args(double alpha_mag, std::size_t n) {
    require_argument(alpha_mag >= 0.0 && std::isfinite(alpha_mag), "alpha magnitude must be >= 0");
    require_argument(n >= 1, "sample count must be >= 1");
}

}  // namespace

std::string describe(const PhaseStrategy& strategy) {
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{
                   [&](const UniformRandom&) { os << "uniform_random"; },
                   [&](const FiniteSet& f) { os << "finite_set(k=" << f.k << ")"; },
                   [&](const LinearScan& l) { os << "linear_scan(rate=" << l.rate << ")"; },
                   [&](const DriftingScan& d) {
                       os << "drifting_scan(rate=" << d.rate << ",quadratic_coeff=" << d.quadratic_coeff << ")";
                   },
                   [&](const JitteredScan& j) {
                       os << "jittered_scan(rate=" << j.rate << ",jitter_sigma=" << j.jitter_sigma
                          << ",jump_prob=" << j.jump_prob << ",jump_scale=" << j.jump_scale << ")";
                   },
               },
               strategy);
    return os.str();
}

void validate(const PhaseStrategy& strategy) {
    std::visit(overloaded{
                   [](const UniformRandom&) {},
                   [](const FiniteSet& f) { require_argument(f.k >= 1, "finite set needs k >= 1"); },
                   [](const LinearScan& l) { require_argument(std::isfinite(l.rate), "scan rate must be finite"); },
                   [](const DriftingScan& d) {
                       require_argument(d.rate > 0.0 && std::isfinite(d.rate), "drifting scan rate must be > 0");
                       require_argument(std::isfinite(d.quadratic_coeff), "quadratic coefficient must be finite");
                   },
                   [](const JitteredScan& j) {
                       require_argument(std::isfinite(j.rate), "scan rate must be finite");
                       require_argument(j.jitter_sigma >= 0.0, "jitter sigma must be >= 0");
                       require_argument(j.jump_prob >= 0.0 && j.jump_prob <= 1.0, "jump probability must lie in [0, 1]");
                       require_argument(std::isfinite(j.jump_scale), "jump scale must be finite");
                   },
               },
               strategy);
}

QuadratureDataset sample_phav(double alpha_mag, std::size_t n, std::uint64_t seed) {
    return sample_with_strategy(alpha_mag, n, UniformRandom{}, seed);
}

QuadratureDataset sample_with_strategy(double alpha_mag, std::size_t n, const PhaseStrategy& strategy,
                                       std::uint64_t seed) {
    check_sampling_args(alpha_mag, n);
    validate(strategy);
    RandomStream rng(seed);
    PhaseSequence phases(strategy);
    const double amplitude = std::numbers::sqrt2 * alpha_mag;
    QuadratureDataset data{.samples = {}, .seed = seed, .strategy = strategy};
    data.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double phi = phases.next(rng);
        data.samples.push_back(amplitude * std::cos(phi) + rng.normal(0.0, kVacuumSigma));
    }
    return data;
}

void sample_phav_into(double alpha_mag, std::size_t n, RandomStream& rng, std::vector<double>& out) {
    check_sampling_args(alpha_mag, n);
    const double amplitude = std::numbers::sqrt2 * alpha_mag;
    out.reserve(out.size() + n);
    for (std::size_t i = 0; i < n; ++i) {
        const double phi = rng.uniform(0.0, kTwoPi);
        out.push_back(amplitude * std::cos(phi) + rng.normal(0.0, kVacuumSigma));
    }
}

std::vector<double> lag_correlation(std::span<const double> x, int max_lag) {
    require_argument(max_lag >= 0, "max lag must be >= 0");
    if (x.size() <= static_cast<std::size_t>(max_lag) + 1) {
        throw ValidationError("dataset too short for the requested lag");
    }
    std::vector<double> r(static_cast<std::size_t>(max_lag) + 1);
    r[0] = 1.0;
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    if (!(var > 0.0)) throw ValidationError("dataset has zero variance; correlation is undefined");

    for (int lag = 1; lag <= max_lag; ++lag) {
        const std::size_t m = x.size() - static_cast<std::size_t>(lag);
        const auto a = x.first(m);
        const auto b = x.subspan(static_cast<std::size_t>(lag));
        const double ma = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(m);
        const double mb = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(m);
        double sab = 0.0;
        double saa = 0.0;
        double sbb = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double da = a[i] - ma;
            const double db = b[i] - mb;
            sab += da * db;
            saa += da * da;
            sbb += db * db;
        }
        if (!(saa > 0.0 && sbb > 0.0)) throw ValidationError("zero variance at lag " + std::to_string(lag));
        r[static_cast<std::size_t>(lag)] = sab / std::sqrt(saa * sbb);
    }
    return r;
}

QuadratureHistogram::QuadratureHistogram(std::vector<double> edges, std::vector<double> densities)
    : edges_(std::move(edges)), densities_(std::move(densities)) {
    if (densities_.empty()) throw ValidationError("histogram has no bins");
    if (edges_.size() != densities_.size() + 1) {
        throw ValidationError("histogram needs exactly one more edge than bins");
    }
    double mass = 0.0;
    for (std::size_t i = 0; i < densities_.size(); ++i) {
        if (!std::isfinite(edges_[i]) || !(edges_[i + 1] > edges_[i])) {
            throw ValidationError("histogram edges must be finite and strictly increasing (bin " +
                                  std::to_string(i) + ")");
        }
        if (!std::isfinite(densities_[i]) || densities_[i] < 0.0) {
            throw ValidationError("histogram density at bin " + std::to_string(i) +
                                  " is negative or not finite");
        }
        mass += densities_[i] * width(i);
    }
    if (std::abs(mass - 1.0) > 1e-9) {
        throw ValidationError("histogram is not density-normalized (mass " + std::to_string(mass) + ")");
    }
}

QuadratureHistogram QuadratureHistogram::from_bins(std::vector<double> centers, std::vector<double> densities) {
    if (centers.size() != densities.size()) throw ValidationError("bin centers and densities differ in length");
    if (centers.size() < 2) throw ValidationError("need at least two bins to infer the bin width");
    std::vector<std::size_t> order(centers.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return centers[a] < centers[b]; });
    std::vector<double> c(centers.size());
    std::vector<double> d(centers.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        c[i] = centers[order[i]];
        d[i] = densities[order[i]];
    }
    const double w = (c.back() - c.front()) / static_cast<double>(c.size() - 1);
    if (!(w > 0.0)) throw ValidationError("bin centers must be distinct");
    for (std::size_t i = 1; i < c.size(); ++i) {
        if (std::abs((c[i] - c[i - 1]) - w) > 1e-6 * w) {
            throw ValidationError("bin centers are not uniformly spaced near x = " + std::to_string(c[i]));
        }
    }
    std::vector<double> edges(c.size() + 1);
    for (std::size_t i = 0; i < c.size(); ++i) edges[i] = c[i] - 0.5 * w;
    edges.back() = c.back() + 0.5 * w;
    // Renormalize against the reconstructed widths; text round-off must not
    // trip the normalization invariant.
    double mass = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) mass += d[i] * (edges[i + 1] - edges[i]);
    if (std::abs(mass - 1.0) > 1e-6) {
        throw ValidationError("histogram densities integrate to " + std::to_string(mass) + ", expected 1");
    }
    for (double& v : d) v /= mass;
    return QuadratureHistogram(std::move(edges), std::move(d));
}

std::vector<double> QuadratureHistogram::centers() const {
    std::vector<double> c(bins());
    for (std::size_t i = 0; i < bins(); ++i) c[i] = center(i);
    return c;
}

double QuadratureHistogram::mass_beyond(double threshold) const {
    double mass = 0.0;
    for (std::size_t i = 0; i < bins(); ++i)
        if (std::abs(center(i)) > threshold) mass += densities_[i] * width(i);
    return mass;
}

double QuadratureHistogram::cdf(double x) const {
    if (x <= edges_.front()) return 0.0;
    if (x >= edges_.back()) return 1.0;
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
    const auto bin = static_cast<std::size_t>(std::distance(edges_.begin(), it)) - 1;
    double below = 0.0;
    for (std::size_t i = 0; i < bin; ++i) below += densities_[i] * width(i);
    return std::min(1.0, below + densities_[bin] * (x - edges_[bin]));
}

QuadratureHistogram histogram(std::span<const double> samples, double bin_width,
                              std::optional<std::pair<double, double>> range) {
    require_argument(bin_width > 0.0 && std::isfinite(bin_width), "bin width must be > 0");
    if (samples.empty()) throw ArgumentError("cannot histogram an empty dataset");
    for (double v : samples)
        if (!std::isfinite(v)) throw ValidationError("dataset contains a non-finite quadrature value");

    long long first = 0;
    long long last = 0;  // exclusive bin index
    if (range) {
        require_argument(range->second > range->first, "histogram range must be non-empty");
        first = static_cast<long long>(std::floor(range->first / bin_width));
        last = static_cast<long long>(std::ceil(range->second / bin_width));
    } else {
        const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
        first = static_cast<long long>(std::floor(*lo / bin_width)) - 3;
        last = static_cast<long long>(std::floor(*hi / bin_width)) + 1 + 3;
    }
    const auto nbins = static_cast<std::size_t>(last - first);
    std::vector<double> counts(nbins, 0.0);
    std::size_t used = 0;
    for (double v : samples) {
        const long long k = static_cast<long long>(std::floor(v / bin_width)) - first;
        if (k < 0 || k >= static_cast<long long>(nbins)) continue;
        counts[static_cast<std::size_t>(k)] += 1.0;
        ++used;
    }
    if (used == 0) throw ArgumentError("no samples fall inside the histogram range");

    std::vector<double> edges(nbins + 1);
    for (std::size_t i = 0; i <= nbins; ++i) edges[i] = static_cast<double>(first + static_cast<long long>(i)) * bin_width;
    std::vector<double> dens(nbins);
    double mass = 0.0;
    for (std::size_t i = 0; i < nbins; ++i) {
        dens[i] = counts[i] / (static_cast<double>(used) * (edges[i + 1] - edges[i]));
        mass += dens[i] * (edges[i + 1] - edges[i]);
    }
    // Absorb the last-ulp error of the edge products.
    for (double& d : dens) d /= mass;
    return QuadratureHistogram(std::move(edges), std::move(dens));
}

double ks_distance(const QuadratureHistogram& h1, const QuadratureHistogram& h2) {
    const auto e1 = h1.edges();
    const auto e2 = h2.edges();
    if (e1.back() <= e2.front() || e2.back() <= e1.front()) {
        throw ValidationError("histograms have disjoint supports");
    }
    std::vector<double> grid;
    grid.reserve(e1.size() + e2.size());
    std::merge(e1.begin(), e1.end(), e2.begin(), e2.end(), std::back_inserter(grid));
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    // Cumulative sums walked alongside the merged grid.
    auto cumulative = [](const QuadratureHistogram& h, std::span<const double> xs) {
        std::vector<double> out(xs.size());
        const auto e = h.edges();
        const auto d = h.densities();
        std::size_t bin = 0;
        double below = 0.0;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            const double x = xs[k];
            if (x <= e.front()) { out[k] = 0.0; continue; }
            if (x >= e.back()) { out[k] = 1.0; continue; }
            while (x >= e[bin + 1]) {
                below += d[bin] * (e[bin + 1] - e[bin]);
                ++bin;
            }
            out[k] = std::min(1.0, below + d[bin] * (x - e[bin]));
        }
        return out;
    };
    const auto c1 = cumulative(h1, grid);
    const auto c2 = cumulative(h2, grid);
    double ks = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) ks = std::max(ks, std::abs(c1[k] - c2[k]));
    return ks;
}

double ks_null_scale(std::size_t n1, std::size_t n2) {
    const double a = static_cast<double>(n1);
    const double b = static_cast<double>(n2);
    return 1.63 * std::sqrt((a + b) / (a * b));
}

}  // namespace phav
