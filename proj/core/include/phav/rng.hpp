#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace phav {

// Recorded in every output's metadata.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64, stream keys via splitmix64(seed, stream)";

std::uint64_t splitmix64(std::uint64_t x);

/// Key for stream `stream` under a root seed. Distinct streams under the same
/// root give distinct keys (splitmix64 is a bijection on the mixed input).
std::uint64_t derive_stream_key(std::uint64_t seed, std::uint64_t stream);

/// A seeded engine bound to one stream of a root seed.
class RandomStream {
public:
    using engine_type = std::mt19937_64;

    RandomStream(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(derive_stream_key(seed, stream)), engine_(key_) {}

    std::uint64_t key() const { return key_; }
    engine_type& engine() { return engine_; }

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double normal(double mean, double sigma) { return std::normal_distribution<double>(mean, sigma)(engine_); }
    bool bernoulli(double p) { return std::bernoulli_distribution(p)(engine_); }
    double gamma(double shape, double scale) { return std::gamma_distribution<double>(shape, scale)(engine_); }

private:
    std::uint64_t key_;
    engine_type engine_;
};

/// Fresh nondeterministic seed for callers that were not given one.
std::uint64_t generate_seed();

}  // namespace phav
