#include "phav/rng.hpp"

namespace phav {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_stream_key(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64(seed) is fixed per root; adding the stream index before the
    // final bijective mix keeps keys distinct across streams.
    return splitmix64(splitmix64(seed) + stream * 0xD1B54A32D192ED03ULL);
}

std::uint64_t generate_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

}  // namespace phav
