#pragma once

#include <cstdint>
#include <random>

namespace gazeforge::core {

std::uint64_t splitmix64(std::uint64_t& state);

// One deterministic stream per (seed, stream_id). The engine is the
// standard-mandated mt19937_64 bit pattern; uniform/normal draws are built
// from raw 64-bit words here so sequences are stable across toolchains.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t next_u64();

    // [0, 1), 53-bit resolution
    double uniform();
    double uniform(double lo, double hi);
    // inclusive bounds
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    // Box-Muller, two fresh uniforms per draw
    double normal(double mean, double sigma);
    // index in [0, n)
    std::size_t index(std::size_t n);

private:
    std::mt19937_64 engine_;
};

inline RngStream rng_stream(std::uint64_t seed, std::uint64_t stream_id) {
    return RngStream(seed, stream_id);
}

}  // namespace gazeforge::core
