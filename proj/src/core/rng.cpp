#include "gazeforge/core/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace gazeforge::core {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t state = seed;
    std::uint64_t a = splitmix64(state);
    state = stream_id ^ 0xD1B54A32D192ED03ULL;
    std::uint64_t b = splitmix64(state);
    state = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
    return splitmix64(state);
}
}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : engine_(mix_seed(seed, stream_id)) {}

std::uint64_t RngStream::next_u64() { return engine_(); }

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("uniform_int: hi < lo");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1ULL;
    return lo + static_cast<std::int64_t>(next_u64() % span);
}

double RngStream::normal(double mean, double sigma) {
    // draw until u1 is nonzero so the log is finite
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sigma * r * std::cos(2.0 * M_PI * u2);
}

std::size_t RngStream::index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("index: n == 0");
    return static_cast<std::size_t>(next_u64() % n);
}

}  // namespace gazeforge::core
