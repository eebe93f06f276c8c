#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace lpvol {

/// Counter-based generator: draw k of stream s under seed is splitmix64's finalizer applied
/// to a mix of (seed, s, k). Any draw can be recomputed without replaying the stream, so
/// batches on different threads give identical results to a serial run.
class CounterRng {
public:
    static constexpr std::string_view name = "splitmix64-counter/v1";

    CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() {
        const std::uint64_t key = mix(seed_ ^ mix(stream_ + 0x632be59bd9b4e019ULL));
        return mix(key + 0x9e3779b97f4a7c15ULL * ++counter_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    /// Uniform on (0, 1), safe for logarithms.
    double uniform_open() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    /// Exp(1) by inversion.
    double exponential() { return -std::log(uniform_open()); }
    int sign() { return (next_u64() >> 63) ? 1 : -1; }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }

    [[nodiscard]] std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_, stream_, counter_ = 0;
};

}  // namespace lpvol
