#pragma once

#include <complex>
#include <cstdint>

namespace dofcsit {

/// Counter-based random stream. Every value is a pure function of the key
/// and an advancing counter, so trial streams can be derived independently
/// of thread scheduling and replayed bit-exactly on any platform.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    /// Mixes up to three identifiers (seed, grid index, trial index) into
    /// one stream key.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t lane = 0,
                                std::uint64_t index = 0) {
        return mix(mix(mix(seed) ^ lane) ^ index);
    }

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGamma); }

    /// Uniform in (0, 1]; never zero, safe under log.
    double next_uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard circularly-symmetric complex Gaussian, E|z|^2 = 1.
    std::complex<double> next_cgauss() {
        const double radius = std::sqrt(-std::log(next_uniform()));
        const double angle = 2.0 * 3.141592653589793238462643383279502884 * next_uniform();
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t x) {
        x += kGamma;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace dofcsit
