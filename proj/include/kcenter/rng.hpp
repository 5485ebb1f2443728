#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace kcenter {

// SplitMix64 finalizer; used to derive independent streams from one seed.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for one simulated machine, derived from (run seed, round, machine).
/// Changing the machine count leaves the seeds of other machines untouched.
inline constexpr std::uint64_t machine_seed(std::uint64_t seed, std::uint64_t round,
                                            std::uint64_t machine) {
    return mix64(mix64(seed ^ 0x6d61636869ULL) + (round << 20) + machine);
}

/// mt19937_64 with portable value mappings. The engine's output sequence is
/// pinned by the standard; std::*_distribution is not, so the mappings below
/// are hand-rolled to keep seeded runs reproducible across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // uniform index in [0, n); n > 0
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(eng_()) * n) >> 64);
    }

    // standard normal via Box-Muller, one spare cached
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace kcenter
