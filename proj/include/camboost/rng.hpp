#pragma once

#include <cstdint>
#include <cmath>
#include <vector>

namespace camboost {

// Counter-based splittable RNG built on the splitmix64 finalizer.
// Every stream is identified by its seed; derive(label) produces a child
// stream whose output depends only on (seed, label), never on how many
// draws were consumed from the parent.  This makes generation reproducible
// under any parallel schedule: give each (replication, node, edge) its own
// derived stream and the draws are fixed by the master seed alone.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), state_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Child stream keyed on the construction seed, not the current state.
    RngStream derive(std::uint64_t label) const {
        return RngStream(mix(seed_ ^ mix(label)));
    }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1) with 53 random bits.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * next_uniform();
    }

    // Standard normal via Box-Muller; consumes exactly two uniforms.
    double next_normal() {
        const double u1 = 1.0 - next_uniform();  // (0, 1], keeps log finite
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double two_pi = 6.283185307179586476925286766559;
        return r * std::cos(two_pi * u2);
    }

    // Unbiased draw from {0, ..., n-1} via 128-bit multiply.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

}  // namespace camboost
