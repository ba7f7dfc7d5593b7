#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace fkswitch {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ stream keyed by (seed, path index, stream id). Every draw
/// is a pure function of the key and the draw counter, so identical keys
/// reproduce identical sequences on any machine and worker layout.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t path_index, std::uint64_t stream_id) {
        std::uint64_t mix = seed;
        mix ^= 0x9E3779B97F4A7C15ULL * (path_index + 0x632BE59BD9B4E019ULL);
        mix ^= 0xD1B54A32D192ED03ULL * (stream_id + 0x9E3779B97F4A7C15ULL);
        for (auto& word : state_) {
            word = splitmix64(mix);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe as a log argument.
    double uniform_open() { return 1.0 - uniform(); }

    double exponential(double rate) { return -std::log(uniform_open()) / rate; }

    /// Standard normal via Box-Muller (cosine branch, two uniforms per draw).
    double normal() {
        const double radius = std::sqrt(-2.0 * std::log(uniform_open()));
        return radius * std::cos(2.0 * std::numbers::pi * uniform());
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
};

}  // namespace fkswitch
