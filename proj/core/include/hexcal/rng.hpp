#pragma once

#include <cstdint>

namespace hexcal {

// SplitMix64 (Steele, Lea & Flood; the generator behind Java's SplittableRandom).
// Chosen for bit-portable output across platforms and trivial stream splitting:
// std::mt19937_64 is portable but the standard distributions are not, so all
// uniform/normal mapping is done here by hand.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double next_uniform(double lo, double hi) {
        return lo + next_unit() * (hi - lo);
    }

    /// Zero-mean Gaussian via Box-Muller. Consumes exactly two uniforms per call
    /// (no cached spare) so the draw count per event is fixed and documented.
    double next_normal(double sigma);

    // Substream derivation: substream(s, i) feeds s and the stream index through
    // one extra SplitMix64 scramble. Used to give every pose index its own
    // independent, order-free noise stream.
    static std::uint64_t substream(std::uint64_t seed, std::uint64_t stream) {
        SplitMix64 g(seed ^ (0x9E3779B97F4A7C15ull * (stream + 1)));
        return g.next_u64();
    }

private:
    std::uint64_t state_;
};

}  // namespace hexcal
