#pragma once

#include <cstdint>

namespace signstable {

// SplitMix64 finalizer. Bijective avalanche on 64-bit words; the basis of
// every random stream in this library.
constexpr std::uint64_t avalanche(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

// Counter-based pseudo-random stream. A (seed, stream) pair names an
// unbounded sequence of 64-bit words addressable by counter, so any word can
// be regenerated in isolation without producing its predecessors. This is
// what lets a projection-matrix row (or a single entry) be rebuilt on demand
// while streaming.
struct SeededRng {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    friend bool operator==(const SeededRng&, const SeededRng&) = default;

    // Mixed base state; two avalanche rounds decorrelate (seed, stream)
    // pairs that differ in few bits.
    constexpr std::uint64_t base() const noexcept {
        return avalanche(avalanche(seed + kGoldenGamma) ^
                         (stream * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull));
    }

    constexpr std::uint64_t word_at(std::uint64_t counter) const noexcept {
        return avalanche(base() + counter * kGoldenGamma);
    }

    // Uniform deviate in the open interval (0, 1); never returns 0 or 1, so
    // log() and tan(pi*(u - 1/2)) stay finite.
    double uniform_at(std::uint64_t counter) const noexcept {
        return (static_cast<double>(word_at(counter) >> 11) + 0.5) * 0x1.0p-53;
    }

    // Derived stream for an independent purpose (a row index, a repetition
    // number, a sub-generator label).
    constexpr SeededRng fork(std::uint64_t label) const noexcept {
        return SeededRng{seed, avalanche(stream * kGoldenGamma + label + 0x6A09E667F3BCC909ull)};
    }
};

}  // namespace signstable
