// SPDX-License-Identifier: Apache-2.0
//
// Seeded random streams with counter-based substream splitting. Every
// generator in the library is a pure function of (parameters, seed); parallel
// code derives one substream per work item so results do not depend on the
// thread count.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace randsense {

// SplitMix64 finalizer; decorrelates adjacent seed values.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed of substream `index` of the stream identified by `seed`. Substreams
// for distinct indices are independent and the derivation chains, e.g.
// substream(substream(master, experiment), sample).
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed + 0x9e3779b97f4a7c15ULL * (index + 1));
}

// Uniform/Gaussian stream over mt19937_64. The bit-to-double mapping is
// spelled out here rather than left to std::*_distribution so a seed yields
// the same sequence under every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on (0, 1]; never returns 0 so log() is safe.
    double uniform01() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Standard normal via Box-Muller; consumes two engine outputs.
    double gaussian() {
        const double r = std::sqrt(-2.0 * std::log(uniform01()));
        return r * std::cos(2.0 * std::numbers::pi * uniform01());
    }

    // Circularly-symmetric CN(0,1): unit variance per complex entry,
    // i.e. variance 1/2 in each real component.
    std::complex<double> cgaussian() {
        const double r = std::sqrt(-std::log(uniform01()));
        const double phase = 2.0 * std::numbers::pi * uniform01();
        return {r * std::cos(phase), r * std::sin(phase)};
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace randsense
