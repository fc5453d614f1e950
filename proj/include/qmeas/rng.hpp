#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace qmeas {

/// SplitMix64 pseudo-random generator (Steele, Lea & Flood, OOPSLA 2014).
///
/// 64-bit state, 64-bit output, period 2^64. Every stochastic operation in
/// this library takes an explicit generator handle, so a run is reproducible
/// bit-for-bit from its seed. Child streams come from split() (sequential)
/// or derive() (keyed by trial index), which keeps fanned-out trials
/// deterministic regardless of scheduling order.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller.
    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 < 1e-300) {
            u1 = 1e-300;
        }
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Cauchy sample via the quantile function: location + scale tan(pi (u - 1/2)).
    double cauchy(double location, double scale) {
        return location + scale * std::tan(std::numbers::pi * (uniform01() - 0.5));
    }

    /// Child generator; advances this generator by one step.
    SplitMix64 split() { return SplitMix64(next_u64()); }

    /// Seed of the stream keyed by (seed, index). Recorded in trial reports
    /// so any single trial can be replayed in isolation.
    static uint64_t derive_seed(uint64_t seed, uint64_t index) {
        return seed ^ (0xA3EC4E93C9B6A27Full * (index + 1));
    }

    /// Independent stream keyed by (seed, index); does not depend on call
    /// order, and equals SplitMix64(derive_seed(seed, index)) for replay.
    static SplitMix64 derive(uint64_t seed, uint64_t index) {
        return SplitMix64(derive_seed(seed, index));
    }

private:
    uint64_t state_;
};

}  // namespace qmeas
