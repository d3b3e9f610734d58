// Deterministic random number utilities. The standard distributions are
// implementation-defined, so sampling is done from raw engine output here to
// keep traces byte-stable across toolchains.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>

namespace mixr {

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of mantissa.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi] (inclusive). Rejection-free modulo is fine
    // at the ranges used here; bias is < 2^-50 for spans below 2^14.
    std::uint64_t uniform_index(std::uint64_t lo, std::uint64_t hi) {
        const std::uint64_t span = hi - lo + 1;
        return lo + engine_() % span;
    }

    // Box-Muller, cosine branch only: exactly two uniform draws per call.
    double gaussian(double mean = 0.0, double stddev = 1.0) {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * mag * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Index drawn proportionally to probs (not required to be normalized).
    std::size_t categorical(std::span<const double> probs) {
        if (probs.empty()) throw std::invalid_argument("categorical: empty distribution");
        double total = 0.0;
        for (double p : probs) total += p;
        const double u = uniform() * total;
        double cum = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            cum += probs[i];
            if (u < cum) return i;
        }
        return probs.size() - 1; // guard against accumulated rounding
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

} // namespace mixr
