#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "svlm/errors.hpp"

namespace svlm {

// Counter-based deterministic generator (SplitMix64 output function over
// seed + counter * golden gamma). The uint64 stream is bit-identical on every
// platform and trivial to reimplement in other languages; see docs/rng.md for
// the algorithm statement and frozen test vectors.
//
// Draw order conventions used across the project (documented because dataset
// and weight reproducibility depend on them):
//   next_u64     : mix64(seed + (counter+1) * 0x9E3779B97F4A7C15)
//   uniform01    : (next_u64() >> 11) * 2^-53, in [0, 1)
//   uniform(a,b) : a + (b-a) * uniform01()
//   uniform_int(n): next_u64() % n  (toy-scale modulo bias is accepted)
//   normal       : Box-Muller pair from two uniforms, cosine value first;
//                  the sine partner is cached and returned by the next call.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t draws() const { return counter_; }

    std::uint64_t next_u64() {
        std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::uint64_t uniform_int(std::uint64_t n) {
        if (n == 0) throw InputError("uniform_int: n must be positive");
        return next_u64() % n;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so the log is finite.
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        double u2 = uniform01();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Independent substream for a named stage; keeps draw sequences of
    // unrelated concerns (data, weights, shuffling) from interleaving.
    Rng fork(std::uint64_t stream_tag) const {
        Rng child(seed_ ^ (0x6A09E667F3BCC909ull + stream_tag * 0x9E3779B97F4A7C15ull));
        return child;
    }

  private:
    std::uint64_t seed_ = 0;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace svlm
