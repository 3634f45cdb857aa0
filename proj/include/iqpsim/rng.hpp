#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace iqpsim {

// splitmix64 finalizer; used both for seed derivation and for whitening
// user-supplied seeds before they reach the engine.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Deterministic seed splitting: child streams are indexed by up to three
// tags (trial, variant, run, ...). Every worker derives its own seed this
// way, so results do not depend on scheduling order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = mix64(master ^ 0x6a09e667f3bcc909ull);
    s = mix64(s ^ a);
    s = mix64(s ^ b);
    s = mix64(s ^ c);
    return s;
}

// Random source with self-contained samplers. The distributions are
// implemented here rather than taken from <random> so that a given seed
// produces the same stream on every standard library.
class RandomSource {
  public:
    explicit RandomSource(std::uint64_t seed) : engine_(mix64(seed)) {}

    std::uint64_t u64() { return engine_(); }

    // Uniform in [0, 1).
    double real() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return real() < p;
    }

    // Uniform integer in [lo, hi], inclusive.
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
        std::uint64_t span = hi - lo + 1;  // hi >= lo required
        if (span == 0) return u64();       // full 64-bit range
        std::uint64_t limit = std::uint64_t(-span) % span;  // rejection bound
        std::uint64_t r;
        do {
            r = u64();
        } while (r < limit);
        return lo + r % span;
    }

    bool bit() { return (u64() >> 63) != 0; }

    // Poisson(lambda) by inversion. Large means are split into chunks so the
    // running product never underflows; the sum of independent Poisson draws
    // has the exact target distribution.
    std::uint64_t poisson(double lambda) {
        std::uint64_t total = 0;
        while (lambda > 30.0) {
            total += poisson_small(30.0);
            lambda -= 30.0;
        }
        return total + poisson_small(lambda);
    }

  private:
    std::uint64_t poisson_small(double lambda) {
        if (lambda <= 0.0) return 0;
        double u = real();
        double p = std::exp(-lambda);
        double cum = p;
        std::uint64_t k = 0;
        while (u >= cum && k < 200) {
            ++k;
            p *= lambda / static_cast<double>(k);
            cum += p;
        }
        return k;
    }

    std::mt19937_64 engine_;
};

}  // namespace iqpsim
