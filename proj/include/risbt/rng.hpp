#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace risbt {

// splitmix64 step; used to derive independent sub-stream seeds from a
// master seed without correlations between (frame, draw) cells.
inline uint64_t mix_seed(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b = 0) {
    return mix_seed(mix_seed(master ^ mix_seed(a)) ^ mix_seed(~b));
}

class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

    // CN(0, 1): unit-variance circularly symmetric complex Gaussian.
    std::complex<double> complex_gaussian() {
        static constexpr double half = 0.7071067811865476;
        return {half * normal(), half * normal()};
    }

    uint64_t raw() { return engine_(); }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace risbt
