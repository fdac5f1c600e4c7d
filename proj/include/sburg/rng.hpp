#pragma once

#include <cstdint>
#include <cmath>

namespace sburg {

// SplitMix64 mixing step. Used both as a stand-alone bit mixer and to
// expand a 64-bit seed into engine state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives the per-worker seed from a base seed and a worker index.
// Stable contract: seed and index are mixed through two SplitMix64 steps,
// which is injective in the index for a fixed base seed (the first step is
// a bijection of seed+index*phi, the second a bijection of that).
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t worker_index) {
    std::uint64_t s = base_seed;
    std::uint64_t a = splitmix64(s);
    s = a ^ (worker_index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
    return splitmix64(s);
}

// xoshiro256** by Blackman & Vigna. Self-contained so every stream is
// bit-reproducible regardless of platform or standard library.
class Xoshiro256 {
  public:
    explicit Xoshiro256(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

// A deterministic random stream: uniforms, normals, exponentials.
// One stream per trajectory/worker; never shared across threads.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_.next(); }

    // Uniform in (0,1): 53-bit mantissa, never exactly 0.
    double uniform01() {
        return (static_cast<double>(eng_.next() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Marsaglia's polar method (no libm trig).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, r2;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            r2 = u * u + v * v;
        } while (r2 >= 1.0 || r2 == 0.0);
        const double f = std::sqrt(-2.0 * std::log(r2) / r2);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    double exponential() { return -std::log(uniform01()); }

  private:
    Xoshiro256 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace sburg
