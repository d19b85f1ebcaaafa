#pragma once
// Deterministic RNG + samplers. The simulation's reproducibility contract is
// "same seed, same bytes", so we keep the whole stream under our control
// instead of relying on implementation-defined std:: distributions.

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace wcb {

// splitmix64: seed scrambler (also used to derive per-replication streams).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ engine.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform double in [0, 1).
    double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n). Rejection-free bounded draw (Lemire).
    std::uint64_t bounded(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::bounded: n must be > 0");
        // 128-bit multiply-shift; bias is negligible for simulation use and
        // the mapping is fully deterministic.
        unsigned __int128 m = (unsigned __int128)next_u64() * n;
        return (std::uint64_t)(m >> 64);
    }

    double exponential(double mean) {
        double u;
        do { u = uniform01(); } while (u <= 0.0);
        return -mean * std::log(u);
    }

    // Box-Muller; consumes two uniforms per pair, caches the spare.
    double normal(double mu, double sigma) {
        if (have_spare_) {
            have_spare_ = false;
            return mu + sigma * spare_;
        }
        double u1, u2;
        do { u1 = uniform01(); } while (u1 <= 0.0);
        u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return mu + sigma * r * std::cos(a);
    }

    // Knuth's product method, chunked so large rates stay in range. Cost is
    // O(lambda) uniforms, which is fine at the arrival rates we simulate.
    long poisson(double lambda) {
        if (!(lambda >= 0.0)) throw std::invalid_argument("Rng::poisson: lambda must be >= 0");
        long total = 0;
        while (lambda > 0.0) {
            const double chunk = lambda > 500.0 ? 500.0 : lambda;
            lambda -= chunk;
            const double limit = std::exp(-chunk);
            double prod = uniform01();
            long k = 0;
            while (prod > limit) {
                ++k;
                prod *= uniform01();
            }
            total += k;
        }
        return total;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4]{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace wcb
