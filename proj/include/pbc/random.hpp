#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace pbc {

/// Seeded stream with platform-independent derived distributions.
/// std::mt19937_64 output is fully specified by the standard; the
/// distributions layered on top of it here are too, unlike the
/// std::*_distribution family.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = n * (UINT64_MAX / n);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    /// Standard normal via Box-Muller (one value per call, second discarded).
    double normal() {
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Uniform point in the D-ball of the given radius.
    std::vector<double> in_ball(std::size_t dim, double radius) {
        std::vector<double> v(dim);
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (auto& c : v) {
                c = normal();
                norm2 += c * c;
            }
        } while (norm2 == 0.0);
        const double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(dim)) / std::sqrt(norm2);
        for (auto& c : v) c *= r;
        return v;
    }

    /// Uniform point on the unit sphere S^{dim-1}.
    std::vector<double> on_sphere(std::size_t dim) {
        std::vector<double> v(dim);
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (auto& c : v) {
                c = normal();
                norm2 += c * c;
            }
        } while (norm2 == 0.0);
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& c : v) c *= inv;
        return v;
    }

private:
    std::mt19937_64 engine_;
};

/// Derives an independent stream seed from a base seed and a salt
/// (splitmix64 finalizer).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace pbc
