#ifndef HEGNN_RNG_HPP
#define HEGNN_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "hegnn/linalg.hpp"

namespace hegnn {

// Deterministic RNG. mt19937_64 output is pinned by the standard; the
// double conversions below avoid the implementation-defined distributions
// so that streams are bit-identical across platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; caches the second draw.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    Vec3 normal_vec3() {
        const double a = normal(), b = normal(), c = normal();
        return {a, b, c};
    }

    Vec3 unit_vec3() {
        for (;;) {
            Vec3 v = normal_vec3();
            const double n = v.norm();
            if (n > 1e-12) return v * (1.0 / n);
        }
    }

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

// Stable seed derivation for independent substreams (splitmix64 step).
inline uint64_t derive_seed(uint64_t seed, uint64_t stream) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace hegnn

#endif
