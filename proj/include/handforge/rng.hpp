#pragma once

#include <cstdint>

#include "handforge/geometry.hpp"

namespace handforge {

// SplitMix64. Fixed generator: changing it is a breaking change to dataset
// reproducibility, so all randomness in the project flows through this
// type and the documented per-frame derivation below. No std::random
// distributions are used anywhere (their outputs are not portable).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Per-frame stream: mixes the master seed and frame index through the
    // SplitMix64 finalizer so frames are independent and order-free.
    static Rng for_frame(std::uint64_t master_seed, std::uint64_t frame_index) {
        return Rng(mix(master_seed ^ mix(frame_index + 0x9E3779B97F4A7C15ULL)));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix_from(state_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform integer in [lo, hi] inclusive (rejection-free modulo bias is
    // negligible for the small ranges used here, but use rejection anyway).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % range + 1) % range;
        std::uint64_t v = next_u64();
        while (v > limit) v = next_u64();
        return lo + static_cast<std::int64_t>(v % range);
    }

    // Index drawn from unnormalized weights.
    int weighted_index(const double* weights, int count) {
        double total = 0.0;
        for (int i = 0; i < count; ++i) total += weights[i];
        double r = next_double() * total;
        double acc = 0.0;
        for (int i = 0; i < count; ++i) {
            acc += weights[i];
            if (r < acc) return i;
        }
        return count - 1;
    }

    // Uniform direction on the unit hemisphere with positive z.
    Vec3 hemisphere_direction() {
        double z = next_double();           // cos(theta) uniform in [0,1)
        double phi = uniform(0.0, 2.0 * kPi);
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        Vec3 d{r * std::cos(phi), r * std::sin(phi), z};
        return normalized(d);
    }

    // Shoemake's uniform random rotation.
    Quat rotation() {
        double u1 = next_double(), u2 = next_double(), u3 = next_double();
        double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
        return Quat{a * std::sin(2.0 * kPi * u2), a * std::cos(2.0 * kPi * u2),
                    b * std::sin(2.0 * kPi * u3), b * std::cos(2.0 * kPi * u3)}
            .normalized();
    }

    static std::uint64_t mix(std::uint64_t x) { return mix_from(x + 0x9E3779B97F4A7C15ULL); }

  private:
    static std::uint64_t mix_from(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace handforge
