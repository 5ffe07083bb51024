#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "handforge/rng.hpp"
#include "handforge/scene.hpp"

namespace handforge {

const char* texture_kind_name(TextureKind k) {
    switch (k) {
        case TextureKind::Solid: return "solid";
        case TextureKind::Checker: return "checker";
        case TextureKind::Stripes: return "stripes";
        case TextureKind::ValueNoise: return "value-noise";
    }
    throw std::invalid_argument("texture_kind_name: unknown kind");
}

namespace {

std::int64_t floor_div(double v) { return static_cast<std::int64_t>(std::floor(v)); }

double lattice_value(std::uint64_t seed, std::int64_t ix, std::int64_t iy, std::int64_t iz) {
    std::uint64_t h = seed;
    h = Rng::mix(h ^ static_cast<std::uint64_t>(ix) * 0x8DA6B343ULL);
    h = Rng::mix(h ^ static_cast<std::uint64_t>(iy) * 0xD8163841ULL);
    h = Rng::mix(h ^ static_cast<std::uint64_t>(iz) * 0xCB1AB31FULL);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// Trilinear value noise in [0,1].
double value_noise(std::uint64_t seed, const Vec3& p) {
    std::int64_t ix = floor_div(p.x), iy = floor_div(p.y), iz = floor_div(p.z);
    double fx = smoothstep(p.x - static_cast<double>(ix));
    double fy = smoothstep(p.y - static_cast<double>(iy));
    double fz = smoothstep(p.z - static_cast<double>(iz));

    double acc = 0.0;
    for (int dz = 0; dz <= 1; ++dz) {
        for (int dy = 0; dy <= 1; ++dy) {
            for (int dx = 0; dx <= 1; ++dx) {
                double w = (dx ? fx : 1.0 - fx) * (dy ? fy : 1.0 - fy) * (dz ? fz : 1.0 - fz);
                acc += w * lattice_value(seed, ix + dx, iy + dy, iz + dz);
            }
        }
    }
    return acc;
}

Rgb lerp(const Rgb& a, const Rgb& b, double t) {
    return {a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t};
}

}  // namespace

Rgb evaluate_texture(const TextureDesc& tex, const Vec3& p) {
    double s = tex.scale > 0.0 ? tex.scale : 1.0;
    switch (tex.kind) {
        case TextureKind::Solid:
            return tex.palette[0];
        case TextureKind::Checker: {
            std::int64_t parity = floor_div(p.x / s) + floor_div(p.y / s) + floor_div(p.z / s);
            return tex.palette[((parity % 2) + 2) % 2];
        }
        case TextureKind::Stripes: {
            std::int64_t band = floor_div(dot(p, tex.direction) / s);
            return tex.palette[((band % 2) + 2) % 2];
        }
        case TextureKind::ValueNoise: {
            double t = value_noise(tex.noise_seed, p * (1.0 / s));
            return lerp(tex.palette[0], tex.palette[1], t);
        }
    }
    throw std::invalid_argument("evaluate_texture: unknown kind");
}

}  // namespace handforge
