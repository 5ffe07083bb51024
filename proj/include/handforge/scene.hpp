#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "handforge/geometry.hpp"

namespace handforge {

// Linear RGB, each channel in [0,1].
struct Rgb {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    Rgb operator*(double s) const { return {r * s, g * s, b * s}; }
    Rgb operator*(const Rgb& o) const { return {r * o.r, g * o.g, b * o.b}; }
    Rgb operator+(const Rgb& o) const { return {r + o.r, g + o.g, b + o.b}; }
};

enum class TextureKind { Solid, Checker, Stripes, ValueNoise };

const char* texture_kind_name(TextureKind k);

// Procedural texture evaluated on local (object) coordinates; background
// textures are evaluated on normalized screen coordinates.
struct TextureDesc {
    TextureKind kind = TextureKind::Solid;
    std::array<Rgb, 2> palette{Rgb{0.5, 0.5, 0.5}, Rgb{0.5, 0.5, 0.5}};
    double scale = 0.05;          // feature size, meters (or screen units)
    Vec3 direction{1, 0, 0};      // stripe direction
    std::uint64_t noise_seed = 0;
};

Rgb evaluate_texture(const TextureDesc& tex, const Vec3& p);

struct Material {
    TextureDesc texture;
    double diffuse = 0.8;
    double specular = 0.0;
    double emissive = 0.0;
};

struct DirectionalLight {
    Vec3 direction{0, 0, 1};  // propagation direction, unit, toward the scene
    Rgb intensity{1, 1, 1};
};

struct HandInstance {
    int mesh_id = 0;     // index into the hand-mesh library
    int gesture_id = 0;  // gesture preset of that mesh
    bool mirrored = false;
    Pose pose;
    Material material;
};

struct DistractorInstance {
    int mesh_id = 0;  // index into the distractor-mesh library
    Pose pose;
    double scale = 1.0;
    Material material;
};

struct BodyInstance {
    Pose pose;
    Material material;
};

// Complete deterministic description of one frame.
struct SceneSpec {
    std::uint64_t frame_index = 0;
    CameraModel camera;
    std::vector<HandInstance> hand_instances;       // 0..2
    std::vector<DistractorInstance> distractors;
    std::optional<BodyInstance> body_model;
    std::vector<DirectionalLight> lights;           // 1..4
    Rgb ambient{0.2, 0.2, 0.2};
    Material background;
    std::uint64_t seed = 0;  // per-frame derived seed
};

struct GenerationPolicy {
    double grid_step_m = 0.02;
    double roll_limit_deg = 15.0;
    double pitch_limit_deg = 30.0;
    std::array<double, 3> instance_count_weights{0.10, 0.45, 0.45};
    int distractor_count_min = 2;
    int distractor_count_max = 8;
    int max_relocation_attempts = 50;
    int max_orientation_rejections = 1000;
    int max_anchor_retries = 8;
    double unrealistic_texture_bias = 0.75;
    double body_model_probability = 0.15;
    bool mirror_left_hands = false;
    double distractor_depth_min_m = 0.1;
    double distractor_depth_max_m = 1.5;
    double distractor_scale_min = 0.5;
    double distractor_scale_max = 1.5;

    void validate() const;  // throws std::invalid_argument with field name
};

// Per-frame generation events (dropped distractors, pose fallbacks,
// occluded instances) for the frame log.
struct FrameEvent {
    std::uint64_t frame_index = 0;
    std::string kind;    // "distractor_dropped", "instance_free_fallback", ...
    std::string detail;
};

}  // namespace handforge
