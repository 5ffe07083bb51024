#include "handforge/randomizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace handforge {

void GenerationPolicy::validate() const {
    if (!(grid_step_m > 0.0)) throw std::invalid_argument("policy.grid_step_m: must be > 0");
    if (roll_limit_deg < 0.0 || roll_limit_deg > 180.0)
        throw std::invalid_argument("policy.roll_limit_deg: must be in [0, 180]");
    if (pitch_limit_deg < 0.0 || pitch_limit_deg > 180.0)
        throw std::invalid_argument("policy.pitch_limit_deg: must be in [0, 180]");
    double wsum = instance_count_weights[0] + instance_count_weights[1] + instance_count_weights[2];
    if (std::abs(wsum - 1.0) > 1e-9)
        throw std::invalid_argument("policy.instance_count_weights: must sum to 1");
    for (double w : instance_count_weights) {
        if (w < 0.0) throw std::invalid_argument("policy.instance_count_weights: must be non-negative");
    }
    if (distractor_count_min < 0 || distractor_count_max < distractor_count_min)
        throw std::invalid_argument("policy.distractor_count_range: require 0 <= min <= max");
    if (max_relocation_attempts < 1)
        throw std::invalid_argument("policy.max_relocation_attempts: must be >= 1");
    if (max_orientation_rejections < 1)
        throw std::invalid_argument("policy.max_orientation_rejections: must be >= 1");
    if (unrealistic_texture_bias < 0.0 || unrealistic_texture_bias > 1.0)
        throw std::invalid_argument("policy.unrealistic_texture_bias: must be in [0, 1]");
    if (body_model_probability < 0.0 || body_model_probability > 1.0)
        throw std::invalid_argument("policy.body_model_probability: must be in [0, 1]");
    if (!(distractor_depth_min_m > 0.0) || distractor_depth_max_m < distractor_depth_min_m)
        throw std::invalid_argument("policy.distractor_depth_range: require 0 < min <= max");
    if (!(distractor_scale_min > 0.0) || distractor_scale_max < distractor_scale_min)
        throw std::invalid_argument("policy.distractor_scale_range: require 0 < min <= max");
}

std::vector<Vec3> grid_positions(const Frustum& frustum, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("grid_positions: step must be > 0");
    std::vector<Vec3> out;
    constexpr double eps = 1e-9;

    auto first_index = [&](double lo) { return static_cast<long>(std::ceil(lo / step - eps)); };
    auto last_index = [&](double hi) { return static_cast<long>(std::floor(hi / step + eps)); };

    for (long k = first_index(frustum.near_m); k <= last_index(frustum.far_m); ++k) {
        double z = static_cast<double>(k) * step;
        double half_w = z * frustum.tan_half_h;
        double half_h = z * frustum.tan_half_v;
        for (long j = first_index(-half_h); j <= last_index(half_h); ++j) {
            for (long i = first_index(-half_w); i <= last_index(half_w); ++i) {
                Vec3 p{static_cast<double>(i) * step, static_cast<double>(j) * step, z};
                if (frustum.contains(p)) out.push_back(p);
            }
        }
    }
    return out;
}

HandPoseResult sample_hand_pose(Rng& rng, const Vec3& anchor_position, const GenerationPolicy& policy,
                                const CameraModel& camera, const Mesh& mesh) {
    Frustum frustum = Frustum::from_camera(camera);
    Vec3 palm_local = mesh.anchor("palm_center");
    Vec3 tip_local = mesh.anchor("fingertip");

    HandPoseResult result;
    for (int round = 0; round < policy.max_orientation_rejections; ++round) {
        double yaw = rng.uniform(0.0, 360.0);
        double pitch = rng.uniform(-policy.pitch_limit_deg, policy.pitch_limit_deg);
        double roll = rng.uniform(-policy.roll_limit_deg, policy.roll_limit_deg);

        Pose pose;
        pose.rotation = quat_from_ypr(yaw, pitch, roll);
        pose.translation = anchor_position - pose.rotation.rotate(palm_local);

        if (frustum.contains(pose.apply(palm_local)) && frustum.contains(pose.apply(tip_local))) {
            result.pose = pose;
            result.rejections = round;
            result.ok = true;
            return result;
        }
    }
    result.rejections = policy.max_orientation_rejections;
    result.ok = false;
    return result;
}

std::vector<DirectionalLight> sample_lights(Rng& rng, Rgb* ambient) {
    int count = static_cast<int>(rng.uniform_int(1, 4));
    std::vector<DirectionalLight> lights;
    lights.reserve(count);
    for (int i = 0; i < count; ++i) {
        DirectionalLight l;
        l.direction = rng.hemisphere_direction();
        l.intensity = {rng.uniform(0.2, 1.0), rng.uniform(0.2, 1.0), rng.uniform(0.2, 1.0)};
        lights.push_back(l);
    }
    if (ambient) *ambient = {rng.uniform(0.05, 0.5), rng.uniform(0.05, 0.5), rng.uniform(0.05, 0.5)};
    return lights;
}

Material sample_material(Rng& rng, double unrealistic_bias) {
    Material mat;
    bool patterned = rng.next_double() < unrealistic_bias;
    if (patterned) {
        static const TextureKind kinds[3] = {TextureKind::Checker, TextureKind::Stripes,
                                             TextureKind::ValueNoise};
        mat.texture.kind = kinds[rng.uniform_int(0, 2)];
    } else {
        mat.texture.kind = TextureKind::Solid;
    }
    for (auto& c : mat.texture.palette) {
        c = {rng.next_double(), rng.next_double(), rng.next_double()};
    }
    mat.texture.scale = rng.uniform(0.01, 0.12);
    double az = rng.uniform(0.0, 2.0 * kPi);
    double el = rng.uniform(-0.5, 0.5);
    mat.texture.direction = normalized(Vec3{std::cos(az), std::sin(az), el});
    mat.texture.noise_seed = rng.next_u64();
    mat.diffuse = rng.uniform(0.4, 1.0);
    mat.specular = rng.uniform(0.0, 0.8);
    mat.emissive = rng.uniform(0.0, 0.25);
    return mat;
}

namespace {

// Screen AABBs of all hand instances currently in the spec.
std::vector<PixelRect> hand_rects(const SceneSpec& spec, const MeshLibrary& assets) {
    std::vector<PixelRect> rects;
    for (const auto& hand : spec.hand_instances) {
        Mesh mesh = assets.hands()[hand.mesh_id].mesh;
        if (hand.mirrored) mesh = mesh.mirrored_x();
        auto rect = screen_aabb(spec.camera, mesh, hand.pose);
        if (rect) rects.push_back(*rect);
    }
    return rects;
}

bool overlaps_any(const std::optional<PixelRect>& rect, const std::vector<PixelRect>& rects) {
    if (!rect) return false;  // fully outside the view cannot overlap
    return std::any_of(rects.begin(), rects.end(),
                       [&](const PixelRect& r) { return rect->intersects(r); });
}

// Random position in the lateral frustum cross-section at a depth drawn
// from the expanded distractor range (so objects may sit nearer or farther
// than any hand).
Vec3 sample_distractor_position(Rng& rng, const Frustum& frustum, const GenerationPolicy& policy) {
    double z = rng.uniform(policy.distractor_depth_min_m, policy.distractor_depth_max_m);
    double half_w = z * frustum.tan_half_h;
    double half_h = z * frustum.tan_half_v;
    return {rng.uniform(-half_w, half_w), rng.uniform(-half_h, half_h), z};
}

Mesh scaled_mesh(const Mesh& mesh, double scale) {
    Mesh m = mesh;
    for (auto& v : m.vertices) v = v * scale;
    return m;
}

}  // namespace

void place_distractors(Rng& rng, SceneSpec& spec, const GenerationPolicy& policy,
                       const MeshLibrary& assets, int requested_count, bool want_body,
                       std::vector<FrameEvent>* events) {
    Frustum frustum = Frustum::from_camera(spec.camera);
    std::vector<PixelRect> forbidden = hand_rects(spec, assets);

    for (int d = 0; d < requested_count; ++d) {
        DistractorInstance inst;
        inst.mesh_id = static_cast<int>(rng.uniform_int(0, static_cast<int>(assets.distractors().size()) - 1));
        inst.scale = rng.uniform(policy.distractor_scale_min, policy.distractor_scale_max);
        inst.material = sample_material(rng, policy.unrealistic_texture_bias);
        Mesh mesh = scaled_mesh(assets.distractors()[inst.mesh_id].mesh, inst.scale);

        bool placed = false;
        for (int attempt = 0; attempt < policy.max_relocation_attempts; ++attempt) {
            inst.pose.translation = sample_distractor_position(rng, frustum, policy);
            inst.pose.rotation = rng.rotation();
            if (!overlaps_any(screen_aabb(spec.camera, mesh, inst.pose), forbidden)) {
                placed = true;
                break;
            }
        }
        if (placed) {
            spec.distractors.push_back(inst);
        } else if (events) {
            events->push_back({spec.frame_index, "distractor_dropped",
                               assets.distractors()[inst.mesh_id].name});
        }
    }

    if (want_body) {
        BodyInstance body;
        body.material = sample_material(rng, policy.unrealistic_texture_bias);
        bool placed = false;
        for (int attempt = 0; attempt < policy.max_relocation_attempts; ++attempt) {
            double z = rng.uniform(std::max(0.7, policy.distractor_depth_min_m),
                                   policy.distractor_depth_max_m);
            double half_w = z * frustum.tan_half_h;
            body.pose.translation = {rng.uniform(-half_w, half_w), rng.uniform(-0.1, 0.25), z};
            body.pose.rotation = quat_from_ypr(rng.uniform(-60.0, 60.0), 0.0, rng.uniform(-15.0, 15.0));
            if (!overlaps_any(screen_aabb(spec.camera, assets.body(), body.pose), forbidden)) {
                placed = true;
                break;
            }
        }
        if (placed) {
            spec.body_model = body;
        } else if (events) {
            events->push_back({spec.frame_index, "body_dropped", ""});
        }
    }
}

SceneSpec build_frame_spec(std::uint64_t master_seed, std::uint64_t frame_index,
                           const GenerationPolicy& policy, const CameraModel& camera,
                           const MeshLibrary& assets, const std::vector<Vec3>& grid,
                           std::vector<FrameEvent>* events) {
    if (assets.hands().empty()) throw std::invalid_argument("build_frame_spec: no hand meshes");
    if (assets.distractors().empty()) throw std::invalid_argument("build_frame_spec: no distractor meshes");
    if (grid.empty()) throw std::invalid_argument("build_frame_spec: empty position grid");

    Rng rng = Rng::for_frame(master_seed, frame_index);

    SceneSpec spec;
    spec.frame_index = frame_index;
    spec.camera = camera;
    spec.seed = Rng::mix(master_seed ^ Rng::mix(frame_index + 0x9E3779B97F4A7C15ULL));

    // Draw order is fixed: hand count, hands (mesh/mirror/pose/material),
    // distractor count, distractors, body, lights, background.
    int hand_count = rng.weighted_index(policy.instance_count_weights.data(), 3);

    std::size_t first_cell = static_cast<std::size_t>(frame_index % grid.size());
    for (int h = 0; h < hand_count; ++h) {
        HandInstance hand;
        hand.mesh_id = static_cast<int>(rng.uniform_int(0, static_cast<int>(assets.hands().size()) - 1));
        hand.gesture_id = hand.mesh_id;
        hand.mirrored = policy.mirror_left_hands && rng.next_double() < 0.5;
        Mesh mesh = assets.hands()[hand.mesh_id].mesh;
        if (hand.mirrored) mesh = mesh.mirrored_x();

        bool anchored = false;
        for (int retry = 0; retry < policy.max_anchor_retries && !anchored; ++retry) {
            Vec3 anchor;
            if (h == 0) {
                // First hand traverses the grid; retries after a pose
                // failure draw a fresh cell.
                anchor = retry == 0 ? grid[first_cell] : grid[rng.uniform_int(0, grid.size() - 1)];
            } else {
                std::size_t cell = static_cast<std::size_t>(rng.uniform_int(0, grid.size() - 1));
                if (cell == first_cell) cell = (cell + 1) % grid.size();
                anchor = grid[cell];
            }
            HandPoseResult pr = sample_hand_pose(rng, anchor, policy, camera, mesh);
            if (!pr.ok) continue;
            hand.pose = pr.pose;
            if (h == 1) {
                // Second hand must not overlap the first in screen space.
                auto first_rect = hand_rects(spec, assets);
                auto rect = screen_aabb(camera, mesh, hand.pose);
                if (overlaps_any(rect, first_rect)) continue;
            }
            anchored = true;
        }
        if (!anchored) {
            if (events) {
                events->push_back({frame_index,
                                   h == 0 ? "instance_free_fallback" : "second_hand_dropped",
                                   "pose sampling exhausted"});
            }
            if (h == 0) hand_count = 0;  // instance-free frame
            break;
        }
        hand.material = sample_material(rng, policy.unrealistic_texture_bias);
        spec.hand_instances.push_back(hand);
    }

    int distractor_count =
        static_cast<int>(rng.uniform_int(policy.distractor_count_min, policy.distractor_count_max));
    bool want_body = rng.next_double() < policy.body_model_probability;
    place_distractors(rng, spec, policy, assets, distractor_count, want_body, events);

    spec.lights = sample_lights(rng, &spec.ambient);
    spec.background = sample_material(rng, policy.unrealistic_texture_bias);
    // Background texture space is the unit screen; rescale accordingly.
    spec.background.texture.scale = rng.uniform(0.05, 0.35);
    return spec;
}

}  // namespace handforge
