#pragma once

#include <cstdint>
#include <vector>

#include "handforge/assets.hpp"
#include "handforge/geometry.hpp"
#include "handforge/rng.hpp"
#include "handforge/scene.hpp"

namespace handforge {

// Axis-aligned lattice (multiples of step, anchored at the origin) clipped
// to the frustum, ordered z-major then v then u. Deterministic; empty when
// the step exceeds the frustum extent.
std::vector<Vec3> grid_positions(const Frustum& frustum, double step);

// Orientation sampling result; failed() signals an anchor too close to the
// frustum boundary for this mesh (no orientation satisfied containment
// within the rejection budget).
struct HandPoseResult {
    Pose pose;
    int rejections = 0;
    bool ok = false;
};

// Places palm_center at the anchor with roll/pitch limited per policy and
// yaw uniform in [0,360); rejection-resamples until both the fingertip and
// palm_center anchors stay inside the frustum.
HandPoseResult sample_hand_pose(Rng& rng, const Vec3& anchor_position, const GenerationPolicy& policy,
                                const CameraModel& camera, const Mesh& mesh);

// Relocates every distractor (and the body model) until its screen AABB is
// disjoint from every hand instance's; drops it after the attempt budget.
// Dropping is recorded in `events`, not an error.
void place_distractors(Rng& rng, SceneSpec& spec, const GenerationPolicy& policy,
                       const MeshLibrary& assets, int requested_count, bool want_body,
                       std::vector<FrameEvent>* events);

// 1-4 directional lights with uniform hemisphere directions facing the
// scene, plus exactly one ambient term written to the spec.
std::vector<DirectionalLight> sample_lights(Rng& rng, Rgb* ambient);

Material sample_material(Rng& rng, double unrealistic_bias);

// Deterministic function of (master_seed, frame_index); the per-frame
// generator state is derived by mixing both through a splittable hash.
// The draw order inside a frame is fixed and part of the dataset format.
SceneSpec build_frame_spec(std::uint64_t master_seed, std::uint64_t frame_index,
                           const GenerationPolicy& policy, const CameraModel& camera,
                           const MeshLibrary& assets, const std::vector<Vec3>& grid,
                           std::vector<FrameEvent>* events = nullptr);

}  // namespace handforge
