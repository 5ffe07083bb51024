#include "handforge/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace handforge {

Quat quat_from_ypr(double yaw_deg, double pitch_deg, double roll_deg) {
    Quat qy = Quat::from_axis_angle({0, 1, 0}, deg_to_rad(yaw_deg));
    Quat qx = Quat::from_axis_angle({1, 0, 0}, deg_to_rad(pitch_deg));
    Quat qz = Quat::from_axis_angle({0, 0, 1}, deg_to_rad(roll_deg));
    return (qy * qx * qz).normalized();
}

YawPitchRoll quat_to_ypr(const Quat& qin) {
    Quat q = qin.normalized();
    // Rotation matrix entries for R = Ry(yaw) * Rx(pitch) * Rz(roll).
    double m02 = 2.0 * (q.x * q.z + q.w * q.y);
    double m12 = 2.0 * (q.y * q.z - q.w * q.x);
    double m22 = 1.0 - 2.0 * (q.x * q.x + q.y * q.y);
    double m10 = 2.0 * (q.x * q.y + q.w * q.z);
    double m11 = 1.0 - 2.0 * (q.x * q.x + q.z * q.z);

    YawPitchRoll out;
    double s = std::clamp(-m12, -1.0, 1.0);
    out.pitch_deg = rad_to_deg(std::asin(s));
    if (std::abs(s) > 1.0 - 1e-12) {
        // Gimbal lock: fold everything into yaw.
        double m01 = 2.0 * (q.x * q.y - q.w * q.z);
        double m00 = 1.0 - 2.0 * (q.y * q.y + q.z * q.z);
        out.yaw_deg = rad_to_deg(std::atan2(-m01, m00));
        out.roll_deg = 0.0;
    } else {
        out.yaw_deg = rad_to_deg(std::atan2(m02, m22));
        out.roll_deg = rad_to_deg(std::atan2(m10, m11));
    }
    return out;
}

void Mesh::validate() const {
    int n = static_cast<int>(vertices.size());
    for (const auto& t : triangles) {
        for (int idx : t) {
            if (idx < 0 || idx >= n) {
                throw std::invalid_argument("mesh: triangle index out of range");
            }
        }
    }
    if (!uv.empty() && uv.size() != vertices.size()) {
        throw std::invalid_argument("mesh: uv count does not match vertex count");
    }
}

Vec3 Mesh::anchor(const std::string& name) const {
    auto it = anchor_points.find(name);
    if (it == anchor_points.end()) {
        throw std::invalid_argument("mesh: missing anchor '" + name + "'");
    }
    return it->second;
}

Mesh Mesh::mirrored_x() const {
    Mesh m = *this;
    for (auto& v : m.vertices) v.x = -v.x;
    for (auto& [name, a] : m.anchor_points) a.x = -a.x;
    return m;
}

void CameraModel::validate() const {
    if (image_width <= 0 || image_height <= 0) {
        throw std::invalid_argument("camera: image dimensions must be positive");
    }
    if (!(near_depth_m > 0.0 && near_depth_m < far_depth_m)) {
        throw std::invalid_argument("camera: require 0 < near_depth < far_depth");
    }
    if (!(horizontal_fov_deg > 0.0 && horizontal_fov_deg < 180.0) ||
        !(vertical_fov_deg > 0.0 && vertical_fov_deg < 180.0)) {
        throw std::invalid_argument("camera: FOV must be in (0, 180) degrees");
    }
}

std::optional<ProjectedPoint> project_point(const CameraModel& camera, const Vec3& p) {
    if (p.z <= 0.0) return std::nullopt;
    ProjectedPoint out;
    out.u = camera.center_x() + camera.focal_x() * p.x / p.z;
    out.v = camera.center_y() + camera.focal_y() * p.y / p.z;
    out.depth = p.z;
    return out;
}

std::optional<PixelRect> screen_aabb(const CameraModel& camera, const Mesh& mesh, const Pose& pose) {
    if (mesh.empty()) throw std::invalid_argument("screen_aabb: empty mesh");

    double min_u = std::numeric_limits<double>::infinity();
    double max_u = -std::numeric_limits<double>::infinity();
    double min_v = std::numeric_limits<double>::infinity();
    double max_v = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (const auto& vtx : mesh.vertices) {
        auto proj = project_point(camera, pose.apply(vtx));
        if (!proj) continue;
        any = true;
        min_u = std::min(min_u, proj->u);
        max_u = std::max(max_u, proj->u);
        min_v = std::min(min_v, proj->v);
        max_v = std::max(max_v, proj->v);
    }
    if (!any) return std::nullopt;

    double w = static_cast<double>(camera.image_width);
    double h = static_cast<double>(camera.image_height);
    if (max_u < 0.0 || min_u > w || max_v < 0.0 || min_v > h) return std::nullopt;

    PixelRect r;
    r.x0 = std::clamp(min_u, 0.0, w);
    r.x1 = std::clamp(max_u, 0.0, w);
    r.y0 = std::clamp(min_v, 0.0, h);
    r.y1 = std::clamp(max_v, 0.0, h);
    return r;
}

}  // namespace handforge
