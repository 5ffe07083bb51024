#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace handforge {

constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalized(const Vec3& v) {
    double n = norm(v);
    return n > 0.0 ? v * (1.0 / n) : Vec3{0, 0, 0};
}

// Unit quaternion. Rotations use the camera frame convention: +x right,
// +y down, +z forward (into the scene), right-handed.
struct Quat {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    static Quat identity() { return {1, 0, 0, 0}; }

    static Quat from_axis_angle(const Vec3& axis, double angle_rad) {
        Vec3 a = normalized(axis);
        double h = angle_rad * 0.5;
        double s = std::sin(h);
        return {std::cos(h), a.x * s, a.y * s, a.z * s};
    }

    Quat operator*(const Quat& o) const {
        return {w * o.w - x * o.x - y * o.y - z * o.z,
                w * o.x + x * o.w + y * o.z - z * o.y,
                w * o.y - x * o.z + y * o.w + z * o.x,
                w * o.z + x * o.y - y * o.x + z * o.w};
    }

    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

    Quat normalized() const {
        double n = norm();
        return {w / n, x / n, y / n, z / n};
    }

    Vec3 rotate(const Vec3& v) const {
        // q * (0,v) * conj(q), expanded.
        Vec3 u{x, y, z};
        Vec3 t = cross(u, v) * 2.0;
        return v + t * w + cross(u, t);
    }
};

// Yaw about +y (vertical), then pitch about +x, then roll about +z
// (optical axis): R = Ry(yaw) * Rx(pitch) * Rz(roll).
Quat quat_from_ypr(double yaw_deg, double pitch_deg, double roll_deg);

struct YawPitchRoll {
    double yaw_deg = 0.0;
    double pitch_deg = 0.0;
    double roll_deg = 0.0;
};

YawPitchRoll quat_to_ypr(const Quat& q);

// Rigid transform: world = rotation * local + translation.
struct Pose {
    Vec3 translation{};
    Quat rotation = Quat::identity();

    Vec3 apply(const Vec3& p) const { return rotation.rotate(p) + translation; }

    double roll_deg() const { return quat_to_ypr(rotation).roll_deg; }
    double pitch_deg() const { return quat_to_ypr(rotation).pitch_deg; }
    double yaw_deg() const { return quat_to_ypr(rotation).yaw_deg; }
};

struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<Vec2> uv;  // optional, per-vertex when present
    std::map<std::string, Vec3> anchor_points;

    bool empty() const { return vertices.empty() || triangles.empty(); }
    // Throws std::invalid_argument on out-of-range triangle indices.
    void validate() const;
    bool has_hand_anchors() const {
        return anchor_points.count("fingertip") > 0 && anchor_points.count("palm_center") > 0;
    }
    Vec3 anchor(const std::string& name) const;
    // Mirror across the local yz-plane (x -> -x); anchors follow.
    Mesh mirrored_x() const;
};

struct CameraModel {
    int image_width = 320;
    int image_height = 256;
    double horizontal_fov_deg = 70.0;  // RealSense-L515-like default
    double vertical_fov_deg = 55.0;
    double near_depth_m = 0.2;
    double far_depth_m = 1.0;

    double focal_x() const { return (image_width * 0.5) / std::tan(deg_to_rad(horizontal_fov_deg) * 0.5); }
    double focal_y() const { return (image_height * 0.5) / std::tan(deg_to_rad(vertical_fov_deg) * 0.5); }
    double center_x() const { return image_width * 0.5; }
    double center_y() const { return image_height * 0.5; }

    void validate() const;  // throws std::invalid_argument
};

// Truncated pyramid with apex at the camera origin. Boundary points count
// as inside (closed set) so grid positions on edge planes are legal.
struct Frustum {
    double tan_half_h = 0.0;
    double tan_half_v = 0.0;
    double near_m = 0.0;
    double far_m = 0.0;

    static Frustum from_camera(const CameraModel& cam) {
        return {std::tan(deg_to_rad(cam.horizontal_fov_deg) * 0.5),
                std::tan(deg_to_rad(cam.vertical_fov_deg) * 0.5), cam.near_depth_m, cam.far_depth_m};
    }

    bool contains(const Vec3& p) const {
        constexpr double eps = 1e-9;
        return p.z >= near_m - eps && p.z <= far_m + eps && std::abs(p.x) <= p.z * tan_half_h + eps &&
               std::abs(p.y) <= p.z * tan_half_v + eps;
    }

    Vec3 centroid() const { return {0, 0, (near_m + far_m) * 0.5}; }
};

inline bool point_in_frustum(const Frustum& f, const Vec3& p) { return f.contains(p); }

struct ProjectedPoint {
    double u = 0.0;
    double v = 0.0;
    double depth = 0.0;  // camera-axis distance, meters
};

// Pinhole projection; nullopt when the point is at or behind the camera
// (depth <= 0). u grows right, v grows down, (0,0) is the top-left image
// corner; coordinates are continuous and may fall outside the image.
std::optional<ProjectedPoint> project_point(const CameraModel& camera, const Vec3& p);

// Continuous pixel rectangle clipped to the image, x1 >= x0, y1 >= y0.
// Zero-area rectangles are valid (single projected vertex).
struct PixelRect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    bool intersects(const PixelRect& o) const {
        return x0 <= o.x1 && o.x0 <= x1 && y0 <= o.y1 && o.y0 <= y1;
    }
};

// Tight screen-space bound of the posed mesh's projected vertices, clipped
// to the image; nullopt when nothing lands in front of the camera within
// the image bounds. Throws std::invalid_argument for an empty mesh.
std::optional<PixelRect> screen_aabb(const CameraModel& camera, const Mesh& mesh, const Pose& pose);

}  // namespace handforge
