#include "handforge/assets.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace handforge {

namespace {

void append_triangle(Mesh& m, int a, int b, int c) { m.triangles.push_back({a, b, c}); }

// Orthonormal basis completing the given unit axis.
void basis_from_axis(const Vec3& axis, Vec3& u, Vec3& v) {
    Vec3 ref = std::abs(axis.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
    u = normalized(cross(ref, axis));
    v = cross(axis, u);
}

void append_box(Mesh& m, const Vec3& center, const Vec3& half, const Quat& rot = Quat::identity()) {
    int base = static_cast<int>(m.vertices.size());
    for (int i = 0; i < 8; ++i) {
        Vec3 corner{(i & 1) ? half.x : -half.x, (i & 2) ? half.y : -half.y, (i & 4) ? half.z : -half.z};
        m.vertices.push_back(rot.rotate(corner) + center);
    }
    static const int faces[6][4] = {{0, 1, 3, 2}, {4, 6, 7, 5}, {0, 4, 5, 1},
                                    {2, 3, 7, 6}, {0, 2, 6, 4}, {1, 5, 7, 3}};
    for (const auto& f : faces) {
        append_triangle(m, base + f[0], base + f[1], base + f[2]);
        append_triangle(m, base + f[0], base + f[2], base + f[3]);
    }
}

// Capped prism between p0 and p1; "capsule" proxy for finger segments.
void append_cylinder(Mesh& m, const Vec3& p0, const Vec3& p1, double radius, int sides = 6) {
    Vec3 axis = normalized(p1 - p0);
    Vec3 u, v;
    basis_from_axis(axis, u, v);
    int base = static_cast<int>(m.vertices.size());
    for (int ring = 0; ring < 2; ++ring) {
        Vec3 c = ring == 0 ? p0 : p1;
        for (int i = 0; i < sides; ++i) {
            double a = 2.0 * kPi * i / sides;
            m.vertices.push_back(c + u * (radius * std::cos(a)) + v * (radius * std::sin(a)));
        }
    }
    int c0 = static_cast<int>(m.vertices.size());
    m.vertices.push_back(p0);
    int c1 = static_cast<int>(m.vertices.size());
    m.vertices.push_back(p1);
    for (int i = 0; i < sides; ++i) {
        int j = (i + 1) % sides;
        append_triangle(m, base + i, base + j, base + sides + i);
        append_triangle(m, base + j, base + sides + j, base + sides + i);
        append_triangle(m, c0, base + j, base + i);
        append_triangle(m, c1, base + sides + i, base + sides + j);
    }
}

void append_uv_sphere(Mesh& m, const Vec3& center, double radius, int rings = 6, int sectors = 10) {
    int base = static_cast<int>(m.vertices.size());
    for (int r = 0; r <= rings; ++r) {
        double phi = kPi * r / rings;
        for (int s = 0; s < sectors; ++s) {
            double theta = 2.0 * kPi * s / sectors;
            m.vertices.push_back(center + Vec3{radius * std::sin(phi) * std::cos(theta),
                                               radius * std::sin(phi) * std::sin(theta),
                                               radius * std::cos(phi)});
        }
    }
    for (int r = 0; r < rings; ++r) {
        for (int s = 0; s < sectors; ++s) {
            int s1 = (s + 1) % sectors;
            int a = base + r * sectors + s;
            int b = base + r * sectors + s1;
            int c = base + (r + 1) * sectors + s;
            int d = base + (r + 1) * sectors + s1;
            append_triangle(m, a, b, c);
            append_triangle(m, b, d, c);
        }
    }
}

void append_cone(Mesh& m, const Vec3& base_center, const Vec3& apex, double radius, int sides = 10) {
    Vec3 axis = normalized(apex - base_center);
    Vec3 u, v;
    basis_from_axis(axis, u, v);
    int base = static_cast<int>(m.vertices.size());
    for (int i = 0; i < sides; ++i) {
        double a = 2.0 * kPi * i / sides;
        m.vertices.push_back(base_center + u * (radius * std::cos(a)) + v * (radius * std::sin(a)));
    }
    int apex_idx = static_cast<int>(m.vertices.size());
    m.vertices.push_back(apex);
    int center_idx = static_cast<int>(m.vertices.size());
    m.vertices.push_back(base_center);
    for (int i = 0; i < sides; ++i) {
        int j = (i + 1) % sides;
        append_triangle(m, base + i, base + j, apex_idx);
        append_triangle(m, base + j, base + i, center_idx);
    }
}

void append_torus(Mesh& m, const Vec3& center, double major, double minor, int segs = 12, int sides = 6) {
    int base = static_cast<int>(m.vertices.size());
    for (int i = 0; i < segs; ++i) {
        double a = 2.0 * kPi * i / segs;
        Vec3 ring_center{major * std::cos(a), major * std::sin(a), 0.0};
        Vec3 radial = normalized(ring_center);
        for (int j = 0; j < sides; ++j) {
            double b = 2.0 * kPi * j / sides;
            Vec3 p = ring_center + radial * (minor * std::cos(b)) + Vec3{0, 0, minor * std::sin(b)};
            m.vertices.push_back(center + p);
        }
    }
    for (int i = 0; i < segs; ++i) {
        int i1 = (i + 1) % segs;
        for (int j = 0; j < sides; ++j) {
            int j1 = (j + 1) % sides;
            append_triangle(m, base + i * sides + j, base + i1 * sides + j, base + i * sides + j1);
            append_triangle(m, base + i1 * sides + j, base + i1 * sides + j1, base + i * sides + j1);
        }
    }
}

// --- hand proxy --------------------------------------------------------
//
// Local frame: palm centered at the origin, palm normal along -z (facing
// the camera at identity orientation), fingers extending along -y (up in
// image space), thumb on +x. Right hand.

struct FingerSpec {
    Vec3 knuckle;
    Vec3 direction;            // straight-finger direction
    std::array<double, 3> segment_len;
    double radius;
    Vec3 bend_axis;            // positive bend curls toward the palm (-z)
};

Vec3 rotate_about(const Vec3& v, const Vec3& axis, double angle_rad) {
    return Quat::from_axis_angle(axis, angle_rad).rotate(v);
}

// Appends a 3-segment finger; returns the tip position.
Vec3 append_finger(Mesh& m, const FingerSpec& f, const std::array<double, 3>& bend_deg) {
    Vec3 p = f.knuckle;
    Vec3 dir = f.direction;
    double accumulated = 0.0;
    Vec3 tip = p;
    for (int s = 0; s < 3; ++s) {
        accumulated += deg_to_rad(bend_deg[s]);
        Vec3 seg_dir = rotate_about(dir, f.bend_axis, accumulated);
        Vec3 q = p + seg_dir * f.segment_len[s];
        append_cylinder(m, p, q, f.radius);
        p = q;
        tip = q;
    }
    return tip;
}

struct GesturePreset {
    const char* name;
    // Bend per joint in degrees for the four fingers (index..pinky share
    // the curl) and the thumb; 0 = straight, 90 = fully curled.
    std::array<double, 3> finger_bend;
    std::array<double, 3> index_bend;
    std::array<double, 3> middle_bend;
    std::array<double, 2> thumb_bend;
    const char* fingertip_finger;  // which tip becomes the anchor
};

const std::array<GesturePreset, 6>& gesture_presets() {
    static const std::array<GesturePreset, 6> presets = {{
        {"open", {5, 5, 5}, {5, 5, 5}, {5, 5, 5}, {5, 5}, "middle"},
        {"fist", {80, 85, 80}, {80, 85, 80}, {80, 85, 80}, {60, 70}, "middle"},
        {"point", {80, 85, 80}, {3, 3, 3}, {80, 85, 80}, {45, 55}, "index"},
        {"peace", {80, 85, 80}, {5, 5, 5}, {5, 5, 5}, {45, 55}, "index"},
        {"thumbs_up", {80, 85, 80}, {80, 85, 80}, {80, 85, 80}, {0, 0}, "thumb"},
        {"pinch", {40, 45, 40}, {40, 45, 40}, {40, 45, 40}, {30, 35}, "index"},
    }};
    return presets;
}

Mesh build_hand(const GesturePreset& g) {
    Mesh m;
    // Palm: 85 mm across, 90 mm wrist-to-knuckles, 26 mm thick.
    append_box(m, {0, 0.005, 0}, {0.0425, 0.045, 0.013});
    // Short wrist stub so the hand does not end in a flat cut.
    append_cylinder(m, {0, 0.05, 0}, {0, 0.075, 0}, 0.024);

    const double fy = -0.04;  // knuckle line
    std::array<FingerSpec, 4> fingers = {{
        {{-0.032, fy, 0}, {0, -1, 0}, {0.030, 0.022, 0.018}, 0.0075, {1, 0, 0}},   // pinky... actually ring side
        {{-0.011, fy, 0}, {0, -1, 0}, {0.036, 0.026, 0.020}, 0.0080, {1, 0, 0}},
        {{0.011, fy, 0}, {0, -1, 0}, {0.040, 0.028, 0.022}, 0.0082, {1, 0, 0}},    // middle
        {{0.032, fy, 0}, {0, -1, 0}, {0.035, 0.025, 0.020}, 0.0080, {1, 0, 0}},    // index
    }};

    Vec3 middle_tip{}, index_tip{};
    for (int i = 0; i < 4; ++i) {
        std::array<double, 3> bend = g.finger_bend;
        if (i == 3) bend = g.index_bend;
        if (i == 2) bend = g.middle_bend;
        Vec3 tip = append_finger(m, fingers[i], bend);
        if (i == 2) middle_tip = tip;
        if (i == 3) index_tip = tip;
    }

    // Thumb: two segments from the +x palm edge, bending across (0,1,1).
    FingerSpec thumb{{0.045, 0.015, 0}, normalized(Vec3{0.75, -0.6, 0}), {0.042, 0.032, 0.0},
                     0.0105, normalized(Vec3{0.4, 0.5, -0.76})};
    Vec3 p = thumb.knuckle;
    Vec3 dir = thumb.direction;
    double acc = 0.0;
    Vec3 thumb_tip = p;
    for (int s = 0; s < 2; ++s) {
        acc += deg_to_rad(g.thumb_bend[s]);
        Vec3 seg_dir = rotate_about(dir, thumb.bend_axis, acc);
        Vec3 q = p + seg_dir * thumb.segment_len[s];
        append_cylinder(m, p, q, thumb.radius);
        p = q;
        thumb_tip = q;
    }

    m.anchor_points["palm_center"] = {0, 0, 0};
    Vec3 tip = middle_tip;
    if (std::string(g.fingertip_finger) == "index") tip = index_tip;
    if (std::string(g.fingertip_finger) == "thumb") tip = thumb_tip;
    m.anchor_points["fingertip"] = tip;
    m.validate();
    return m;
}

Mesh build_body() {
    // Handless upper-body mannequin, roughly 0.75 m tall, chest at origin.
    Mesh m;
    append_box(m, {0, 0, 0}, {0.20, 0.28, 0.11});                       // torso
    append_cylinder(m, {0, -0.28, 0}, {0, -0.34, 0}, 0.055);            // neck
    append_uv_sphere(m, {0, -0.45, 0}, 0.11);                            // head
    append_cylinder(m, {-0.24, -0.24, 0}, {-0.30, 0.02, 0}, 0.045);     // upper arms
    append_cylinder(m, {0.24, -0.24, 0}, {0.30, 0.02, 0}, 0.045);
    append_cylinder(m, {-0.30, 0.02, 0}, {-0.30, 0.26, 0.06}, 0.038);   // forearms, end at the wrist
    append_cylinder(m, {0.30, 0.02, 0}, {0.30, 0.26, 0.06}, 0.038);
    m.validate();
    return m;
}

Mesh build_hammer() {
    Mesh m;
    append_cylinder(m, {0, 0.11, 0}, {0, -0.09, 0}, 0.013, 8);
    append_box(m, {0, -0.10, 0}, {0.045, 0.016, 0.016});
    m.validate();
    return m;
}

Mesh build_tee() {
    Mesh m;
    append_cylinder(m, {-0.09, 0, 0}, {0.09, 0, 0}, 0.015, 8);
    append_cylinder(m, {0, 0, 0}, {0, 0.09, 0}, 0.015, 8);
    m.validate();
    return m;
}

}  // namespace

std::vector<std::string> builtin_gesture_names() {
    std::vector<std::string> names;
    for (const auto& g : gesture_presets()) names.emplace_back(g.name);
    return names;
}

MeshLibrary MeshLibrary::builtin() {
    MeshLibrary lib;
    for (const auto& g : gesture_presets()) lib.add_hand(g.name, build_hand(g));

    auto add = [&lib](const char* name, Mesh m) { lib.add_distractor(name, std::move(m)); };
    Mesh box;
    append_box(box, {0, 0, 0}, {0.05, 0.05, 0.05});
    add("box", std::move(box));
    Mesh sphere;
    append_uv_sphere(sphere, {0, 0, 0}, 0.055);
    add("sphere", std::move(sphere));
    Mesh cyl;
    append_cylinder(cyl, {0, -0.08, 0}, {0, 0.08, 0}, 0.035, 10);
    add("cylinder", std::move(cyl));
    Mesh cone;
    append_cone(cone, {0, 0.06, 0}, {0, -0.08, 0}, 0.05);
    add("cone", std::move(cone));
    Mesh torus;
    append_torus(torus, {0, 0, 0}, 0.055, 0.018);
    add("torus", std::move(torus));
    Mesh bar;
    append_box(bar, {0, 0, 0}, {0.12, 0.016, 0.012});
    add("bar", std::move(bar));
    add("hammer", build_hammer());
    add("tee", build_tee());

    lib.body_ = build_body();
    return lib;
}

void MeshLibrary::add_hand(std::string name, Mesh mesh) {
    mesh.validate();
    if (!mesh.has_hand_anchors()) {
        throw std::invalid_argument("hand mesh '" + name + "': missing fingertip/palm_center anchors");
    }
    hands_.push_back({std::move(name), std::move(mesh)});
}

void MeshLibrary::add_distractor(std::string name, Mesh mesh) {
    mesh.validate();
    distractors_.push_back({std::move(name), std::move(mesh)});
}

Mesh load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("obj: cannot open " + path);

    Mesh mesh;
    std::vector<Vec2> uvs;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag)) continue;
        if (tag == "v") {
            Vec3 v;
            if (!(ss >> v.x >> v.y >> v.z)) {
                throw std::runtime_error("obj: bad vertex at " + path + ":" + std::to_string(line_no));
            }
            mesh.vertices.push_back(v);
        } else if (tag == "vt") {
            Vec2 t;
            if (!(ss >> t.x >> t.y)) {
                throw std::runtime_error("obj: bad texcoord at " + path + ":" + std::to_string(line_no));
            }
            uvs.push_back(t);
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string tok;
            while (ss >> tok) {
                // Accept v, v/vt, v//vn, v/vt/vn; only the vertex index is used.
                size_t slash = tok.find('/');
                std::string head = slash == std::string::npos ? tok : tok.substr(0, slash);
                int i = std::stoi(head);
                int n = static_cast<int>(mesh.vertices.size());
                if (i < 0) i = n + i + 1;  // negative indices are relative
                if (i < 1 || i > n) {
                    throw std::runtime_error("obj: face index out of range at " + path + ":" +
                                             std::to_string(line_no));
                }
                idx.push_back(i - 1);
            }
            if (idx.size() < 3) {
                throw std::runtime_error("obj: face with fewer than 3 vertices at " + path + ":" +
                                         std::to_string(line_no));
            }
            for (size_t k = 2; k < idx.size(); ++k) {
                mesh.triangles.push_back({idx[0], static_cast<int>(idx[k - 1]), static_cast<int>(idx[k])});
            }
        }
    }
    if (uvs.size() == mesh.vertices.size()) mesh.uv = std::move(uvs);
    mesh.validate();
    return mesh;
}

std::map<std::string, Vec3> load_anchor_sidecar(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("anchors: cannot open " + path);
    std::map<std::string, Vec3> anchors;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::string name;
        Vec3 p;
        if (!(ss >> name)) continue;
        if (name[0] == '#') continue;
        if (!(ss >> p.x >> p.y >> p.z)) {
            throw std::runtime_error("anchors: bad line at " + path + ":" + std::to_string(line_no));
        }
        anchors[name] = p;
    }
    return anchors;
}

}  // namespace handforge
