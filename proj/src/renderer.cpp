#include "handforge/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

#include "handforge/geometry.hpp"

namespace handforge {

namespace {

constexpr double kZClip = 0.01;       // near clip for rasterization only
constexpr double kShininess = 32.0;   // Blinn exponent

struct ClipVertex {
    Vec3 cam;    // camera-space position
    Vec3 local;  // object-space position (texture domain)
};

struct PreparedTriangle {
    ClipVertex v[3];
    double u[3], vpix[3];   // projected screen coordinates
    double inv_z[3];
    Vec3 normal;            // camera-space flat normal, flipped toward the camera
    const Material* material;
    std::uint16_t instance_id;
};

struct RenderItem {
    const Mesh* mesh;
    Pose pose;
    double scale;
    const Material* material;
    std::uint16_t instance_id;
};

// Clips a triangle against z >= kZClip; emits 0, 1 or 2 triangles.
int clip_triangle(const ClipVertex in[3], ClipVertex out[2][3]) {
    ClipVertex poly[4];
    int n = 0;
    for (int i = 0; i < 3; ++i) {
        const ClipVertex& a = in[i];
        const ClipVertex& b = in[(i + 1) % 3];
        bool a_in = a.cam.z >= kZClip;
        bool b_in = b.cam.z >= kZClip;
        if (a_in) poly[n++] = a;
        if (a_in != b_in) {
            double t = (kZClip - a.cam.z) / (b.cam.z - a.cam.z);
            ClipVertex mid;
            mid.cam = a.cam + (b.cam - a.cam) * t;
            mid.local = a.local + (b.local - a.local) * t;
            poly[n++] = mid;
        }
    }
    if (n < 3) return 0;
    out[0][0] = poly[0];
    out[0][1] = poly[1];
    out[0][2] = poly[2];
    if (n == 3) return 1;
    out[1][0] = poly[0];
    out[1][1] = poly[2];
    out[1][2] = poly[3];
    return 2;
}

double edge_function(double ax, double ay, double bx, double by, double px, double py) {
    return (px - ax) * (by - ay) - (py - ay) * (bx - ax);
}

Rgb shade(const SceneSpec& spec, const PreparedTriangle& tri, const Vec3& cam_pos, const Vec3& local_pos) {
    Rgb tex = evaluate_texture(tri.material->texture, local_pos);
    Vec3 n = tri.normal;
    Vec3 view = normalized(-cam_pos);

    Rgb light_sum{0, 0, 0};
    for (const auto& light : spec.lights) {
        Vec3 l = -light.direction;
        double ndotl = std::max(0.0, dot(n, l));
        double term = tri.material->diffuse * ndotl;
        if (tri.material->specular > 0.0) {
            Vec3 h = normalized(l + view);
            double ndoth = std::max(0.0, dot(n, h));
            term += tri.material->specular * std::pow(ndoth, kShininess);
        }
        light_sum = light_sum + light.intensity * term;
    }
    Rgb total = spec.ambient + light_sum + Rgb{1, 1, 1} * tri.material->emissive;
    return tex * total;
}

std::uint8_t to_byte(double c) {
    return static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(c, 0.0, 1.0)));
}

std::vector<PreparedTriangle> prepare_triangles(const SceneSpec& spec, const MeshLibrary& assets,
                                                std::vector<Mesh>& mesh_storage) {
    std::vector<RenderItem> items;
    std::uint16_t next_id = 1;
    for (const auto& hand : spec.hand_instances) {
        if (hand.mesh_id < 0 || hand.mesh_id >= static_cast<int>(assets.hands().size())) {
            throw std::invalid_argument("rasterize: hand mesh_id out of range");
        }
        const Mesh* mesh = &assets.hands()[hand.mesh_id].mesh;
        if (hand.mirrored) {
            mesh_storage.push_back(mesh->mirrored_x());
            mesh = &mesh_storage.back();
        }
        items.push_back({mesh, hand.pose, 1.0, &hand.material, next_id++});
    }
    for (const auto& d : spec.distractors) {
        if (d.mesh_id < 0 || d.mesh_id >= static_cast<int>(assets.distractors().size())) {
            throw std::invalid_argument("rasterize: distractor mesh_id out of range");
        }
        items.push_back({&assets.distractors()[d.mesh_id].mesh, d.pose, d.scale, &d.material, 0});
    }
    if (spec.body_model) {
        items.push_back({&assets.body(), spec.body_model->pose, 1.0, &spec.body_model->material, 0});
    }

    const CameraModel& cam = spec.camera;
    std::vector<PreparedTriangle> tris;
    for (const auto& item : items) {
        for (const auto& t : item.mesh->triangles) {
            ClipVertex cv[3];
            for (int i = 0; i < 3; ++i) {
                Vec3 local = item.mesh->vertices[t[i]] * item.scale;
                cv[i].local = item.mesh->vertices[t[i]];
                cv[i].cam = item.pose.apply(local);
            }
            Vec3 n = cross(cv[1].cam - cv[0].cam, cv[2].cam - cv[0].cam);
            double nn = norm(n);
            if (nn <= 0.0) continue;  // degenerate
            n = n * (1.0 / nn);
            if (dot(n, cv[0].cam) > 0.0) n = -n;  // both-sided shading

            ClipVertex clipped[2][3];
            int count = clip_triangle(cv, clipped);
            for (int k = 0; k < count; ++k) {
                PreparedTriangle pt;
                bool ok = true;
                for (int i = 0; i < 3; ++i) {
                    pt.v[i] = clipped[k][i];
                    double z = pt.v[i].cam.z;
                    if (z < kZClip * 0.5) {
                        ok = false;
                        break;
                    }
                    pt.u[i] = cam.center_x() + cam.focal_x() * pt.v[i].cam.x / z;
                    pt.vpix[i] = cam.center_y() + cam.focal_y() * pt.v[i].cam.y / z;
                    pt.inv_z[i] = 1.0 / z;
                }
                if (!ok) continue;
                pt.normal = n;
                pt.material = item.material;
                pt.instance_id = item.instance_id;
                tris.push_back(pt);
            }
        }
    }
    return tris;
}

void rasterize_rows(const SceneSpec& spec, const std::vector<PreparedTriangle>& tris, int y_begin,
                    int y_end, FrameBuffers& fb, std::vector<double>& zbuf) {
    const int width = spec.camera.image_width;

    for (const auto& tri : tris) {
        double min_u = std::min({tri.u[0], tri.u[1], tri.u[2]});
        double max_u = std::max({tri.u[0], tri.u[1], tri.u[2]});
        double min_v = std::min({tri.vpix[0], tri.vpix[1], tri.vpix[2]});
        double max_v = std::max({tri.vpix[0], tri.vpix[1], tri.vpix[2]});

        int x0 = std::max(0, static_cast<int>(std::ceil(min_u - 0.5)));
        int x1 = std::min(width - 1, static_cast<int>(std::floor(max_u - 0.5)));
        int y0 = std::max(y_begin, static_cast<int>(std::ceil(min_v - 0.5)));
        int y1 = std::min(y_end - 1, static_cast<int>(std::floor(max_v - 0.5)));
        if (x0 > x1 || y0 > y1) continue;

        double area = edge_function(tri.u[0], tri.vpix[0], tri.u[1], tri.vpix[1], tri.u[2], tri.vpix[2]);
        if (area == 0.0) continue;

        for (int y = y0; y <= y1; ++y) {
            double py = y + 0.5;
            for (int x = x0; x <= x1; ++x) {
                double px = x + 0.5;
                double e0 = edge_function(tri.u[1], tri.vpix[1], tri.u[2], tri.vpix[2], px, py);
                double e1 = edge_function(tri.u[2], tri.vpix[2], tri.u[0], tri.vpix[0], px, py);
                double e2 = edge_function(tri.u[0], tri.vpix[0], tri.u[1], tri.vpix[1], px, py);
                bool inside = (e0 >= 0.0 && e1 >= 0.0 && e2 >= 0.0) || (e0 <= 0.0 && e1 <= 0.0 && e2 <= 0.0);
                if (!inside) continue;

                double l0 = e0 / area, l1 = e1 / area, l2 = e2 / area;
                double inv_z = l0 * tri.inv_z[0] + l1 * tri.inv_z[1] + l2 * tri.inv_z[2];
                if (inv_z <= 0.0) continue;
                double z = 1.0 / inv_z;

                std::size_t idx = static_cast<std::size_t>(y) * width + x;
                if (z >= zbuf[idx]) continue;
                zbuf[idx] = z;

                // Perspective-correct object-space position for texturing.
                Vec3 num = tri.v[0].local * (l0 * tri.inv_z[0]) + tri.v[1].local * (l1 * tri.inv_z[1]) +
                           tri.v[2].local * (l2 * tri.inv_z[2]);
                Vec3 local = num * z;
                Vec3 cam_num = tri.v[0].cam * (l0 * tri.inv_z[0]) + tri.v[1].cam * (l1 * tri.inv_z[1]) +
                               tri.v[2].cam * (l2 * tri.inv_z[2]);
                Vec3 cam_pos = cam_num * z;

                Rgb c = shade(spec, tri, cam_pos, local);
                fb.color.at(x, y, 0) = to_byte(c.r);
                fb.color.at(x, y, 1) = to_byte(c.g);
                fb.color.at(x, y, 2) = to_byte(c.b);
                fb.depth_m.at(x, y) = static_cast<float>(z);
                fb.instance_id.at(x, y) = tri.instance_id;
            }
        }
    }
}

void fill_background_rows(const SceneSpec& spec, int y_begin, int y_end, FrameBuffers& fb,
                          const std::vector<double>& zbuf) {
    const int width = spec.camera.image_width;
    const int height = spec.camera.image_height;
    for (int y = y_begin; y < y_end; ++y) {
        for (int x = 0; x < width; ++x) {
            std::size_t idx = static_cast<std::size_t>(y) * width + x;
            if (zbuf[idx] != std::numeric_limits<double>::infinity()) continue;
            Vec3 p{(x + 0.5) / width, (y + 0.5) / height, 0.0};
            Rgb tex = evaluate_texture(spec.background.texture, p);
            Rgb c = tex * (spec.ambient + Rgb{1, 1, 1} * spec.background.emissive);
            fb.color.at(x, y, 0) = to_byte(c.r);
            fb.color.at(x, y, 1) = to_byte(c.g);
            fb.color.at(x, y, 2) = to_byte(c.b);
        }
    }
}

}  // namespace

FrameBuffers rasterize(const SceneSpec& spec, const MeshLibrary& assets, int threads) {
    spec.camera.validate();
    const int width = spec.camera.image_width;
    const int height = spec.camera.image_height;

    FrameBuffers fb;
    fb.color = ImageU8(width, height, 3, 0);
    fb.depth_m = ImageF32(width, height, 0.0f);
    fb.instance_id = ImageU16(width, height, 0);

    std::vector<Mesh> mesh_storage;
    std::vector<PreparedTriangle> tris = prepare_triangles(spec, assets, mesh_storage);

    std::vector<double> zbuf(static_cast<std::size_t>(width) * height,
                             std::numeric_limits<double>::infinity());

    int worker_count = std::max(1, threads);
    worker_count = std::min(worker_count, height);
    auto band = [&](int w) {
        int rows = height / worker_count;
        int extra = height % worker_count;
        int begin = w * rows + std::min(w, extra);
        int end = begin + rows + (w < extra ? 1 : 0);
        return std::pair<int, int>{begin, end};
    };

    auto work = [&](int w) {
        auto [y0, y1] = band(w);
        rasterize_rows(spec, tris, y0, y1, fb, zbuf);
        fill_background_rows(spec, y0, y1, fb, zbuf);
    };

    if (worker_count == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(worker_count);
        for (int w = 0; w < worker_count; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    return fb;
}

std::uint8_t encode_depth_value(double depth_m, double near, double far) {
    if (!(near < far)) throw std::invalid_argument("encode_depth: require near < far");
    if (depth_m <= 0.0) return 255;  // missing depth reads as far
    double t = std::clamp((depth_m - near) / (far - near), 0.0, 1.0);
    // Round half away from zero; the 1e-9 nudge absorbs the one-ulp error
    // of the normalization so exact mid-bin inputs stay bit-exact.
    double scaled = 255.0 * t;
    long v = static_cast<long>(std::floor(scaled + 0.5 + 1e-9));
    return static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
}

double decode_depth_value(std::uint8_t v, double near, double far) {
    return near + (static_cast<double>(v) / 255.0) * (far - near);
}

ImageU8 encode_depth(const ImageF32& depth_m, double near, double far) {
    ImageU8 out(depth_m.width, depth_m.height, 1);
    for (std::size_t i = 0; i < depth_m.data.size(); ++i) {
        out.data[i] = encode_depth_value(depth_m.data[i], near, far);
    }
    return out;
}

std::vector<Mask> extract_masks(const ImageU16& instance_id, int expected_count,
                                std::vector<int>* occluded) {
    std::map<std::uint16_t, Mask> masks;
    for (int y = 0; y < instance_id.height; ++y) {
        for (int x = 0; x < instance_id.width; ++x) {
            std::uint16_t id = instance_id.at(x, y);
            if (id == 0) continue;
            auto [it, inserted] = masks.try_emplace(id);
            if (inserted) *&it->second = Mask(instance_id.width, instance_id.height, 1, 0);
            it->second.at(x, y) = 255;
        }
    }
    if (occluded) {
        for (int id = 1; id <= expected_count; ++id) {
            if (!masks.count(static_cast<std::uint16_t>(id))) occluded->push_back(id);
        }
    }
    std::vector<Mask> out;
    out.reserve(masks.size());
    for (auto& [id, mask] : masks) out.push_back(std::move(mask));
    return out;
}

RenderedSample render_sample(const SceneSpec& spec, const MeshLibrary& assets, int threads) {
    RenderedSample sample;
    sample.buffers = rasterize(spec, assets, threads);
    sample.depth_png = encode_depth(sample.buffers.depth_m, spec.camera.near_depth_m,
                                    spec.camera.far_depth_m);
    sample.masks = extract_masks(sample.buffers.instance_id,
                                 static_cast<int>(spec.hand_instances.size()), &sample.occluded_ids);
    return sample;
}

}  // namespace handforge
