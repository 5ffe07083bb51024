#pragma once

#include <string>
#include <vector>

#include "handforge/geometry.hpp"

namespace handforge {

struct MeshEntry {
    std::string name;
    Mesh mesh;
};

// Mesh assets for one generation run. Built-in meshes are procedural:
// hand proxies (palm box + capsule fingers) in preset gestures, geometric
// primitives and tool proxies as distractors, and a handless upper-body
// mannequin. External OBJ meshes can be appended from the asset manifest.
class MeshLibrary {
  public:
    static MeshLibrary builtin();

    const std::vector<MeshEntry>& hands() const { return hands_; }
    const std::vector<MeshEntry>& distractors() const { return distractors_; }
    const Mesh& body() const { return body_; }

    // Throws std::invalid_argument when a hand mesh lacks the required
    // "fingertip"/"palm_center" anchors.
    void add_hand(std::string name, Mesh mesh);
    void add_distractor(std::string name, Mesh mesh);

  private:
    std::vector<MeshEntry> hands_;
    std::vector<MeshEntry> distractors_;
    Mesh body_;
};

// Wavefront OBJ subset: v / vt / f records, faces triangulated on load.
// Throws std::runtime_error on malformed input.
Mesh load_obj(const std::string& path);

// Sidecar key-value text file: one "name x y z" line per anchor.
std::map<std::string, Vec3> load_anchor_sidecar(const std::string& path);

// Gesture preset names for the built-in hand proxies.
std::vector<std::string> builtin_gesture_names();

}  // namespace handforge
