#pragma once

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "knotbend/curve.hpp"

namespace knotbend {

class MeshError : public std::runtime_error {
public:
    MeshError(double radius, double limiting_chord);
    double limiting_chord() const { return limiting_chord_; }

private:
    double limiting_chord_;
};

struct TubeMesh {
    int rings = 0;
    int ring_segments = 0;
    std::vector<Vec3> vertices;  // rings * ring_segments, ring-major
    std::vector<Vec3> normals;   // per vertex, outward
    std::vector<std::array<int, 4>> quads;

    // Diagnostics filled at build time.
    double max_frame_jump = 0.0;   // largest angle between consecutive ring frames
    double closure_twist = 0.0;    // seam angle distributed over the rings
    bool tight_clearance = false;  // radius exceeds half the strand clearance
};

// Sweeps a circle of the given radius along the curve using a
// rotation-minimizing frame (double reflection). Cross sections are normal
// to the tangent; the closure twist is distributed uniformly over the rings.
TubeMesh tube_mesh(const SampledCurve& c, double radius, int rings, int ring_segments);

// ASCII OBJ: v/vn lines with 9 significant digits, quad faces with 1-based
// v//vn indices, LF line endings.
void export_obj(const TubeMesh& mesh, std::ostream& out);
void export_obj(const TubeMesh& mesh, const std::string& path);

struct ObjData {
    std::vector<Vec3> vertices;
    std::vector<Vec3> normals;
    std::vector<std::array<int, 4>> quads;  // 0-based
};

ObjData load_obj(const std::string& path);

}  // namespace knotbend
