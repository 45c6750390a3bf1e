#include "knotbend/tube_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "knotbend/energy.hpp"

namespace knotbend {

MeshError::MeshError(double radius, double limiting_chord)
    : std::runtime_error("tube radius " + std::to_string(radius) +
                         " too large for the curve (limiting chord " +
                         std::to_string(limiting_chord) + ")"),
      limiting_chord_(limiting_chord) {}

namespace {

Vec3 any_perpendicular(const Vec3& t) {
    Vec3 probe = std::abs(t.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    return (probe - probe.dot(t) * t).normalized();
}

}  // namespace

TubeMesh tube_mesh(const SampledCurve& c, double radius, int rings, int ring_segments) {
    const std::size_t n = c.r.size();
    if (rings < 3 || rings > static_cast<int>(n))
        throw std::invalid_argument("tube_mesh: rings must lie in [3, sample count]");
    if (ring_segments < 3) throw std::invalid_argument("tube_mesh: need at least 3 ring segments");
    if (!(radius > 0.0)) throw std::invalid_argument("tube_mesh: radius must be positive");

    // Gross-scale guard: a tube fatter than half the curve's diameter cannot
    // avoid engulfing it. Strand-level clearance is reported, not enforced
    // (the bent families legitimately pass strands closer than the tube
    // diameter).
    double max_chord = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            max_chord = std::max(max_chord, (c.r[i] - c.r[j]).norm());
    if (radius >= 0.5 * max_chord) throw MeshError(radius, max_chord);

    // Rotation-minimizing frame over all samples (double reflection), then
    // subsampled for the rings.
    std::vector<Vec3> ref(n + 1);
    ref[0] = any_perpendicular(c.tang[0]);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t next = (i + 1) % n;
        const Vec3 x0 = c.r[i], x1 = c.r[next];
        const Vec3 t0 = c.tang[i], t1 = c.tang[next];
        const Vec3 v1 = x1 - x0;
        const double c1 = v1.squaredNorm();
        if (c1 == 0.0) {
            ref[i + 1] = ref[i];
            continue;
        }
        const Vec3 rl = ref[i] - (2.0 / c1) * v1.dot(ref[i]) * v1;
        const Vec3 tl = t0 - (2.0 / c1) * v1.dot(t0) * v1;
        const Vec3 v2 = t1 - tl;
        const double c2 = v2.squaredNorm();
        ref[i + 1] = (c2 == 0.0) ? rl : Vec3(rl - (2.0 / c2) * v2.dot(rl) * v2);
        // Orthonormalize against drift.
        ref[i + 1] = (ref[i + 1] - ref[i + 1].dot(t1) * t1).normalized();
    }

    TubeMesh mesh;
    mesh.rings = rings;
    mesh.ring_segments = ring_segments;

    // Seam twist: angle between the propagated frame after one loop and the
    // starting frame, distributed uniformly; skipped for open members where
    // the seam tangents differ.
    double twist = 0.0;
    if (c.closed(1e-6 * std::max(c.length, 1.0))) {
        const Vec3 u0 = ref[0], un = ref[n];
        const Vec3 t0 = c.tang[0];
        twist = std::atan2(u0.cross(un).dot(t0), u0.dot(un));
        mesh.closure_twist = twist;
    }

    mesh.vertices.reserve(static_cast<std::size_t>(rings) * ring_segments);
    mesh.normals.reserve(mesh.vertices.capacity());

    std::vector<Vec3> ring_u(rings), ring_t(rings);
    for (int ri = 0; ri < rings; ++ri) {
        const std::size_t i = static_cast<std::size_t>(ri) * n / static_cast<std::size_t>(rings);
        const Vec3 t = c.tang[i];
        const double angle = -twist * static_cast<double>(i) / static_cast<double>(n);
        const Vec3 base_u = ref[i];
        const Vec3 base_v = t.cross(base_u);
        const Vec3 uu = std::cos(angle) * base_u + std::sin(angle) * base_v;
        const Vec3 vv = t.cross(uu);
        ring_u[ri] = uu;
        ring_t[ri] = t;
        for (int s = 0; s < ring_segments; ++s) {
            const double phi = 2.0 * std::numbers::pi * s / ring_segments;
            const Vec3 dir = std::cos(phi) * uu + std::sin(phi) * vv;
            mesh.vertices.push_back(c.r[i] + radius * dir);
            mesh.normals.push_back(dir);
        }
    }

    // Twist between consecutive rings, measured against parallel transport
    // of the previous ring frame (the sweep itself rotates with the
    // tangent; only rotation about the tangent counts as twist).
    for (int ri = 1; ri <= rings; ++ri) {
        const Vec3 t_prev = ring_t[ri - 1];
        const Vec3 t_cur = ring_t[ri % rings];
        const Vec3 u_cur = ring_u[ri % rings];
        Vec3 transported = ring_u[ri - 1];
        const Vec3 axis = t_prev.cross(t_cur);
        const double sin_a = axis.norm();
        const double cos_a = std::clamp(t_prev.dot(t_cur), -1.0, 1.0);
        if (sin_a > 1e-14) {
            const Vec3 k = axis / sin_a;
            transported = transported * cos_a + k.cross(transported) * sin_a +
                          k * k.dot(transported) * (1.0 - cos_a);
        }
        if (ri == rings && !c.closed(1e-6 * std::max(c.length, 1.0)))
            break;  // seam twist is meaningless for open members
        const double jump =
            std::abs(std::atan2(transported.cross(u_cur).dot(t_cur), transported.dot(u_cur)));
        mesh.max_frame_jump = std::max(mesh.max_frame_jump, jump);
    }

    mesh.quads.reserve(static_cast<std::size_t>(rings) * ring_segments);
    for (int ri = 0; ri < rings; ++ri) {
        const int rn = (ri + 1) % rings;
        for (int s = 0; s < ring_segments; ++s) {
            const int sn = (s + 1) % ring_segments;
            mesh.quads.push_back({ri * ring_segments + s, rn * ring_segments + s,
                                  rn * ring_segments + sn, ri * ring_segments + sn});
        }
    }

    const double clearance = min_nonadjacent_chord(c, 8);
    mesh.tight_clearance = radius >= 0.5 * clearance;
    return mesh;
}

namespace {

void write_number(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    out << buf;
}

}  // namespace

void export_obj(const TubeMesh& mesh, std::ostream& out) {
    for (const Vec3& v : mesh.vertices) {
        out << "v ";
        write_number(out, v.x());
        out << ' ';
        write_number(out, v.y());
        out << ' ';
        write_number(out, v.z());
        out << '\n';
    }
    for (const Vec3& vn : mesh.normals) {
        out << "vn ";
        write_number(out, vn.x());
        out << ' ';
        write_number(out, vn.y());
        out << ' ';
        write_number(out, vn.z());
        out << '\n';
    }
    for (const auto& q : mesh.quads) {
        out << 'f';
        for (int idx : q) out << ' ' << idx + 1 << "//" << idx + 1;
        out << '\n';
    }
}

void export_obj(const TubeMesh& mesh, const std::string& path) {
    // Write to a temporary and rename, so failures never leave partial files.
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::ios_base::failure("cannot open " + tmp + " for writing");
        export_obj(mesh, out);
        out.flush();
        if (!out) throw std::ios_base::failure("write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw std::ios_base::failure("cannot rename " + tmp + " to " + path);
    }
}

ObjData load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open " + path);
    ObjData data;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            Vec3 v;
            ls >> v.x() >> v.y() >> v.z();
            data.vertices.push_back(v);
        } else if (tag == "vn") {
            Vec3 v;
            ls >> v.x() >> v.y() >> v.z();
            data.normals.push_back(v);
        } else if (tag == "f") {
            std::array<int, 4> q{};
            for (int k = 0; k < 4; ++k) {
                std::string item;
                ls >> item;
                q[k] = std::atoi(item.c_str()) - 1;
            }
            data.quads.push_back(q);
        }
    }
    return data;
}

}  // namespace knotbend
