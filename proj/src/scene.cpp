#include "plenosim/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace plenosim {

namespace {

Color clamp01(const Color& c) {
    return Color(std::clamp(c.x(), 0.0, 1.0), std::clamp(c.y(), 0.0, 1.0),
                 std::clamp(c.z(), 0.0, 1.0));
}

// Exact point-triangle distance (closest point on the closed triangle).
double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a;
    const Vec3 ac = c - a;
    const Vec3 ap = p - a;

    const double d1 = ab.dot(ap);
    const double d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return (p - a).norm();

    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp);
    const double d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return (p - b).norm();

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        const double v = d1 / (d1 - d3);
        return (p - (a + v * ab)).norm();
    }

    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp);
    const double d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return (p - c).norm();

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        const double w = d2 / (d2 - d6);
        return (p - (a + w * ac)).norm();
    }

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (p - (b + w * (c - b))).norm();
    }

    const double denom = 1.0 / (va + vb + vc);
    const double v = vb * denom;
    const double w = vc * denom;
    return (p - (a + ab * v + ac * w)).norm();
}

// Moller-Trumbore, no backface culling. t in units of |dir|.
std::optional<double> ray_triangle(const Vec3& origin, const Vec3& dir, const Vec3& a,
                                   const Vec3& b, const Vec3& c) {
    constexpr double kEps = 1e-14;
    const Vec3 e1 = b - a;
    const Vec3 e2 = c - a;
    const Vec3 pvec = dir.cross(e2);
    const double det = e1.dot(pvec);
    if (std::abs(det) < kEps) return std::nullopt;
    const double inv_det = 1.0 / det;
    const Vec3 tvec = origin - a;
    const double u = tvec.dot(pvec) * inv_det;
    if (u < 0.0 || u > 1.0) return std::nullopt;
    const Vec3 qvec = tvec.cross(e1);
    const double v = dir.dot(qvec) * inv_det;
    if (v < 0.0 || u + v > 1.0) return std::nullopt;
    const double t = e2.dot(qvec) * inv_det;
    if (t <= 1e-9) return std::nullopt;
    return t;
}

} // namespace

BrightnessMap BrightnessMap::coordinate_rgb(double frequency) {
    if (!(frequency > 0.0)) {
        throw ConfigError("texture frequency must be positive");
    }
    BrightnessMap m;
    m.kind_ = Kind::CoordinateRgb;
    m.frequency_ = frequency;
    // Per channel |grad| <= 0.5 * 2 pi f; vector bound over three channels.
    m.lipschitz_ = std::sqrt(3.0) * std::numbers::pi * frequency;
    return m;
}

BrightnessMap BrightnessMap::radial_monotone(const Vec3& anchor, double max_distance) {
    if (!(max_distance > 0.0)) {
        throw ConfigError("radial monotone range must be positive");
    }
    BrightnessMap m;
    m.kind_ = Kind::RadialMonotone;
    m.anchor_ = anchor;
    m.max_distance_ = max_distance;
    m.lipschitz_ = 0.8 / max_distance;
    return m;
}

Color BrightnessMap::operator()(const Vec3& p) const {
    switch (kind_) {
    case Kind::CoordinateRgb: {
        const double w = 2.0 * std::numbers::pi * frequency_;
        // Unit wave vectors, pairwise independent and off-axis: a direction
        // tangent to two channels' level sets still crosses the third, so no
        // surface patch is low-contrast in every channel at once.
        static const Vec3 kr = Vec3(1.0, 0.7, -0.4).normalized();
        static const Vec3 kg = Vec3(-0.6, 1.0, 0.5).normalized();
        static const Vec3 kb = Vec3(0.5, -0.7, 1.0).normalized();
        return clamp01(Color(0.5 + 0.5 * std::sin(w * kr.dot(p)),
                             0.5 + 0.5 * std::sin(w * kg.dot(p) + 2.0),
                             0.5 + 0.5 * std::sin(w * kb.dot(p) + 4.0)));
    }
    case Kind::RadialMonotone: {
        // Base colour plus a ramp along a fixed RGB direction; stays in range
        // for |p - anchor| <= max_distance so the ramp is never clipped.
        const double rho = (p - anchor_).norm();
        const double g = 0.8 * std::min(rho, max_distance_) / max_distance_;
        const double s = g / std::sqrt(3.0);
        return clamp01(Color(0.1 + s, 0.1 + s, 0.1 + s));
    }
    }
    return Color::Zero();
}

TriangleMesh make_icosphere(const Vec3& center, double radius, int subdivisions) {
    if (!(radius > 0.0) || subdivisions < 0 || subdivisions > 8) {
        throw ConfigError("icosphere requires positive radius and 0..8 subdivisions");
    }
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {
        {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
        {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1},
    };
    std::vector<std::array<int, 3>> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
        {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},   {9, 8, 1},
    };
    for (auto& v : verts) {
        v.normalize();
    }

    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            if (const auto it = midpoint.find(key); it != midpoint.end()) {
                return it->second;
            }
            const Vec3 m = (verts[a] + verts[b]).normalized();
            verts.push_back(m);
            const int idx = static_cast<int>(verts.size()) - 1;
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            const int ab = mid(f[0], f[1]);
            const int bc = mid(f[1], f[2]);
            const int ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }

    TriangleMesh mesh;
    mesh.vertices.reserve(verts.size());
    for (const auto& v : verts) {
        mesh.vertices.push_back(center + radius * v);
    }
    mesh.faces = std::move(faces);
    return mesh;
}

MeshValidation validate_mesh(const TriangleMesh& mesh, double tolerance) {
    MeshValidation r;
    if (mesh.vertices.empty() || mesh.faces.empty()) {
        return r;
    }

    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& f : mesh.faces) {
        for (int k = 0; k < 3; ++k) {
            const auto key = std::minmax(f[k], f[(k + 1) % 3]);
            ++edge_count[key];
        }
    }
    r.closed = std::all_of(edge_count.begin(), edge_count.end(),
                           [](const auto& kv) { return kv.second == 2; });

    Vec3 centroid = Vec3::Zero();
    for (const auto& v : mesh.vertices) {
        centroid += v;
    }
    centroid /= static_cast<double>(mesh.vertices.size());

    double scale = 0.0;
    for (const auto& v : mesh.vertices) {
        scale = std::max(scale, (v - centroid).norm());
    }
    const double tol = tolerance * std::max(scale, 1.0);

    r.outward = true;
    r.convex = true;
    for (const auto& f : mesh.faces) {
        const Vec3& a = mesh.vertices[f[0]];
        const Vec3 n = (mesh.vertices[f[1]] - a).cross(mesh.vertices[f[2]] - a);
        if (n.dot((a + mesh.vertices[f[1]] + mesh.vertices[f[2]]) / 3.0 - centroid) <= 0.0) {
            r.outward = false;
        }
        for (const auto& v : mesh.vertices) {
            if ((v - a).dot(n.normalized()) > tol) {
                r.convex = false;
                break;
            }
        }
        if (!r.convex && !r.outward) {
            break;
        }
    }
    return r;
}

SceneModel::SceneModel(const Sphere& sphere, BrightnessMap brightness)
    : surface_(sphere), brightness_(std::move(brightness)) {
    if (!(sphere.radius > 0.0)) {
        throw ConfigError("scene sphere radius must be positive");
    }
}

SceneModel::SceneModel(TriangleMesh mesh, BrightnessMap brightness)
    : surface_(std::move(mesh)), brightness_(std::move(brightness)) {
    const auto v = validate_mesh(std::get<TriangleMesh>(surface_));
    if (!v.ok()) {
        throw ConfigError("scene mesh must be closed, outward-oriented, and convex");
    }
}

std::optional<RayHit> SceneModel::intersect_ray(const Vec3& origin, const Vec3& direction) const {
    if (const auto* sph = std::get_if<Sphere>(&surface_)) {
        const Vec3 oc = origin - sph->center;
        const double a = direction.squaredNorm();
        if (a == 0.0) return std::nullopt;
        const double b = 2.0 * oc.dot(direction);
        const double c = oc.squaredNorm() - sph->radius * sph->radius;
        const double disc = b * b - 4.0 * a * c;
        if (disc < 0.0) return std::nullopt;
        const double sq = std::sqrt(disc);
        // Smallest root above the self-intersection guard.
        double t = (-b - sq) / (2.0 * a);
        if (t <= 1e-9) t = (-b + sq) / (2.0 * a);
        if (t <= 1e-9) return std::nullopt;
        return RayHit{t, origin + t * direction};
    }
    const auto& mesh = std::get<TriangleMesh>(surface_);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& f : mesh.faces) {
        if (const auto t = ray_triangle(origin, direction, mesh.vertices[f[0]],
                                        mesh.vertices[f[1]], mesh.vertices[f[2]])) {
            best = std::min(best, *t);
        }
    }
    if (!std::isfinite(best)) return std::nullopt;
    return RayHit{best, origin + best * direction};
}

double SceneModel::point_distance(const Vec3& p) const {
    if (const auto* sph = std::get_if<Sphere>(&surface_)) {
        return std::abs((p - sph->center).norm() - sph->radius);
    }
    const auto& mesh = std::get<TriangleMesh>(surface_);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& f : mesh.faces) {
        best = std::min(best, point_triangle_distance(p, mesh.vertices[f[0]], mesh.vertices[f[1]],
                                                      mesh.vertices[f[2]]));
    }
    return best;
}

bool SceneModel::contains(const Vec3& p) const {
    if (const auto* sph = std::get_if<Sphere>(&surface_)) {
        return (p - sph->center).norm() < sph->radius;
    }
    const auto& mesh = std::get<TriangleMesh>(surface_);
    for (const auto& f : mesh.faces) {
        const Vec3& a = mesh.vertices[f[0]];
        const Vec3 n = (mesh.vertices[f[1]] - a).cross(mesh.vertices[f[2]] - a);
        if ((p - a).dot(n) >= 0.0) {
            return false;
        }
    }
    return true;
}

double distance_map(const SceneModel& scene, const PlenopticIntrinsics& cam, const Pose& pose,
                    const LensletId& l) {
    const Vec3 dir = pose.rotation * cam.direction(l);
    const auto hit = scene.intersect_ray(pose.translation, dir);
    if (!hit) {
        throw NoIntersection("central ray does not meet the scene");
    }
    return hit->t;
}

} // namespace plenosim
