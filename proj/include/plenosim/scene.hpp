/// @file scene.hpp
/// @brief Scene surfaces (analytic sphere, triangle mesh), brightness maps,
/// ray intersection, and exact point-to-surface distance.
#pragma once

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include "plenosim/camera.hpp"
#include "plenosim/errors.hpp"
#include "plenosim/geometry.hpp"

namespace plenosim {

using Color = Eigen::Vector3d;

/// Position-only (view-independent) surface colour, components in [0, 1].
class BrightnessMap {
  public:
    enum class Kind { CoordinateRgb, RadialMonotone };

    /// Smooth trigonometric RGB pattern of the world coordinates;
    /// `frequency` in cycles per metre.
    static BrightnessMap coordinate_rgb(double frequency);

    /// Colour varies strictly monotonically with distance from `anchor`:
    /// |beta(x) - beta(anchor)| is strictly increasing in |x - anchor| up to
    /// `max_distance` (no clipping below that range).
    static BrightnessMap radial_monotone(const Vec3& anchor, double max_distance);

    Color operator()(const Vec3& world_point) const;
    Kind kind() const { return kind_; }
    /// Upper bound on |beta(x) - beta(y)| / |x - y|.
    double lipschitz() const { return lipschitz_; }
    const Vec3& anchor() const { return anchor_; }

  private:
    BrightnessMap() = default;
    Kind kind_{Kind::CoordinateRgb};
    double frequency_{1.0};
    Vec3 anchor_{Vec3::Zero()};
    double max_distance_{1.0};
    double lipschitz_{0.0};
};

struct Sphere {
    Vec3 center{Vec3::Zero()};
    double radius{1.0};
};

struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;
};

/// Geodesic sphere: icosahedron subdivided `subdivisions` times, vertices
/// projected onto the sphere. 10 * 4^s + 2 vertices, 20 * 4^s faces,
/// consistently outward-wound.
TriangleMesh make_icosphere(const Vec3& center, double radius, int subdivisions);

struct MeshValidation {
    bool closed{false};   // every edge shared by exactly two faces
    bool outward{false};  // face normals point away from the vertex centroid
    bool convex{false};   // all vertices on the inner side of every face plane
    bool ok() const { return closed && outward && convex; }
};

MeshValidation validate_mesh(const TriangleMesh& mesh, double tolerance = 1e-9);

struct RayHit {
    double t{0.0};
    Vec3 point{Vec3::Zero()};
};

/// Closed convex environment surface the camera lives inside, plus its
/// Lambertian brightness. Mesh surfaces are validated at construction.
class SceneModel {
  public:
    SceneModel(const Sphere& sphere, BrightnessMap brightness);
    /// Throws ConfigError unless the mesh is closed, outward-oriented, convex.
    SceneModel(TriangleMesh mesh, BrightnessMap brightness);

    const BrightnessMap& brightness() const { return brightness_; }
    bool is_sphere() const { return std::holds_alternative<Sphere>(surface_); }
    const Sphere& sphere() const { return std::get<Sphere>(surface_); }
    const TriangleMesh& mesh() const { return std::get<TriangleMesh>(surface_); }

    /// First intersection with t > 1e-9 of origin + t * direction
    /// (direction need not be unit; t is in units of |direction|).
    std::optional<RayHit> intersect_ray(const Vec3& origin, const Vec3& direction) const;

    /// Exact Euclidean distance from p to the surface.
    double point_distance(const Vec3& p) const;

    /// p strictly inside the enclosed volume.
    bool contains(const Vec3& p) const;

    Color shade(const Vec3& surface_point) const { return brightness_(surface_point); }

  private:
    std::variant<Sphere, TriangleMesh> surface_;
    BrightnessMap brightness_;
};

/// Distance from the camera's optical centre to the scene along the central
/// ray of lenslet l (the depth map gamma). Throws NoIntersection on a miss.
double distance_map(const SceneModel& scene, const PlenopticIntrinsics& cam, const Pose& pose,
                    const LensletId& l);

} // namespace plenosim
