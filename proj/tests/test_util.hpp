/// Deterministic random helpers and shared oracles for the test binaries.
#pragma once

#include <optional>
#include <random>

#include "plenosim/lightfield.hpp"

namespace testutil {

using plenosim::Vec2;
using plenosim::Vec3;

inline std::mt19937_64 rng(unsigned seed) { return std::mt19937_64{seed}; }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline int uniform_int(std::mt19937_64& g, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(g);
}

inline Vec3 uniform_vec3(std::mt19937_64& g, double lo, double hi) {
    return Vec3(uniform(g, lo, hi), uniform(g, lo, hi), uniform(g, lo, hi));
}

/// Uniform direction on the unit sphere.
inline Vec3 unit_vec3(std::mt19937_64& g) {
    while (true) {
        const Vec3 v = uniform_vec3(g, -1.0, 1.0);
        const double n = v.norm();
        if (n > 1e-3 && n <= 1.0) {
            return v / n;
        }
    }
}

/// Desk-scale reference intrinsics shared across the suites.
inline plenosim::PlenopticIntrinsics desk_camera() {
    return plenosim::PlenopticIntrinsics(0.05, 0.025, 0.002, 0.01, 0.00018, 0.0016, 15, 15, 9,
                                         9);
}

/// Independent backward trace of one retinal sample, assembled from the
/// primitive maps rather than the renderer's fused arithmetic: pixel ->
/// pinhole line to the lens plane, refraction through the pinhole's
/// conjugate, world ray, first scene hit (nullopt on a miss).
inline std::optional<Vec3> oracle_hit(const plenosim::SceneModel& scene,
                                      const plenosim::PlenopticIntrinsics& cam,
                                      const plenosim::Pose& pose, const plenosim::LensletId& probe,
                                      const Vec2& q) {
    const Vec3 pin = cam.lenslet_pos3(probe);
    const Vec3 pix(q.x(), q.y(), -(cam.lens_to_pupilar() + cam.pupilar_to_retinal()));
    const plenosim::Plane lens_plane(Vec3::Zero(), Vec3(0, 0, 1));
    const Vec3 zeta = plenosim::project_through_point(pin, lens_plane, pix);
    const Vec3 conjugate = plenosim::thin_lens_object(cam, pin);
    Vec3 dir = (zeta - conjugate).normalized();
    if (dir.z() < 0.0) {
        dir = -dir;
    }
    const auto hit = scene.intersect_ray(pose.apply(zeta), pose.rotation_matrix() * dir);
    if (!hit) {
        return std::nullopt;
    }
    return hit->point;
}

} // namespace testutil
