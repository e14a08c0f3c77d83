/// @file trajectory.hpp
/// @brief Outward-facing Lissajous camera path and environment validity checks.
#pragma once

#include <string>
#include <vector>

#include "plenosim/camera.hpp"
#include "plenosim/geometry.hpp"
#include "plenosim/scene.hpp"

namespace plenosim {

/// Camera centre sweeps a 3-axis Lissajous figure around `center` while the
/// principal axis faces radially outward from `center`. Frequencies are in
/// radians per frame; pose_at accepts fractional frames.
struct LissajousPath {
    Vec3 amplitudes{Vec3::Zero()};
    Vec3 frequencies{Vec3::Zero()};
    Vec3 phases{Vec3::Zero()};
    Vec3 center{Vec3::Zero()};

    /// Throws ConfigError when all amplitudes are zero (the facing direction
    /// would be undefined everywhere).
    static LissajousPath make(const Vec3& amplitudes, const Vec3& frequencies, const Vec3& phases,
                              const Vec3& center);
};

/// Pose with translation on the path and rotation mapping the +z body axis to
/// the outward radial direction; the in-plane roll follows the projection of
/// world +y (world +x near the poles). Throws DegenerateOrientation when the
/// position coincides with the centre.
Pose pose_at(const LissajousPath& path, double frame);

struct RevisitStats {
    int views{0};
    int max_gap{0};
};

struct AssumptionsReport {
    /// Radius of the smallest origin-centred ball holding every sampled
    /// camera centre together with its minimum-depth view cone.
    double ball_radius{0.0};
    bool camera_ball_inside_scene{false};
    bool scene_convex{false};
    /// Static surrogate: the brightness map is the anchored monotone kind.
    bool brightness_monotone{false};
    std::vector<RevisitStats> per_point;
    int max_revisit_gap{0};
    int never_seen_count{0};
    bool persistence_ok{false};

    std::string to_text() const;
};

/// Empirical validity audit over `frames` integer-frame poses. The revisit
/// statistics describe how often each initial estimate point projects into
/// the lenslet grid with positive depth (empty `estimate_points` skips them).
AssumptionsReport validate_assumptions(const LissajousPath& path, const PlenopticIntrinsics& cam,
                                       const SceneModel& scene, int frames,
                                       const std::vector<Vec3>& estimate_points = {});

} // namespace plenosim
