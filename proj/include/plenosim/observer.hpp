/// @file observer.hpp
/// @brief Point-cloud depth observer: per-point gradient flow along viewing rays.
#pragma once

#include <vector>

#include "plenosim/lightfield.hpp"
#include "plenosim/photometric.hpp"
#include "plenosim/scene.hpp"

namespace plenosim {

enum class PointStatusKind : std::uint8_t {
    Updated,
    OutsideApertureSet,
    BehindCamera,
    GradientError,
};

enum class GradientErrorCode : std::uint8_t {
    None,
    TooClose,        // a probe depth at or below the minimum admissible depth
    FocalPlane,      // thin-lens degeneracy at a probe
    Prefactor,       // window-compensation prefactor vanished
    Sample,          // subimage sampling inconsistency
    WindowTruncated, // frozen by the optional truncation policy
};

struct PointStatus {
    PointStatusKind kind{PointStatusKind::OutsideApertureSet};
    GradientErrorCode code{GradientErrorCode::None};
};

/// The evolving scene estimate: one 3-D point per tracked vertex, with the
/// status of the most recent step and a cumulative update count.
struct PointEstimateCloud {
    std::vector<Vec3> points;
    std::vector<PointStatus> status;
    std::vector<int> update_count;

    static PointEstimateCloud from_points(std::vector<Vec3> pts);
    static PointEstimateCloud from_mesh(const TriangleMesh& mesh);
    std::size_t size() const { return points.size(); }
};

struct ObserverConfig {
    double gain{1.0};
    double frame_dt{1.0};
    double gradient_step{1e-3};
    int threads{1};
    /// When set, points whose gradient probes clipped at the grid boundary
    /// keep their position for that frame.
    bool freeze_truncated_windows{false};
};

struct PupilarProjection {
    enum class Kind : std::uint8_t { Hit, BehindCamera, OutsideAperture };
    Kind kind{Kind::OutsideAperture};
    LensletId lenslet;
};

/// Projects a world point through the optical centre onto the pupilar plane
/// and snaps to the nearest lenslet (ties toward negative indices).
/// BehindCamera when the point's camera-frame depth is <= 0.
PupilarProjection project_to_pupilar(const Vec3& world_point, const Pose& pose,
                                     const PlenopticIntrinsics& cam);

struct FieldSample {
    Vec3 velocity{Vec3::Zero()};
    PointStatus status;
};

/// The observer's innovation for one point: minus the depth gradient of the
/// local error at the point's depth along its snapped viewing ray, as a
/// world-frame vector along that ray. Zero (with a non-Updated status) when
/// the point does not project into the grid or a gradient guard fires.
FieldSample vector_field(const Vec3& world_point, const Pose& pose,
                         const PlenopticIntrinsics& cam, const LightField& lf,
                         const ObserverConfig& cfg);

/// One forward-Euler frame: P <- P + gain * frame_dt * field. Points with a
/// zero field are bitwise unchanged. Deterministic for any thread count.
PointEstimateCloud step(const PointEstimateCloud& cloud, const Pose& pose,
                        const PlenopticIntrinsics& cam, const LightField& lf,
                        const ObserverConfig& cfg);

} // namespace plenosim
