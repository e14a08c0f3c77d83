#include "plenosim/observer.hpp"

#include <thread>

namespace plenosim {

PointEstimateCloud PointEstimateCloud::from_points(std::vector<Vec3> pts) {
    PointEstimateCloud c;
    c.points = std::move(pts);
    c.status.assign(c.points.size(), PointStatus{});
    c.update_count.assign(c.points.size(), 0);
    return c;
}

PointEstimateCloud PointEstimateCloud::from_mesh(const TriangleMesh& mesh) {
    return from_points(mesh.vertices);
}

PupilarProjection project_to_pupilar(const Vec3& world_point, const Pose& pose,
                                     const PlenopticIntrinsics& cam) {
    PupilarProjection out;
    const Vec3 p = pose.apply_inverse(world_point);
    if (p.z() <= 0.0) {
        out.kind = PupilarProjection::Kind::BehindCamera;
        return out;
    }
    // Line through the optical centre, continued back to the pupilar plane.
    const double s = -cam.lens_to_pupilar() / p.z();
    const Vec2 hit(s * p.x(), s * p.y());
    LensletId l;
    if (!cam.nearest_lenslet(hit, l)) {
        out.kind = PupilarProjection::Kind::OutsideAperture;
        return out;
    }
    out.kind = PupilarProjection::Kind::Hit;
    out.lenslet = l;
    return out;
}

FieldSample vector_field(const Vec3& world_point, const Pose& pose,
                         const PlenopticIntrinsics& cam, const LightField& lf,
                         const ObserverConfig& cfg) {
    FieldSample out;
    const PupilarProjection proj = project_to_pupilar(world_point, pose, cam);
    if (proj.kind == PupilarProjection::Kind::BehindCamera) {
        out.status.kind = PointStatusKind::BehindCamera;
        return out;
    }
    if (proj.kind == PupilarProjection::Kind::OutsideAperture) {
        out.status.kind = PointStatusKind::OutsideApertureSet;
        return out;
    }
    const Vec3 eta_cam = cam.direction(proj.lenslet);
    const double depth = pose.apply_inverse(world_point).dot(eta_cam);
    try {
        const ErrorEvalContext ctx = ErrorEvalContext::make(lf, cam, proj.lenslet,
                                                            cfg.gradient_step);
        const GradientSample g = depth_gradient(ctx, depth);
        if (cfg.freeze_truncated_windows && g.truncated) {
            out.status.kind = PointStatusKind::GradientError;
            out.status.code = GradientErrorCode::WindowTruncated;
            return out;
        }
        out.velocity = -g.value * (pose.rotation * eta_cam);
        out.status.kind = PointStatusKind::Updated;
    } catch (const BelowMinDepth&) {
        out.status.kind = PointStatusKind::GradientError;
        out.status.code = GradientErrorCode::TooClose;
    } catch (const AtFocalPlane&) {
        out.status.kind = PointStatusKind::GradientError;
        out.status.code = GradientErrorCode::FocalPlane;
    } catch (const DegeneratePrefactor&) {
        out.status.kind = PointStatusKind::GradientError;
        out.status.code = GradientErrorCode::Prefactor;
    } catch (const OutOfSubimage&) {
        out.status.kind = PointStatusKind::GradientError;
        out.status.code = GradientErrorCode::Sample;
    } catch (const DegenerateProjection&) {
        out.status.kind = PointStatusKind::GradientError;
        out.status.code = GradientErrorCode::Sample;
    }
    return out;
}

PointEstimateCloud step(const PointEstimateCloud& cloud, const Pose& pose,
                        const PlenopticIntrinsics& cam, const LightField& lf,
                        const ObserverConfig& cfg) {
    PointEstimateCloud next = cloud;
    const std::size_t n = cloud.size();
    auto process = [&](std::size_t k) {
        const FieldSample f = vector_field(cloud.points[k], pose, cam, lf, cfg);
        next.status[k] = f.status;
        if (f.status.kind == PointStatusKind::Updated) {
            ++next.update_count[k];
            if (f.velocity != Vec3::Zero()) {
                next.points[k] = cloud.points[k] + cfg.gain * cfg.frame_dt * f.velocity;
            }
        }
    };

    const int n_threads = std::max(1, cfg.threads);
    if (n_threads == 1 || n < 2 * static_cast<std::size_t>(n_threads)) {
        for (std::size_t k = 0; k < n; ++k) {
            process(k);
        }
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t k = t; k < n; k += n_threads) {
                    process(k);
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    return next;
}

} // namespace plenosim
