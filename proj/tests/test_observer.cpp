#include <doctest.h>

#include <cmath>
#include <vector>

#include "plenosim/observer.hpp"
#include "test_util.hpp"

using namespace plenosim;
using testutil::desk_camera;
using testutil::uniform;
using testutil::uniform_int;

namespace {

SceneModel radial_scene() {
    return SceneModel(Sphere{Vec3::Zero(), 1.0},
                      BrightnessMap::radial_monotone(Vec3(0, 0, 1), 2.2));
}

Pose radial_pose() {
    Pose p;
    p.translation = Vec3(0.05, -0.03, 0.08);
    p.rotation = Quat(Eigen::Quaterniond::FromTwoVectors(Vec3(0, 0, 1), Vec3(1, 0, 0.1)));
    return p;
}

bool bitwise_equal(const Vec3& a, const Vec3& b) {
    return a.x() == b.x() && a.y() == b.y() && a.z() == b.z();
}

} // namespace

TEST_CASE("pupilar projection snaps to the nearest lenslet") {
    const PlenopticIntrinsics cam = desk_camera();
    const Pose identity;

    SUBCASE("axis, lateral, and rear points") {
        const auto axis = project_to_pupilar(Vec3(0, 0, 2), identity, cam);
        REQUIRE(axis.kind == PupilarProjection::Kind::Hit);
        CHECK(axis.lenslet.i == 7);
        CHECK(axis.lenslet.j == 7);
        CHECK(axis.lenslet.position.norm() == doctest::Approx(0.0).epsilon(1e-15));

        // Pupilar hit -D/z (x, y) = (-0.0019231, 0.00096154), snapping to the
        // lenslet one pitch toward -x and one toward +y of the centre.
        const auto off = project_to_pupilar(Vec3(0.1, -0.05, 1.3), identity, cam);
        REQUIRE(off.kind == PupilarProjection::Kind::Hit);
        CHECK(off.lenslet.i == 6);
        CHECK(off.lenslet.j == 8);

        CHECK(project_to_pupilar(Vec3(0, 0, -1), identity, cam).kind ==
              PupilarProjection::Kind::BehindCamera);
        CHECK(project_to_pupilar(Vec3(0.3, 0.2, 0.0), identity, cam).kind ==
              PupilarProjection::Kind::BehindCamera);
        CHECK(project_to_pupilar(Vec3(1, 0, 1), identity, cam).kind ==
              PupilarProjection::Kind::OutsideAperture);
    }

    SUBCASE("footprint edge at half a pitch beyond the corner lenslet") {
        const double pitch = cam.lenslet_pitch();
        const double d_over = cam.lens_to_pupilar();
        const auto lateral = [&](double pitches) {
            const double x = pitches * pitch / d_over;
            return project_to_pupilar(Vec3(x, 0, 1), identity, cam).kind;
        };
        CHECK(lateral(7.49) == PupilarProjection::Kind::Hit);
        CHECK(lateral(7.51) == PupilarProjection::Kind::OutsideAperture);
    }

    SUBCASE("pose invariance and nearest choice") {
        Pose pose;
        pose.translation = Vec3(0.2, -0.1, 0.05);
        pose.rotation = Quat(Eigen::AngleAxisd(0.7, Vec3(0.3, -1, 0.5).normalized()));
        auto rng = testutil::rng(2024);
        for (int k = 0; k < 500; ++k) {
            const Vec3 p_cam(uniform(rng, -0.4, 0.4), uniform(rng, -0.4, 0.4),
                             uniform(rng, 0.2, 3.0));
            const auto direct = project_to_pupilar(p_cam, identity, cam);
            const auto moved = project_to_pupilar(pose.apply(p_cam), pose, cam);
            REQUIRE(direct.kind == moved.kind);
            if (direct.kind != PupilarProjection::Kind::Hit) {
                continue;
            }
            CHECK(direct.lenslet == moved.lenslet);

            const Vec2 hit = -cam.lens_to_pupilar() / p_cam.z() * Vec2(p_cam.x(), p_cam.y());
            double best = 1e300;
            for (int i = 0; i < cam.lenslet_rows(); ++i) {
                for (int j = 0; j < cam.lenslet_cols(); ++j) {
                    best = std::min(best, (cam.lenslet(i, j).position - hit).norm());
                }
            }
            CHECK((direct.lenslet.position - hit).norm() <= best + 1e-12);
        }
    }
}

TEST_CASE("vector field lies along the snapped viewing ray") {
    const PlenopticIntrinsics cam = desk_camera();
    const SceneModel scene = radial_scene();
    const Pose pose = radial_pose();
    const LightField lf = render(scene, cam, pose);
    ObserverConfig cfg;

    auto rng = testutil::rng(5150);
    int updated = 0;
    for (int k = 0; k < 200; ++k) {
        const Vec3 p_cam(uniform(rng, -0.2, 0.2), uniform(rng, -0.2, 0.2),
                         uniform(rng, 0.3, 2.2));
        const Vec3 world = pose.apply(p_cam);
        const FieldSample f = vector_field(world, pose, cam, lf, cfg);
        if (f.status.kind != PointStatusKind::Updated) {
            continue;
        }
        ++updated;
        const auto proj = project_to_pupilar(world, pose, cam);
        REQUIRE(proj.kind == PupilarProjection::Kind::Hit);
        const Vec3 ray = pose.rotation * cam.direction(proj.lenslet);
        CHECK(f.velocity.cross(ray).norm() <= 1e-12 * f.velocity.norm() + 1e-300);
    }
    CHECK(updated >= 150);
}

TEST_CASE("vector field vanishes with a status for unviewable points") {
    const PlenopticIntrinsics cam = desk_camera();
    const SceneModel scene = radial_scene();
    const Pose identity;
    const LightField lf = render(scene, cam, identity);
    ObserverConfig cfg;

    const auto expect = [&](const Vec3& world, PointStatusKind kind, GradientErrorCode code) {
        const FieldSample f = vector_field(world, identity, cam, lf, cfg);
        CHECK(f.status.kind == kind);
        CHECK(f.status.code == code);
        CHECK(f.velocity == Vec3::Zero());
    };
    expect(Vec3(0, 0, -5), PointStatusKind::BehindCamera, GradientErrorCode::None);
    expect(Vec3(2, 0, 0.5), PointStatusKind::OutsideApertureSet, GradientErrorCode::None);
    expect(Vec3(0, 0, 0.05), PointStatusKind::GradientError, GradientErrorCode::TooClose);
    // Just above the floor the lower finite-difference probe still dips under.
    expect(Vec3(0, 0, cam.min_depth() * 1.0003), PointStatusKind::GradientError,
           GradientErrorCode::TooClose);
}

TEST_CASE("true scene points are stationary under the field") {
    const PlenopticIntrinsics cam = desk_camera();
    const SceneModel scene = radial_scene();
    const Pose pose = radial_pose();
    const LightField lf = render(scene, cam, pose);
    ObserverConfig cfg;

    for (int i = 5; i <= 9; i += 2) {
        for (int j = 5; j <= 9; j += 2) {
            const LensletId l = cam.lenslet(i, j);
            const double gamma = distance_map(scene, cam, pose, l);
            const Vec3 ray = pose.rotation * cam.direction(l);

            const FieldSample at_truth =
                vector_field(pose.translation + gamma * ray, pose, cam, lf, cfg);
            const FieldSample near_side =
                vector_field(pose.translation + 0.75 * gamma * ray, pose, cam, lf, cfg);
            const FieldSample far_side =
                vector_field(pose.translation + 1.40 * gamma * ray, pose, cam, lf, cfg);
            REQUIRE(at_truth.status.kind == PointStatusKind::Updated);
            REQUIRE(near_side.status.kind == PointStatusKind::Updated);
            REQUIRE(far_side.status.kind == PointStatusKind::Updated);

            // Under the truth the field pushes outward along the ray, above it
            // pulls back, and at the truth it is noise-floor small.
            CHECK(near_side.velocity.dot(ray) > 0.0);
            CHECK(far_side.velocity.dot(ray) < 0.0);
            CHECK(at_truth.velocity.norm() <= 0.05 * near_side.velocity.norm());
        }
    }
}

TEST_CASE("euler step moves an underestimated point toward the scene") {
    const PlenopticIntrinsics cam = desk_camera();
    const SceneModel scene = radial_scene();
    const Pose pose = radial_pose();
    const LightField lf = render(scene, cam, pose);

    const LensletId central = cam.lenslet(7, 7);
    const double gamma = distance_map(scene, cam, pose, central);
    const Vec3 ray = pose.rotation * cam.direction(central);
    const Vec3 start = pose.translation + 0.7 * gamma * ray;
    const double d0 = scene.point_distance(start);
    REQUIRE(d0 > 0.0);

    ObserverConfig probe_cfg;
    const FieldSample f = vector_field(start, pose, cam, lf, probe_cfg);
    REQUIRE(f.status.kind == PointStatusKind::Updated);
    REQUIRE(f.velocity.norm() > 0.0);

    // The displacement is linear in the gain, so the overshoot threshold
    // (first gain that fails to reduce the distance) is found by bisection
    // along the fixed field direction.
    const auto dist_after = [&](double gain) {
        return scene.point_distance(start + gain * probe_cfg.frame_dt * f.velocity);
    };
    double hi = 1.0;
    while (dist_after(hi) < d0) {
        hi *= 2.0;
        REQUIRE(hi < 1e30);
    }
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (dist_after(mid) < d0 ? lo : hi) = mid;
    }

    ObserverConfig cfg;
    cfg.gain = 0.5 * lo;
    PointEstimateCloud cloud = PointEstimateCloud::from_points({start});
    const PointEstimateCloud next = step(cloud, pose, cam, lf, cfg);
    REQUIRE(next.status[0].kind == PointStatusKind::Updated);
    CHECK(next.update_count[0] == 1);

    const Vec3 moved = next.points[0] - start;
    CHECK(moved.dot(ray) > 0.0);
    CHECK(moved.cross(ray).norm() <= 1e-12 * moved.norm());
    CHECK(scene.point_distance(next.points[0]) < d0);
}

TEST_CASE("step leaves unviewed and frozen points untouched") {
    const PlenopticIntrinsics cam = desk_camera();
    const SceneModel scene = radial_scene();
    const Pose pose = radial_pose();
    const LightField lf = render(scene, cam, pose);

    const Vec3 behind = pose.apply(Vec3(0, 0, -2));
    const Vec3 outside = pose.apply(Vec3(3, 0, 0.4));
    const Vec3 too_close = pose.apply(Vec3(0, 0, 0.04));
    const Vec3 truncated = pose.apply(0.12 * cam.direction(cam.lenslet(0, 0)));
    const Vec3 good = pose.apply(Vec3(0.01, -0.02, 0.8));

    ObserverConfig cfg;
    cfg.gain = 1e6;
    cfg.freeze_truncated_windows = true;
    const PointEstimateCloud cloud =
        PointEstimateCloud::from_points({behind, outside, too_close, truncated, good});
    const PointEstimateCloud next = step(cloud, pose, cam, lf, cfg);

    CHECK(next.status[0].kind == PointStatusKind::BehindCamera);
    CHECK(next.status[1].kind == PointStatusKind::OutsideApertureSet);
    CHECK(next.status[2].kind == PointStatusKind::GradientError);
    CHECK(next.status[2].code == GradientErrorCode::TooClose);
    CHECK(next.status[3].kind == PointStatusKind::GradientError);
    CHECK(next.status[3].code == GradientErrorCode::WindowTruncated);
    CHECK(next.status[4].kind == PointStatusKind::Updated);
    for (int k = 0; k < 4; ++k) {
        CHECK(bitwise_equal(next.points[k], cloud.points[k]));
        CHECK(next.update_count[k] == 0);
    }
    CHECK(next.update_count[4] == 1);

    SUBCASE("unfreezing updates the truncated-window point") {
        ObserverConfig thaw = cfg;
        thaw.freeze_truncated_windows = false;
        const PointEstimateCloud after = step(cloud, pose, cam, lf, thaw);
        CHECK(after.status[3].kind == PointStatusKind::Updated);
        CHECK(after.update_count[3] == 1);
    }

    SUBCASE("zero gain freezes positions but still counts updates") {
        ObserverConfig zero = cfg;
        zero.gain = 0.0;
        const PointEstimateCloud after = step(cloud, pose, cam, lf, zero);
        CHECK(after.points[4] == cloud.points[4]);
        CHECK(after.status[4].kind == PointStatusKind::Updated);
        CHECK(after.update_count[4] == 1);
    }
}

TEST_CASE("step is deterministic across thread counts") {
    const PlenopticIntrinsics cam = desk_camera();
    const SceneModel scene = radial_scene();
    const Pose pose = radial_pose();
    const LightField lf = render(scene, cam, pose);

    auto rng = testutil::rng(86);
    std::vector<Vec3> pts;
    for (int k = 0; k < 48; ++k) {
        pts.push_back(pose.apply(Vec3(uniform(rng, -0.15, 0.15), uniform(rng, -0.15, 0.15),
                                      uniform(rng, 0.2, 2.0))));
    }
    const PointEstimateCloud cloud = PointEstimateCloud::from_points(pts);

    ObserverConfig cfg;
    cfg.gain = 1e7;
    PointEstimateCloud base;
    for (int threads : {1, 2, 3}) {
        cfg.threads = threads;
        const PointEstimateCloud out = step(cloud, pose, cam, lf, cfg);
        if (threads == 1) {
            base = out;
            int updated = 0;
            for (const auto& s : out.status) {
                updated += s.kind == PointStatusKind::Updated;
            }
            CHECK(updated >= 30);
            continue;
        }
        REQUIRE(out.size() == base.size());
        for (std::size_t k = 0; k < out.size(); ++k) {
            CHECK(bitwise_equal(out.points[k], base.points[k]));
            CHECK(out.status[k].kind == base.status[k].kind);
            CHECK(out.update_count[k] == base.update_count[k]);
        }
    }
}

TEST_CASE("cloud construction from points and meshes") {
    const TriangleMesh mesh = make_icosphere(Vec3(0.1, 0, 0.9), 0.5, 1);
    const PointEstimateCloud cloud = PointEstimateCloud::from_mesh(mesh);
    REQUIRE(cloud.size() == 42);
    for (std::size_t k = 0; k < cloud.size(); ++k) {
        CHECK(bitwise_equal(cloud.points[k], mesh.vertices[k]));
        CHECK(cloud.status[k].kind == PointStatusKind::OutsideApertureSet);
        CHECK(cloud.update_count[k] == 0);
    }
}
