#include "plenosim/trajectory.hpp"

#include <cmath>
#include <sstream>

#include "plenosim/observer.hpp"

namespace plenosim {

LissajousPath LissajousPath::make(const Vec3& amplitudes, const Vec3& frequencies,
                                  const Vec3& phases, const Vec3& center) {
    if (amplitudes == Vec3::Zero()) {
        throw ConfigError("all-zero path amplitudes leave the facing direction undefined");
    }
    LissajousPath p;
    p.amplitudes = amplitudes;
    p.frequencies = frequencies;
    p.phases = phases;
    p.center = center;
    return p;
}

Pose pose_at(const LissajousPath& path, double frame) {
    Vec3 offset;
    for (int k = 0; k < 3; ++k) {
        offset[k] = path.amplitudes[k] * std::sin(path.frequencies[k] * frame + path.phases[k]);
    }
    const double r = offset.norm();
    if (r < 1e-12) {
        throw DegenerateOrientation("camera position coincides with the facing centre");
    }
    const Vec3 outward = offset / r;

    Vec3 up = Vec3::UnitY();
    if (std::abs(outward.dot(up)) > 0.99) {
        up = Vec3::UnitX();
    }
    const Vec3 cam_y = (up - up.dot(outward) * outward).normalized();
    const Vec3 cam_x = cam_y.cross(outward);

    Mat3 rot;
    rot.col(0) = cam_x;
    rot.col(1) = cam_y;
    rot.col(2) = outward;

    Pose pose;
    pose.rotation = Quat(rot);
    pose.rotation.normalize();
    pose.translation = path.center + offset;
    return pose;
}

AssumptionsReport validate_assumptions(const LissajousPath& path, const PlenopticIntrinsics& cam,
                                       const SceneModel& scene, int frames,
                                       const std::vector<Vec3>& estimate_points) {
    AssumptionsReport rep;
    const double min_depth = cam.min_depth();

    // Corner lenslets bound the view cone laterally; the minimum-depth face
    // corners are the cone's extreme points.
    std::vector<Vec3> cone_corners;
    for (const int i : {0, cam.lenslet_rows() - 1}) {
        for (const int j : {0, cam.lenslet_cols() - 1}) {
            const LensletId l = cam.lenslet(i, j);
            const Vec3 eta = cam.direction(l);
            cone_corners.push_back((min_depth / eta.z()) * eta);
        }
    }

    std::vector<RevisitStats> stats(estimate_points.size());
    std::vector<int> last_seen(estimate_points.size(), -1);
    std::vector<int> max_gap(estimate_points.size(), 0);

    double ball_radius = 0.0;
    for (int f = 0; f < frames; ++f) {
        const Pose pose = pose_at(path, static_cast<double>(f));
        ball_radius = std::max(ball_radius, pose.translation.norm());
        const Mat3 R = pose.rotation_matrix();
        for (const Vec3& c : cone_corners) {
            ball_radius = std::max(ball_radius, (pose.translation + R * c).norm());
        }
        for (std::size_t k = 0; k < estimate_points.size(); ++k) {
            const PupilarProjection proj = project_to_pupilar(estimate_points[k], pose, cam);
            if (proj.kind == PupilarProjection::Kind::Hit) {
                ++stats[k].views;
                if (last_seen[k] >= 0) {
                    max_gap[k] = std::max(max_gap[k], f - last_seen[k]);
                }
                last_seen[k] = f;
            }
        }
    }
    rep.ball_radius = ball_radius;

    // Ball containment in the environment interior.
    if (scene.is_sphere()) {
        rep.camera_ball_inside_scene =
            ball_radius < scene.sphere().radius - (scene.sphere().center.norm());
    } else {
        bool ok = true;
        const auto& mesh = scene.mesh();
        for (const auto& face : mesh.faces) {
            const Vec3& a = mesh.vertices[face[0]];
            const Vec3 n = (mesh.vertices[face[1]] - a)
                               .cross(mesh.vertices[face[2]] - a)
                               .normalized();
            if (a.dot(n) < ball_radius) {
                ok = false;
                break;
            }
        }
        rep.camera_ball_inside_scene = ok;
    }

    rep.scene_convex = scene.is_sphere() || validate_mesh(scene.mesh()).convex;
    rep.brightness_monotone = scene.brightness().kind() == BrightnessMap::Kind::RadialMonotone;

    rep.per_point = std::move(stats);
    rep.never_seen_count = 0;
    rep.max_revisit_gap = 0;
    for (std::size_t k = 0; k < rep.per_point.size(); ++k) {
        // A point never (or only once) seen gets the whole run as its gap.
        if (rep.per_point[k].views == 0) {
            ++rep.never_seen_count;
            rep.per_point[k].max_gap = frames;
        } else {
            rep.per_point[k].max_gap = max_gap[k];
        }
        rep.max_revisit_gap = std::max(rep.max_revisit_gap, rep.per_point[k].max_gap);
    }
    rep.persistence_ok = !rep.per_point.empty() && rep.never_seen_count == 0;
    return rep;
}

std::string AssumptionsReport::to_text() const {
    std::ostringstream out;
    out << "camera_ball_radius_m " << ball_radius << "\n";
    out << "camera_ball_inside_scene " << (camera_ball_inside_scene ? "pass" : "fail") << "\n";
    out << "scene_convex " << (scene_convex ? "pass" : "fail") << "\n";
    out << "brightness_monotone_surrogate " << (brightness_monotone ? "pass" : "warn") << "\n";
    if (!per_point.empty()) {
        out << "tracked_points " << per_point.size() << "\n";
        out << "never_seen_points " << never_seen_count << "\n";
        out << "max_revisit_gap_frames " << max_revisit_gap << "\n";
        out << "persistence_surrogate " << (persistence_ok ? "pass" : "warn") << "\n";
    }
    return out.str();
}

} // namespace plenosim
