/// @file geometry.hpp
/// @brief Rigid transforms, planes, perspective projection, and half-cone predicates.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "plenosim/errors.hpp"

namespace plenosim {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

/// Rigid body placement: p_world = rotation * p_body + translation.
struct Pose {
    Quat rotation{Quat::Identity()};
    Vec3 translation{Vec3::Zero()};

    static Pose identity() { return {}; }

    Vec3 apply(const Vec3& p_body) const { return rotation * p_body + translation; }
    Vec3 apply_inverse(const Vec3& p_world) const {
        return rotation.conjugate() * (p_world - translation);
    }
    Pose inverse() const;
    /// this then other applied on top: result.apply(p) == apply(other.apply(p)).
    Pose compose(const Pose& other) const;
    Mat3 rotation_matrix() const { return rotation.toRotationMatrix(); }
};

/// Plane through `point` with unit `normal` (normalized at construction).
struct Plane {
    Vec3 point{Vec3::Zero()};
    Vec3 normal{Vec3::UnitZ()};

    Plane() = default;
    Plane(const Vec3& point_on_plane, const Vec3& normal_direction);

    double signed_distance(const Vec3& p) const { return (p - point).dot(normal); }
};

/// Perspective projection of p onto the plane through pinhole q.
/// Throws DegenerateProjection when the line q->p is parallel to the plane
/// (|(p - q).normal| < 1e-12).
Vec3 project_through_point(const Vec3& pinhole, const Plane& plane, const Vec3& p);

/// Solid half-cone with apex strictly outside the closed base ball.
/// The positive cone opens away from the ball, the negative cone is the
/// bounded reflection between apex and ball.
struct HalfCone {
    Vec3 base_center{Vec3::Zero()};
    double base_radius{0.0};
    Vec3 apex{Vec3::Zero()};

    HalfCone(const Vec3& center, double radius, const Vec3& apex_point);
};

/// Cosine bound of the cone half-angle for a base ball at `base_center`
/// (radius `base_radius`) seen from an apex at the origin:
/// c = sqrt(1 - r^2/|x|^2). Throws InvalidCone when |x| <= r.
double cone_axis_bound(const Vec3& base_center, double base_radius);

/// p is in the open positive half-cone: p - apex = alpha (apex - x') for some
/// x' in the open base ball and alpha > 0. Strict; the apex itself is excluded.
bool positive_cone_contains(const HalfCone& cone, const Vec3& p);

/// p is in the open negative half-cone: p outside the closed base ball and
/// p - apex = alpha (x' - apex) for some x' in the open ball and 0 < alpha < 1.
bool negative_cone_contains(const HalfCone& cone, const Vec3& p);

/// Radius of a ball centred at the apex of a right cone (base radius b,
/// height h) that encloses the cone with slack: 2 sqrt(b^2 + h^2).
double right_cone_enclosing_radius(double base_radius, double height);

} // namespace plenosim
