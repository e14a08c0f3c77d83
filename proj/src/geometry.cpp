#include "plenosim/geometry.hpp"

#include <cmath>

namespace plenosim {

Pose Pose::inverse() const {
    Pose out;
    out.rotation = rotation.conjugate();
    out.translation = -(out.rotation * translation);
    return out;
}

Pose Pose::compose(const Pose& other) const {
    Pose out;
    out.rotation = rotation * other.rotation;
    out.rotation.normalize();
    out.translation = rotation * other.translation + translation;
    return out;
}

Plane::Plane(const Vec3& point_on_plane, const Vec3& normal_direction) : point(point_on_plane) {
    const double n = normal_direction.norm();
    if (n < 1e-12) {
        throw DegenerateProjection("plane normal has (near-)zero length");
    }
    normal = normal_direction / n;
}

Vec3 project_through_point(const Vec3& pinhole, const Plane& plane, const Vec3& p) {
    const Vec3 dir = p - pinhole;
    const double denom = dir.dot(plane.normal);
    if (std::abs(denom) < 1e-12) {
        throw DegenerateProjection("projection line parallel to target plane");
    }
    const double t = (plane.point - pinhole).dot(plane.normal) / denom;
    return pinhole + t * dir;
}

HalfCone::HalfCone(const Vec3& center, double radius, const Vec3& apex_point)
    : base_center(center), base_radius(radius), apex(apex_point) {
    if (!(radius > 0.0)) {
        throw InvalidCone("base radius must be positive");
    }
    if ((apex - base_center).norm() <= base_radius) {
        throw InvalidCone("apex must lie strictly outside the closed base ball");
    }
}

double cone_axis_bound(const Vec3& base_center, double base_radius) {
    const double x2 = base_center.squaredNorm();
    const double r2 = base_radius * base_radius;
    if (!(base_radius > 0.0) || x2 <= r2) {
        throw InvalidCone("axis bound requires |base_center| > base_radius > 0");
    }
    return std::sqrt(1.0 - r2 / x2);
}

bool positive_cone_contains(const HalfCone& cone, const Vec3& p) {
    // Membership reduces to: does the ray {-s q : s > 0} from the apex-centred
    // frame meet the open base ball? Quadratic |s q + x|^2 < r^2 has a positive
    // root iff q.x < 0 and the discriminant is positive.
    const Vec3 q = p - cone.apex;
    const Vec3 x = cone.base_center - cone.apex;
    const double a = q.squaredNorm();
    if (a == 0.0) {
        return false;
    }
    const double qx = q.dot(x);
    if (qx >= 0.0) {
        return false;
    }
    const double c0 = x.squaredNorm() - cone.base_radius * cone.base_radius;
    return qx * qx > a * c0;
}

bool negative_cone_contains(const HalfCone& cone, const Vec3& p) {
    if ((p - cone.base_center).norm() <= cone.base_radius) {
        return false;
    }
    // q = alpha x' with x' in the ball and alpha in (0,1) iff some s > 1 has
    // s q inside the ball: a s^2 + b s + c0 < 0 for s > 1.
    const Vec3 q = p - cone.apex;
    const Vec3 x = cone.base_center - cone.apex;
    const double a = q.squaredNorm();
    if (a == 0.0) {
        return false;
    }
    const double b = -2.0 * q.dot(x);
    const double c0 = x.squaredNorm() - cone.base_radius * cone.base_radius;
    const double disc = b * b - 4.0 * a * c0;
    if (disc <= 0.0) {
        return false;
    }
    const double s_hi = (-b + std::sqrt(disc)) / (2.0 * a);
    return s_hi > 1.0;
}

double right_cone_enclosing_radius(double base_radius, double height) {
    return 2.0 * std::sqrt(base_radius * base_radius + height * height);
}

} // namespace plenosim
