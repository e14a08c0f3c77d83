#pragma once

#include <stdexcept>

namespace plenosim {

/// Projection line is (numerically) parallel to the target plane.
struct DegenerateProjection : std::domain_error {
    using std::domain_error::domain_error;
};

/// Thin-lens map evaluated at (or within 1e-12 of) the focal plane.
struct AtFocalPlane : std::domain_error {
    using std::domain_error::domain_error;
};

/// Half-cone with apex inside the closed base ball, or a base ball through the origin.
struct InvalidCone : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Camera parameter set violating a constructor constraint.
struct InvalidIntrinsics : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Ray missed the scene surface.
struct NoIntersection : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sample position outside the lenslet's circular subimage.
struct OutOfSubimage : std::domain_error {
    using std::domain_error::domain_error;
};

/// Local-error prefactor evaluated where 1 + D/Qz vanishes.
struct DegeneratePrefactor : std::domain_error {
    using std::domain_error::domain_error;
};

/// Depth probe at or below the camera's minimum admissible depth.
struct BelowMinDepth : std::domain_error {
    using std::domain_error::domain_error;
};

/// Trajectory pose requested at a position coincident with the facing centre.
struct DegenerateOrientation : std::domain_error {
    using std::domain_error::domain_error;
};

/// Malformed or inconsistent run configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File read/write failure.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace plenosim
