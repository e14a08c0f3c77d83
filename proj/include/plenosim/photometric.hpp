/// @file photometric.hpp
/// @brief Windowed photometric depth error and its finite-difference gradient.
#pragma once

#include "plenosim/camera.hpp"
#include "plenosim/lightfield.hpp"

namespace plenosim {

/// Everything needed to evaluate the local error of one lenslet on one frame.
struct ErrorEvalContext {
    const LightField* light_field{nullptr};
    const PlenopticIntrinsics* camera{nullptr};
    LensletId lenslet;
    /// Quadrature weight per window lenslet (midpoint rule): lenslet_pitch^2.
    double quadrature_weight{0.0};
    /// Relative step of the central-difference depth gradient.
    double gradient_step{1e-3};

    /// Validates weight > 0 and gradient_step in (0, 0.1).
    static ErrorEvalContext make(const LightField& lf, const PlenopticIntrinsics& cam,
                                 const LensletId& l, double gradient_step = 1e-3);
};

/// Squared colour distance between the central-ray sample of the context
/// lenslet and the probe lenslet's view of the virtual point at the given
/// depth estimate. Propagates OutOfSubimage when the probe is not actually in
/// the visibility window.
double pairwise_error(const ErrorEvalContext& ctx, const LensletId& probe, double depth_estimate);

struct LocalError {
    double value{0.0};
    bool truncated{false};
    int window_size{0};
};

/// Window-compensated quadrature of an arbitrary per-lenslet kernel:
/// (1 + D/Qz)^-2 * sum_W kernel(probe) * weight, with Qz the axial coordinate
/// of the thin-lens image of the estimate. The prefactor cancels the
/// depth-dependent window area so comparable estimates produce comparable
/// magnitudes. Throws DegeneratePrefactor when |1 + D/Qz| < 1e-9 and
/// BelowMinDepth when the estimate is not above the minimum depth.
template <class Kernel>
LocalError compensated_window_integral(const ErrorEvalContext& ctx, double depth_estimate,
                                       Kernel&& kernel) {
    const PlenopticIntrinsics& cam = *ctx.camera;
    const Vec3 eta = cam.direction(ctx.lenslet);
    const Vec3 image = thin_lens_image(cam, depth_estimate * eta);
    const double qz = image.z();
    const double pref = 1.0 + cam.lens_to_pupilar() / qz;
    if (std::abs(pref) < 1e-9) {
        throw DegeneratePrefactor("window-compensation prefactor vanishes");
    }
    LocalError out;
    double sum = 0.0;
    out.truncated = detail::for_each_window_lenslet(
        cam, depth_estimate, ctx.lenslet, [&](const LensletId& probe) {
            sum += kernel(probe);
            ++out.window_size;
        });
    out.value = sum * ctx.quadrature_weight / (pref * pref);
    return out;
}

/// The local photometric depth error: compensated window quadrature of the
/// pairwise error at the given depth estimate.
LocalError local_error(const ErrorEvalContext& ctx, double depth_estimate);

/// Central-difference depth gradient with relative step h = ctx.gradient_step:
/// (eps(depth (1+h)) - eps(depth (1-h))) / (2 h depth).
/// `truncated` is set when either probe's window clipped at the grid edge.
struct GradientSample {
    double value{0.0};
    bool truncated{false};
};

GradientSample depth_gradient(const ErrorEvalContext& ctx, double depth_estimate);

} // namespace plenosim
