#include "plenosim/photometric.hpp"

namespace plenosim {

ErrorEvalContext ErrorEvalContext::make(const LightField& lf, const PlenopticIntrinsics& cam,
                                        const LensletId& l, double gradient_step) {
    if (!(gradient_step > 0.0) || !(gradient_step < 0.1)) {
        throw ConfigError("gradient step must lie in (0, 0.1)");
    }
    ErrorEvalContext ctx;
    ctx.light_field = &lf;
    ctx.camera = &cam;
    ctx.lenslet = l;
    ctx.quadrature_weight = cam.lenslet_pitch() * cam.lenslet_pitch();
    ctx.gradient_step = gradient_step;
    return ctx;
}

double pairwise_error(const ErrorEvalContext& ctx, const LensletId& probe,
                      double depth_estimate) {
    const PlenopticIntrinsics& cam = *ctx.camera;
    const double delta = virtual_distance(cam, depth_estimate, ctx.lenslet);
    const Vec3 proj = lenslet_project(cam, probe, delta, ctx.lenslet);
    const Color ref = ctx.light_field->central_sample(cam, ctx.lenslet);
    const Color seen = ctx.light_field->sample(cam, probe, Vec2(proj.x(), proj.y()));
    return (ref - seen).squaredNorm();
}

LocalError local_error(const ErrorEvalContext& ctx, double depth_estimate) {
    const PlenopticIntrinsics& cam = *ctx.camera;
    const double delta = virtual_distance(cam, depth_estimate, ctx.lenslet);
    const Color ref = ctx.light_field->central_sample(cam, ctx.lenslet);
    return compensated_window_integral(ctx, depth_estimate, [&](const LensletId& probe) {
        const Vec3 proj = lenslet_project(cam, probe, delta, ctx.lenslet);
        const Color seen = ctx.light_field->sample(cam, probe, Vec2(proj.x(), proj.y()));
        return (ref - seen).squaredNorm();
    });
}

GradientSample depth_gradient(const ErrorEvalContext& ctx, double depth_estimate) {
    const double h = ctx.gradient_step;
    const double lo = depth_estimate * (1.0 - h);
    const double hi = depth_estimate * (1.0 + h);
    if (!(lo > ctx.camera->min_depth())) {
        throw BelowMinDepth("gradient probe below the minimum admissible depth");
    }
    const LocalError e_hi = local_error(ctx, hi);
    const LocalError e_lo = local_error(ctx, lo);
    GradientSample g;
    g.value = (e_hi.value - e_lo.value) / (2.0 * h * depth_estimate);
    g.truncated = e_hi.truncated || e_lo.truncated;
    return g;
}

} // namespace plenosim
