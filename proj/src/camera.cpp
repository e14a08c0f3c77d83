#include "plenosim/camera.hpp"

#include <cmath>

namespace plenosim {

PlenopticIntrinsics::PlenopticIntrinsics(double focal_length, double lens_to_pupilar,
                                         double pupilar_to_retinal, double aperture_radius,
                                         double pixel_pitch, double lenslet_pitch,
                                         int lenslet_rows, int lenslet_cols, int subimage_rows,
                                         int subimage_cols)
    : F_(focal_length), D_(lens_to_pupilar), d_(pupilar_to_retinal), A_(aperture_radius),
      s_p_(pixel_pitch), pitch_(lenslet_pitch), M_(lenslet_rows), N_(lenslet_cols),
      m_(subimage_rows), n_(subimage_cols) {
    if (!(F_ > 0.0) || !(D_ > 0.0) || !(d_ > 0.0) || !(A_ > 0.0) || !(s_p_ > 0.0) ||
        !(pitch_ > 0.0)) {
        throw InvalidIntrinsics("all camera lengths must be positive");
    }
    if (F_ == D_) {
        throw InvalidIntrinsics("focal length must differ from the lens-to-pupilar distance");
    }
    if (M_ <= 0 || N_ <= 0 || m_ <= 0 || n_ <= 0) {
        throw InvalidIntrinsics("grid and subimage pixel counts must be positive");
    }
    V_ = (d_ / D_) * A_;
    overlap_ = (1.0 + d_ / D_) * pitch_ < 2.0 * V_;

    // The infimum of eta . nu = D/|l| over the grid is attained at maximal |l|,
    // i.e. at a corner lenslet.
    const double cx = 0.5 * (M_ - 1) * pitch_;
    const double cy = 0.5 * (N_ - 1) * pitch_;
    min_dir_cos_ = D_ / std::sqrt(D_ * D_ + cx * cx + cy * cy);
}

LensletId PlenopticIntrinsics::lenslet(int i, int j) const {
    LensletId l;
    l.i = i;
    l.j = j;
    l.position = Vec2((i - 0.5 * (M_ - 1)) * pitch_, (j - 0.5 * (N_ - 1)) * pitch_);
    return l;
}

Vec3 PlenopticIntrinsics::direction(const LensletId& l) const {
    return Vec3(-l.position.x(), -l.position.y(), D_).normalized();
}

double PlenopticIntrinsics::min_depth() const {
    if (F_ <= D_) {
        throw InvalidIntrinsics("minimum depth requires F > D");
    }
    return std::max(F_, D_ * F_ / (F_ - D_)) / min_dir_cos_;
}

Vec3 PlenopticIntrinsics::central_pixel(const LensletId& l) const {
    const Vec3 eta = direction(l);
    return lenslet_pos3(l) - d_ * eta / eta.z();
}

Vec2 PlenopticIntrinsics::pixel_center(const LensletId& l, int u, int v) const {
    const Vec3 cp = central_pixel(l);
    return Vec2(cp.x() + s_p_ * (u - 0.5 * (m_ - 1)), cp.y() + s_p_ * (v - 0.5 * (n_ - 1)));
}

bool PlenopticIntrinsics::pixel_in_mask(int u, int v) const {
    const double du = s_p_ * (u - 0.5 * (m_ - 1));
    const double dv = s_p_ * (v - 0.5 * (n_ - 1));
    return std::sqrt(du * du + dv * dv) < V_;
}

bool PlenopticIntrinsics::nearest_lenslet(const Vec2& pupilar_xy, LensletId& out) const {
    const double fi = pupilar_xy.x() / pitch_ + 0.5 * (M_ - 1);
    const double fj = pupilar_xy.y() / pitch_ + 0.5 * (N_ - 1);
    // Half-way ties round toward the lower index.
    const int i = static_cast<int>(std::ceil(fi - 0.5));
    const int j = static_cast<int>(std::ceil(fj - 0.5));
    if (!contains(i, j)) {
        return false;
    }
    out = lenslet(i, j);
    return true;
}

Vec3 thin_lens_image(const PlenopticIntrinsics& cam, const Vec3& p) {
    const double F = cam.focal_length();
    const double denom = F - p.z();
    if (std::abs(denom) < 1e-12 * F) {
        throw AtFocalPlane("thin-lens image undefined on the focal plane");
    }
    return (F / denom) * p;
}

Vec3 thin_lens_object(const PlenopticIntrinsics& cam, const Vec3& q) {
    const double F = cam.focal_length();
    const double denom = F + q.z();
    if (std::abs(denom) < 1e-12 * F) {
        throw AtFocalPlane("thin-lens object undefined on the image-side focal plane");
    }
    return (F / denom) * q;
}

double virtual_distance(const PlenopticIntrinsics& cam, double depth, const LensletId& l) {
    const double F = cam.focal_length();
    const Vec3 eta = cam.direction(l);
    const double axial = depth * eta.z();
    if (std::abs(F - axial) < 1e-12 * F) {
        throw AtFocalPlane("point at the focal distance has no finite image");
    }
    const double l_dot_eta = cam.lenslet_pos3(l).dot(eta);
    return F * depth / (F - axial) - l_dot_eta;
}

Vec3 lenslet_project(const PlenopticIntrinsics& cam, const LensletId& probe, double delta,
                     const LensletId& l) {
    const Vec3 eta = cam.direction(l);
    const double denom = delta * eta.z();
    if (std::abs(denom) < 1e-12) {
        throw DegenerateProjection("virtual point on the pupilar plane");
    }
    const Vec3 lp = cam.lenslet_pos3(probe);
    return (cam.pupilar_to_retinal() / denom) * (lp - cam.lenslet_pos3(l) - delta * eta) + lp;
}

VisibilityWindow visibility_window(const PlenopticIntrinsics& cam, double depth,
                                   const LensletId& l) {
    VisibilityWindow w;
    w.truncated = detail::for_each_window_lenslet(
        cam, depth, l, [&w](const LensletId& probe) { w.lenslets.push_back(probe); });
    return w;
}

} // namespace plenosim
