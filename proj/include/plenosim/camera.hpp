/// @file camera.hpp
/// @brief Plenoptic camera intrinsics and the thin-lens / lenslet projection maps.
///
/// Camera frame convention: the optical centre of the main lens sits at the
/// origin, the principal axis nu is +z, the pupilar (lenslet) plane is z = -D,
/// and the retinal (sensor) plane is z = -(D + d). Scene points have z > 0.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "plenosim/errors.hpp"
#include "plenosim/geometry.hpp"

namespace plenosim {

/// A lenslet of the pupilar-plane grid: integer grid indices plus its
/// in-plane position (metres, camera frame, grid centred on the axis).
struct LensletId {
    int i{0};
    int j{0};
    Vec2 position{Vec2::Zero()};

    bool operator==(const LensletId& o) const { return i == o.i && j == o.j; }
};

/// Validated camera parameter set. Lengths in metres.
class PlenopticIntrinsics {
  public:
    /// Throws InvalidIntrinsics unless all lengths are positive, F != D,
    /// and the grid/pixel counts are positive.
    PlenopticIntrinsics(double focal_length, double lens_to_pupilar, double pupilar_to_retinal,
                        double aperture_radius, double pixel_pitch, double lenslet_pitch,
                        int lenslet_rows, int lenslet_cols, int subimage_rows, int subimage_cols);

    double focal_length() const { return F_; }
    double lens_to_pupilar() const { return D_; }
    double pupilar_to_retinal() const { return d_; }
    double aperture_radius() const { return A_; }
    double pixel_pitch() const { return s_p_; }
    double lenslet_pitch() const { return pitch_; }
    int lenslet_rows() const { return M_; }
    int lenslet_cols() const { return N_; }
    int subimage_rows() const { return m_; }
    int subimage_cols() const { return n_; }

    /// Subimage disc radius V = (d/D) A on the retinal plane.
    double subimage_radius() const { return V_; }
    /// True when adjacent subimage discs overlap: (1 + d/D) pitch < 2V.
    bool subimages_overlap() const { return overlap_; }

    bool contains(int i, int j) const { return i >= 0 && i < M_ && j >= 0 && j < N_; }
    LensletId lenslet(int i, int j) const;
    /// Lenslet embedded in 3-space on the pupilar plane z = -D.
    Vec3 lenslet_pos3(const LensletId& l) const { return {l.position.x(), l.position.y(), -D_}; }

    /// Unit vector eta(l) from the lenslet through the optical centre into the
    /// scene; eta . nu = D / |l| > 0.
    Vec3 direction(const LensletId& l) const;

    /// inf over the grid of eta(l) . nu, attained at a corner lenslet.
    double min_direction_cos() const { return min_dir_cos_; }

    /// Minimum admissible depth: max(F, D F/(F - D)) / min_direction_cos().
    /// Throws InvalidIntrinsics when F <= D.
    double min_depth() const;

    /// Retinal position of the pixel behind the optical centre as seen from l:
    /// p_l = l - d eta(l) / (eta(l) . nu). Independent of scene content.
    Vec3 central_pixel(const LensletId& l) const;

    /// In-plane retinal coordinates of pixel (u, v) of l's subimage. Pixel
    /// (u, v) = ((m-1)/2, (n-1)/2) sits exactly on the central pixel.
    Vec2 pixel_center(const LensletId& l, int u, int v) const;

    /// Pixel centre within the subimage disc (strict |q - p_l| < V).
    bool pixel_in_mask(int u, int v) const;

    /// Nearest lenslet to in-plane pupilar coordinates, ties rounding toward
    /// negative indices. Returns false when outside the grid footprint
    /// (lenslet centres padded by half a pitch).
    bool nearest_lenslet(const Vec2& pupilar_xy, LensletId& out) const;

  private:
    double F_, D_, d_, A_, s_p_, pitch_;
    int M_, N_, m_, n_;
    double V_;
    double min_dir_cos_;
    bool overlap_;
};

/// Thin-lens image of a world-side point: iota(P) = F/(F - P.z) P.
/// Throws AtFocalPlane within 1e-12 (relative to F) of the focal plane.
Vec3 thin_lens_image(const PlenopticIntrinsics& cam, const Vec3& p);

/// Inverse of thin_lens_image: Q -> F Q/(F + Q.z).
Vec3 thin_lens_object(const PlenopticIntrinsics& cam, const Vec3& q);

/// Signed distance delta from lenslet l to the thin-lens image of the point at
/// distance `depth` from the optical centre along eta(l), measured along
/// eta(l): l + delta eta(l) = iota(depth * eta(l)). May be negative.
double virtual_distance(const PlenopticIntrinsics& cam, double depth, const LensletId& l);

/// Retinal image under probe lenslet lp of the virtual point l + delta eta(l):
/// phi(lp, delta, l) = (d/(delta eta.z)) (lp - l - delta eta) + lp.
/// Throws DegenerateProjection when |delta eta.z| < 1e-12.
Vec3 lenslet_project(const PlenopticIntrinsics& cam, const LensletId& probe, double delta,
                     const LensletId& l);

struct VisibilityWindow {
    std::vector<LensletId> lenslets;
    bool truncated{false};
};

/// Lenslets lp whose subimages see the virtual point of l at depth estimate
/// `depth`: |phi(lp, lambda(depth, l), l) - p_lp| < V. Always contains l.
/// `truncated` reports clipping at the grid boundary.
/// Throws BelowMinDepth unless depth > min_depth().
VisibilityWindow visibility_window(const PlenopticIntrinsics& cam, double depth,
                                   const LensletId& l);

namespace detail {

/// Shared window iteration: calls visit(probe) for each window member.
/// Returns the truncation flag. Membership is the exact phi-based test; the
/// analytic image of the aperture disc on the pupilar plane only bounds the
/// scan box (one pitch of slack).
template <class Visit>
bool for_each_window_lenslet(const PlenopticIntrinsics& cam, double depth, const LensletId& l,
                             Visit&& visit) {
    if (!(depth > cam.min_depth())) {
        throw BelowMinDepth("depth estimate not above the minimum admissible depth");
    }
    const double delta = virtual_distance(cam, depth, l);
    const Vec3 eta = cam.direction(l);
    const Vec3 image = cam.lenslet_pos3(l) + delta * eta;

    // Window disc on the pupilar plane: project the aperture disc from the
    // image point. image.z < -F < -D for depth > min_depth, so t != 0.
    const double t = image.z() / (image.z() + cam.lens_to_pupilar());
    const Vec2 center(-cam.lens_to_pupilar() * image.x() / image.z(),
                      -cam.lens_to_pupilar() * image.y() / image.z());
    const double radius = std::abs(cam.aperture_radius() / t);

    const double pitch = cam.lenslet_pitch();
    const double x0 = -0.5 * (cam.lenslet_rows() - 1) * pitch;
    const double y0 = -0.5 * (cam.lenslet_cols() - 1) * pitch;
    const int i_lo = std::max(0, static_cast<int>(std::floor((center.x() - radius - x0) / pitch)) - 1);
    const int i_hi = std::min(cam.lenslet_rows() - 1,
                              static_cast<int>(std::ceil((center.x() + radius - x0) / pitch)) + 1);
    const int j_lo = std::max(0, static_cast<int>(std::floor((center.y() - radius - y0) / pitch)) - 1);
    const int j_hi = std::min(cam.lenslet_cols() - 1,
                              static_cast<int>(std::ceil((center.y() + radius - y0) / pitch)) + 1);

    const double x_max = -x0;
    const double y_max = -y0;
    const bool truncated = (center.x() - radius < x0) || (center.x() + radius > x_max) ||
                           (center.y() - radius < y0) || (center.y() + radius > y_max);

    const double V = cam.subimage_radius();
    for (int i = i_lo; i <= i_hi; ++i) {
        for (int j = j_lo; j <= j_hi; ++j) {
            const LensletId probe = cam.lenslet(i, j);
            const Vec3 proj = lenslet_project(cam, probe, delta, l);
            const Vec3 cp = cam.central_pixel(probe);
            if ((proj - cp).head<2>().norm() < V) {
                visit(probe);
            }
        }
    }
    return truncated;
}

} // namespace detail

} // namespace plenosim
