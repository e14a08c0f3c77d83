#include "plenosim/lightfield.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

namespace plenosim {

LightField::LightField(int lenslet_rows, int lenslet_cols, int subimage_rows, int subimage_cols,
                       Color sentinel)
    : M_(lenslet_rows), N_(lenslet_cols), m_(subimage_rows), n_(subimage_cols) {
    const std::size_t count =
        static_cast<std::size_t>(M_) * N_ * static_cast<std::size_t>(m_) * n_;
    data_.assign(count, sentinel);
    mask_.assign(count, 0);
}

Color LightField::sample(const PlenopticIntrinsics& cam, const LensletId& l, const Vec2& q) const {
    const Vec3 cp = cam.central_pixel(l);
    const Vec2 rel = q - Vec2(cp.x(), cp.y());
    if (rel.norm() >= cam.subimage_radius()) {
        throw OutOfSubimage("sample position outside the subimage disc");
    }
    // Clamping the stencil cell keeps a full 2x2 cell addressable right up to
    // the disc rim; just past the outermost pixel centre the cell extrapolates
    // linearly instead of collapsing to a nearest-neighbour read.
    const double fu = rel.x() / cam.pixel_pitch() + 0.5 * (m_ - 1);
    const double fv = rel.y() / cam.pixel_pitch() + 0.5 * (n_ - 1);
    const int u0 = std::clamp(static_cast<int>(std::floor(fu)), 0, m_ - 2);
    const int v0 = std::clamp(static_cast<int>(std::floor(fv)), 0, n_ - 2);
    const double au = fu - u0;
    const double av = fv - v0;

    // A cell corner cut off by the subimage mask is completed by linear
    // extension from its in-mask column (else row) neighbours, so the bilinear
    // blend keeps both axes of the local gradient; renormalizing the corner
    // away instead would collapse interpolation along one axis and leak a
    // first-order error into every rim sample.
    Color val[2][2];
    bool have[2][2];
    const auto column_ext = [&](int u, int dv, Color& out) {
        const int vm = v0 + (1 - dv);
        if (!in_mask(l, u, vm)) {
            return false;
        }
        const int vb = dv ? v0 - 1 : v0 + 2;
        out = (vb >= 0 && vb < n_ && in_mask(l, u, vb))
                  ? Color(2.0 * pixel(l, u, vm) - pixel(l, u, vb))
                  : pixel(l, u, vm);
        return true;
    };
    const auto row_ext = [&](int du, int v, Color& out) {
        const int um = u0 + (1 - du);
        if (!in_mask(l, um, v)) {
            return false;
        }
        const int ub = du ? u0 - 1 : u0 + 2;
        out = (ub >= 0 && ub < m_ && in_mask(l, ub, v))
                  ? Color(2.0 * pixel(l, um, v) - pixel(l, ub, v))
                  : pixel(l, um, v);
        return true;
    };
    for (int du = 0; du <= 1; ++du) {
        for (int dv = 0; dv <= 1; ++dv) {
            const int u = u0 + du;
            const int v = v0 + dv;
            if (in_mask(l, u, v)) {
                val[du][dv] = pixel(l, u, v);
                have[du][dv] = true;
            } else if (column_ext(u, dv, val[du][dv]) || row_ext(du, v, val[du][dv])) {
                have[du][dv] = true;
            } else if (in_mask(l, u0 + (1 - du), v0 + (1 - dv))) {
                val[du][dv] = pixel(l, u0 + (1 - du), v0 + (1 - dv));
                have[du][dv] = true;
            } else {
                have[du][dv] = false;
            }
        }
    }

    Color acc = Color::Zero();
    double wsum = 0.0;
    for (int du = 0; du <= 1; ++du) {
        for (int dv = 0; dv <= 1; ++dv) {
            if (!have[du][dv]) {
                continue;
            }
            const double w = (du ? au : 1.0 - au) * (dv ? av : 1.0 - av);
            acc += w * val[du][dv];
            wsum += w;
        }
    }
    if (wsum <= 0.0) {
        throw OutOfSubimage("no in-mask neighbour for the sample position");
    }
    return acc / wsum;
}

Color LightField::central_sample(const PlenopticIntrinsics& cam, const LensletId& l) const {
    const Vec3 cp = cam.central_pixel(l);
    return sample(cam, l, Vec2(cp.x(), cp.y()));
}

LightField render(const SceneModel& scene, const PlenopticIntrinsics& cam, const Pose& pose,
                  int threads) {
    LightField lf(cam.lenslet_rows(), cam.lenslet_cols(), cam.subimage_rows(),
                  cam.subimage_cols());
    const double F = cam.focal_length();
    const double D = cam.lens_to_pupilar();
    const double d = cam.pupilar_to_retinal();
    const Mat3 R = pose.rotation_matrix();

    std::atomic<int> misses{0};
    auto render_lenslet_row = [&](int i) {
        int local_misses = 0;
        for (int j = 0; j < cam.lenslet_cols(); ++j) {
            const LensletId l = cam.lenslet(i, j);
            const Vec3 l3 = cam.lenslet_pos3(l);
            // The lenslet's world-side conjugate: every refracted ray for this
            // subimage passes through it (virtual for F > D).
            const Vec3 conjugate = (F / (F - D)) * l3;
            for (int u = 0; u < cam.subimage_rows(); ++u) {
                for (int v = 0; v < cam.subimage_cols(); ++v) {
                    if (!cam.pixel_in_mask(u, v)) {
                        continue;
                    }
                    lf.set_mask(l, u, v, true);
                    const Vec2 pc = cam.pixel_center(l, u, v);
                    const Vec3 pix(pc.x(), pc.y(), -(D + d));
                    // Pixel -> pinhole line continued to the lens plane z = 0.
                    const Vec3 zeta = pix + ((D + d) / d) * (l3 - pix);
                    // Of the two directions along the refracted line, cast the
                    // one heading into the scene half-space.
                    Vec3 dir_cam = (zeta - conjugate).normalized();
                    if (dir_cam.z() < 0.0) {
                        dir_cam = -dir_cam;
                    }
                    const Vec3 origin = pose.translation + R * zeta;
                    const Vec3 dir = R * dir_cam;
                    if (const auto hit = scene.intersect_ray(origin, dir)) {
                        lf.pixel(l, u, v) = scene.shade(hit->point);
                    } else {
                        ++local_misses;
                    }
                }
            }
        }
        misses += local_misses;
    };

    const int rows = cam.lenslet_rows();
    const int n_threads = std::max(1, std::min(threads, rows));
    if (n_threads == 1) {
        for (int i = 0; i < rows; ++i) {
            render_lenslet_row(i);
        }
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back([&, t] {
                for (int i = t; i < rows; i += n_threads) {
                    render_lenslet_row(i);
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    lf.set_miss_count(misses.load());
    return lf;
}

} // namespace plenosim
