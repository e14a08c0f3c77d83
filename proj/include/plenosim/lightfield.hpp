/// @file lightfield.hpp
/// @brief Tiled two-plane light-field image: rendering and subimage sampling.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plenosim/camera.hpp"
#include "plenosim/scene.hpp"

namespace plenosim {

/// One captured frame: an (M*m) x (N*n) RGB grid tiled lenslet-major. The
/// subimage of lenslet (i, j) occupies pixel rows [i*m, (i+1)*m) and columns
/// [j*n, (j+1)*n). Pixels outside a subimage's circular mask stay at the miss
/// sentinel and are never read back by sampling.
class LightField {
  public:
    LightField(int lenslet_rows, int lenslet_cols, int subimage_rows, int subimage_cols,
               Color sentinel = Color::Zero());

    int rows() const { return M_ * m_; }
    int cols() const { return N_ * n_; }

    Color& pixel(const LensletId& l, int u, int v) { return data_[index(l, u, v)]; }
    const Color& pixel(const LensletId& l, int u, int v) const { return data_[index(l, u, v)]; }
    /// Tiled-grid access by global pixel row/column.
    const Color& raw(int row, int col) const {
        return data_[static_cast<std::size_t>(row) * (static_cast<std::size_t>(N_) * n_) + col];
    }
    bool in_mask(const LensletId& l, int u, int v) const { return mask_[index(l, u, v)] != 0; }
    void set_mask(const LensletId& l, int u, int v, bool on) {
        mask_[index(l, u, v)] = on ? 1 : 0;
    }

    /// Bilinear sample of lenslet l's subimage at in-plane retinal position q.
    /// The 2x2 stencil cell clamps to the subimage grid (linear extrapolation
    /// just past the outermost pixel centres), and a cell corner cut off by
    /// the subimage mask is completed by linear extension from its in-mask
    /// column or row neighbours, so reconstruction stays first-order accurate
    /// across the whole disc and reads only in-mask pixels of l's own block.
    /// Throws OutOfSubimage when |q - p_l| >= V or no in-mask neighbour
    /// exists.
    Color sample(const PlenopticIntrinsics& cam, const LensletId& l, const Vec2& q) const;

    /// Stored colour at the central pixel of l (the central-ray sample).
    Color central_sample(const PlenopticIntrinsics& cam, const LensletId& l) const;

    int miss_count() const { return miss_count_; }
    void set_miss_count(int c) { miss_count_ = c; }

  private:
    std::size_t index(const LensletId& l, int u, int v) const {
        return (static_cast<std::size_t>(l.i) * m_ + u) * (static_cast<std::size_t>(N_) * n_) +
               static_cast<std::size_t>(l.j) * n_ + v;
    }
    int M_, N_, m_, n_;
    std::vector<Color> data_;
    std::vector<std::uint8_t> mask_;
    int miss_count_{0};
};

/// Backward ray-trace of every in-mask pixel: pixel -> lenslet pinhole ->
/// main lens plane, thin-lens refraction, first scene hit shaded by the
/// brightness map. Misses keep the sentinel colour and are counted.
/// Deterministic for any `threads` >= 1.
LightField render(const SceneModel& scene, const PlenopticIntrinsics& cam, const Pose& pose,
                  int threads = 1);

/// 8-bit RGB PNG of the tiled grid (row 0 at the top).
void write_png(const LightField& lf, const std::string& path);

/// Plain-text sidecar describing a rendered frame (camera geometry, pose,
/// frame index) so an exported PNG is self-describing.
void write_frame_metadata(const PlenopticIntrinsics& cam, const Pose& pose, int frame_index,
                          const std::string& path);

} // namespace plenosim
