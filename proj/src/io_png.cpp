#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "plenosim/lightfield.hpp"

namespace plenosim {

void write_png(const LightField& lf, const std::string& path) {
    const int w = lf.cols();
    const int h = lf.rows();
    FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) {
        throw IoError("cannot open for writing: " + path);
    }
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info || setjmp(png_jmpbuf(png))) {
        if (png) {
            png_destroy_write_struct(&png, info ? &info : nullptr);
        }
        std::fclose(fp);
        throw IoError("png write failed: " + path);
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, w, h, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<png_byte> row(static_cast<std::size_t>(w) * 3);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const Color& px = lf.raw(r, c);
            row[3 * c + 0] = static_cast<png_byte>(
                std::clamp(static_cast<int>(std::lround(px.x() * 255.0)), 0, 255));
            row[3 * c + 1] = static_cast<png_byte>(
                std::clamp(static_cast<int>(std::lround(px.y() * 255.0)), 0, 255));
            row[3 * c + 2] = static_cast<png_byte>(
                std::clamp(static_cast<int>(std::lround(px.z() * 255.0)), 0, 255));
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

void write_frame_metadata(const PlenopticIntrinsics& cam, const Pose& pose, int frame_index,
                          const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "frame %d\n"
                  "focal_length_m %.12g\n"
                  "lens_to_pupilar_m %.12g\n"
                  "pupilar_to_retinal_m %.12g\n"
                  "aperture_radius_m %.12g\n"
                  "pixel_pitch_m %.12g\n"
                  "lenslet_pitch_m %.12g\n"
                  "lenslet_grid %d %d\n"
                  "subimage_pixels %d %d\n",
                  frame_index, cam.focal_length(), cam.lens_to_pupilar(),
                  cam.pupilar_to_retinal(), cam.aperture_radius(), cam.pixel_pitch(),
                  cam.lenslet_pitch(), cam.lenslet_rows(), cam.lenslet_cols(),
                  cam.subimage_rows(), cam.subimage_cols());
    out << buf;
    std::snprintf(buf, sizeof(buf),
                  "position_m %.12g %.12g %.12g\n"
                  "rotation_wxyz %.12g %.12g %.12g %.12g\n",
                  pose.translation.x(), pose.translation.y(), pose.translation.z(),
                  pose.rotation.w(), pose.rotation.x(), pose.rotation.y(), pose.rotation.z());
    out << buf;
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

} // namespace plenosim
