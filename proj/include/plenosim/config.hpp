/// @file config.hpp
/// @brief Run configuration: plain-text sectioned key-value files with units
/// in the key names. See configs/default.cfg for the full schema.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "plenosim/camera.hpp"
#include "plenosim/observer.hpp"
#include "plenosim/scene.hpp"
#include "plenosim/trajectory.hpp"

namespace plenosim {

/// Complete description of one simulation run. All distances in metres,
/// frequencies in radians per frame.
struct RunConfig {
    // [camera]
    double focal_length_m{0.05};
    double lens_to_pupilar_m{0.025};
    double pupilar_to_retinal_m{0.002};
    double aperture_radius_m{0.01};
    double pixel_pitch_m{0.00018};
    double lenslet_pitch_m{0.0016};
    int lenslet_rows{15};
    int lenslet_cols{15};
    int subimage_rows{9};
    int subimage_cols{9};

    // [scene]
    std::string scene_kind{"sphere"};
    double scene_radius_m{1.0};
    Vec3 scene_center_m{Vec3::Zero()};
    std::string brightness{"coordinate_rgb"};
    double texture_frequency_per_m{0.5};
    Vec3 monotone_anchor_m{0.0, 0.0, 1.0};
    double monotone_range_m{2.2};

    // [trajectory]
    Vec3 amplitudes_m{0.25, 0.25, 0.25};
    Vec3 frequencies_rad_per_frame{Vec3::Zero()}; // filled by desk_default()
    Vec3 phases_rad{Vec3::Zero()};                // filled by desk_default()
    Vec3 trajectory_center_m{Vec3::Zero()};

    // [observer]
    double gain{1.0e7};
    std::vector<double> sweep_gains{1.0e5, 1.0e6, 1.0e7, 1.0e9};
    int frames{600};
    double frame_dt_s{1.0};
    double gradient_step_rel{1e-3};
    bool freeze_truncated_windows{false};

    // [estimate]
    int icosphere_subdivisions{3};
    double estimate_radius_m{0.9};
    Vec3 estimate_center_m{Vec3::Zero()};

    // [output]
    std::string output_directory;
    int export_every_frames{50};

    // [run]
    unsigned seed{12345};
    int threads{1};
    bool check_cone_containment{true};

    /// Desk-scale defaults (the values above with the trajectory frequencies
    /// set to 7, 9, 11 cycles over the configured frame count).
    static RunConfig desk_default();

    /// Parses a config file; unknown keys and malformed values raise
    /// ConfigError. Missing keys keep the desk-scale defaults.
    static RunConfig from_file(const std::string& path);

    /// Constructor-level validation of the derived objects.
    PlenopticIntrinsics make_camera() const;
    SceneModel make_scene() const;
    LissajousPath make_path() const;
    PointEstimateCloud make_initial_cloud() const;
    ObserverConfig make_observer(double gain_override) const;
};

} // namespace plenosim
