/// @file simharness.hpp
/// @brief Frame loop tying camera, scene, trajectory and observer together,
/// with CSV metrics, PLY exports and the gain sweep.
#pragma once

#include <string>
#include <vector>

#include "plenosim/config.hpp"
#include "plenosim/trajectory.hpp"

namespace plenosim {

struct RunMetrics {
    double initial_total_sq_error{0.0};
    std::vector<double> total_sq_error;
    std::vector<double> mean_dist;
    std::vector<int> n_updated;
    std::vector<int> n_outside;
    std::vector<int> n_behind;
    std::vector<int> n_grad_err;

    double final_total_sq_error() const {
        return total_sq_error.empty() ? initial_total_sq_error : total_sq_error.back();
    }
    /// Total error after the first `frame_count` steps (the last row when the
    /// run is shorter).
    double error_after(int frame_count) const;
};

struct RunResult {
    RunMetrics metrics;
    PointEstimateCloud cloud;
    AssumptionsReport assumptions;
    /// Origin-centred ball over camera centres plus minimum-depth view cones.
    double cone_ball_radius{0.0};
    /// Points initialized inside the scene but strictly outside that ball.
    int cone_checked_points{0};
    /// Per-frame cone-membership failures over all checked points.
    long cone_violations{0};
};

/// Simulates config.frames frames at the configured single gain, writing
/// metrics.csv, periodic and final status-coloured cloud PLYs, and the
/// assumptions report into config.output_directory (no files when empty).
/// Throws ConfigError when the camera ball escapes the scene or the scene is
/// not convex; the monotone-brightness and persistence surrogates only warn.
RunResult run(const RunConfig& config);

struct GainRun {
    double gain{0.0};
    RunResult result;
    bool diverged{false};
    double error_after_200{0.0};
};

struct GainSweepResult {
    std::vector<GainRun> runs;
    /// Lowest final error among non-diverged gains; -1 when all diverged.
    int best_index{-1};
};

/// Runs every gain against the identical rendered frame sequence (frames are
/// rendered once and shared, which is bitwise-equal to separate runs).
/// Divergence: total squared error exceeding 10x its initial value. Writes
/// sweep.csv, sweep_summary.csv and per-gain final clouds.
GainSweepResult gain_sweep(const RunConfig& config, const std::vector<double>& gains);

/// Renders the light field at one trajectory frame and writes PNG + sidecar
/// metadata. Returns the PNG path.
std::string export_frame(const RunConfig& config, int frame);

} // namespace plenosim
