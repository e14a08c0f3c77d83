#include "plenosim/simharness.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "plenosim/io_ply.hpp"
#include "plenosim/lightfield.hpp"

namespace plenosim {

namespace {

Color status_color(const PointStatus& s) {
    switch (s.kind) {
    case PointStatusKind::Updated: return {0.2, 0.8, 0.2};
    case PointStatusKind::OutsideApertureSet: return {0.5, 0.5, 0.5};
    case PointStatusKind::BehindCamera: return {0.2, 0.2, 0.9};
    case PointStatusKind::GradientError: return {0.9, 0.2, 0.2};
    }
    return {0, 0, 0};
}

void write_cloud(const std::string& dir, const std::string& name,
                 const PointEstimateCloud& cloud) {
    if (dir.empty()) {
        return;
    }
    std::vector<Color> colors;
    colors.reserve(cloud.size());
    for (const auto& s : cloud.status) {
        colors.push_back(status_color(s));
    }
    write_cloud_ply(dir + "/" + name, cloud.points, colors);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct FrameStats {
    double total_sq{0.0};
    double mean_dist{0.0};
    int updated{0}, outside{0}, behind{0}, grad_err{0};
};

FrameStats cloud_stats(const PointEstimateCloud& cloud, const SceneModel& scene) {
    FrameStats st;
    for (std::size_t k = 0; k < cloud.size(); ++k) {
        const double dist = scene.point_distance(cloud.points[k]);
        st.total_sq += dist * dist;
        st.mean_dist += dist;
        switch (cloud.status[k].kind) {
        case PointStatusKind::Updated: ++st.updated; break;
        case PointStatusKind::OutsideApertureSet: ++st.outside; break;
        case PointStatusKind::BehindCamera: ++st.behind; break;
        case PointStatusKind::GradientError: ++st.grad_err; break;
        }
    }
    if (cloud.size() > 0) {
        st.mean_dist /= static_cast<double>(cloud.size());
    }
    return st;
}

void append_metrics(RunMetrics& m, const FrameStats& st) {
    m.total_sq_error.push_back(st.total_sq);
    m.mean_dist.push_back(st.mean_dist);
    m.n_updated.push_back(st.updated);
    m.n_outside.push_back(st.outside);
    m.n_behind.push_back(st.behind);
    m.n_grad_err.push_back(st.grad_err);
}

void write_metrics_csv(const std::string& path, const RunMetrics& m) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    out << "frame,total_sq_error_m2,mean_dist_m,n_updated,n_outside,n_behind,n_grad_err\n";
    for (std::size_t f = 0; f < m.total_sq_error.size(); ++f) {
        out << f << ',' << fmt(m.total_sq_error[f]) << ',' << fmt(m.mean_dist[f]) << ','
            << m.n_updated[f] << ',' << m.n_outside[f] << ',' << m.n_behind[f] << ','
            << m.n_grad_err[f] << '\n';
    }
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

struct SimOutput {
    std::vector<GainRun> runs;
    AssumptionsReport assumptions;
    double ball_radius{0.0};
};

// Core frame loop shared by run() and gain_sweep(): renders each trajectory
// frame once and steps one cloud per gain against it.
SimOutput simulate(const RunConfig& config, const std::vector<double>& gains,
                   bool export_cadence_clouds) {
    if (gains.empty()) {
        throw ConfigError("at least one gain is required");
    }
    const PlenopticIntrinsics cam = config.make_camera();
    const SceneModel scene = config.make_scene();
    const LissajousPath path = config.make_path();
    const PointEstimateCloud initial = config.make_initial_cloud();

    SimOutput out;
    out.assumptions =
        validate_assumptions(path, cam, scene, config.frames, initial.points);
    if (config.frames > 0 && !out.assumptions.camera_ball_inside_scene) {
        throw ConfigError("camera ball (with view-cone margin) escapes the scene interior");
    }
    if (!out.assumptions.scene_convex) {
        throw ConfigError("scene surface is not convex");
    }
    out.ball_radius = out.assumptions.ball_radius;

    const std::string dir = config.output_directory;
    if (!dir.empty()) {
        std::filesystem::create_directories(dir);
        std::ofstream rep(dir + "/assumptions.txt");
        rep << out.assumptions.to_text();
    }

    // Cone-containment bookkeeping: points starting inside the scene and
    // strictly outside the camera ball get a per-frame membership check
    // against the positive cone anchored at their initial position.
    std::vector<HalfCone> cones;
    std::vector<int> cone_index(initial.size(), -1);
    if (config.check_cone_containment && config.frames > 0) {
        for (std::size_t k = 0; k < initial.size(); ++k) {
            const Vec3& p0 = initial.points[k];
            if (scene.contains(p0) && p0.norm() > out.ball_radius) {
                cone_index[k] = static_cast<int>(cones.size());
                cones.emplace_back(Vec3::Zero(), out.ball_radius, p0);
            }
        }
    }

    out.runs.resize(gains.size());
    for (std::size_t g = 0; g < gains.size(); ++g) {
        out.runs[g].gain = gains[g];
        out.runs[g].result.cloud = initial;
        out.runs[g].result.assumptions = out.assumptions;
        out.runs[g].result.cone_ball_radius = out.ball_radius;
        out.runs[g].result.cone_checked_points = static_cast<int>(cones.size());
        const FrameStats st0 = cloud_stats(initial, scene);
        out.runs[g].result.metrics.initial_total_sq_error = st0.total_sq;
    }

    write_cloud(dir, "cloud_initial.ply", initial);

    for (int f = 0; f < config.frames; ++f) {
        const Pose pose = pose_at(path, static_cast<double>(f));
        const LightField lf = render(scene, cam, pose, config.threads);
        for (std::size_t g = 0; g < gains.size(); ++g) {
            GainRun& gr = out.runs[g];
            const ObserverConfig ocfg = config.make_observer(gains[g]);
            gr.result.cloud = step(gr.result.cloud, pose, cam, lf, ocfg);
            const FrameStats st = cloud_stats(gr.result.cloud, scene);
            append_metrics(gr.result.metrics, st);
            if (st.total_sq > 10.0 * gr.result.metrics.initial_total_sq_error) {
                gr.diverged = true;
            }
            for (std::size_t k = 0; k < gr.result.cloud.size(); ++k) {
                if (cone_index[k] < 0) {
                    continue;
                }
                const Vec3& p = gr.result.cloud.points[k];
                const Vec3& p0 = initial.points[k];
                if (p != p0 && !positive_cone_contains(cones[cone_index[k]], p)) {
                    ++gr.result.cone_violations;
                }
            }
            if (export_cadence_clouds && gains.size() == 1 && config.export_every_frames > 0 &&
                (f + 1) % config.export_every_frames == 0 && !dir.empty()) {
                char name[64];
                std::snprintf(name, sizeof(name), "cloud_%06d.ply", f + 1);
                write_cloud(dir, name, gr.result.cloud);
            }
        }
    }

    for (auto& gr : out.runs) {
        gr.error_after_200 = gr.result.metrics.error_after(200);
    }
    return out;
}

} // namespace

double RunMetrics::error_after(int frame_count) const {
    if (total_sq_error.empty()) {
        return initial_total_sq_error;
    }
    const std::size_t idx =
        std::min(total_sq_error.size(), static_cast<std::size_t>(std::max(frame_count, 1))) - 1;
    return total_sq_error[idx];
}

RunResult run(const RunConfig& config) {
    SimOutput sim = simulate(config, {config.gain}, true);
    RunResult result = std::move(sim.runs[0].result);
    const std::string dir = config.output_directory;
    if (!dir.empty()) {
        write_metrics_csv(dir + "/metrics.csv", result.metrics);
        write_cloud(dir, "cloud_final.ply", result.cloud);
    }
    return result;
}

GainSweepResult gain_sweep(const RunConfig& config, const std::vector<double>& gains) {
    SimOutput sim = simulate(config, gains, false);
    GainSweepResult out;
    out.runs = std::move(sim.runs);

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < out.runs.size(); ++g) {
        const GainRun& gr = out.runs[g];
        if (!gr.diverged && gr.result.metrics.final_total_sq_error() < best) {
            best = gr.result.metrics.final_total_sq_error();
            out.best_index = static_cast<int>(g);
        }
    }

    const std::string dir = config.output_directory;
    if (!dir.empty()) {
        std::filesystem::create_directories(dir);
        std::ofstream sweep(dir + "/sweep.csv");
        sweep << "gain,frame,total_sq_error_m2,mean_dist_m,n_updated,n_outside,n_behind,"
                 "n_grad_err\n";
        for (const auto& gr : out.runs) {
            const RunMetrics& m = gr.result.metrics;
            for (std::size_t f = 0; f < m.total_sq_error.size(); ++f) {
                sweep << fmt(gr.gain) << ',' << f << ',' << fmt(m.total_sq_error[f]) << ','
                      << fmt(m.mean_dist[f]) << ',' << m.n_updated[f] << ',' << m.n_outside[f]
                      << ',' << m.n_behind[f] << ',' << m.n_grad_err[f] << '\n';
            }
        }

        std::ofstream summary(dir + "/sweep_summary.csv");
        summary << "gain,initial_total_sq_error_m2,final_total_sq_error_m2,"
                   "error_after_200_frames_m2,diverged,best\n";
        for (std::size_t g = 0; g < out.runs.size(); ++g) {
            const GainRun& gr = out.runs[g];
            summary << fmt(gr.gain) << ',' << fmt(gr.result.metrics.initial_total_sq_error)
                    << ',' << fmt(gr.result.metrics.final_total_sq_error()) << ','
                    << fmt(gr.error_after_200) << ',' << (gr.diverged ? 1 : 0) << ','
                    << (static_cast<int>(g) == out.best_index ? 1 : 0) << '\n';
        }

        for (std::size_t g = 0; g < out.runs.size(); ++g) {
            char name[64];
            std::snprintf(name, sizeof(name), "sweep_gain%zu_cloud_final.ply", g);
            write_cloud(dir, name, out.runs[g].result.cloud);
            std::snprintf(name, sizeof(name), "sweep_gain%zu_metrics.csv", g);
            write_metrics_csv(dir + "/" + name, out.runs[g].result.metrics);
        }
    }
    return out;
}

std::string export_frame(const RunConfig& config, int frame) {
    const PlenopticIntrinsics cam = config.make_camera();
    const SceneModel scene = config.make_scene();
    const LissajousPath path = config.make_path();
    const Pose pose = pose_at(path, static_cast<double>(frame));
    const LightField lf = render(scene, cam, pose, config.threads);

    const std::string dir =
        config.output_directory.empty() ? "." : config.output_directory;
    std::filesystem::create_directories(dir);
    char name[64];
    std::snprintf(name, sizeof(name), "frame_%06d", frame);
    const std::string png = dir + "/" + name + ".png";
    write_png(lf, png);
    write_frame_metadata(cam, pose, frame, dir + "/" + name + ".txt");
    return png;
}

} // namespace plenosim
