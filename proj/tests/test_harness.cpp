#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "plenosim/simharness.hpp"

using namespace plenosim;

namespace {

namespace fs = std::filesystem;

/// Fresh directory under the system temp root, removed again on destruction.
struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string str() const { return path.string(); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(bool(in));
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(bool(out));
    out << content;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

/// Small, fast run: desk camera and scene, a slow trajectory near (0.25,0,0)
/// facing +x, and a 42-point estimate cloud directly in front of the camera
/// so every point stays viewable over a handful of frames.
RunConfig forward_config() {
    RunConfig c = RunConfig::desk_default();
    c.frequencies_rad_per_frame = Vec3(0.002, 0.003, 0.005);
    c.icosphere_subdivisions = 1;
    c.estimate_center_m = Vec3(0.6, 0.0, 0.0);
    c.estimate_radius_m = 0.1;
    return c;
}

bool same_points(const PointEstimateCloud& a, const PointEstimateCloud& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
        for (int i = 0; i < 3; ++i) {
            if (a.points[k][i] != b.points[k][i]) {
                return false;
            }
        }
    }
    return true;
}

constexpr const char* kMetricsHeader =
    "frame,total_sq_error_m2,mean_dist_m,n_updated,n_outside,n_behind,n_grad_err\n";

} // namespace

TEST_CASE("config files round trip and keep defaults for missing keys") {
    TempDir dir("plenosim_harness_roundtrip");
    const std::string cfg_path = dir.file("run.cfg");
    write_file(cfg_path,
               "# fixture with comments and blank lines\n"
               "\n"
               "[camera]\n"
               "focal_length_m = 0.06\n"
               "lenslet_rows = 11   # inline comment\n"
               "\n"
               "[scene]\n"
               "kind = sphere\n"
               "radius_m = 0.9\n"
               "brightness = radial_monotone\n"
               "monotone_anchor_m = 0 0 0.9\n"
               "monotone_range_m = 2.0\n"
               "\n"
               "[trajectory]\n"
               "amplitudes_m = 0.1 0.2 0.3\n"
               "center_m = 0.01 0.02 0.03\n"
               "\n"
               "[observer]\n"
               "gain = 250000\n"
               "sweep_gains = 1e4 1e5 1e6\n"
               "frames = 12\n"
               "freeze_truncated_windows = true\n"
               "\n"
               "[estimate]\n"
               "icosphere_subdivisions = 1\n"
               "radius_m = 0.5\n"
               "center_m = 0.01 -0.02 0.03\n"
               "\n"
               "[output]\n"
               "directory = some/out/dir\n"
               "export_every_frames = 7\n"
               "\n"
               "[run]\n"
               "seed = 99\n"
               "threads = 2\n"
               "check_cone_containment = false\n");

    const RunConfig c = RunConfig::from_file(cfg_path);
    CHECK(c.focal_length_m == 0.06);
    CHECK(c.lenslet_rows == 11);
    CHECK(c.scene_kind == "sphere");
    CHECK(c.scene_radius_m == 0.9);
    CHECK(c.brightness == "radial_monotone");
    CHECK(c.monotone_anchor_m == Vec3(0, 0, 0.9));
    CHECK(c.monotone_range_m == 2.0);
    CHECK(c.amplitudes_m == Vec3(0.1, 0.2, 0.3));
    CHECK(c.trajectory_center_m == Vec3(0.01, 0.02, 0.03));
    CHECK(c.gain == 250000.0);
    CHECK(c.sweep_gains == std::vector<double>{1e4, 1e5, 1e6});
    CHECK(c.frames == 12);
    CHECK(c.freeze_truncated_windows);
    CHECK(c.icosphere_subdivisions == 1);
    CHECK(c.estimate_radius_m == 0.5);
    CHECK(c.estimate_center_m == Vec3(0.01, -0.02, 0.03));
    CHECK(c.output_directory == "some/out/dir");
    CHECK(c.export_every_frames == 7);
    CHECK(c.seed == 99u);
    CHECK(c.threads == 2);
    CHECK_FALSE(c.check_cone_containment);

    const RunConfig d = RunConfig::desk_default();
    CHECK(c.lens_to_pupilar_m == d.lens_to_pupilar_m);
    CHECK(c.pixel_pitch_m == d.pixel_pitch_m);
    CHECK(c.subimage_rows == d.subimage_rows);
    CHECK(c.frequencies_rad_per_frame == d.frequencies_rad_per_frame);
    CHECK(c.phases_rad == d.phases_rad);
    CHECK(c.frame_dt_s == d.frame_dt_s);
    CHECK(c.gradient_step_rel == d.gradient_step_rel);

    CHECK_THROWS_AS(RunConfig::from_file(dir.file("does_not_exist.cfg")), ConfigError);
}

TEST_CASE("config parsing rejects malformed input") {
    TempDir dir("plenosim_harness_badcfg");
    const std::string p = dir.file("bad.cfg");

    auto error_of = [&](const std::string& content) {
        write_file(p, content);
        try {
            RunConfig::from_file(p);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        FAIL("expected ConfigError");
        return std::string();
    };

    const std::string unknown = error_of("[camera]\nfocal_length_m = 0.05\nbogus_key = 1\n");
    CHECK(contains(unknown, "unknown config key"));
    CHECK(contains(unknown, "camera.bogus_key"));
    CHECK(contains(unknown, "line 3"));

    CHECK(contains(error_of("[camera]\nfocal_length_m 0.05\n"), "line 2"));
    CHECK(contains(error_of("[camera]\nfocal_length_m = abc\n"), "camera.focal_length_m"));
    CHECK(contains(error_of("[camera]\nfocal_length_m = 0.05 junk\n"), "trailing"));
    CHECK(contains(error_of("[observer]\nframes = 2.5\n"), "integer"));
    CHECK(contains(error_of("[observer]\nframes = -1\n"), "frames"));
    CHECK(contains(error_of("[run]\nthreads = 0\n"), "threads"));
    CHECK(contains(error_of("[run]\ncheck_cone_containment = maybe\n"), "true/false"));
    CHECK(contains(error_of("[scene]\ncenter_m = 1 2\n"), "three numbers"));
    CHECK(contains(error_of("[scene]\ncenter_m = 1 2 3 4\n"), "too many"));
    CHECK(contains(error_of("[observer]\nsweep_gains = \n"), "list"));
}

TEST_CASE("a run with no frames reports only the initial state") {
    TempDir dir("plenosim_harness_zero_frames");
    RunConfig cfg = forward_config();
    cfg.frames = 0;
    cfg.output_directory = dir.str();

    const RunResult r = run(cfg);
    CHECK(r.metrics.total_sq_error.empty());
    CHECK(r.metrics.mean_dist.empty());
    CHECK(r.metrics.n_updated.empty());
    CHECK(r.metrics.n_outside.empty());
    CHECK(r.metrics.n_behind.empty());
    CHECK(r.metrics.n_grad_err.empty());
    CHECK(r.metrics.final_total_sq_error() == r.metrics.initial_total_sq_error);
    CHECK(r.metrics.error_after(200) == r.metrics.initial_total_sq_error);
    CHECK(r.metrics.initial_total_sq_error > 0.0);

    const PointEstimateCloud initial = cfg.make_initial_cloud();
    REQUIRE(r.cloud.size() == initial.size());
    CHECK(same_points(r.cloud, initial));
    for (std::size_t k = 0; k < r.cloud.size(); ++k) {
        CHECK(r.cloud.status[k].kind == PointStatusKind::OutsideApertureSet);
        CHECK(r.cloud.update_count[k] == 0);
    }

    CHECK(read_file(dir.file("metrics.csv")) == kMetricsHeader);
    CHECK(fs::exists(dir.path / "cloud_initial.ply"));
    CHECK(fs::exists(dir.path / "cloud_final.ply"));
    CHECK(contains(read_file(dir.file("assumptions.txt")), "camera_ball_radius_m"));
    CHECK(read_file(dir.file("cloud_final.ply")) == read_file(dir.file("cloud_initial.ply")));
}

TEST_CASE("zero gain holds the cloud fixed while still counting updates") {
    RunConfig cfg = forward_config();
    cfg.frames = 8;
    cfg.gain = 0.0;

    const RunResult r = run(cfg);
    REQUIRE(r.metrics.total_sq_error.size() == 8);
    const int n = static_cast<int>(r.cloud.size());
    for (std::size_t f = 0; f < 8; ++f) {
        CHECK(r.metrics.total_sq_error[f] == r.metrics.initial_total_sq_error);
        CHECK(r.metrics.n_updated[f] + r.metrics.n_outside[f] + r.metrics.n_behind[f] +
                  r.metrics.n_grad_err[f] ==
              n);
        CHECK(r.metrics.n_updated[f] >= n - 5);
    }
    CHECK(r.metrics.error_after(200) == r.metrics.initial_total_sq_error);
    CHECK(r.metrics.error_after(3) == r.metrics.total_sq_error[2]);
    CHECK(same_points(r.cloud, cfg.make_initial_cloud()));

    long counted = 0;
    for (int c : r.cloud.update_count) {
        counted += c;
    }
    long reported = 0;
    for (int u : r.metrics.n_updated) {
        reported += u;
    }
    CHECK(counted == reported);
    CHECK(counted > 0);
}

TEST_CASE("runs are reproducible byte for byte") {
    TempDir dir_a("plenosim_harness_repro_a");
    TempDir dir_b("plenosim_harness_repro_b");
    RunConfig cfg = forward_config();
    cfg.frames = 4;
    cfg.gain = 3.0e4;

    cfg.output_directory = dir_a.str();
    const RunResult a = run(cfg);
    cfg.output_directory = dir_b.str();
    const RunResult b = run(cfg);

    const std::string metrics_a = read_file(dir_a.file("metrics.csv"));
    CHECK(metrics_a == read_file(dir_b.file("metrics.csv")));
    CHECK(metrics_a.substr(0, std::string(kMetricsHeader).size()) == kMetricsHeader);
    CHECK(read_file(dir_a.file("cloud_final.ply")) == read_file(dir_b.file("cloud_final.ply")));
    CHECK(same_points(a.cloud, b.cloud));

    REQUIRE(a.metrics.total_sq_error.size() == 4);
    for (double v : a.metrics.total_sq_error) {
        CHECK(std::isfinite(v));
    }
    CHECK_FALSE(same_points(a.cloud, cfg.make_initial_cloud()));
}

TEST_CASE("points the camera never sees stay in place") {
    RunConfig cfg = RunConfig::desk_default();
    cfg.icosphere_subdivisions = 1;
    cfg.frames = 5;
    cfg.gain = 3.0e4;

    const PointEstimateCloud initial = cfg.make_initial_cloud();
    const RunResult r = run(cfg);
    REQUIRE(r.cloud.size() == initial.size());

    int never_updated = 0;
    for (std::size_t k = 0; k < r.cloud.size(); ++k) {
        if (r.cloud.update_count[k] == 0) {
            ++never_updated;
            for (int i = 0; i < 3; ++i) {
                CHECK(r.cloud.points[k][i] == initial.points[k][i]);
            }
        }
    }
    CHECK(never_updated > 0);
    CHECK(r.metrics.n_behind.back() > 0);
}

TEST_CASE("a gain sweep shares rendering, flags divergence, and picks the best gain") {
    TempDir dir("plenosim_harness_sweep");
    RunConfig cfg = forward_config();
    cfg.frames = 6;
    cfg.output_directory = dir.str();
    const std::vector<double> gains{0.0, 3.0e4, 1.0e12};

    const GainSweepResult res = gain_sweep(cfg, gains);
    REQUIRE(res.runs.size() == 3);
    for (std::size_t g = 0; g < 3; ++g) {
        CHECK(res.runs[g].gain == gains[g]);
        REQUIRE(res.runs[g].result.metrics.total_sq_error.size() == 6);
        CHECK(res.runs[g].error_after_200 ==
              res.runs[g].result.metrics.final_total_sq_error());
    }

    const RunMetrics& flat = res.runs[0].result.metrics;
    for (double v : flat.total_sq_error) {
        CHECK(v == flat.initial_total_sq_error);
    }
    CHECK_FALSE(res.runs[0].diverged);

    const RunMetrics& good = res.runs[1].result.metrics;
    CHECK(good.final_total_sq_error() < good.initial_total_sq_error);
    CHECK_FALSE(res.runs[1].diverged);

    const RunMetrics& wild = res.runs[2].result.metrics;
    CHECK(res.runs[2].diverged);
    CHECK(wild.final_total_sq_error() > 10.0 * wild.initial_total_sq_error);

    CHECK(res.best_index == 1);

    RunConfig solo = cfg;
    solo.output_directory.clear();
    solo.gain = gains[1];
    const RunResult separate = run(solo);
    REQUIRE(separate.metrics.total_sq_error.size() == good.total_sq_error.size());
    for (std::size_t f = 0; f < good.total_sq_error.size(); ++f) {
        CHECK(separate.metrics.total_sq_error[f] == good.total_sq_error[f]);
        CHECK(separate.metrics.mean_dist[f] == good.mean_dist[f]);
        CHECK(separate.metrics.n_updated[f] == good.n_updated[f]);
    }
    CHECK(same_points(separate.cloud, res.runs[1].result.cloud));

    CHECK(fs::exists(dir.path / "sweep.csv"));
    for (int g = 0; g < 3; ++g) {
        CHECK(fs::exists(dir.path / ("sweep_gain" + std::to_string(g) + "_cloud_final.ply")));
        CHECK(fs::exists(dir.path / ("sweep_gain" + std::to_string(g) + "_metrics.csv")));
    }

    std::istringstream summary(read_file(dir.file("sweep_summary.csv")));
    std::string line;
    REQUIRE(std::getline(summary, line));
    CHECK(line ==
          "gain,initial_total_sq_error_m2,final_total_sq_error_m2,"
          "error_after_200_frames_m2,diverged,best");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(summary, line)) {
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) {
            fields.push_back(field);
        }
        rows.push_back(fields);
    }
    REQUIRE(rows.size() == 3);
    for (const auto& fields : rows) {
        REQUIRE(fields.size() == 6);
    }
    CHECK(rows[0][4] == "0");
    CHECK(rows[1][4] == "0");
    CHECK(rows[2][4] == "1");
    CHECK(rows[0][5] == "0");
    CHECK(rows[1][5] == "1");
    CHECK(rows[2][5] == "0");

    CHECK_THROWS_AS(gain_sweep(cfg, {}), ConfigError);
}

TEST_CASE("frame export writes a png and metadata") {
    TempDir dir("plenosim_harness_frame");
    RunConfig cfg = forward_config();
    cfg.output_directory = dir.str();

    const std::string png = export_frame(cfg, 3);
    CHECK(contains(png, "frame_000003.png"));
    REQUIRE(fs::exists(png));
    const std::string bytes = read_file(png);
    REQUIRE(bytes.size() > 8);
    const unsigned char sig[8] = {0x89, 0x50, 0x4E, 0x47, 0x0D, 0x0A, 0x1A, 0x0A};
    for (int i = 0; i < 8; ++i) {
        CHECK(static_cast<unsigned char>(bytes[i]) == sig[i]);
    }
    const std::string meta = read_file(dir.file("frame_000003.txt"));
    CHECK_FALSE(meta.empty());
}

TEST_CASE("simulation refuses a camera path that can leave the scene") {
    RunConfig cfg = forward_config();
    cfg.frames = 2;
    cfg.scene_radius_m = 0.2;
    CHECK_THROWS_AS(run(cfg), ConfigError);
}

TEST_CASE("export cadence writes intermediate clouds") {
    TempDir dir("plenosim_harness_cadence");
    RunConfig cfg = forward_config();
    cfg.frames = 4;
    cfg.gain = 3.0e4;
    cfg.export_every_frames = 2;
    cfg.output_directory = dir.str();

    run(cfg);
    CHECK(fs::exists(dir.path / "cloud_initial.ply"));
    CHECK(fs::exists(dir.path / "cloud_000002.ply"));
    CHECK(fs::exists(dir.path / "cloud_000004.ply"));
    CHECK(fs::exists(dir.path / "cloud_final.ply"));
    CHECK(read_file(dir.file("cloud_000004.ply")) == read_file(dir.file("cloud_final.ply")));
}
