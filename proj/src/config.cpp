#include "plenosim/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace plenosim {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) {
        return "";
    }
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError("bad number for " + key + ": '" + value + "'");
    }
    if (trim(value.substr(pos)) != "") {
        throw ConfigError("trailing characters for " + key + ": '" + value + "'");
    }
    return out;
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
        throw ConfigError("expected an integer for " + key + ": '" + value + "'");
    }
    return i;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("expected true/false for " + key + ": '" + value + "'");
}

Vec3 parse_vec3(const std::string& key, const std::string& value) {
    std::istringstream ls(value);
    double x, y, z;
    if (!(ls >> x >> y >> z)) {
        throw ConfigError("expected three numbers for " + key + ": '" + value + "'");
    }
    std::string rest;
    if (ls >> rest) {
        throw ConfigError("too many numbers for " + key + ": '" + value + "'");
    }
    return Vec3(x, y, z);
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::istringstream ls(value);
    std::vector<double> out;
    double v;
    while (ls >> v) {
        out.push_back(v);
    }
    if (!ls.eof() || out.empty()) {
        throw ConfigError("expected a list of numbers for " + key + ": '" + value + "'");
    }
    return out;
}

} // namespace

RunConfig RunConfig::desk_default() {
    RunConfig c;
    const double two_pi = 2.0 * std::numbers::pi;
    c.frequencies_rad_per_frame = Vec3(7.0, 9.0, 11.0) * (two_pi / c.frames);
    c.phases_rad = Vec3(0.5 * std::numbers::pi, 0.0, 0.0);
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    RunConfig c = desk_default();
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected key = value at line " + std::to_string(line_no));
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string full = section + "." + key;

        if (full == "camera.focal_length_m") c.focal_length_m = parse_double(full, value);
        else if (full == "camera.lens_to_pupilar_m") c.lens_to_pupilar_m = parse_double(full, value);
        else if (full == "camera.pupilar_to_retinal_m") c.pupilar_to_retinal_m = parse_double(full, value);
        else if (full == "camera.aperture_radius_m") c.aperture_radius_m = parse_double(full, value);
        else if (full == "camera.pixel_pitch_m") c.pixel_pitch_m = parse_double(full, value);
        else if (full == "camera.lenslet_pitch_m") c.lenslet_pitch_m = parse_double(full, value);
        else if (full == "camera.lenslet_rows") c.lenslet_rows = parse_int(full, value);
        else if (full == "camera.lenslet_cols") c.lenslet_cols = parse_int(full, value);
        else if (full == "camera.subimage_rows") c.subimage_rows = parse_int(full, value);
        else if (full == "camera.subimage_cols") c.subimage_cols = parse_int(full, value);
        else if (full == "scene.kind") c.scene_kind = value;
        else if (full == "scene.radius_m") c.scene_radius_m = parse_double(full, value);
        else if (full == "scene.center_m") c.scene_center_m = parse_vec3(full, value);
        else if (full == "scene.brightness") c.brightness = value;
        else if (full == "scene.texture_frequency_per_m") c.texture_frequency_per_m = parse_double(full, value);
        else if (full == "scene.monotone_anchor_m") c.monotone_anchor_m = parse_vec3(full, value);
        else if (full == "scene.monotone_range_m") c.monotone_range_m = parse_double(full, value);
        else if (full == "trajectory.amplitudes_m") c.amplitudes_m = parse_vec3(full, value);
        else if (full == "trajectory.frequencies_rad_per_frame") c.frequencies_rad_per_frame = parse_vec3(full, value);
        else if (full == "trajectory.phases_rad") c.phases_rad = parse_vec3(full, value);
        else if (full == "trajectory.center_m") c.trajectory_center_m = parse_vec3(full, value);
        else if (full == "observer.gain") c.gain = parse_double(full, value);
        else if (full == "observer.sweep_gains") c.sweep_gains = parse_list(full, value);
        else if (full == "observer.frames") c.frames = parse_int(full, value);
        else if (full == "observer.frame_dt_s") c.frame_dt_s = parse_double(full, value);
        else if (full == "observer.gradient_step_rel") c.gradient_step_rel = parse_double(full, value);
        else if (full == "observer.freeze_truncated_windows") c.freeze_truncated_windows = parse_bool(full, value);
        else if (full == "estimate.icosphere_subdivisions") c.icosphere_subdivisions = parse_int(full, value);
        else if (full == "estimate.radius_m") c.estimate_radius_m = parse_double(full, value);
        else if (full == "estimate.center_m") c.estimate_center_m = parse_vec3(full, value);
        else if (full == "output.directory") c.output_directory = value;
        else if (full == "output.export_every_frames") c.export_every_frames = parse_int(full, value);
        else if (full == "run.seed") c.seed = static_cast<unsigned>(parse_int(full, value));
        else if (full == "run.threads") c.threads = parse_int(full, value);
        else if (full == "run.check_cone_containment") c.check_cone_containment = parse_bool(full, value);
        else {
            throw ConfigError("unknown config key '" + full + "' at line " +
                              std::to_string(line_no));
        }
    }
    if (c.frames < 0) {
        throw ConfigError("frames must be non-negative");
    }
    if (c.threads < 1) {
        throw ConfigError("threads must be at least 1");
    }
    return c;
}

PlenopticIntrinsics RunConfig::make_camera() const {
    return PlenopticIntrinsics(focal_length_m, lens_to_pupilar_m, pupilar_to_retinal_m,
                               aperture_radius_m, pixel_pitch_m, lenslet_pitch_m, lenslet_rows,
                               lenslet_cols, subimage_rows, subimage_cols);
}

SceneModel RunConfig::make_scene() const {
    BrightnessMap map = (brightness == "radial_monotone")
                            ? BrightnessMap::radial_monotone(monotone_anchor_m, monotone_range_m)
                            : BrightnessMap::coordinate_rgb(texture_frequency_per_m);
    if (brightness != "radial_monotone" && brightness != "coordinate_rgb") {
        throw ConfigError("unknown brightness map '" + brightness + "'");
    }
    if (scene_kind == "sphere") {
        return SceneModel(Sphere{scene_center_m, scene_radius_m}, std::move(map));
    }
    if (scene_kind == "icosphere") {
        return SceneModel(make_icosphere(scene_center_m, scene_radius_m, 4), std::move(map));
    }
    throw ConfigError("unknown scene kind '" + scene_kind + "'");
}

LissajousPath RunConfig::make_path() const {
    return LissajousPath::make(amplitudes_m, frequencies_rad_per_frame, phases_rad,
                               trajectory_center_m);
}

PointEstimateCloud RunConfig::make_initial_cloud() const {
    const TriangleMesh mesh =
        make_icosphere(estimate_center_m, estimate_radius_m, icosphere_subdivisions);
    return PointEstimateCloud::from_mesh(mesh);
}

ObserverConfig RunConfig::make_observer(double gain_override) const {
    ObserverConfig o;
    o.gain = gain_override;
    o.frame_dt = frame_dt_s;
    o.gradient_step = gradient_step_rel;
    o.threads = threads;
    o.freeze_truncated_windows = freeze_truncated_windows;
    return o;
}

} // namespace plenosim
