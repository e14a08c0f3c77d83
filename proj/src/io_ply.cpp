#include "plenosim/io_ply.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace plenosim {

namespace {

int to_byte(double c) {
    return std::clamp(static_cast<int>(std::lround(c * 255.0)), 0, 255);
}

// Fixed formatting keeps exports byte-identical across runs.
std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

void write_mesh_ply(const std::string& path, const TriangleMesh& mesh,
                    const std::vector<Color>& vertex_colors) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    const bool with_color = !vertex_colors.empty();
    if (with_color && vertex_colors.size() != mesh.vertices.size()) {
        throw IoError("vertex colour count does not match vertex count");
    }
    out << "ply\nformat ascii 1.0\n";
    out << "element vertex " << mesh.vertices.size() << "\n";
    out << "property float x\nproperty float y\nproperty float z\n";
    if (with_color) {
        out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    }
    out << "element face " << mesh.faces.size() << "\n";
    out << "property list uchar int vertex_indices\n";
    out << "end_header\n";
    for (std::size_t k = 0; k < mesh.vertices.size(); ++k) {
        const Vec3& v = mesh.vertices[k];
        out << fmt_double(v.x()) << ' ' << fmt_double(v.y()) << ' ' << fmt_double(v.z());
        if (with_color) {
            const Color& c = vertex_colors[k];
            out << ' ' << to_byte(c.x()) << ' ' << to_byte(c.y()) << ' ' << to_byte(c.z());
        }
        out << '\n';
    }
    for (const auto& f : mesh.faces) {
        out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
    }
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

void write_cloud_ply(const std::string& path, const std::vector<Vec3>& points,
                     const std::vector<Color>& colors) {
    if (points.size() != colors.size()) {
        throw IoError("cloud colour count does not match point count");
    }
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    out << "ply\nformat ascii 1.0\n";
    out << "element vertex " << points.size() << "\n";
    out << "property float x\nproperty float y\nproperty float z\n";
    out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    out << "end_header\n";
    for (std::size_t k = 0; k < points.size(); ++k) {
        const Vec3& p = points[k];
        const Color& c = colors[k];
        out << fmt_double(p.x()) << ' ' << fmt_double(p.y()) << ' ' << fmt_double(p.z()) << ' '
            << to_byte(c.x()) << ' ' << to_byte(c.y()) << ' ' << to_byte(c.z()) << '\n';
    }
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

TriangleMesh read_mesh_ply(const std::string& path, std::vector<Color>* colors_out) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open for reading: " + path);
    }
    std::string line;
    if (!std::getline(in, line) || line != "ply") {
        throw IoError("not a PLY file: " + path);
    }
    std::size_t n_vertices = 0;
    std::size_t n_faces = 0;
    bool has_color = false;
    std::string element;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "end_header") {
            break;
        } else if (tok == "format") {
            std::string kind;
            ls >> kind;
            if (kind != "ascii") {
                throw IoError("only ascii PLY is supported: " + path);
            }
        } else if (tok == "element") {
            std::size_t count = 0;
            ls >> element >> count;
            if (element == "vertex") {
                n_vertices = count;
            } else if (element == "face") {
                n_faces = count;
            }
        } else if (tok == "property" && element == "vertex") {
            std::string type, name;
            ls >> type >> name;
            if (name == "red") {
                has_color = true;
            }
        }
    }

    TriangleMesh mesh;
    mesh.vertices.reserve(n_vertices);
    if (colors_out) {
        colors_out->clear();
    }
    for (std::size_t k = 0; k < n_vertices; ++k) {
        if (!std::getline(in, line)) {
            throw IoError("truncated vertex list: " + path);
        }
        std::istringstream ls(line);
        double x, y, z;
        if (!(ls >> x >> y >> z)) {
            throw IoError("malformed vertex line: " + path);
        }
        mesh.vertices.emplace_back(x, y, z);
        if (has_color && colors_out) {
            int r, g, b;
            if (!(ls >> r >> g >> b)) {
                throw IoError("malformed vertex colour: " + path);
            }
            colors_out->emplace_back(r / 255.0, g / 255.0, b / 255.0);
        }
    }
    mesh.faces.reserve(n_faces);
    for (std::size_t k = 0; k < n_faces; ++k) {
        if (!std::getline(in, line)) {
            throw IoError("truncated face list: " + path);
        }
        std::istringstream ls(line);
        int count, a, b, c;
        if (!(ls >> count >> a >> b >> c) || count != 3) {
            throw IoError("only triangle faces are supported: " + path);
        }
        mesh.faces.push_back({a, b, c});
    }
    return mesh;
}

} // namespace plenosim
