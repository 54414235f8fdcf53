#pragma once

// File formats:
//
//   scalar field   {"kind":"scalar_field","lmax":L,"coeffs":[[l,m,value],...]}
//                  even degrees only; the reader rejects odd l. Writers may
//                  add annotation keys (lindquist_margin, body_valid, ...),
//                  which readers ignore.
//
//   flag field     {"kind":"flag_field","n_lat":...,"n_lon":...,
//                   "frame_convention":"zcross-v1",
//                   "nodes":[{"dir":[x,y,z],"a0":...,"a2":...,"b2":...},...]}
//                  nodes in ring-major grid order; the frame convention
//                  string must match this implementation exactly. Node keys
//                  other than dir/a0/a2/b2 are rejected: tangent harmonics
//                  beyond {0,2} can never satisfy the consistency identity.
//
//   mesh           Wavefront text, "v %.9f %.9f %.9f" and "f i j k" lines
//                  (1-based indices), LF line endings.
//
// All writers go through atomic_write_file (temp file + rename).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "flagrecon/errors.hpp"
#include "flagrecon/flag_field.hpp"
#include "flagrecon/grid.hpp"
#include "flagrecon/reconstruct.hpp"
#include "flagrecon/scalar_field.hpp"
#include "flagrecon/transforms.hpp"

namespace flagrecon {

using nlohmann::json;

inline void atomic_write_file(const std::filesystem::path& path, const std::string& contents) {
    const std::filesystem::path tmp = path.string() + ".tmp~";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open for writing: " + tmp.string());
        out << contents;
        if (!out.flush()) throw Error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw FormatError("invalid JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

inline json scalar_field_to_json(const ScalarField& field) {
    json coeffs = json::array();
    for (int l = 0; l <= field.lmax(); l += 2)
        for (int m = -l; m <= l; ++m) coeffs.push_back(json::array({l, m, field.get(l, m)}));
    return json{{"kind", "scalar_field"}, {"lmax", field.lmax()}, {"coeffs", std::move(coeffs)}};
}

inline ScalarField scalar_field_from_json(const json& j) {
    try {
        if (j.at("kind").get<std::string>() != "scalar_field")
            throw FormatError("expected kind \"scalar_field\"");
        const int lmax = j.at("lmax").get<int>();
        if (lmax < 0 || lmax % 2 != 0 || lmax > kMaxDegree)
            throw FormatError("scalar_field: lmax must be even and within [0, 64]");
        ScalarField field(lmax);
        std::vector<bool> seen(even_coeff_count(lmax), false);
        for (const json& entry : j.at("coeffs")) {
            if (!entry.is_array() || entry.size() != 3)
                throw FormatError("scalar_field: coefficient entries must be [l, m, value]");
            const int l = entry[0].get<int>();
            const int m = entry[1].get<int>();
            const double value = entry[2].get<double>();
            if (l % 2 != 0)
                throw FormatError("scalar_field: odd degree l=" + std::to_string(l) +
                                  " rejected; fields must be even functions");
            if (l < 0 || l > lmax || m < -l || m > l)
                throw FormatError("scalar_field: coefficient (l,m) out of range");
            const std::size_t idx = even_coeff_index(l, m, lmax);
            if (seen[idx]) throw FormatError("scalar_field: duplicate coefficient (l,m)");
            seen[idx] = true;
            field.set(l, m, value);
        }
        return field;
    } catch (const json::exception& e) {
        throw FormatError(std::string("scalar_field: ") + e.what());
    }
}

inline json flag_field_to_json(const FlagField& field) {
    const SphereGrid& grid = field.grid();
    json nodes = json::array();
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        const Direction& d = grid.direction(i);
        const FlagCoeffs& c = field.node(i);
        nodes.push_back(json{{"dir", json::array({d.x(), d.y(), d.z()})},
                             {"a0", c.a0},
                             {"a2", c.a2},
                             {"b2", c.b2}});
    }
    return json{{"kind", "flag_field"},
                {"n_lat", grid.n_lat()},
                {"n_lon", grid.n_lon()},
                {"frame_convention", frame_convention_name()},
                {"nodes", std::move(nodes)}};
}

inline FlagField flag_field_from_json(const json& j) {
    try {
        if (j.at("kind").get<std::string>() != "flag_field")
            throw FormatError("expected kind \"flag_field\"");
        const std::string convention = j.at("frame_convention").get<std::string>();
        if (convention != frame_convention_name())
            throw FormatError("flag_field: frame convention \"" + convention +
                              "\" does not match \"" + frame_convention_name() + "\"");
        const int n_lat = j.at("n_lat").get<int>();
        const int n_lon = j.at("n_lon").get<int>();
        if (n_lat < 4 || n_lat > 4096 || n_lon < 4 || n_lon > 8192 || n_lon % 2 != 0)
            throw FormatError("flag_field: grid size out of range (n_lat in [4,4096], n_lon even in [4,8192])");
        SphereGrid grid(n_lat, n_lon);

        const json& nodes = j.at("nodes");
        if (nodes.size() != grid.node_count())
            throw FormatError("flag_field: expected " + std::to_string(grid.node_count()) +
                              " nodes, found " + std::to_string(nodes.size()));

        std::vector<FlagCoeffs> coeffs(grid.node_count());
        for (std::size_t i = 0; i < grid.node_count(); ++i) {
            const json& node = nodes[i];
            for (const auto& item : node.items()) {
                const std::string& key = item.key();
                if (key == "dir" || key == "a0" || key == "a2" || key == "b2") continue;
                if (key.size() >= 2 && (key[0] == 'a' || key[0] == 'b') &&
                    key.find_first_not_of("0123456789", 1) == std::string::npos)
                    throw FormatError(
                        "flag_field: node carries tangent harmonic \"" + key +
                        "\"; a projection curvature radius function has only the "
                        "constant and second harmonics, so the input can never be valid");
                throw FormatError("flag_field: unexpected node key \"" + key + "\"");
            }
            const json& dir = node.at("dir");
            if (!dir.is_array() || dir.size() != 3)
                throw FormatError("flag_field: node dir must be [x, y, z]");
            const Direction given(dir[0].get<double>(), dir[1].get<double>(),
                                  dir[2].get<double>());
            const Direction& expected = grid.direction(i);
            if ((given.vec() - expected.vec()).norm() > 1e-9)
                throw FormatError("flag_field: node " + std::to_string(i) +
                                  " direction does not lie on the declared grid");
            coeffs[i].a0 = node.at("a0").get<double>();
            coeffs[i].a2 = node.at("a2").get<double>();
            coeffs[i].b2 = node.at("b2").get<double>();
        }
        return FlagField(std::move(grid), std::move(coeffs));
    } catch (const json::exception& e) {
        throw FormatError(std::string("flag_field: ") + e.what());
    }
}

inline json consistency_report_to_json(const ConsistencyReport& rep) {
    return json{{"max_residual", rep.max_residual},
                {"residual_by_harmonic",
                 json{{"h0", rep.h0}, {"h2", rep.h2}, {"other", rep.other}}},
                {"samples", rep.samples},
                {"n_lat", rep.n_lat},
                {"n_lon", rep.n_lon},
                {"lmax", rep.lmax},
                {"seed", rep.seed},
                {"frame_convention", frame_convention_name()}};
}

inline std::string mesh_to_obj(const BodyMesh& mesh) {
    std::string out;
    out.reserve(mesh.vertices.size() * 48 + mesh.faces.size() * 24);
    char line[128];
    for (const Vec3& v : mesh.vertices) {
        std::snprintf(line, sizeof(line), "v %.9f %.9f %.9f\n", v.x, v.y, v.z);
        out += line;
    }
    for (const auto& f : mesh.faces) {
        std::snprintf(line, sizeof(line), "f %d %d %d\n", f[0] + 1, f[1] + 1, f[2] + 1);
        out += line;
    }
    return out;
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
    atomic_write_file(path, j.dump(2) + "\n");
}

}  // namespace flagrecon
