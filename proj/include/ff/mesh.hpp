#pragma once

#include "ff/common.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ff::mesh {

enum class Format { OFF, OBJ };

Format format_from_string(const std::string& s);   // "off" / "obj", case-insensitive
Format format_from_path(const std::string& path);

struct Manifold {
    std::vector<Vec3> vertices;
    std::vector<std::vector<int>> faces;

    // filled by build_adjacency(); edge id = index into `edges`, endpoints sorted
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> edge_faces;
    std::map<std::pair<int, int>, int> edge_index;
    std::vector<int> boundary_edges;

    // Throws Error("topology") when an edge has three or more faces.
    void build_adjacency();
    int edge_id(int a, int b) const;
    double bbox_diagonal() const;
    double surface_area() const;
};

Manifold parse_mesh(std::istream& in, Format f);
Manifold load_mesh(const std::string& path, Format f);
void write_mesh(std::ostream& out, const Manifold& m, Format f);
void save_mesh(const std::string& path, const Manifold& m, Format f);

struct Violation {
    std::string kind;   // nonmanifold, nonplanar, degenerate, nonsimple, touching, nonfinite, empty
    int face = -1;
    int edge = -1;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate_manifold(const Manifold& m, const Tolerances& tol = {});

struct OrientedManifold {
    Manifold base;
    Manifold rotated;                 // base with `rotation` applied
    Mat3 rotation = Mat3::Identity();
    std::vector<double> vertex_heights;   // sorted, distinct
    int attempts = 0;
};

// Attempt 0 is the identity; later attempts draw Haar-uniform rotations from a seeded stream.
OrientedManifold orient_generic(const Manifold& m, std::uint64_t seed, int max_retries = 256,
                                const Tolerances& tol = {});

Mat3 random_rotation(std::uint64_t seed, int attempt);
double min_height_gap(const std::vector<Vec3>& pts);

} // namespace ff::mesh
