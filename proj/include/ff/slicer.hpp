#pragma once

#include "ff/mesh.hpp"
#include "ff/slab.hpp"

#include "json.hpp"

#include <vector>

namespace ff::slicer {

struct SliceDiagnostics {
    int residual_nonprismoidal_count = 0;
    double min_slab_height = 0;
    int slab_count = 0;
    int depth_used = 0;
    double residual_height_total = 0;
    double residual_height_max = 0;
    std::vector<double> residual_heights;   // per residual slab, in output order
};

// Pieces of every face of `m` between two planes with no vertex strictly between them.
Slab band_slab(const mesh::Manifold& m, double z0, double z1, Origin origin = {});

std::vector<Slab> slice_at_vertices(const mesh::OrientedManifold& m);

std::pair<std::vector<Slab>, SliceDiagnostics> refine_to_prismoidal(const std::vector<Slab>& slabs, int depth);

struct DisjointBound {
    double psi = 0;     // smallest spanning-face tilt against the base
    double s_min = 0;   // vertex to nonadjacent edge, within one base plane
    double bound = 0;   // (s_min / 2) sin psi
};
DisjointBound projection_bound(const Slab& s);
int projection_split_count(double height, double bound);
std::vector<Slab> split_projection_disjoint(const Slab& s);

// Brute force: nonadjacent pieces whose base projections overlap with positive area.
std::vector<std::pair<int, int>> projection_overlaps(const Slab& s, double area_tol = 1e-14);

struct ClearanceReport {
    bool ok = true;
    double worst_ratio = 0;   // largest footprint / gap encountered
    std::string reason;
};
ClearanceReport gadget_clearance(const Slab& s);
std::vector<Slab> split_for_gadget_clearance(const Slab& s, int max_rounds = 40);

// Halve every slab once (used when an area budget asks for smaller gadgets).
std::vector<Slab> bisect_all(const std::vector<Slab>& slabs);

nlohmann::json slabs_to_json(const std::vector<Slab>& slabs);

} // namespace ff::slicer
