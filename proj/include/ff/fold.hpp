#pragma once

#include "ff/common.hpp"
#include "ff/gadget.hpp"
#include "ff/slab.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ff::fold {

// Triangulated surface with per-triangle developed coordinates.
struct Sheet {
    struct Tri {
        std::array<int, 3> v{};
        std::array<Vec2, 3> dev{};
        int facet = -1;    // rigid piece the triangle belongs to
    };
    std::vector<Vec3> x;                 // folded positions
    std::vector<long long> key;          // base-plane identity, -1 inside; see boundary_key()
    std::vector<Tri> tris;
    std::vector<int> facet_face;         // mesh face per facet (-1 for gadget facets)
    std::vector<std::string> facet_role;
    double length_scale = 1;
    bool isometric = true;
};

// Key for a point on a base plane: mesh vertex or crossing mesh edge, plus the plane.
long long boundary_key(bool top, int vertex, int edge);

struct Panel {
    Vec3 b0, b1, t0, t1;   // slab-local, bottom at z = 0
    int side = 1;          // bottom strip flattens toward side * m
    int face = -1;
    Vec3 u, m;
    double h = 0, ell = 0, w = 0, a = 0;
    long long key_b0 = -1, key_b1 = -1, key_t0 = -1, key_t1 = -1;

    void finish();         // derive u, m, h, ell, w, a
    Vec3 fold(const Vec3& x, double H) const;   // unfolded point on the face -> folded
    Vec2 local(const Vec3& x) const;            // (along bottom, distance from bottom line)
};

struct Hinge {
    int left = -1, right = -1;   // left has the hinge at its end 1, right at its end 0
    std::optional<gadget::GadgetPattern> g;
    bool alpha_is_left = true;
};

struct Model {
    double h = 0;
    std::vector<Panel> panels;
    std::vector<Hinge> hinges;
    std::vector<std::array<int, 2>> panel_hinges;   // hinge at end 0 and end 1
    double length_scale = 1;
};

Model corner_model(const gadget::GadgetPattern& g);
Model slab_model(const slicer::Slab& s, const std::vector<gadget::WallLabeling>& labels);

// Hole-diagonal residual of the gadget at hinge `k`: 3D distance minus developed distance.
double hole_residual(const Model& m, int k, double s, double H);
// Position s in [0,1] of p'_alpha along c_alpha -> p_alpha that closes the gadget at height H.
double crease_position(const Model& m, int k, double H, const Tolerances& tol = {});

Sheet realize(const Model& m, double H, const std::vector<double>& s);

struct AlphaSolve {
    Vec2 p;
    double H = 0;
    double residual = 0;
    int iterations = 0;
};
AlphaSolve solve_p_alpha_prime(const gadget::GadgetPattern& g, double t, const Tolerances& tol = {});

struct FoldedGadget {
    double t = 0, H = 0, h = 0;
    Vec2 p_alpha_prime;
    double residual = 0;
    Sheet sheet;
    std::map<std::string, int> points;   // o, q, p_alpha, p_beta -> sheet vertex
    double base_angle = 0;
};
FoldedGadget fold_gadget(const gadget::GadgetPattern& g, double t, const Tolerances& tol = {});

// Height schedule shared by all slabs.
inline double slab_height_at(double h0, double t) { return t >= 1 ? 0.0 : h0 * (1 - t); }

struct FoldedSlab {
    int index = -1;
    double h0 = 0, H = 0;
    bool residual = false;
    Sheet sheet;                 // slab-local until composed
    double worst_residual = 0;   // largest hole-diagonal residual over gadgets
};
FoldedSlab fold_slab(const slicer::Slab& s, const std::vector<gadget::WallLabeling>& labels, double t,
                     const Tolerances& tol = {});

struct StackedFoldedState {
    double t = 0;
    std::vector<FoldedSlab> slabs;                 // sheets in world coordinates
    std::vector<std::array<double, 2>> z;          // [z-, z+] per slab
    std::vector<int> order;                        // stacking order (bottom first)
};
StackedFoldedState compose_global(std::vector<FoldedSlab> slabs, double t, double z_base);

// Fold angle of every crease (signed, 0 = unfolded). Uses sheet adjacency only.
struct CreaseAngle {
    int a = -1, b = -1;
    int tri0 = -1, tri1 = -1;
    double angle = 0;
};
std::vector<CreaseAngle> crease_angles(const Sheet& s);

// Mountain/valley assignment of the flat pattern, derived from the fold just below t = 1.
void derive_assignments(gadget::GadgetPattern& g, const Tolerances& tol = {});

} // namespace ff::fold
