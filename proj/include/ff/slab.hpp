#pragma once

#include "ff/common.hpp"

#include <string>
#include <vector>

namespace ff::slicer {

// A mesh edge that crosses a slab, stored with its endpoints so a slab can be
// re-cut without the mesh.
struct EdgeSeg {
    int id = -1;
    int v_lo = -1, v_hi = -1;
    Vec3 lo, hi;   // lo.z() < hi.z()
    Vec3 at(double z) const;
};

// One spanning face of a slab: the part of a mesh face between two crossing edges.
struct Piece {
    int face = -1;
    EdgeSeg e0, e1;
    Vec3 b0, b1, t0, t1;   // e0/e1 at z_bottom and z_top

    bool triangle() const;
    double area() const;
    void flip();           // swap e0 and e1
};

struct Wall {
    std::vector<int> pieces;   // chain order, piece[k].e1 == piece[k+1].e0
    bool cycle = false;
};

struct Origin {
    int gap = -1;              // index of the vertex-height gap it came from
    int depth = 0;             // bisection rounds applied by refine_to_prismoidal
    std::string path;          // readable provenance, e.g. "g2/r1/p0/c1"
};

struct Slab {
    double z_bottom = 0, z_top = 0;
    std::vector<Piece> pieces;
    std::vector<Wall> walls;
    Origin origin;
    bool bad_bottom = false, bad_top = false;   // a vertex on that plane meets >1 crossing edge
    bool residual = false;                      // left non-prismoidal at the truncation boundary

    double height() const { return z_top - z_bottom; }
    bool prismoidal() const { return !bad_bottom && !bad_top; }
    double area() const;
};

// Builds pieces' endpoints, classification and walls.
Slab make_slab(double z0, double z1, std::vector<Piece> pieces, Origin origin);
Slab sub_slab(const Slab& s, double z0, double z1, const std::string& tag);

// Unit vectors of a piece: bottom direction u, horizontal left normal m.
struct PieceFrame {
    Vec3 u, m;
    double ell = 0;   // (t0 - b0).m
    double h = 0;
    double w = 0;     // distance between bottom and top lines inside the face
};
PieceFrame piece_frame(const Piece& p);

} // namespace ff::slicer
