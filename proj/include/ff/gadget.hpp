#pragma once

#include "ff/common.hpp"
#include "ff/slab.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ff::gadget {

enum class Kind { OutOut, InOut };
enum class Side { Alpha, Beta };
enum class FoldDir { TowardBottom, TowardTop };   // Out faces fold toward the bottom edge

const char* to_string(Kind k);
Kind kind_from_string(const std::string& s);

// canonical -> world: x = origin + scale * R * c
struct Frame {
    Vec3 origin = Vec3::Zero();
    Mat3 R = Mat3::Identity();
    double scale = 1;
    Vec3 apply(const Vec3& c) const { return origin + scale * (R * c); }
};

struct SpanningEdgeParams {
    double theta = 0, alpha = 0, beta = 0;
    Frame frame;
    bool primary_at_top = false;
    bool mirrored = false;          // det R < 0
    double edge_length = 1;
    bool no_gadget = false;         // coplanar faces, face creases suffice
    int piece_alpha = -1, piece_beta = -1;   // slab piece indices when built from a wall
};

// Empty string when admissible, otherwise the violated constraint.
std::string admissibility_violation(double theta, double alpha, double beta, double margin = 0);
SpanningEdgeParams canonical_params(double theta, double alpha, double beta);

// Canonical unit-edge corner: o = 0, u_alpha = x, u_beta in the xy plane at angle theta.
struct Corner {
    Vec3 u_alpha, u_beta, d;       // d = q - o
    Vec3 m_alpha, m_beta;          // in-base normals pointing into the wedge
    double h = 0;                  // d.z
    double lean_alpha = 0, lean_beta = 0;
};
Corner canonical_corner(double theta, double alpha, double beta);

struct FaceCrease {
    Side side = Side::Alpha;
    double w = 0;
    double cos_phi = 0;
    double offset_fraction = 0;    // crease distance from the bottom line over w
    double excursion = 0;          // (1 - cos phi) w / 2
    Vec2 line_point, line_dir;     // developed coordinates, line_point on oq
};
FaceCrease face_crease(const SpanningEdgeParams& p, Side side, FoldDir dir);

// Developed frame: o = (0,0), q = (0,1); face alpha on x < 0, face beta on x > 0.
Vec2 dev_dir(const SpanningEdgeParams& p, Side side);      // bottom edge direction
Vec2 dev_normal(const SpanningEdgeParams& p, Side side);   // unit, from bottom line toward top line
// Developed point of one face to canonical 3D (unfolded prismoid).
Vec3 dev_to_3d(const SpanningEdgeParams& p, Side side, const Vec2& x);

struct PatternEdge {
    int a = -1, b = -1;
    char role = 'B';         // B boundary, F face crease, V vertex crease, G geodesic crease
    char assignment = 'U';   // FOLD: B, M, V, F (flat at t = 1), U (folded, sign not yet derived)
};

struct GadgetPattern {
    Kind kind = Kind::OutOut;
    SpanningEdgeParams params;
    Vec2 o, q, c_alpha, c_beta, p_alpha, p_beta;
    Vec3 o3, q3, c_alpha3, c_beta3, p_alpha3, p_beta3;
    FaceCrease crease_alpha, crease_beta;
    bool merged_beta = false;      // p_beta == c_beta
    double extent = 0;             // developed length of each face along its bottom edge

    std::vector<Vec2> vertices;
    std::vector<std::string> labels;
    std::vector<PatternEdge> edges;
    std::vector<std::vector<int>> faces;   // counter-clockwise in developed coordinates
    std::vector<Vec2> moving_region;       // outer ring, counter-clockwise

    int vertex(const std::string& label) const;   // -1 if absent
};

enum PatternVertex { kO = 0, kQ, kPA, kPB, kAB, kAC, kAT, kBB, kBC, kBT, kPatternVertexCount };

GadgetPattern build_out_out(const SpanningEdgeParams& p);
GadgetPattern build_in_out(const SpanningEdgeParams& p);
GadgetPattern build(const SpanningEdgeParams& p, Kind k);

// Same combinatorics with p_alpha replaced by `pa` (intermediate, moving creases).
GadgetPattern with_p_alpha(const GadgetPattern& g, const Vec2& pa);

struct ReachBound {
    double alpha = 0, beta = 0;                 // signed projections, measured on the pattern
    double alpha_closed = 0, beta_closed = 0;   // closed forms
    double ext_alpha = 0, ext_beta = 0;         // lateral face excursion
    double area_bound = 0;
    double radius = 0;                          // max developed distance from o of gadget points
};
ReachBound gadget_reach(const GadgetPattern& g);

// Closed forms for a unit spanning edge.
double reach_closed(Kind k, Side s, double theta, double alpha, double beta);
// Variant with cos(alpha + theta) in the alpha terms and the first InOut beta term negated; kept
// only to report how far it is from the construction.
double reach_sign_flipped(Kind k, Side s, double theta, double alpha, double beta);

double moving_region_area(const GadgetPattern& g);

// ---- walls ----------------------------------------------------------------

// Spanning edge between pieces wall.pieces[k] and wall.pieces[k+1] (cyclic), with the
// alpha side given by `alpha_first` (piece k is alpha when true).
SpanningEdgeParams edge_params(const slicer::Slab& s, const slicer::Wall& w, int k, bool alpha_first = true);

enum class Joint { Boundary, None, InOut, OutOut };

struct WallLabeling {
    std::vector<char> face_labels;     // 'I' / 'O' per wall position
    std::vector<int> sides;            // +1: bottom strip flattens toward the piece's left normal
    std::vector<Joint> joints;         // joint k sits after position k; chains have joints.size() == n-1
    std::vector<int> alpha_position;   // wall position of the alpha face per joint, -1 if none
};

WallLabeling assign_labels(const slicer::Slab& s, const slicer::Wall& w);

// Gadget pattern for joint k of a labeled wall (nullopt for boundary / flat joints).
std::optional<GadgetPattern> joint_gadget(const slicer::Slab& s, const slicer::Wall& w,
                                          const WallLabeling& lab, int k);

} // namespace ff::gadget
