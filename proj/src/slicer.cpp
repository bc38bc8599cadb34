#include "ff/slicer.hpp"

#include "ff/gadget.hpp"
#include "poly2d.hpp"

#include <algorithm>
#include <limits>
#include <optional>

namespace ff::slicer {

namespace {

Vec2 xy(const Vec3& p) { return {p.x(), p.y()}; }

} // namespace

Slab band_slab(const mesh::Manifold& m, double z0, double z1, Origin origin)
{
    const double zm = 0.5 * (z0 + z1);
    std::vector<Piece> pieces;
    for (int fi = 0; fi < static_cast<int>(m.faces.size()); ++fi) {
        const auto& f = m.faces[fi];
        Vec3 n = Vec3::Zero();
        for (size_t i = 0; i < f.size(); ++i) n += m.vertices[f[i]].cross(m.vertices[f[(i + 1) % f.size()]]);
        Vec3 dir = n.cross(Vec3::UnitZ());
        if (dir.norm() == 0) continue;
        struct Cross {
            double key;
            EdgeSeg seg;
        };
        std::vector<Cross> cs;
        for (size_t i = 0; i < f.size(); ++i) {
            int a = f[i], b = f[(i + 1) % f.size()];
            const Vec3 &pa = m.vertices[a], &pb = m.vertices[b];
            double lo = std::min(pa.z(), pb.z()), hi = std::max(pa.z(), pb.z());
            if (lo > z0 || hi < z1) continue;
            EdgeSeg e;
            e.id = m.edge_id(a, b);
            bool up = pa.z() < pb.z();
            e.v_lo = up ? a : b;
            e.v_hi = up ? b : a;
            e.lo = up ? pa : pb;
            e.hi = up ? pb : pa;
            cs.push_back({e.at(zm).dot(dir), e});
        }
        std::sort(cs.begin(), cs.end(), [](const Cross& x, const Cross& y) { return x.key < y.key; });
        for (size_t i = 0; i + 1 < cs.size(); i += 2) {
            Piece p;
            p.face = fi;
            p.e0 = cs[i].seg;
            p.e1 = cs[i + 1].seg;
            pieces.push_back(p);
        }
    }
    return make_slab(z0, z1, std::move(pieces), std::move(origin));
}

std::vector<Slab> slice_at_vertices(const mesh::OrientedManifold& om)
{
    std::vector<Slab> out;
    const auto& h = om.vertex_heights;
    for (size_t k = 0; k + 1 < h.size(); ++k) {
        Origin o;
        o.gap = static_cast<int>(k);
        o.path = "g" + std::to_string(k);
        out.push_back(band_slab(om.rotated, h[k], h[k + 1], o));
    }
    return out;
}

namespace {

void refine_rec(const Slab& s, int rounds, int depth, std::vector<Slab>& out, SliceDiagnostics& d)
{
    if (s.prismoidal()) {
        out.push_back(s);
        out.back().origin.depth = depth;
        return;
    }
    if (rounds == 0) {
        out.push_back(s);
        out.back().residual = true;
        out.back().origin.depth = depth;
        return;
    }
    d.depth_used = std::max(d.depth_used, depth + 1);
    double mid = 0.5 * (s.z_bottom + s.z_top);
    refine_rec(sub_slab(s, s.z_bottom, mid, "r" + std::to_string(depth + 1) + "l"), rounds - 1, depth + 1, out, d);
    refine_rec(sub_slab(s, mid, s.z_top, "r" + std::to_string(depth + 1) + "u"), rounds - 1, depth + 1, out, d);
}

} // namespace

std::pair<std::vector<Slab>, SliceDiagnostics> refine_to_prismoidal(const std::vector<Slab>& slabs, int depth)
{
    if (depth < 0) throw Error("slicer", "negative depth");
    std::vector<Slab> out;
    SliceDiagnostics d;
    for (const auto& s : slabs) refine_rec(s, depth, 0, out, d);
    d.slab_count = static_cast<int>(out.size());
    d.min_slab_height = std::numeric_limits<double>::infinity();
    for (const auto& s : out) {
        d.min_slab_height = std::min(d.min_slab_height, s.height());
        if (s.residual) {
            ++d.residual_nonprismoidal_count;
            d.residual_heights.push_back(s.height());
            d.residual_height_total += s.height();
            d.residual_height_max = std::max(d.residual_height_max, s.height());
        }
    }
    if (out.empty()) d.min_slab_height = 0;
    return {std::move(out), d};
}

DisjointBound projection_bound(const Slab& s)
{
    DisjointBound b;
    b.psi = kPi / 2;
    for (const auto& p : s.pieces) {
        PieceFrame f = piece_frame(p);
        b.psi = std::min(b.psi, std::atan2(f.h, std::abs(f.ell)));
    }
    double best = std::numeric_limits<double>::infinity();
    for (int top = 0; top < 2; ++top) {
        struct Seg {
            Vec2 a, b;
            int ia, ib;
        };
        std::vector<Seg> segs;
        std::vector<std::pair<Vec2, int>> verts;
        for (const auto& p : s.pieces) {
            Vec2 a = xy(top ? p.t0 : p.b0), c = xy(top ? p.t1 : p.b1);
            segs.push_back({a, c, p.e0.id, p.e1.id});
            verts.emplace_back(a, p.e0.id);
            verts.emplace_back(c, p.e1.id);
        }
        for (const auto& [v, id] : verts)
            for (const auto& sg : segs) {
                if (sg.ia == id || sg.ib == id) continue;
                best = std::min(best, poly::point_segment(v, sg.a, sg.b));
            }
    }
    b.s_min = best;
    b.bound = 0.5 * b.s_min * std::sin(b.psi);
    return b;
}

int projection_split_count(double height, double bound)
{
    if (!(bound > 0) || !std::isfinite(bound)) return 1;
    double r = height / bound;
    int n = static_cast<int>(std::ceil(r * (1 - 1e-12)));
    return std::max(1, n);
}

std::vector<Slab> split_projection_disjoint(const Slab& s)
{
    DisjointBound b = projection_bound(s);
    int n = projection_split_count(s.height(), b.bound);
    if (n <= 1) return {s};
    std::vector<Slab> out;
    for (int i = 0; i < n; ++i) {
        double z0 = i == 0 ? s.z_bottom : s.z_bottom + s.height() * i / n;
        double z1 = i + 1 == n ? s.z_top : s.z_bottom + s.height() * (i + 1) / n;
        out.push_back(sub_slab(s, z0, z1, "p" + std::to_string(i)));
    }
    return out;
}

std::vector<std::pair<int, int>> projection_overlaps(const Slab& s, double area_tol)
{
    std::vector<poly::Polygon> proj;
    double scale = 0;
    for (const auto& p : s.pieces) {
        proj.push_back(poly::hull({xy(p.b0), xy(p.b1), xy(p.t1), xy(p.t0)}));
        scale = std::max(scale, (p.b1 - p.b0).norm());
    }
    std::vector<std::pair<int, int>> out;
    for (size_t i = 0; i < s.pieces.size(); ++i)
        for (size_t j = i + 1; j < s.pieces.size(); ++j) {
            const auto &a = s.pieces[i], &b = s.pieces[j];
            if (a.e0.id == b.e0.id || a.e0.id == b.e1.id || a.e1.id == b.e0.id || a.e1.id == b.e1.id) continue;
            if (poly::area(proj[i]) == 0 || poly::area(proj[j]) == 0) continue;
            if (poly::intersection_area(proj[i], proj[j]) > area_tol * scale * scale)
                out.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
    return out;
}

namespace {

struct Footprint {
    Vec2 c;
    double r;
    int piece_a, piece_b;
};

// Projected region swept by a piece's strips during the collapse.
poly::Polygon face_band(const Piece& p, int side)
{
    PieceFrame f = piece_frame(p);
    double a = 0.5 * (f.w + side * f.ell), b = f.w - a;
    double lo = std::min({0.0, f.ell, std::max(-a, f.ell - b)});
    double hi = std::max({0.0, f.ell, std::min(a, f.ell + b)});
    Vec3 o = p.b0;
    auto xi = [&](const Vec3& x) { return (x - o).dot(f.u); };
    double x0 = std::min({0.0, xi(p.t0), xi(p.b1), xi(p.t1)});
    double x1 = std::max({0.0, xi(p.t0), xi(p.b1), xi(p.t1)});
    auto pt = [&](double x, double y) { return xy(o + x * f.u + y * f.m); };
    return poly::make({pt(x0, lo), pt(x1, lo), pt(x1, hi), pt(x0, hi)});
}

} // namespace

ClearanceReport gadget_clearance(const Slab& s)
{
    ClearanceReport rep;
    std::vector<Footprint> feet;
    std::vector<int> side(s.pieces.size(), 1);
    // the two gadgets on one face keep their crease ends in order along it
    std::vector<std::pair<std::string, double>> along;
    for (const auto& w : s.walls) {
        gadget::WallLabeling lab = gadget::assign_labels(s, w);
        const int n = static_cast<int>(w.pieces.size());
        for (int i = 0; i < n; ++i) side[w.pieces[i]] = lab.sides[i];
        std::vector<std::optional<Footprint>> at(lab.joints.size());
        for (size_t k = 0; k < lab.joints.size(); ++k) {
            auto g = gadget::joint_gadget(s, w, lab, static_cast<int>(k));
            if (!g) continue;
            gadget::ReachBound rb = gadget::gadget_reach(*g);
            Footprint fp;
            fp.c = xy(g->params.frame.origin);
            fp.r = rb.radius * (1 + 1e-6);
            fp.piece_a = g->params.piece_alpha;
            fp.piece_b = g->params.piece_beta;
            feet.push_back(fp);
            at[k] = fp;
        }
        const int joints = static_cast<int>(lab.joints.size());
        for (int pos = 0; pos < n; ++pos) {
            int k0 = pos - 1, k1 = pos;
            if (k0 < 0) k0 = w.cycle ? n - 1 : -1;
            if (k0 < 0 || k1 >= joints || !at[k0] || !at[k1]) continue;
            PieceFrame f = piece_frame(s.pieces[w.pieces[pos]]);
            Vec2 u(f.u.x(), f.u.y());
            double room = (at[k1]->c - at[k0]->c).dot(u);
            along.push_back({"gadgets on one face reach past each other", (at[k0]->r + at[k1]->r) / std::max(room, 1e-300)});
            if (room <= 0) along.back().second = 1e300;
        }
    }
    std::vector<poly::Polygon> bands;
    for (size_t i = 0; i < s.pieces.size(); ++i) bands.push_back(face_band(s.pieces[i], side[i]));

    auto note = [&](double ratio, const std::string& why) {
        rep.worst_ratio = std::max(rep.worst_ratio, ratio);
        if (ratio >= 1 && rep.ok) {
            rep.ok = false;
            rep.reason = why;
        }
    };
    for (const auto& [why, ratio] : along) note(ratio, why);
    for (size_t i = 0; i < feet.size(); ++i)
        for (size_t j = i + 1; j < feet.size(); ++j) {
            double gap = (feet[i].c - feet[j].c).norm();
            note((feet[i].r + feet[j].r) / std::max(gap, 1e-300), "gadget footprints overlap");
        }
    for (const auto& fp : feet)
        for (size_t i = 0; i < s.pieces.size(); ++i) {
            if (static_cast<int>(i) == fp.piece_a || static_cast<int>(i) == fp.piece_b) continue;
            double gap = poly::distance(fp.c, bands[i]);
            note(fp.r / std::max(gap, 1e-300), "gadget footprint meets a face band");
        }
    for (size_t i = 0; i < s.pieces.size(); ++i)
        for (size_t j = i + 1; j < s.pieces.size(); ++j) {
            const auto &a = s.pieces[i], &b = s.pieces[j];
            if (a.e0.id == b.e0.id || a.e0.id == b.e1.id || a.e1.id == b.e0.id || a.e1.id == b.e1.id) continue;
            double gap = poly::distance(bands[i], bands[j]);
            note(gap > 0 ? 0.0 : 1.0, "face bands overlap");
        }
    return rep;
}

std::vector<Slab> split_for_gadget_clearance(const Slab& s, int max_rounds)
{
    if (gadget_clearance(s).ok) return {s};
    if (max_rounds <= 0) throw Error("slicer", "gadget clearance not reached for slab " + s.origin.path);
    double mid = 0.5 * (s.z_bottom + s.z_top);
    std::vector<Slab> out = split_for_gadget_clearance(sub_slab(s, s.z_bottom, mid, "c0"), max_rounds - 1);
    auto up = split_for_gadget_clearance(sub_slab(s, mid, s.z_top, "c1"), max_rounds - 1);
    out.insert(out.end(), up.begin(), up.end());
    return out;
}

std::vector<Slab> bisect_all(const std::vector<Slab>& slabs)
{
    std::vector<Slab> out;
    for (const auto& s : slabs) {
        if (s.residual) {
            out.push_back(s);
            continue;
        }
        double mid = 0.5 * (s.z_bottom + s.z_top);
        out.push_back(sub_slab(s, s.z_bottom, mid, "a0"));
        out.push_back(sub_slab(s, mid, s.z_top, "a1"));
    }
    return out;
}

nlohmann::json slabs_to_json(const std::vector<Slab>& slabs)
{
    nlohmann::json doc;
    doc["slab_schema"] = 1;
    auto& arr = doc["slabs"] = nlohmann::json::array();
    for (size_t i = 0; i < slabs.size(); ++i) {
        const Slab& s = slabs[i];
        nlohmann::json j;
        j["index"] = i;
        j["z"] = {s.z_bottom, s.z_top};
        j["origin"] = {{"gap", s.origin.gap}, {"depth", s.origin.depth}, {"path", s.origin.path}};
        j["prismoidal"] = s.prismoidal();
        j["residual"] = s.residual;
        auto& ws = j["walls"] = nlohmann::json::array();
        for (const auto& w : s.walls) {
            nlohmann::json wj;
            wj["topology"] = w.cycle ? "cycle" : "chain";
            auto& fs = wj["faces"] = nlohmann::json::array();
            for (int k : w.pieces) {
                const Piece& p = s.pieces[k];
                fs.push_back({{"mesh_face", p.face},
                              {"edges", {p.e0.id, p.e1.id}},
                              {"bottom", {{p.b0.x(), p.b0.y()}, {p.b1.x(), p.b1.y()}}},
                              {"top", {{p.t0.x(), p.t0.y()}, {p.t1.x(), p.t1.y()}}}});
            }
            ws.push_back(std::move(wj));
        }
        arr.push_back(std::move(j));
    }
    return doc;
}

} // namespace ff::slicer
