#include "ff/slab.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ff::slicer {

Vec3 EdgeSeg::at(double z) const
{
    if (z == lo.z()) return lo;
    if (z == hi.z()) return hi;
    double s = (z - lo.z()) / (hi.z() - lo.z());
    Vec3 p = lo + s * (hi - lo);
    p.z() = z;
    return p;
}

bool Piece::triangle() const { return b0 == b1 || t0 == t1; }

double Piece::area() const { return 0.5 * (t1 - b0).cross(t0 - b1).norm(); }

void Piece::flip()
{
    std::swap(e0, e1);
    std::swap(b0, b1);
    std::swap(t0, t1);
}

double Slab::area() const
{
    double a = 0;
    for (const auto& p : pieces) a += p.area();
    return a;
}

namespace {

bool plane_is_bad(const std::vector<Piece>& pieces, double z, bool top)
{
    std::map<int, std::set<int>> at_vertex;
    for (const auto& p : pieces)
        for (const EdgeSeg* e : {&p.e0, &p.e1}) {
            if (!top && e->lo.z() == z) at_vertex[e->v_lo].insert(e->id);
            if (top && e->hi.z() == z) at_vertex[e->v_hi].insert(e->id);
        }
    for (const auto& [v, es] : at_vertex)
        if (es.size() > 1) return true;
    return false;
}

double signed_area_mid(const std::vector<Piece>& pieces, const Wall& w)
{
    double a = 0;
    const size_t n = w.pieces.size();
    for (size_t i = 0; i < n; ++i) {
        const Piece& p = pieces[w.pieces[i]];
        Vec3 m0 = 0.5 * (p.b0 + p.t0), m1 = 0.5 * (p.b1 + p.t1);
        a += m0.x() * m1.y() - m1.x() * m0.y();
    }
    return 0.5 * a;
}

std::vector<Wall> build_walls(std::vector<Piece>& pieces)
{
    std::map<int, std::vector<int>> by_edge;
    for (int i = 0; i < static_cast<int>(pieces.size()); ++i) {
        by_edge[pieces[i].e0.id].push_back(i);
        by_edge[pieces[i].e1.id].push_back(i);
    }
    auto boundary = [&](int eid) { return by_edge[eid].size() == 1; };
    auto other = [&](int eid, int piece) {
        for (int q : by_edge[eid])
            if (q != piece) return q;
        return -1;
    };

    std::vector<char> used(pieces.size(), 0);
    std::vector<Wall> walls;
    auto walk = [&](int start, bool cycle) {
        Wall w;
        w.cycle = cycle;
        int cur = start;
        while (cur >= 0 && !used[cur]) {
            used[cur] = 1;
            w.pieces.push_back(cur);
            int nxt = other(pieces[cur].e1.id, cur);
            if (nxt < 0 || used[nxt]) break;
            if (pieces[nxt].e0.id != pieces[cur].e1.id) pieces[nxt].flip();
            cur = nxt;
        }
        return w;
    };

    for (int i = 0; i < static_cast<int>(pieces.size()); ++i) {
        if (used[i]) continue;
        bool b0 = boundary(pieces[i].e0.id), b1 = boundary(pieces[i].e1.id);
        if (!b0 && !b1) continue;
        if (!b0) pieces[i].flip();
        walls.push_back(walk(i, false));
    }
    for (int i = 0; i < static_cast<int>(pieces.size()); ++i) {
        if (used[i]) continue;
        Wall w = walk(i, true);
        if (signed_area_mid(pieces, w) < 0) {
            std::reverse(w.pieces.begin(), w.pieces.end());
            for (int k : w.pieces) pieces[k].flip();
        }
        walls.push_back(std::move(w));
    }
    return walls;
}

} // namespace

Slab make_slab(double z0, double z1, std::vector<Piece> pieces, Origin origin)
{
    Slab s;
    s.z_bottom = z0;
    s.z_top = z1;
    s.origin = std::move(origin);
    for (auto& p : pieces) {
        p.b0 = p.e0.at(z0);
        p.b1 = p.e1.at(z0);
        p.t0 = p.e0.at(z1);
        p.t1 = p.e1.at(z1);
    }
    s.bad_bottom = plane_is_bad(pieces, z0, false);
    s.bad_top = plane_is_bad(pieces, z1, true);
    s.walls = build_walls(pieces);
    s.pieces = std::move(pieces);
    return s;
}

Slab sub_slab(const Slab& s, double z0, double z1, const std::string& tag)
{
    Origin o = s.origin;
    o.path += "/" + tag;
    return make_slab(z0, z1, s.pieces, o);
}

PieceFrame piece_frame(const Piece& p)
{
    PieceFrame f;
    Vec3 d = p.b1 - p.b0;
    if (d.norm() == 0) d = p.t1 - p.t0;
    d.z() = 0;
    f.u = d.normalized();
    f.m = Vec3(-f.u.y(), f.u.x(), 0);
    f.h = p.t0.z() - p.b0.z();
    f.ell = (p.t0 - p.b0).dot(f.m);
    f.w = std::hypot(f.ell, f.h);
    return f;
}

} // namespace ff::slicer
