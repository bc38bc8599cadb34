#include "ff/verify.hpp"
#include "ff/predicates.hpp"

#include "poly2d.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace ff::verify {

namespace {

constexpr size_t kMaxWitnesses = 8;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

Report start(const std::string& name)
{
    Report r;
    r.check = name;
    return r;
}

} // namespace

void Report::fail(Witness w)
{
    pass = false;
    worst = std::max(worst, w.value);
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back(std::move(w));
}

void Report::merge(const Report& o)
{
    pass = pass && o.pass;
    worst = std::max(worst, o.worst);
    runtime_s += o.runtime_s;
    for (const auto& w : o.witnesses)
        if (witnesses.size() < kMaxWitnesses) witnesses.push_back(w);
}

nlohmann::json to_json(const Report& r, bool with_runtime)
{
    nlohmann::json j;
    j["check"] = r.check;
    j["status"] = r.pass ? "pass" : "fail";
    j["worst"] = r.worst;
    nlohmann::json ws = nlohmann::json::array();
    for (const auto& w : r.witnesses) ws.push_back({{"what", w.what}, {"ids", w.ids}, {"value", w.value}});
    j["witnesses"] = ws;
    if (with_runtime) j["runtime_s"] = r.runtime_s;
    return j;
}

std::string summary(const Report& r)
{
    std::ostringstream s;
    s << (r.pass ? "PASS " : "FAIL ") << r.check << " worst=" << r.worst;
    if (!r.witnesses.empty()) s << " (" << r.witnesses.front().what << ")";
    return s.str();
}

// ---- flat pattern ---------------------------------------------------------

double kawasaki_residual(std::vector<double> a)
{
    for (auto& x : a) x = std::remainder(x, 2 * kPi);
    std::sort(a.begin(), a.end());
    double alt = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        double next = i + 1 < a.size() ? a[i + 1] : a[0] + 2 * kPi;
        alt += (i % 2 ? -1 : 1) * (next - a[i]);
    }
    return alt;
}

namespace {

bool boundary_vertex(const gadget::GadgetPattern& g, int v)
{
    for (const auto& e : g.edges)
        if (e.role == 'B' && (e.a == v || e.b == v)) return true;
    return false;
}

} // namespace

Report check_kawasaki(const gadget::GadgetPattern& g, double tol)
{
    Timer clock;
    Report r = start("kawasaki");
    for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
        if (boundary_vertex(g, v)) continue;
        std::vector<double> dirs;
        for (const auto& e : g.edges) {
            if (e.assignment == 'F' || (e.a != v && e.b != v)) continue;
            Vec2 d = g.vertices[e.a == v ? e.b : e.a] - g.vertices[v];
            if (d.norm() == 0) continue;
            dirs.push_back(std::atan2(d.y(), d.x()));
        }
        if (dirs.empty()) continue;
        double res = std::abs(kawasaki_residual(dirs));
        r.worst = std::max(r.worst, res);
        if (res > tol) r.fail({g.labels[v], {v}, res});
    }
    r.runtime_s = clock.seconds();
    return r;
}

Report check_developability(const gadget::GadgetPattern& g, double tol)
{
    Timer clock;
    Report r = start("developability");
    for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
        if (boundary_vertex(g, v)) continue;
        double sum = 0;
        for (const auto& f : g.faces) {
            auto it = std::find(f.begin(), f.end(), v);
            if (it == f.end()) continue;
            size_t i = it - f.begin(), n = f.size();
            // skip repeated (coincident) neighbours
            Vec2 p = g.vertices[v];
            Vec2 a, b;
            for (size_t k = 1; k < n; ++k) {
                a = g.vertices[f[(i + n - k) % n]];
                if ((a - p).norm() > 0) break;
            }
            for (size_t k = 1; k < n; ++k) {
                b = g.vertices[f[(i + k) % n]];
                if ((b - p).norm() > 0) break;
            }
            sum += angle_between(Vec2(b - p), Vec2(a - p));
        }
        double res = std::abs(sum - 2 * kPi);
        r.worst = std::max(r.worst, res);
        if (res > tol) r.fail({g.labels[v], {v}, res});
    }
    r.runtime_s = clock.seconds();
    return r;
}

// ---- folded geometry ------------------------------------------------------

Report check_isometry(const fold::Sheet& s, double tol)
{
    Timer clock;
    Report r = start("isometry");
    const double L = s.length_scale;
    for (int i = 0; i < static_cast<int>(s.tris.size()); ++i) {
        const auto& t = s.tris[i];
        for (int k = 0; k < 3; ++k) {
            int a = t.v[k], b = t.v[(k + 1) % 3];
            double d3 = (s.x[a] - s.x[b]).norm();
            double d2 = (t.dev[k] - t.dev[(k + 1) % 3]).norm();
            double err = std::abs(d3 - d2) / L;
            r.worst = std::max(r.worst, err);
            if (err > tol) r.fail({"edge length of triangle " + std::to_string(i), {a, b}, err});
        }
    }
    r.runtime_s = clock.seconds();
    return r;
}

Report check_isometry(const gadget::GadgetPattern& g, const fold::FoldedGadget& f, double tol)
{
    Timer clock;
    Report r = check_isometry(f.sheet, tol);
    gadget::GadgetPattern cur = gadget::with_p_alpha(g, f.p_alpha_prime);
    const double L = g.params.edge_length;
    std::set<std::pair<int, int>> seen;
    for (const auto& face : cur.faces)
        for (size_t i = 0; i < face.size(); ++i)
            for (size_t j = i + 1; j < face.size(); ++j) {
                int a = face[i], b = face[j];
                if (!seen.insert({std::min(a, b), std::max(a, b)}).second) continue;
                auto ia = f.points.find(cur.labels[a]), ib = f.points.find(cur.labels[b]);
                if (ia == f.points.end() || ib == f.points.end()) continue;
                double d3 = (f.sheet.x[ia->second] - f.sheet.x[ib->second]).norm();
                double d2 = L * (cur.vertices[a] - cur.vertices[b]).norm();
                double err = std::abs(d3 - d2) / L;
                r.worst = std::max(r.worst, err);
                if (err > tol) r.fail({"pattern edge " + cur.labels[a] + "-" + cur.labels[b], {a, b}, err});
            }
    r.runtime_s = clock.seconds();
    return r;
}

namespace {

struct Box {
    Vec3 lo, hi;
    bool overlaps(const Box& o, double pad) const
    {
        for (int k = 0; k < 3; ++k)
            if (lo[k] > o.hi[k] + pad || o.lo[k] > hi[k] + pad) return false;
        return true;
    }
    double magnitude() const { return std::max(lo.cwiseAbs().maxCoeff(), hi.cwiseAbs().maxCoeff()); }
};

Box box_of(const fold::Sheet& s, const fold::Sheet::Tri& t)
{
    Box b{s.x[t.v[0]], s.x[t.v[0]]};
    for (int v : t.v) {
        b.lo = b.lo.cwiseMin(s.x[v]);
        b.hi = b.hi.cwiseMax(s.x[v]);
    }
    return b;
}

} // namespace

namespace {

// Two triangles that only touch: one has a corner or an edge on the other's plane (up to
// `eps`) and its remaining corners strictly on one side, so the intersection lies in its
// boundary. Happens where a gadget has zero width (t = 0) and the faces meet along the
// spanning edge with T-junctions; those points are computed, so exact tests cannot see it.
bool touch_only(const Vec3* a[3], const Vec3* b[3], double eps)
{
    auto touches = [eps](const Vec3* t[3], const Vec3* o[3]) {
        Vec3 n = (*o[1] - *o[0]).cross(*o[2] - *o[0]);
        double len = n.norm();
        if (len == 0) return false;
        int near = 0, pos = 0, neg = 0;
        for (int k = 0; k < 3; ++k) {
            double d = n.dot(*t[k] - *o[0]) / len;
            if (std::abs(d) <= eps) ++near;
            else (d > 0 ? pos : neg)++;
        }
        return near >= 1 && near <= 2 && (pos == 0 || neg == 0);
    };
    return touches(a, b) || touches(b, a);
}

// Width below eps: a segment, no material to cross with.
bool sliver(const Vec3* t[3], double eps)
{
    double longest = std::max({(*t[1] - *t[0]).norm(), (*t[2] - *t[1]).norm(), (*t[0] - *t[2]).norm()});
    return (*t[1] - *t[0]).cross(*t[2] - *t[0]).norm() <= eps * longest;
}

} // namespace

Report check_noncrossing(const fold::Sheet& s, const Tolerances& tol)
{
    Timer clock;
    Report r = start("noncrossing");
    const int n = static_cast<int>(s.tris.size());
    std::vector<Box> boxes;
    for (const auto& t : s.tris) boxes.push_back(box_of(s, t));
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return boxes[a].lo.x() < boxes[b].lo.x(); });
    for (int ii = 0; ii < n; ++ii) {
        int i = order[ii];
        const auto& ti = s.tris[i];
        for (int jj = ii + 1; jj < n; ++jj) {
            int j = order[jj];
            if (boxes[j].lo.x() > boxes[i].hi.x()) break;
            if (!boxes[i].overlaps(boxes[j], 0)) continue;
            const auto& tj = s.tris[j];
            std::vector<int> shared;
            for (int a : ti.v)
                for (int b : tj.v)
                    if (a == b) shared.push_back(a);
            // coincident positions count as shared too
            std::vector<std::pair<int, int>> same;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    if (ti.v[a] != tj.v[b] && s.x[ti.v[a]] == s.x[tj.v[b]]) same.push_back({a, b});
            size_t nshared = shared.size() + same.size();
            if (nshared >= 2) continue;   // crease neighbours; dihedrals cover them
            const Vec3 &p1 = s.x[ti.v[0]], &q1 = s.x[ti.v[1]], &r1 = s.x[ti.v[2]];
            const Vec3 &p2 = s.x[tj.v[0]], &q2 = s.x[tj.v[1]], &r2 = s.x[tj.v[2]];
            const Vec3* A[3] = {&p1, &q1, &r1};
            const Vec3* B[3] = {&p2, &q2, &r2};
            double eps = tol.shell * (1 + std::max(boxes[i].magnitude(), boxes[j].magnitude()));
            bool hit;
            if (sliver(A, eps) || sliver(B, eps)) {
                hit = false;
            } else if (pred::coplanar(p1, q1, r1, p2, q2, r2)) {
                hit = false;   // stacked contact, judged by the layer order
            } else if (touch_only(A, B, eps)) {
                hit = false;
            } else if (nshared == 1) {
                // only the common corner may be shared: test each opposite edge against the other triangle
                int ai = -1, bj = -1;
                if (!shared.empty()) {
                    for (int k = 0; k < 3; ++k) {
                        if (ti.v[k] == shared[0]) ai = k;
                        if (tj.v[k] == shared[0]) bj = k;
                    }
                } else {
                    ai = same[0].first;
                    bj = same[0].second;
                }
                const Vec3& a0 = s.x[ti.v[(ai + 1) % 3]];
                const Vec3& a1 = s.x[ti.v[(ai + 2) % 3]];
                const Vec3& b0 = s.x[tj.v[(bj + 1) % 3]];
                const Vec3& b1 = s.x[tj.v[(bj + 2) % 3]];
                hit = pred::segment_meets_triangle(a0, a1, p2, q2, r2) || pred::segment_meets_triangle(b0, b1, p1, q1, r1);
            } else {
                hit = pred::tri_tri_intersect(p1, q1, r1, p2, q2, r2);
            }
            if (hit) r.fail({"triangles intersect", {i, j}, 1});
        }
    }
    r.runtime_s = clock.seconds();
    return r;
}

Report check_containment(const fold::Sheet& s, double z_lo, double z_hi, double tol)
{
    Timer clock;
    Report r = start("containment");
    for (int v = 0; v < static_cast<int>(s.x.size()); ++v) {
        double z = s.x[v].z();
        double out = std::max(z_lo - z, z - z_hi);
        if (out > 0) r.worst = std::max(r.worst, out);
        if (out > tol) r.fail({"vertex outside the slab", {v}, out});
    }
    r.runtime_s = clock.seconds();
    return r;
}

Report check_dihedrals(const fold::Sheet& s, double min_gap)
{
    Timer clock;
    Report r = start("dihedrals");
    for (const auto& c : fold::crease_angles(s)) {
        double a = std::abs(c.angle);
        r.worst = std::max(r.worst, a);
        if (a >= kPi - min_gap) r.fail({"crease folded flat", {c.a, c.b}, a});
    }
    r.runtime_s = clock.seconds();
    return r;
}

// ---- flat layer order -----------------------------------------------------

namespace {

Vec2 xy(const Vec3& v) { return {v.x(), v.y()}; }

// Height of triangle t of `near` at the point with barycentrics taken in `flat`.
double near_height(const fold::Sheet& flat, const fold::Sheet& near, int t, const Vec2& p)
{
    const auto& f = flat.tris[t];
    Vec2 a = xy(flat.x[f.v[0]]), b = xy(flat.x[f.v[1]]), c = xy(flat.x[f.v[2]]);
    double d = cross2(b - a, c - a);
    double l1 = cross2(p - a, c - a) / d, l2 = cross2(b - a, p - a) / d, l0 = 1 - l1 - l2;
    const auto& n = near.tris[t];
    return l0 * near.x[n.v[0]].z() + l1 * near.x[n.v[1]].z() + l2 * near.x[n.v[2]].z();
}

} // namespace

Report check_layer_order(const fold::Sheet& flat, const fold::Sheet& near, double area_tol)
{
    Timer clock;
    Report r = start("layer_order");
    if (flat.tris.size() != near.tris.size() || flat.x.size() != near.x.size()) {
        r.fail({"sheets differ in topology", {}, 1});
        return r;
    }
    const int n = static_cast<int>(flat.tris.size());
    std::vector<poly::Polygon> proj(n);
    std::vector<double> area(n);
    double scale = flat.length_scale;
    for (int i = 0; i < n; ++i) {
        const auto& t = flat.tris[i];
        proj[i] = poly::make({xy(flat.x[t.v[0]]), xy(flat.x[t.v[1]]), xy(flat.x[t.v[2]])});
        area[i] = poly::area(proj[i]);
    }
    std::vector<std::vector<int>> above(n);
    for (int i = 0; i < n; ++i) {
        if (area[i] <= area_tol * scale * scale) continue;
        for (int j = i + 1; j < n; ++j) {
            if (area[j] <= area_tol * scale * scale) continue;
            if (!poly::bg::intersects(proj[i], proj[j])) continue;
            poly::Multi ov = poly::intersection(proj[i], proj[j]);
            for (const auto& part : ov) {
                if (poly::area(part) <= area_tol * scale * scale) continue;
                auto ring = poly::ring(part);
                Vec2 c = Vec2::Zero();
                for (const auto& v : ring) c += v;
                c /= static_cast<double>(ring.size());
                // centroid plus points pulled toward it from each corner
                std::vector<Vec2> samples = {c};
                for (const auto& v : ring) samples.push_back(c + 0.5 * (v - c));
                int sign = 0;
                bool consistent = true;
                for (const auto& p : samples) {
                    double d = near_height(flat, near, i, p) - near_height(flat, near, j, p);
                    int sg = d > 0 ? 1 : (d < 0 ? -1 : 0);
                    if (sg == 0 || (sign != 0 && sg != sign)) consistent = false;
                    if (sign == 0) sign = sg;
                }
                if (!consistent || sign == 0) {
                    r.fail({"stacking order changes inside an overlap", {i, j}, 1});
                    continue;
                }
                if (sign > 0) above[j].push_back(i);
                else above[i].push_back(j);
            }
        }
    }
    // the "is below" relation must be acyclic
    std::vector<int> state(n, 0);
    std::vector<std::pair<int, size_t>> stack;
    for (int s = 0; s < n && r.pass; ++s) {
        if (state[s]) continue;
        stack.push_back({s, 0});
        state[s] = 1;
        while (!stack.empty() && r.pass) {
            auto& [v, k] = stack.back();
            if (k < above[v].size()) {
                int w = above[v][k++];
                if (state[w] == 1) r.fail({"cyclic layer order", {v, w}, 1});
                else if (state[w] == 0) {
                    state[w] = 1;
                    stack.push_back({w, 0});
                }
            } else {
                state[v] = 2;
                stack.pop_back();
            }
        }
    }
    r.runtime_s = clock.seconds();
    return r;
}

// ---- stacked states -------------------------------------------------------

Report check_stacked_state(const fold::StackedFoldedState& s, double tol)
{
    Timer clock;
    Report r = start("stacked_state");
    const size_t n = s.z.size();
    // slab intervals come in order and only touch at shared planes
    for (size_t i = 0; i + 1 < n; ++i) {
        double overlap = s.z[i][1] - s.z[i + 1][0];
        if (overlap > tol) r.fail({"slab interiors overlap", {int(i), int(i + 1)}, overlap});
        if (s.z[i + 1][0] - s.z[i][1] > tol) r.fail({"gap between consecutive slabs", {int(i), int(i + 1)}, s.z[i + 1][0] - s.z[i][1]});
    }
    if (s.t < 1)
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 2; j < n; ++j) {
                double lo = std::max(s.z[i][0], s.z[j][0]), hi = std::min(s.z[i][1], s.z[j][1]);
                if (hi >= lo && s.z[i][1] > s.z[i][0] && s.z[j][1] > s.z[j][0])
                    r.fail({"nonadjacent slabs share heights", {int(i), int(j)}, hi - lo});
            }
    // each slab stays inside its interval
    for (size_t i = 0; i < n && i < s.slabs.size(); ++i) {
        Report c = check_containment(s.slabs[i].sheet, s.z[i][0], s.z[i][1], tol);
        if (!c.pass) r.fail({"slab " + std::to_string(i) + " leaves its interval", {int(i)}, c.worst});
    }
    // neighbours agree on the shared plane
    for (size_t i = 0; i + 1 < n && i + 1 < s.slabs.size(); ++i) {
        const auto& a = s.slabs[i].sheet;
        const auto& b = s.slabs[i + 1].sheet;
        std::map<long long, Vec3> top;
        for (size_t v = 0; v < a.x.size(); ++v)
            if (a.key[v] >= 0 && (a.key[v] & 1)) top[a.key[v] & ~1LL] = a.x[v];
        double scale = std::max(a.length_scale, b.length_scale);
        for (size_t v = 0; v < b.x.size(); ++v) {
            if (b.key[v] < 0 || (b.key[v] & 1)) continue;
            auto it = top.find(b.key[v]);
            if (it == top.end()) continue;
            double d = (it->second - b.x[v]).norm();
            r.worst = std::max(r.worst, d / scale);
            if (d > tol * scale) r.fail({"shared boundary point differs", {int(i), int(i + 1), int(v)}, d});
        }
    }
    r.runtime_s = clock.seconds();
    return r;
}

FlatnessReport check_flatness(const fold::StackedFoldedState& flat, const fold::StackedFoldedState& near, double tol)
{
    Timer clock;
    FlatnessReport out;
    out.report = start("flatness");
    for (size_t i = 0; i < flat.slabs.size(); ++i) {
        const auto& s = flat.slabs[i];
        if (s.residual) {
            out.residual_regions++;
            out.residual_height_total += s.h0;
            out.residual_height_bound = std::max(out.residual_height_bound, s.h0);
            continue;
        }
        double lo = 1e300, hi = -1e300;
        for (const auto& x : s.sheet.x) {
            lo = std::min(lo, x.z());
            hi = std::max(hi, x.z());
        }
        if (s.sheet.x.empty()) continue;
        double spread = (hi - lo) / s.sheet.length_scale;
        out.z_spread = std::max(out.z_spread, spread);
        if (spread > tol) out.report.fail({"prismoidal slab is not flat", {int(i)}, spread});
        if (i < near.slabs.size()) {
            Report l = check_layer_order(s.sheet, near.slabs[i].sheet);
            if (!l.pass) out.report.fail({"slab " + std::to_string(i) + ": " + l.witnesses.front().what, {int(i)}, 1});
        }
    }
    out.report.worst = std::max(out.report.worst, out.z_spread);
    out.report.runtime_s = clock.seconds();
    return out;
}

AreaResult moving_crease_area(const gadget::GadgetPattern& g)
{
    AreaResult a;
    if (g.params.no_gadget) return a;
    a.area = gadget::moving_region_area(g);
    a.bound = gadget::gadget_reach(g).area_bound;
    return a;
}

} // namespace ff::verify
