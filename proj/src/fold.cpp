#include "ff/fold.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cstdint>
#include <map>

namespace ff::fold {

using gadget::GadgetPattern;
using gadget::Side;

long long boundary_key(bool top, int vertex, int edge)
{
    long long id = vertex >= 0 ? 2LL * vertex : 2LL * edge + 1;
    return (id << 1) | (top ? 1 : 0);
}

// ---- panels ---------------------------------------------------------------

void Panel::finish()
{
    Vec3 d = b1 - b0;
    d.z() = 0;
    if (d.norm() == 0) {
        d = t1 - t0;
        d.z() = 0;
    }
    u = d.normalized();
    m = Vec3(-u.y(), u.x(), 0);
    h = t0.z() - b0.z();
    ell = (t0 - b0).dot(m);
    w = std::hypot(ell, h);
    a = 0.5 * (w + side * ell);
}

Vec2 Panel::local(const Vec3& x) const
{
    Vec3 e = (ell * m + h * Vec3::UnitZ()) / w;
    return {(x - b0).dot(u), (x - b0).dot(e)};
}

namespace {

// Elbow of the cross-section (m, z): |C| = a, |T - C| = b, on the side given by `side`.
Vec2 elbow(const Panel& p, double H)
{
    const double a = p.a, b = p.w - p.a;
    if (H == p.h) return (a / p.w) * Vec2(p.ell, p.h);
    if (H == 0) return Vec2(p.side * a, 0);
    Vec2 T(p.ell, H);
    double D = T.norm();
    Vec2 th = T / D, tp(-th.y(), th.x());
    double x = (a * a - b * b + D * D) / (2 * D);
    double y = -p.side * std::sqrt(std::max(0.0, a * a - x * x));
    return x * th + y * tp;
}

} // namespace

Vec3 Panel::fold(const Vec3& x, double H) const
{
    if (H == h) return x;
    Vec2 l = local(x);
    Vec2 C = elbow(*this, H);
    Vec2 T(ell, H);
    Vec2 c;
    if (l.y() <= a && a > 0) c = (l.y() / a) * C;
    else {
        double b = w - a;
        c = C + ((l.y() - a) / b) * (T - C);
    }
    return b0 + l.x() * u + c.x() * m + c.y() * Vec3::UnitZ();
}

// ---- models ---------------------------------------------------------------

namespace {

Vec3 world_point(const GadgetPattern& g, Side side, const Vec2& dev)
{
    return g.params.frame.apply(gadget::dev_to_3d(g.params, side, dev));
}

Vec2 p_alpha_at(const GadgetPattern& g, double s)
{
    if (s >= 1) return g.p_alpha;
    if (s <= 0) return g.c_alpha;
    return g.c_alpha + s * (g.p_alpha - g.c_alpha);
}

int alpha_panel(const Hinge& hg) { return hg.alpha_is_left ? hg.left : hg.right; }
int beta_panel(const Hinge& hg) { return hg.alpha_is_left ? hg.right : hg.left; }

// In-wedge normal of the alpha side (m_A) and beta side (m_B) in world coordinates.
Vec3 wedge_normal(const GadgetPattern& g, Side side)
{
    auto c = gadget::canonical_corner(g.params.theta, g.params.alpha, g.params.beta);
    return g.params.frame.R * (side == Side::Alpha ? c.m_alpha : c.m_beta);
}

int sgn(double x) { return x > 0 ? 1 : -1; }

} // namespace

Model corner_model(const GadgetPattern& g)
{
    const auto& p = g.params;
    auto c = gadget::canonical_corner(p.theta, p.alpha, p.beta);
    const double E = g.extent;
    auto W = [&](const Vec3& v) { return p.frame.apply(v); };
    Vec3 o = W(Vec3::Zero()), q = W(c.d);
    Vec3 ea = W(E * c.u_alpha) - o, eb = W(E * c.u_beta) - o;

    Panel A, B;
    // world bottom first
    Vec3 lo = p.primary_at_top ? q : o, hi = p.primary_at_top ? o : q;
    A.b0 = lo + ea;
    A.b1 = lo;
    A.t0 = hi + ea;
    A.t1 = hi;
    B.b0 = lo;
    B.b1 = lo + eb;
    B.t0 = hi;
    B.t1 = hi + eb;
    double z0 = lo.z();
    for (Panel* P : {&A, &B})
        for (Vec3* v : {&P->b0, &P->b1, &P->t0, &P->t1}) v->z() -= z0;

    int s_beta = g.kind == gadget::Kind::OutOut ? -1 : 1;
    A.finish();
    A.side = -1 * sgn(A.m.dot(wedge_normal(g, Side::Alpha)));
    B.finish();
    B.side = s_beta * sgn(B.m.dot(wedge_normal(g, Side::Beta)));
    A.finish();
    B.finish();

    Model m;
    m.h = A.h;
    m.panels = {A, B};
    Hinge hg;
    hg.left = 0;
    hg.right = 1;
    hg.g = g;
    hg.g->params.frame.origin.z() -= z0;
    hg.alpha_is_left = true;
    m.hinges = {hg};
    m.panel_hinges = {{-1, 0}, {0, -1}};
    m.length_scale = p.edge_length;
    return m;
}

namespace {

long long seg_key(const slicer::EdgeSeg& e, double z, bool top)
{
    if (e.lo.z() == z) return boundary_key(top, e.v_lo, -1);
    if (e.hi.z() == z) return boundary_key(top, e.v_hi, -1);
    return boundary_key(top, -1, e.id);
}

Panel piece_panel(const slicer::Slab& s, const slicer::Piece& pc, int side)
{
    Panel P;
    Vec3 dz(0, 0, s.z_bottom);
    P.b0 = pc.b0 - dz;
    P.b1 = pc.b1 - dz;
    P.t0 = pc.t0 - dz;
    P.t1 = pc.t1 - dz;
    P.side = side;
    P.face = pc.face;
    P.key_b0 = seg_key(pc.e0, s.z_bottom, false);
    P.key_b1 = seg_key(pc.e1, s.z_bottom, false);
    P.key_t0 = seg_key(pc.e0, s.z_top, true);
    P.key_t1 = seg_key(pc.e1, s.z_top, true);
    P.finish();
    return P;
}

} // namespace

Model slab_model(const slicer::Slab& s, const std::vector<gadget::WallLabeling>& labels)
{
    if (labels.size() != s.walls.size()) throw Error("fold", "one labeling per wall expected");
    Model m;
    m.h = s.height();
    m.length_scale = 0;
    for (size_t wi = 0; wi < s.walls.size(); ++wi) {
        const auto& w = s.walls[wi];
        const auto& lab = labels[wi];
        const int n = static_cast<int>(w.pieces.size());
        const int base = static_cast<int>(m.panels.size());
        for (int pos = 0; pos < n; ++pos) {
            m.panels.push_back(piece_panel(s, s.pieces[w.pieces[pos]], lab.sides[pos]));
            m.panel_hinges.push_back({-1, -1});
        }
        for (int k = 0; k < static_cast<int>(lab.joints.size()); ++k) {
            Hinge hg;
            hg.left = base + k;
            hg.right = base + (k + 1) % n;
            hg.g = gadget::joint_gadget(s, w, lab, k);
            if (hg.g) {
                hg.g->params.frame.origin.z() -= s.z_bottom;
                hg.alpha_is_left = lab.alpha_position[k] == k;
                m.length_scale = std::max(m.length_scale, hg.g->params.edge_length);
            }
            int id = static_cast<int>(m.hinges.size());
            m.hinges.push_back(std::move(hg));
            m.panel_hinges[base + k][1] = id;
            m.panel_hinges[base + (k + 1) % n][0] = id;
        }
    }
    if (m.length_scale == 0) m.length_scale = std::max(m.h, 1e-300);
    return m;
}

double hole_residual(const Model& m, int k, double s, double H)
{
    const Hinge& hg = m.hinges[k];
    const GadgetPattern& g = *hg.g;
    Vec2 pa = p_alpha_at(g, s);
    Vec3 A = m.panels[alpha_panel(hg)].fold(world_point(g, Side::Alpha, pa), H);
    Vec3 B = m.panels[beta_panel(hg)].fold(world_point(g, Side::Beta, g.p_beta), H);
    return (A - B).norm() - g.params.edge_length * (pa - g.p_beta).norm();
}

namespace {

template <class F>
double bracket_root(F f, double lo, double hi, double flo, double fhi, int* iters = nullptr)
{
    std::uintmax_t it = 200;
    auto tol = [](double a, double b) { return std::abs(b - a) <= 4e-16 * std::max(1.0, std::abs(a)); };
    auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, it);
    if (iters) *iters = static_cast<int>(it);
    return 0.5 * (r.first + r.second);
}

} // namespace

double crease_position(const Model& m, int k, double H, const Tolerances&)
{
    if (H >= m.h) return 0;
    if (H <= 0) return 1;
    auto f = [&](double s) { return hole_residual(m, k, s, H); };
    double f0 = f(0), f1 = f(1);
    if (f0 <= 0) return 0;
    if (f1 >= 0) return 1;
    return bracket_root(f, 0.0, 1.0, f0, f1);
}

// ---- realization ----------------------------------------------------------

namespace {

struct Realized {
    Sheet sheet;
    std::vector<std::array<int, 6>> panel_ids;   // b0, b1, t0, t1, crease0, crease1
    std::vector<std::array<int, 4>> hinge_ids;   // o, q, p_alpha, p_beta
};

// Rigid map from pattern coordinates (times L) to the alpha panel's local frame.
struct DevMap {
    Vec2 origin, ey, ex;
    Vec2 operator()(const Vec2& v) const { return origin + v.x() * ex + v.y() * ey; }
};

DevMap pattern_to_panel(const GadgetPattern& g, const Panel& P)
{
    const double L = g.params.edge_length;
    Vec3 o = world_point(g, Side::Alpha, g.o), q = world_point(g, Side::Alpha, g.q);
    Vec2 lo = P.local(o), lq = P.local(q);
    DevMap d;
    d.origin = lo;
    d.ey = (lq - lo) / 1.0;
    d.ey /= (lq - lo).norm();
    d.ey *= L;
    d.ex = Vec2(d.ey.y(), -d.ey.x());
    // pick the handedness that lands a known alpha point where the panel sees it
    Vec2 probe = gadget::dev_dir(g.params, Side::Alpha);
    Vec2 want = P.local(world_point(g, Side::Alpha, probe));
    if ((d(probe) - want).norm() > (d.origin + probe.x() * -d.ex + probe.y() * d.ey - want).norm()) d.ex = -d.ex;
    return d;
}

Realized realize_impl(const Model& m, double H, const std::vector<double>& s)
{
    Realized R;
    Sheet& S = R.sheet;
    S.length_scale = m.length_scale;
    std::map<std::pair<int, int>, int> ids;
    auto vid = [&](int owner, int slot, const Vec3& x, long long key) {
        auto [it, fresh] = ids.try_emplace({owner, slot}, static_cast<int>(S.x.size()));
        if (fresh) {
            S.x.push_back(x);
            S.key.push_back(key);
        }
        return it->second;
    };
    const double drop = m.h - H;
    auto top = [&](const Vec3& x) { return drop == 0 ? x : Vec3(x.x(), x.y(), x.z() - drop); };

    struct Unfolded {
        int id;
        Vec3 x;
    };
    R.hinge_ids.assign(m.hinges.size(), {-1, -1, -1, -1});
    R.panel_ids.assign(m.panels.size(), {-1, -1, -1, -1, -1, -1});
    // unfolded positions of every sheet vertex; folded ones go to S.x
    std::vector<Vec3> flat_pos;

    auto tri = [&](int facet, const Panel* P, std::array<int, 3> v, std::array<Vec2, 3> dev) {
        double area = cross2(dev[1] - dev[0], dev[2] - dev[0]);
        double scale = std::max((dev[1] - dev[0]).squaredNorm(), (dev[2] - dev[0]).squaredNorm());
        if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2]) return;
        if (std::abs(area) <= 1e-13 * scale) return;
        (void)P;
        S.tris.push_back({v, dev, facet});
    };
    auto facet = [&](int face, const std::string& role) {
        S.facet_face.push_back(face);
        S.facet_role.push_back(role);
        return static_cast<int>(S.facet_face.size()) - 1;
    };

    std::vector<Vec3> pa_unf(m.hinges.size()), pb_unf(m.hinges.size());
    std::vector<Vec2> pa_dev(m.hinges.size());
    for (size_t k = 0; k < m.hinges.size(); ++k) {
        const Hinge& hg = m.hinges[k];
        if (!hg.g) continue;
        double sk = k < s.size() ? s[k] : 0.0;
        pa_dev[k] = p_alpha_at(*hg.g, sk);
        pa_unf[k] = world_point(*hg.g, Side::Alpha, pa_dev[k]);
        pb_unf[k] = world_point(*hg.g, Side::Beta, hg.g->p_beta);
    }

    // bottom plane first so keyed bottom points lead the vertex list
    for (size_t i = 0; i < m.panels.size(); ++i) {
        const Panel& P = m.panels[i];
        auto& pid = R.panel_ids[i];
        for (int e = 0; e < 2; ++e) {
            int hj = m.panel_hinges[i][e];
            const Vec3& b = e ? P.b1 : P.b0;
            long long kb = e ? P.key_b1 : P.key_b0;
            pid[e] = hj >= 0 ? vid(hj, 0, b, kb) : vid(-1 - static_cast<int>(i), 3 * e, b, kb);
        }
    }
    for (size_t i = 0; i < m.panels.size(); ++i) {
        const Panel& P = m.panels[i];
        auto& pid = R.panel_ids[i];
        for (int e = 0; e < 2; ++e) {
            int hj = m.panel_hinges[i][e];
            const Vec3& t = e ? P.t1 : P.t0;
            long long kt = e ? P.key_t1 : P.key_t0;
            pid[2 + e] = hj >= 0 ? vid(hj, 1, top(t), kt) : vid(-1 - static_cast<int>(i), 3 * e + 1, top(t), kt);
        }
    }
    std::vector<std::array<Vec3, 2>> crease_unf(m.panels.size());
    for (size_t i = 0; i < m.panels.size(); ++i) {
        const Panel& P = m.panels[i];
        auto& pid = R.panel_ids[i];
        for (int e = 0; e < 2; ++e) {
            int hj = m.panel_hinges[i][e];
            const Vec3& b = e ? P.b1 : P.b0;
            const Vec3& t = e ? P.t1 : P.t0;
            Vec3 c = b + (P.a / P.w) * (t - b);
            int id;
            if (hj >= 0 && m.hinges[hj].g) {
                const Hinge& hg = m.hinges[hj];
                bool is_alpha = alpha_panel(hg) == static_cast<int>(i);
                c = is_alpha ? pa_unf[hj] : pb_unf[hj];
                id = vid(hj, is_alpha ? 3 : 4, P.fold(c, H), -1);
            } else if (hj >= 0) {
                id = vid(hj, 2, P.fold(c, H), -1);
            } else {
                id = vid(-1 - static_cast<int>(i), 3 * e + 2, P.fold(c, H), -1);
            }
            pid[4 + e] = id;
            crease_unf[i][e] = c;
        }
    }

    for (size_t i = 0; i < m.panels.size(); ++i) {
        const Panel& P = m.panels[i];
        const auto& pid = R.panel_ids[i];
        std::string tag = "panel" + std::to_string(i);
        for (size_t k = 0; k < m.hinges.size(); ++k) {
            const Hinge& hg = m.hinges[k];
            if (!hg.g) continue;
            if (alpha_panel(hg) == static_cast<int>(i)) tag = "alpha" + std::to_string(i);
            if (beta_panel(hg) == static_cast<int>(i) && tag.rfind("alpha", 0) != 0) tag = "beta" + std::to_string(i);
        }
        Vec2 b0 = P.local(P.b0), b1 = P.local(P.b1), t0 = P.local(P.t0), t1 = P.local(P.t1);
        Vec2 c0 = P.local(crease_unf[i][0]), c1 = P.local(crease_unf[i][1]);
        int fb = facet(P.face, tag + "_bottom");
        tri(fb, &P, {pid[0], pid[1], pid[5]}, {b0, b1, c1});
        tri(fb, &P, {pid[0], pid[5], pid[4]}, {b0, c1, c0});
        int ft = facet(P.face, tag + "_top");
        tri(ft, &P, {pid[4], pid[5], pid[3]}, {c0, c1, t1});
        tri(ft, &P, {pid[4], pid[3], pid[2]}, {c0, t1, t0});
    }

    for (size_t k = 0; k < m.hinges.size(); ++k) {
        const Hinge& hg = m.hinges[k];
        if (!hg.g) continue;
        const GadgetPattern& g = *hg.g;
        const Panel& PA = m.panels[alpha_panel(hg)];
        bool top_primary = g.params.primary_at_top;
        int bottom_id = vid(static_cast<int>(k), 0, Vec3::Zero(), -1);
        int top_id = vid(static_cast<int>(k), 1, Vec3::Zero(), -1);
        int o = top_primary ? top_id : bottom_id, q = top_primary ? bottom_id : top_id;
        int pa = vid(static_cast<int>(k), 3, Vec3::Zero(), -1), pb = vid(static_cast<int>(k), 4, Vec3::Zero(), -1);
        R.hinge_ids[k] = {o, q, pa, pb};
        DevMap d = pattern_to_panel(g, PA);
        Vec2 dO = d(g.o), dQ = d(g.q), dA = d(pa_dev[k]), dB = d(g.p_beta);
        int f1 = facet(-1, "gadget" + std::to_string(k) + "_t1");
        tri(f1, nullptr, {o, pa, pb}, {dO, dA, dB});
        int f2 = facet(-1, "gadget" + std::to_string(k) + "_t2");
        tri(f2, nullptr, {q, pa, pb}, {dQ, dA, dB});
    }
    return R;
}

} // namespace

Sheet realize(const Model& m, double H, const std::vector<double>& s) { return realize_impl(m, H, s).sheet; }

AlphaSolve solve_p_alpha_prime(const GadgetPattern& g, double t, const Tolerances& tol)
{
    if (!(t >= 0 && t <= 1)) throw Error("fold", "t must lie in [0, 1]");
    AlphaSolve out;
    Model m = corner_model(g);
    out.p = p_alpha_at(g, t);
    if (t == 0) {
        out.H = m.h;
        return out;
    }
    if (t == 1) {
        out.H = 0;
        out.residual = hole_residual(m, 0, 1, 0);
        return out;
    }
    auto f = [&](double H) { return hole_residual(m, 0, t, H); };
    double hi = g.merged_beta ? m.h * (1 - 1e-9) : m.h;
    if (g.merged_beta && crease_position(m, 0, hi, tol) >= t) {
        out.H = m.h;
    } else {
        double flo = f(0), fhi = f(hi);
        if (flo <= 0) out.H = 0;
        else if (fhi >= 0) out.H = hi;
        else out.H = bracket_root(f, 0.0, hi, flo, fhi, &out.iterations);
    }
    out.residual = f(out.H);
    if (std::abs(out.residual) > 1e3 * tol.iso)
        throw Error("fold", "hole diagonal did not close: residual " + std::to_string(out.residual));
    return out;
}

FoldedGadget fold_gadget(const GadgetPattern& g, double t, const Tolerances& tol)
{
    AlphaSolve a = solve_p_alpha_prime(g, t, tol);
    Model m = corner_model(g);
    Realized R = realize_impl(m, a.H, {t});
    FoldedGadget f;
    f.t = t;
    f.H = a.H;
    f.h = m.h;
    f.p_alpha_prime = a.p;
    f.residual = a.residual;
    f.sheet = std::move(R.sheet);
    const auto& A = R.panel_ids[0];
    const auto& B = R.panel_ids[1];
    const auto& hg = R.hinge_ids[0];
    f.points = {{"o", hg[0]},          {"q", hg[1]},           {"p_alpha", hg[2]},   {"p_beta", hg[3]},
                {"alpha_bottom", A[0]}, {"alpha_crease", A[4]}, {"alpha_top", A[2]},  {"beta_bottom", B[1]},
                {"beta_crease", B[5]},  {"beta_top", B[3]}};
    if (g.params.primary_at_top) {
        f.points["alpha_bottom"] = A[2];
        f.points["alpha_top"] = A[0];
        f.points["beta_bottom"] = B[3];
        f.points["beta_top"] = B[1];
    }
    const auto& x = f.sheet.x;
    Vec3 o = x[f.points["o"]];
    f.base_angle = angle_between(Vec3(x[f.points["alpha_bottom"]] - o), Vec3(x[f.points["beta_bottom"]] - o));
    return f;
}

FoldedSlab fold_slab(const slicer::Slab& s, const std::vector<gadget::WallLabeling>& labels, double t,
                     const Tolerances& tol)
{
    FoldedSlab out;
    out.h0 = s.height();
    out.residual = s.residual;
    if (s.residual) {
        // carried rigidly: the unfolded wall, triangulated
        out.H = out.h0;
        Sheet& S = out.sheet;
        std::map<long long, int> ids;
        auto vid = [&](const Vec3& x, long long key) {
            auto [it, fresh] = ids.try_emplace(key, static_cast<int>(S.x.size()));
            if (fresh) {
                S.x.push_back(x);
                S.key.push_back(key);
            }
            return it->second;
        };
        Vec3 dz(0, 0, s.z_bottom);
        for (const auto& pc : s.pieces) {
            Panel P = piece_panel(s, pc, 1);
            int b0 = vid(P.b0, P.key_b0), b1 = vid(P.b1, P.key_b1);
            (void)dz;
            int t0 = vid(P.t0, P.key_t0), t1 = vid(P.t1, P.key_t1);
            S.facet_face.push_back(pc.face);
            S.facet_role.push_back("residual");
            int f = static_cast<int>(S.facet_face.size()) - 1;
            std::array<Vec2, 4> l = {P.local(P.b0), P.local(P.b1), P.local(P.t1), P.local(P.t0)};
            std::array<int, 4> v = {b0, b1, t1, t0};
            for (auto [i, j, k] : {std::array<int, 3>{0, 1, 2}, {0, 2, 3}}) {
                if (v[i] == v[j] || v[j] == v[k] || v[i] == v[k]) continue;
                S.tris.push_back({{v[i], v[j], v[k]}, {l[i], l[j], l[k]}, f});
            }
        }
        S.length_scale = std::max(out.h0, 1e-300);
        return out;
    }
    out.H = slab_height_at(out.h0, t);
    Model m = slab_model(s, labels);
    std::vector<double> pos(m.hinges.size(), 0.0);
    for (size_t k = 0; k < m.hinges.size(); ++k) {
        if (!m.hinges[k].g) continue;
        pos[k] = crease_position(m, static_cast<int>(k), out.H, tol);
        out.worst_residual = std::max(out.worst_residual, std::abs(hole_residual(m, static_cast<int>(k), pos[k], out.H)));
    }
    out.sheet = realize(m, out.H, pos);
    return out;
}

StackedFoldedState compose_global(std::vector<FoldedSlab> slabs, double t, double z_base)
{
    StackedFoldedState st;
    st.t = t;
    double z = z_base;
    for (auto& s : slabs) {
        st.z.push_back({z, z + s.H});
        for (auto& x : s.sheet.x) x.z() += z;
        st.order.push_back(s.index);
        z += s.H;
    }
    st.slabs = std::move(slabs);
    return st;
}

std::vector<CreaseAngle> crease_angles(const Sheet& s)
{
    std::map<std::pair<int, int>, std::vector<int>> by_edge;
    for (int i = 0; i < static_cast<int>(s.tris.size()); ++i)
        for (int k = 0; k < 3; ++k) {
            int a = s.tris[i].v[k], b = s.tris[i].v[(k + 1) % 3];
            by_edge[{std::min(a, b), std::max(a, b)}].push_back(i);
        }
    auto normal = [&](int i) {
        const auto& t = s.tris[i];
        double o = cross2(t.dev[1] - t.dev[0], t.dev[2] - t.dev[0]) > 0 ? 1 : -1;
        Vec3 n = (s.x[t.v[1]] - s.x[t.v[0]]).cross(s.x[t.v[2]] - s.x[t.v[0]]);
        return Vec3(o * n.normalized());
    };
    std::vector<CreaseAngle> out;
    for (const auto& [e, tr] : by_edge) {
        if (tr.size() != 2) continue;
        if (s.tris[tr[0]].facet == s.tris[tr[1]].facet) continue;
        const auto& t0 = s.tris[tr[0]];
        // edge direction counter-clockwise in t0's development
        int a = e.first, b = e.second;
        for (int k = 0; k < 3; ++k)
            if (t0.v[k] == e.second && t0.v[(k + 1) % 3] == e.first) std::swap(a, b);
        if (cross2(t0.dev[1] - t0.dev[0], t0.dev[2] - t0.dev[0]) < 0) std::swap(a, b);
        Vec3 ax = (s.x[b] - s.x[a]).normalized();
        Vec3 n0 = normal(tr[0]), n1 = normal(tr[1]);
        CreaseAngle c;
        c.a = e.first;
        c.b = e.second;
        c.tri0 = tr[0];
        c.tri1 = tr[1];
        c.angle = std::atan2(n0.cross(n1).dot(ax), n0.dot(n1));
        out.push_back(c);
    }
    return out;
}

void derive_assignments(GadgetPattern& g, const Tolerances& tol)
{
    FoldedGadget flat = fold_gadget(g, 1, tol), near = fold_gadget(g, 1 - 1e-6, tol);
    auto angles = [](const FoldedGadget& f) {
        std::map<std::pair<int, int>, double> out;
        for (const auto& c : crease_angles(f.sheet)) out[{c.a, c.b}] = c.angle;
        return out;
    };
    auto fa = angles(flat), na = angles(near);
    for (auto& e : g.edges) {
        if (e.role == 'B' || e.assignment == 'F') continue;
        int a = flat.points.at(g.labels[e.a]), b = flat.points.at(g.labels[e.b]);
        std::pair<int, int> key{std::min(a, b), std::max(a, b)};
        auto it = fa.find(key);
        if (it == fa.end() || std::abs(it->second) < kPi / 2) {
            e.assignment = 'F';
            continue;
        }
        double sgn_near = na.count(key) ? na[key] : it->second;
        e.assignment = sgn_near > 0 ? 'V' : 'M';
    }
}

} // namespace ff::fold
