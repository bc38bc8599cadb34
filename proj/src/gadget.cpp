#include "ff/gadget.hpp"

#include "poly2d.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>

namespace ff::gadget {

const char* to_string(Kind k) { return k == Kind::OutOut ? "OutOut" : "InOut"; }

Kind kind_from_string(const std::string& s)
{
    std::string t;
    for (char c : s)
        if (c != '-' && c != '_') t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "outout") return Kind::OutOut;
    if (t == "inout") return Kind::InOut;
    throw Error("gadget", "unknown gadget kind '" + s + "'");
}

std::string admissibility_violation(double theta, double alpha, double beta, double margin)
{
    if (!std::isfinite(theta) || !std::isfinite(alpha) || !std::isfinite(beta)) return "non-finite angle";
    if (!(theta > margin)) return "theta must be positive";
    if (!(alpha > margin) || !(beta > margin)) return "alpha and beta must be positive";
    if (!(theta < alpha + beta - margin)) return "theta must be below alpha + beta";
    if (!(theta > std::abs(alpha - beta) + margin)) return "theta must exceed |alpha - beta|";
    // alpha + beta = pi is a vertical corner and stays admissible
    if (alpha + beta > kPi + 1e-12) return "alpha + beta must not exceed pi";
    return {};
}

SpanningEdgeParams canonical_params(double theta, double alpha, double beta)
{
    SpanningEdgeParams p;
    p.theta = theta;
    p.alpha = alpha;
    p.beta = beta;
    return p;
}

Corner canonical_corner(double theta, double alpha, double beta)
{
    Corner c;
    double st = std::sin(theta), ct = std::cos(theta);
    c.u_alpha = Vec3(1, 0, 0);
    c.u_beta = Vec3(ct, st, 0);
    double dy = (std::cos(beta) - std::cos(alpha) * ct) / st;
    double dz2 = 1 - std::cos(alpha) * std::cos(alpha) - dy * dy;
    c.d = Vec3(std::cos(alpha), dy, std::sqrt(std::max(dz2, 0.0)));
    c.h = c.d.z();
    c.m_alpha = Vec3(0, 1, 0);
    c.m_beta = Vec3(st, -ct, 0);
    c.lean_alpha = dy;
    c.lean_beta = (std::cos(alpha) - std::cos(beta) * ct) / st;
    return c;
}

namespace {

double angle_of(const SpanningEdgeParams& p, Side s) { return s == Side::Alpha ? p.alpha : p.beta; }

double lean_of(const SpanningEdgeParams& p, Side s)
{
    double st = std::sin(p.theta), ct = std::cos(p.theta);
    return s == Side::Alpha ? (std::cos(p.beta) - std::cos(p.alpha) * ct) / st
                            : (std::cos(p.alpha) - std::cos(p.beta) * ct) / st;
}

void require_admissible(const SpanningEdgeParams& p)
{
    std::string why = admissibility_violation(p.theta, p.alpha, p.beta);
    if (!why.empty()) throw Error("gadget", why);
}

} // namespace

FaceCrease face_crease(const SpanningEdgeParams& p, Side side, FoldDir dir)
{
    FaceCrease f;
    f.side = side;
    double ang = angle_of(p, side);
    f.w = std::sin(ang);
    double ell = lean_of(p, side);
    f.cos_phi = ell / f.w;
    double s = dir == FoldDir::TowardBottom ? -1 : 1;
    f.offset_fraction = 0.5 * (1 + s * f.cos_phi);
    f.excursion = 0.5 * (1 - f.cos_phi) * f.w;
    f.line_point = Vec2(0, f.offset_fraction);
    f.line_dir = dev_dir(p, side);
    return f;
}

Vec2 dev_dir(const SpanningEdgeParams& p, Side side)
{
    return side == Side::Alpha ? Vec2(-std::sin(p.alpha), std::cos(p.alpha)) : Vec2(std::sin(p.beta), std::cos(p.beta));
}

Vec2 dev_normal(const SpanningEdgeParams& p, Side side)
{
    return side == Side::Alpha ? Vec2(std::cos(p.alpha), std::sin(p.alpha)) : Vec2(-std::cos(p.beta), std::sin(p.beta));
}

Vec3 dev_to_3d(const SpanningEdgeParams& p, Side side, const Vec2& x)
{
    Corner c = canonical_corner(p.theta, p.alpha, p.beta);
    double ang = angle_of(p, side);
    Vec3 u = side == Side::Alpha ? c.u_alpha : c.u_beta;
    Vec3 e = (c.d - std::cos(ang) * u) / std::sin(ang);
    return x.dot(dev_dir(p, side)) * u + x.dot(dev_normal(p, side)) * e;
}

int GadgetPattern::vertex(const std::string& label) const
{
    auto it = std::find(labels.begin(), labels.end(), label);
    return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
}

namespace {

double signed_area(const std::vector<Vec2>& pts)
{
    double a = 0;
    for (size_t i = 0; i < pts.size(); ++i) a += cross2(pts[i], pts[(i + 1) % pts.size()]);
    return 0.5 * a;
}

std::vector<Vec2> ccw_ring(const poly::Polygon& p)
{
    auto r = poly::ring(p);
    if (signed_area(r) < 0) std::reverse(r.begin(), r.end());
    return r;
}

void fill_moving_region(GadgetPattern& g)
{
    poly::Polygon a = poly::make({g.o, g.q, g.p_alpha});
    poly::Polygon b = poly::make({g.p_beta, g.c_alpha, g.p_alpha});
    g.moving_region = ccw_ring(a);
    // a sliver left by rounding (collinear c_alpha, p_alpha, p_beta) makes the union come back empty
    if (poly::area(b) <= 1e-12 * poly::area(a)) return;
    double best = -1;
    for (const auto& part : poly::unite(a, b))
        if (poly::area(part) > best) {
            best = poly::area(part);
            g.moving_region = ccw_ring(part);
        }
}

// Everything that follows from o, q, c, p.
void finish(GadgetPattern& g)
{
    const auto& p = g.params;
    Vec2 ua = dev_dir(p, Side::Alpha), ub = dev_dir(p, Side::Beta);
    double la = (g.p_alpha - g.c_alpha).dot(ua), lb = (g.p_beta - g.c_beta).dot(ub);
    g.extent = std::max({1.0, 2 * la, 2 * lb});
    const double E = g.extent;

    g.vertices.assign(kPatternVertexCount, Vec2::Zero());
    g.vertices[kO] = g.o;
    g.vertices[kQ] = g.q;
    g.vertices[kPA] = g.p_alpha;
    g.vertices[kPB] = g.p_beta;
    g.vertices[kAB] = g.o + E * ua;
    g.vertices[kAC] = g.c_alpha + E * ua;
    g.vertices[kAT] = g.q + E * ua;
    g.vertices[kBB] = g.o + E * ub;
    g.vertices[kBC] = g.c_beta + E * ub;
    g.vertices[kBT] = g.q + E * ub;
    g.labels = {"o", "q", "p_alpha", "p_beta", "alpha_bottom", "alpha_crease", "alpha_top",
                "beta_bottom", "beta_crease", "beta_top"};

    g.edges.clear();
    auto edge = [&](int a, int b, char role, char asg = 'U') { g.edges.push_back({a, b, role, asg}); };
    for (auto [a, b] : {std::pair{kO, kAB}, {kAB, kAC}, {kAC, kAT}, {kAT, kQ}, {kO, kBB}, {kBB, kBC}, {kBC, kBT}, {kBT, kQ}})
        edge(a, b, 'B', 'B');
    edge(kAC, kPA, 'F');
    edge(kBC, kPB, 'F');
    edge(kO, kPA, 'V');
    edge(kO, kPB, 'V', g.kind == Kind::InOut ? 'F' : 'U');
    edge(kQ, kPA, 'G');
    edge(kQ, kPB, 'G', g.kind == Kind::InOut ? 'F' : 'U');
    edge(kPA, kPB, 'G');

    g.faces = {{kO, kAB, kAC, kPA}, {kPA, kAC, kAT, kQ}, {kO, kPA, kPB}, {kQ, kPA, kPB}, {kO, kPB, kBC, kBB}, {kPB, kQ, kBT, kBC}};
    for (auto& f : g.faces) {
        std::vector<Vec2> pts;
        for (int v : f) pts.push_back(g.vertices[v]);
        if (signed_area(pts) < 0) std::reverse(f.begin(), f.end());
    }

    g.o3 = Vec3::Zero();
    g.q3 = canonical_corner(p.theta, p.alpha, p.beta).d;
    g.c_alpha3 = dev_to_3d(p, Side::Alpha, g.c_alpha);
    g.c_beta3 = dev_to_3d(p, Side::Beta, g.c_beta);
    g.p_alpha3 = dev_to_3d(p, Side::Alpha, g.p_alpha);
    g.p_beta3 = dev_to_3d(p, Side::Beta, g.p_beta);
    fill_moving_region(g);
}

GadgetPattern base_pattern(const SpanningEdgeParams& p, Kind k, FoldDir beta_dir)
{
    GadgetPattern g;
    g.kind = k;
    g.params = p;
    g.crease_alpha = face_crease(p, Side::Alpha, FoldDir::TowardBottom);
    g.crease_beta = face_crease(p, Side::Beta, beta_dir);
    g.o = Vec2(0, 0);
    g.q = Vec2(0, 1);
    g.c_alpha = g.crease_alpha.line_point;
    g.c_beta = g.crease_beta.line_point;
    return g;
}

} // namespace

GadgetPattern build_out_out(const SpanningEdgeParams& p)
{
    require_admissible(p);
    GadgetPattern g = base_pattern(p, Kind::OutOut, FoldDir::TowardBottom);
    double gamma = (p.alpha + p.beta - p.theta) / 4;
    double ra = g.crease_alpha.offset_fraction * g.crease_alpha.w / std::sin(gamma);
    double rb = g.crease_beta.offset_fraction * g.crease_beta.w / std::sin(gamma);
    g.p_alpha = ra * Vec2(-std::sin(p.alpha - gamma), std::cos(p.alpha - gamma));
    g.p_beta = rb * Vec2(std::sin(p.beta - gamma), std::cos(p.beta - gamma));
    finish(g);
    return g;
}

GadgetPattern build_in_out(const SpanningEdgeParams& p)
{
    require_admissible(p);
    GadgetPattern g = base_pattern(p, Kind::InOut, FoldDir::TowardTop);
    double gamma = (p.alpha + p.beta - p.theta) / 2;
    double ra = g.crease_alpha.offset_fraction * g.crease_alpha.w / std::sin(gamma);
    g.p_alpha = ra * Vec2(-std::sin(p.alpha - gamma), std::cos(p.alpha - gamma));
    g.merged_beta = kPi - p.beta < p.theta;
    if (g.merged_beta) {
        g.p_beta = g.c_beta;
    } else {
        // top edge of alpha reflected in q-p_alpha meets the beta crease at p_beta
        Vec2 ua = dev_dir(p, Side::Alpha), nb = dev_normal(p, Side::Beta);
        Vec2 l = (g.p_alpha - g.q).normalized();
        Vec2 r = 2 * ua.dot(l) * l - ua;
        double ab = g.crease_beta.offset_fraction * g.crease_beta.w;
        double s = (ab - g.q.dot(nb)) / r.dot(nb);
        g.p_beta = g.q + s * r;
    }
    finish(g);
    return g;
}

GadgetPattern build(const SpanningEdgeParams& p, Kind k)
{
    if (p.no_gadget) {
        GadgetPattern g;
        g.kind = k;
        g.params = p;
        g.o = Vec2(0, 0);
        g.q = Vec2(0, 1);
        return g;
    }
    return k == Kind::OutOut ? build_out_out(p) : build_in_out(p);
}

GadgetPattern with_p_alpha(const GadgetPattern& g, const Vec2& pa)
{
    GadgetPattern h = g;
    h.p_alpha = pa;
    if (!h.vertices.empty()) h.vertices[kPA] = pa;
    h.p_alpha3 = dev_to_3d(h.params, Side::Alpha, pa);
    return h;
}

double reach_closed(Kind k, Side s, double theta, double alpha, double beta)
{
    double st = std::sin(theta);
    double a_out = (std::cos(alpha - theta) - std::cos(beta)) / (2 * st);
    if (k == Kind::OutOut) {
        double cot = 1 / std::tan((alpha + beta - theta) / 4);
        if (s == Side::Alpha) return a_out * cot;
        return (std::cos(beta - theta) - std::cos(alpha)) / (2 * st) * cot;
    }
    if (s == Side::Alpha) return a_out / std::tan((alpha + beta - theta) / 2);
    double merged = (std::cos(alpha) - std::cos(beta + theta)) / (2 * st) / std::tan(beta);
    double ray = std::cos(beta) + (std::cos(beta - theta) - std::cos(alpha)) / (2 * st) / std::tan(theta);
    return std::max(merged, ray);
}

double reach_sign_flipped(Kind k, Side s, double theta, double alpha, double beta)
{
    double csc = 1 / std::sin(theta);
    if (k == Kind::OutOut) {
        double cot = 1 / std::tan((alpha + beta - theta) / 4);
        if (s == Side::Alpha) return 0.5 * csc * cot * (std::cos(alpha + theta) - std::cos(beta));
        return 0.5 * csc * cot * (std::cos(beta + theta) - std::cos(alpha));
    }
    if (s == Side::Alpha)
        return 0.5 * csc / std::tan((alpha + beta - theta) / 2) * (std::cos(beta) - std::cos(alpha + theta));
    double first = (std::cos(beta + theta) - std::cos(alpha)) / std::tan(beta);
    double second = (std::cos(beta - theta) - std::cos(alpha)) / std::tan(theta) + 2 * std::cos(beta) * std::sin(theta);
    return 0.5 * csc * std::max(first, second);
}

ReachBound gadget_reach(const GadgetPattern& g)
{
    ReachBound r;
    const auto& p = g.params;
    const double L = p.edge_length;
    if (p.no_gadget) return r;
    double ra = g.p_alpha.dot(dev_dir(p, Side::Alpha)), rb = g.p_beta.dot(dev_dir(p, Side::Beta));
    r.alpha = L * ra;
    r.beta = L * rb;
    r.alpha_closed = L * reach_closed(g.kind, Side::Alpha, p.theta, p.alpha, p.beta);
    r.beta_closed = L * reach_closed(g.kind, Side::Beta, p.theta, p.alpha, p.beta);
    r.ext_alpha = L * g.crease_alpha.excursion;
    r.ext_beta = L * g.crease_beta.excursion;
    r.area_bound = L * L * (g.q - g.o).norm() * (ra + rb);
    r.radius = L * std::max({g.p_alpha.norm(), g.p_beta.norm(), g.q.norm(), g.c_alpha.norm(), g.c_beta.norm()});
    return r;
}

double moving_region_area(const GadgetPattern& g)
{
    if (g.moving_region.size() < 3) return 0;
    double L = g.params.edge_length;
    return L * L * std::abs(signed_area(g.moving_region));
}

// ---- walls ----------------------------------------------------------------

SpanningEdgeParams edge_params(const slicer::Slab& s, const slicer::Wall& w, int k, bool alpha_first)
{
    const int n = static_cast<int>(w.pieces.size());
    const int ia = w.pieces[k], ib = w.pieces[(k + 1) % n];
    const slicer::Piece& A = s.pieces[ia];
    const slicer::Piece& B = s.pieces[ib];
    Vec3 ua = -slicer::piece_frame(A).u, ub = slicer::piece_frame(B).u;   // away from the shared edge
    int pa = ia, pb = ib;
    if (!alpha_first) {
        std::swap(ua, ub);
        std::swap(pa, pb);
    }
    SpanningEdgeParams p;
    p.piece_alpha = pa;
    p.piece_beta = pb;
    Vec3 o = A.b1, q = A.t1;
    p.theta = angle_between(ua, ub);
    p.alpha = angle_between(ua, Vec3(q - o));
    p.beta = angle_between(ub, Vec3(q - o));
    if (p.alpha + p.beta > kPi + 1e-12) {
        p.primary_at_top = true;
        std::swap(o, q);
        p.alpha = angle_between(ua, Vec3(q - o));
        p.beta = angle_between(ub, Vec3(q - o));
    }
    p.no_gadget = p.theta >= p.alpha + p.beta - 1e-9;
    p.edge_length = (q - o).norm();

    Vec3 ma = ub - ub.dot(ua) * ua;
    if (ma.norm() < 1e-9) ma = Vec3::UnitZ().cross(ua);
    ma.normalize();
    Vec3 z = p.primary_at_top ? Vec3(-Vec3::UnitZ()) : Vec3(Vec3::UnitZ());
    p.frame.origin = o;
    p.frame.scale = p.edge_length;
    p.frame.R.col(0) = ua;
    p.frame.R.col(1) = ma;
    p.frame.R.col(2) = z;
    p.mirrored = p.frame.R.determinant() < 0;
    return p;
}

namespace {

int sgn(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

double turn_of(const slicer::Slab& s, const slicer::Wall& w, int k)
{
    const int n = static_cast<int>(w.pieces.size());
    Vec3 u0 = slicer::piece_frame(s.pieces[w.pieces[k]]).u;
    Vec3 u1 = slicer::piece_frame(s.pieces[w.pieces[(k + 1) % n]]).u;
    return u0.x() * u1.y() - u0.y() * u1.x();
}

} // namespace

WallLabeling assign_labels(const slicer::Slab& s, const slicer::Wall& w)
{
    WallLabeling lab;
    const int n = static_cast<int>(w.pieces.size());
    const int nj = w.cycle ? n : n - 1;
    std::vector<int> turn(nj, 0);
    std::vector<char> real(nj, 0);
    for (int k = 0; k < nj; ++k) {
        SpanningEdgeParams p = edge_params(s, w, k);
        real[k] = !p.no_gadget;
        turn[k] = sgn(turn_of(s, w, k));
        if (real[k] && turn[k] == 0) real[k] = 0;
    }
    lab.sides.assign(n, -1);

    auto first_real_from = [&](int start) {
        for (int i = 0; i < nj; ++i) {
            int k = (start + i) % nj;
            if (real[k]) return k;
        }
        return -1;
    };

    int outout = -1;
    if (w.cycle) {
        int count = static_cast<int>(std::count(real.begin(), real.end(), 1));
        if (count % 2 == 1) {
            // the OutOut goes where it is smallest, left turns first
            double best = std::numeric_limits<double>::infinity();
            bool best_left = false;
            for (int k = 0; k < nj; ++k) {
                if (!real[k]) continue;
                bool left = turn[k] > 0;
                double r = gadget_reach(build_out_out(edge_params(s, w, k))).radius;
                if ((left && !best_left) || (left == best_left && r < best)) {
                    best = r;
                    best_left = left;
                    outout = k;
                }
            }
        }
    }

    if (outout >= 0) {
        int side = -turn[outout];
        for (int i = 1; i <= n; ++i) {
            int pos = (outout + i) % n;
            lab.sides[pos] = side;
            int k = pos;   // joint after pos
            if (k != outout && real[k]) side = -side;
        }
    } else {
        int k0 = first_real_from(0);
        int side = k0 >= 0 ? -turn[k0] : -1;
        for (int pos = 0; pos < n; ++pos) {
            lab.sides[pos] = side;
            if (pos < nj && real[pos]) side = -side;
        }
    }

    lab.joints.assign(nj, Joint::None);
    lab.alpha_position.assign(nj, -1);
    for (int k = 0; k < nj; ++k) {
        if (!real[k]) continue;
        int a = k, b = (k + 1) % n;
        int sa = lab.sides[a], sb = lab.sides[b];
        if (sa != sb) {
            lab.joints[k] = Joint::InOut;
            lab.alpha_position[k] = sa * turn[k] < 0 ? a : b;
        } else if (sa == -turn[k]) {
            lab.joints[k] = Joint::OutOut;
            lab.alpha_position[k] = a;
        } else {
            throw Error("labeling", "In-In joint at wall position " + std::to_string(k));
        }
    }

    lab.face_labels.assign(n, 'O');
    for (int pos = 0; pos < n; ++pos) {
        int k = -1;
        if (pos < nj && real[pos]) k = pos;
        else {
            int before = w.cycle ? (pos - 1 + n) % n : pos - 1;
            if (before >= 0 && before < nj && real[before]) k = before;
        }
        if (k >= 0) lab.face_labels[pos] = lab.sides[pos] * turn[k] > 0 ? 'I' : 'O';
    }
    return lab;
}

std::optional<GadgetPattern> joint_gadget(const slicer::Slab& s, const slicer::Wall& w, const WallLabeling& lab, int k)
{
    if (k < 0 || k >= static_cast<int>(lab.joints.size())) return std::nullopt;
    Joint j = lab.joints[k];
    if (j != Joint::InOut && j != Joint::OutOut) return std::nullopt;
    bool alpha_first = lab.alpha_position[k] == k;
    SpanningEdgeParams p = edge_params(s, w, k, alpha_first);
    return build(p, j == Joint::OutOut ? Kind::OutOut : Kind::InOut);
}

} // namespace ff::gadget
