#include "doctest.h"
#include "helpers.hpp"

#include "ff/gadget.hpp"
#include "ff/verify.hpp"

#include <cmath>

using namespace ff;
using namespace ff::gadget;

namespace {

// Corner direction from spherical trigonometry, written out independently of the library.
Vec3 corner_d(double th, double a, double b)
{
    double dy = (std::cos(b) - std::cos(a) * std::cos(th)) / std::sin(th);
    return {std::cos(a), dy, std::sqrt(1 - std::cos(a) * std::cos(a) - dy * dy)};
}

// Dihedral between a face through x and d and the base plane, measured on the wedge side.
double face_tilt_cos(const Vec3& u, const Vec3& d, const Vec3& into)
{
    Vec3 e = (d - d.dot(u) * u).normalized();
    return e.dot(into);
}

int count(const GadgetPattern& g, char role)
{
    int n = 0;
    for (const auto& e : g.edges) n += e.role == role ? 1 : 0;
    return n;
}

} // namespace

TEST_CASE("admissibility names the violated constraint")
{
    CHECK(admissibility_violation(kPi / 2, kPi / 2, kPi / 2).empty());
    CHECK(admissibility_violation(0, 1, 1).find("theta") != std::string::npos);
    CHECK(!admissibility_violation(2.5, 1, 1).empty());      // theta >= alpha + beta
    CHECK(!admissibility_violation(0.2, 1.5, 1).empty());    // theta <= |alpha - beta|
    CHECK(!admissibility_violation(1.0, 2.0, 1.5).empty());  // alpha + beta > pi
    CHECK(admissibility_violation(kPi / 2, kPi / 2, kPi / 2, 1e-3).empty());
    CHECK_THROWS_AS(build_out_out(canonical_params(0.1, 2, 1.9)), Error);
    CHECK_THROWS_AS(build_in_out(canonical_params(3, 1, 1)), Error);
}

TEST_CASE("canonical corner matches spherical trigonometry")
{
    for (const auto& a : fft::sample_params(200, 11)) {
        Corner c = canonical_corner(a.theta, a.alpha, a.beta);
        Vec3 d = corner_d(a.theta, a.alpha, a.beta);
        CHECK((c.d - d).norm() < 1e-12);
        CHECK(angle_between(c.u_alpha, c.d) == doctest::Approx(a.alpha).epsilon(1e-12));
        CHECK(angle_between(c.u_beta, c.d) == doctest::Approx(a.beta).epsilon(1e-12));
        CHECK(angle_between(c.u_alpha, c.u_beta) == doctest::Approx(a.theta).epsilon(1e-12));
        CHECK(c.h > 0);
    }
}

TEST_CASE("orthogonal face crease")
{
    auto p = canonical_params(kPi / 2, kPi / 2, kPi / 2);
    for (auto side : {Side::Alpha, Side::Beta})
        for (auto dir : {FoldDir::TowardBottom, FoldDir::TowardTop}) {
            FaceCrease f = face_crease(p, side, dir);
            CHECK(f.w == doctest::Approx(1.0));
            CHECK(std::abs(f.cos_phi) < 1e-15);
            CHECK(f.offset_fraction == doctest::Approx(0.5));
            CHECK(f.excursion == doctest::Approx(0.5));
        }
}

TEST_CASE("flat limit of the face crease")
{
    double a = 0.7;
    // approach theta = 2 alpha from below
    auto p = canonical_params(2 * a - 1e-9, a, a);
    FaceCrease f = face_crease(p, Side::Alpha, FoldDir::TowardBottom);
    CHECK(f.cos_phi == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(f.cos_phi < 1);
}

TEST_CASE("face crease at theta = pi/2, alpha = beta = pi/3")
{
    double th = kPi / 2, a = kPi / 3;
    auto p = canonical_params(th, a, a);
    FaceCrease f = face_crease(p, Side::Alpha, FoldDir::TowardBottom);
    CHECK(f.cos_phi == doctest::Approx(1 / std::sin(a) * (std::cos(a) * 1 - 0)).epsilon(1e-12));
    CHECK(f.cos_phi == doctest::Approx(0.5774).epsilon(1e-4));
    // oracle: tilt of face alpha measured on the 3D corner
    Vec3 d = corner_d(th, a, a);
    CHECK(face_tilt_cos(Vec3::UnitX(), d, Vec3::UnitY()) == doctest::Approx(f.cos_phi).epsilon(1e-12));
    CHECK(f.w == doctest::Approx(std::sin(a)));
    CHECK(f.offset_fraction == doctest::Approx((1 - f.cos_phi) / 2));
    FaceCrease top = face_crease(p, Side::Alpha, FoldDir::TowardTop);
    CHECK(top.offset_fraction == doctest::Approx((1 + f.cos_phi) / 2));
    CHECK(f.offset_fraction + top.offset_fraction == doctest::Approx(1.0));
}

TEST_CASE("face crease tilt over random corners")
{
    for (const auto& a : fft::sample_params(300, 5)) {
        auto p = canonical_params(a.theta, a.alpha, a.beta);
        Vec3 d = corner_d(a.theta, a.alpha, a.beta);
        Vec3 ub(std::cos(a.theta), std::sin(a.theta), 0), mb(std::sin(a.theta), -std::cos(a.theta), 0);
        CHECK(face_crease(p, Side::Alpha, FoldDir::TowardBottom).cos_phi ==
              doctest::Approx(face_tilt_cos(Vec3::UnitX(), d, Vec3::UnitY())).epsilon(1e-10));
        CHECK(face_crease(p, Side::Beta, FoldDir::TowardBottom).cos_phi ==
              doctest::Approx(face_tilt_cos(ub, d, mb)).epsilon(1e-10));
    }
}

TEST_CASE("developed frame maps back onto the corner")
{
    for (const auto& a : fft::sample_params(100, 8)) {
        auto p = canonical_params(a.theta, a.alpha, a.beta);
        Corner c = canonical_corner(a.theta, a.alpha, a.beta);
        CHECK((dev_to_3d(p, Side::Alpha, {0, 1}) - c.d).norm() < 1e-12);
        CHECK((dev_to_3d(p, Side::Beta, {0, 1}) - c.d).norm() < 1e-12);
        CHECK((dev_to_3d(p, Side::Alpha, dev_dir(p, Side::Alpha)) - c.u_alpha).norm() < 1e-12);
        CHECK((dev_to_3d(p, Side::Beta, dev_dir(p, Side::Beta)) - c.u_beta).norm() < 1e-12);
        CHECK(dev_dir(p, Side::Alpha).x() < 0);
        CHECK(dev_dir(p, Side::Beta).x() > 0);
    }
}

TEST_CASE("OutOut at orthogonal parameters")
{
    GadgetPattern g = build_out_out(canonical_params(kPi / 2, kPi / 2, kPi / 2));
    Vec2 ua = dev_dir(g.params, Side::Alpha);
    double gamma = angle_between(Vec2(g.p_alpha - g.o), ua);
    CHECK(gamma == doctest::Approx(kPi / 8).epsilon(1e-12));
    CHECK(angle_between(Vec2(g.p_beta - g.o), dev_dir(g.params, Side::Beta)) == doctest::Approx(kPi / 8));
    double reach = (g.p_alpha - g.o).dot(ua);
    CHECK(std::abs(reach) == doctest::Approx(0.5 / std::tan(kPi / 8) * std::abs(std::cos(kPi) - std::cos(kPi / 2))));
    CHECK(std::abs(reach) == doctest::Approx(1.2071).epsilon(1e-4));
    CHECK(count(g, 'F') == 2);
    CHECK(count(g, 'V') == 2);
    CHECK(count(g, 'G') == 3);
    // the base angle of the creases at o
    double between = angle_between(Vec2(g.p_alpha - g.o), Vec2(g.p_beta - g.o));
    CHECK(between == doctest::Approx((kPi / 2 + kPi / 2 + kPi / 2) / 2));
    // c_alpha, p_alpha, p_beta are collinear here; the region is the triangle o q p_alpha
    CHECK(moving_region_area(g) == doctest::Approx(0.5 * std::abs(g.p_alpha.x())).epsilon(1e-12));
}

TEST_CASE("InOut at orthogonal parameters")
{
    GadgetPattern g = build_in_out(canonical_params(kPi / 2, kPi / 2, kPi / 2));
    ReachBound r = gadget_reach(g);
    CHECK(r.alpha == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(r.beta) < 1e-12);
    CHECK(r.alpha_closed == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(r.beta_closed) < 1e-12);
    CHECK(angle_between(Vec2(g.p_alpha - g.o), dev_dir(g.params, Side::Alpha)) == doctest::Approx(kPi / 4));
    CHECK(!g.merged_beta);
    CHECK(r.ext_alpha == doctest::Approx(0.5));
}

TEST_CASE("InOut merged branch when pi - beta < theta")
{
    // the literal example (beta = 3pi/4, theta = pi/2) has no admissible alpha; step inside
    double th = kPi / 2, b = 3 * kPi / 4 - 0.05, a = kPi / 4 + 0.03;
    REQUIRE(admissibility_violation(th, a, b).empty());
    GadgetPattern g = build_in_out(canonical_params(th, a, b));
    CHECK(g.merged_beta);
    CHECK((g.p_beta - g.c_beta).norm() == 0);
    // the other side of the threshold
    GadgetPattern h = build_in_out(canonical_params(kPi / 2, kPi / 2, kPi / 2 - 0.1));
    CHECK(!h.merged_beta);
}

TEST_CASE("flat patterns satisfy Kawasaki and developability")
{
    for (auto k : {Kind::OutOut, Kind::InOut})
        for (const auto& a : fft::sample_params(1000, 21)) {
            GadgetPattern g = fft::make(k, a);
            auto kr = verify::check_kawasaki(g);
            auto dr = verify::check_developability(g);
            if (!kr.pass || !dr.pass)
                MESSAGE(to_string(k) << " " << a.theta << " " << a.alpha << " " << a.beta << " " << kr.worst);
            CHECK(kr.pass);
            CHECK(dr.pass);
        }
}

TEST_CASE("closed-form reach matches the construction")
{
    for (auto k : {Kind::OutOut, Kind::InOut})
        for (const auto& a : fft::sample_params(1000, 33)) {
            GadgetPattern g = fft::make(k, a);
            ReachBound r = gadget_reach(g);
            CHECK(std::abs(r.alpha - r.alpha_closed) < 1e-9);
            CHECK(std::abs(r.beta - r.beta_closed) < 1e-9);
            CHECK(r.alpha_closed == doctest::Approx(reach_closed(k, Side::Alpha, a.theta, a.alpha, a.beta)));
        }
}

TEST_CASE("sign-flipped closed forms deviate from the construction")
{
    // at generic parameters the flipped signs do not reproduce the geometry
    for (const auto& a : fft::sample_params(50, 2)) {
        GadgetPattern g = fft::make(Kind::OutOut, a);
        ReachBound r = gadget_reach(g);
        double flipped = reach_sign_flipped(Kind::OutOut, Side::Alpha, a.theta, a.alpha, a.beta);
        CHECK(std::abs(flipped - r.alpha) > 1e-6);
    }
}

TEST_CASE("OutOut mirror symmetry")
{
    for (const auto& a : fft::sample_params(200, 4)) {
        GadgetPattern g = build_out_out(canonical_params(a.theta, a.alpha, a.beta));
        GadgetPattern m = build_out_out(canonical_params(a.theta, a.beta, a.alpha));
        auto mirror = [](const Vec2& v) { return Vec2(-v.x(), v.y()); };
        CHECK((mirror(g.p_alpha) - m.p_beta).norm() < 1e-12);
        CHECK((mirror(g.p_beta) - m.p_alpha).norm() < 1e-12);
        CHECK((mirror(g.c_alpha) - m.c_beta).norm() < 1e-12);
    }
}

TEST_CASE("crease endpoints stay on the developed faces")
{
    for (auto k : {Kind::OutOut, Kind::InOut})
        for (const auto& a : fft::sample_params(300, 44)) {
            GadgetPattern g = fft::make(k, a);
            // p_alpha on the alpha side at the alpha crease offset, p_beta likewise
            Vec2 na = dev_normal(g.params, Side::Alpha), nb = dev_normal(g.params, Side::Beta);
            CHECK(g.p_alpha.x() <= 1e-12);
            CHECK(g.p_beta.x() >= -1e-12);
            CHECK(g.p_alpha.dot(na) == doctest::Approx(g.c_alpha.dot(na)).epsilon(1e-12));
            CHECK(g.p_beta.dot(nb) == doctest::Approx(g.c_beta.dot(nb)).epsilon(1e-12));
            double width_a = g.crease_alpha.w;
            CHECK(g.p_alpha.dot(na) <= width_a + 1e-12);
            for (const auto& v : g.vertices) CHECK(std::isfinite(v.x()));
            for (const auto& e : g.edges) {
                CHECK(e.a >= 0);
                CHECK(e.b < static_cast<int>(g.vertices.size()));
            }
        }
}

TEST_CASE("moving region is bounded by the reach product")
{
    for (auto k : {Kind::OutOut, Kind::InOut})
        for (const auto& a : fft::sample_params(1000, 55)) {
            GadgetPattern g = fft::make(k, a);
            ReachBound r = gadget_reach(g);
            double area = moving_region_area(g);
            CHECK(area > 0);
            CHECK(area <= r.area_bound * (1 + 1e-12));
        }
}

TEST_CASE("reach and area scale with the spanning edge")
{
    auto a = fft::sample_params(1, 77)[0];
    for (auto k : {Kind::OutOut, Kind::InOut}) {
        auto p = canonical_params(a.theta, a.alpha, a.beta);
        GadgetPattern g = build(p, k);
        p.edge_length = 0.5;
        GadgetPattern h = build(p, k);
        CHECK(gadget_reach(h).alpha == doctest::Approx(0.5 * gadget_reach(g).alpha));
        CHECK(gadget_reach(h).radius == doctest::Approx(0.5 * gadget_reach(g).radius));
        CHECK(moving_region_area(g) / moving_region_area(h) == doctest::Approx(4.0).epsilon(1e-12));
    }
}

// ---- walls ----

TEST_CASE("orthogonal tube edge parameters")
{
    auto m = fft::prism(fft::square(1), 1);
    auto s = slicer::band_slab(m, 0, 1);
    const auto& w = s.walls[0];
    for (int k = 0; k < 4; ++k) {
        SpanningEdgeParams p = edge_params(s, w, k);
        CHECK(p.theta == doctest::Approx(kPi / 2));
        CHECK(p.alpha == doctest::Approx(kPi / 2));
        CHECK(p.beta == doctest::Approx(kPi / 2));
        CHECK(!p.primary_at_top);
        CHECK(p.edge_length == doctest::Approx(1.0));
        CHECK(!p.no_gadget);
    }
}

TEST_CASE("widening frustum puts the primary vertex on top")
{
    auto m = fft::frustum(fft::regular(4, 1), 1, 1.5);
    auto s = slicer::band_slab(m, 0, 1);
    REQUIRE(s.walls.size() == 1);
    SpanningEdgeParams p = edge_params(s, s.walls[0], 0);
    CHECK(p.primary_at_top);
    CHECK(p.alpha + p.beta <= kPi);
    CHECK(admissibility_violation(p.theta, p.alpha, p.beta).empty());
    // the frame takes the canonical corner to the world spanning edge
    Corner c = canonical_corner(p.theta, p.alpha, p.beta);
    Vec3 o = p.frame.apply(Vec3::Zero()), q = p.frame.apply(c.d);
    CHECK(o.z() == doctest::Approx(1.0));
    CHECK(q.z() == doctest::Approx(0.0).epsilon(1e-12));
    auto n = fft::frustum(fft::regular(4, 1), 1, 0.5);
    auto t = slicer::band_slab(n, 0, 1);
    CHECK(!edge_params(t, t.walls[0], 0).primary_at_top);
}

TEST_CASE("frame maps canonical directions onto the wall")
{
    auto m = fft::frustum(fft::regular(5, 1), 0.7, 0.8);
    auto s = slicer::band_slab(m, 0, 0.7);
    const auto& w = s.walls[0];
    for (int k = 0; k < 5; ++k) {
        SpanningEdgeParams p = edge_params(s, w, k);
        Corner c = canonical_corner(p.theta, p.alpha, p.beta);
        const auto& pa = s.pieces[w.pieces[k]];
        Vec3 shared0 = pa.b1, shared1 = pa.t1;
        Vec3 o = p.frame.apply(Vec3::Zero()), q = p.frame.apply(c.d);
        bool match = ((o - shared0).norm() < 1e-12 && (q - shared1).norm() < 1e-12) ||
                     ((o - shared1).norm() < 1e-12 && (q - shared0).norm() < 1e-12);
        CHECK(match);
        CHECK(std::abs(std::abs(p.frame.R.determinant()) - 1) < 1e-12);
    }
}

TEST_CASE("coplanar neighbours need no gadget")
{
    mesh::Manifold m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 0, 1}, {1, 0, 1}, {2, 0, 1}};
    m.faces = {{0, 1, 4, 3}, {1, 2, 5, 4}};
    m.build_adjacency();
    auto s = slicer::band_slab(m, 0, 1);
    REQUIRE(s.walls.size() == 1);
    REQUIRE(s.walls[0].pieces.size() == 2);
    CHECK(edge_params(s, s.walls[0], 0).no_gadget);
    WallLabeling lab = assign_labels(s, s.walls[0]);
    CHECK(lab.joints.size() == 1);
    CHECK(lab.joints[0] == Joint::None);
    CHECK(lab.sides[0] == lab.sides[1]);
    CHECK(!joint_gadget(s, s.walls[0], lab, 0).has_value());
}

TEST_CASE("labeling of cycles and chains")
{
    auto count_joints = [](const WallLabeling& l, Joint j) {
        int n = 0;
        for (auto x : l.joints) n += x == j ? 1 : 0;
        return n;
    };
    auto infer_no_in_in = [](const slicer::Slab& s, const slicer::Wall& w, const WallLabeling& l) {
        for (size_t k = 0; k < l.joints.size(); ++k) {
            if (l.joints[k] != Joint::InOut && l.joints[k] != Joint::OutOut) continue;
            auto g = joint_gadget(s, w, l, static_cast<int>(k));
            REQUIRE(g.has_value());
            CHECK((g->kind == Kind::OutOut) == (l.joints[k] == Joint::OutOut));
        }
    };

    auto sq = slicer::band_slab(fft::prism(fft::square(1), 1), 0, 1);
    WallLabeling l4 = assign_labels(sq, sq.walls[0]);
    CHECK(l4.face_labels == std::vector<char>{'O', 'I', 'O', 'I'});
    CHECK(count_joints(l4, Joint::InOut) == 4);
    CHECK(count_joints(l4, Joint::OutOut) == 0);
    infer_no_in_in(sq, sq.walls[0], l4);

    auto tri = slicer::band_slab(fft::prism(fft::regular(3, 1), 1), 0, 1);
    WallLabeling l3 = assign_labels(tri, tri.walls[0]);
    CHECK(count_joints(l3, Joint::OutOut) == 1);
    CHECK(count_joints(l3, Joint::InOut) == 2);
    infer_no_in_in(tri, tri.walls[0], l3);

    auto pent = slicer::band_slab(fft::frustum(fft::regular(5, 1), 1, 0.6), 0, 1);
    WallLabeling l5 = assign_labels(pent, pent.walls[0]);
    CHECK(count_joints(l5, Joint::OutOut) == 1);
    infer_no_in_in(pent, pent.walls[0], l5);

    auto chain = slicer::band_slab(fft::prism({{0, 0}, {1, 0}, {1, 1}}, 1, false), 0, 1);
    REQUIRE(chain.walls.size() == 1);
    WallLabeling lc = assign_labels(chain, chain.walls[0]);
    CHECK(!chain.walls[0].cycle);
    CHECK(lc.joints.size() == 1);
    CHECK(lc.joints[0] == Joint::InOut);
    CHECK(lc.face_labels[0] == 'O');
    infer_no_in_in(chain, chain.walls[0], lc);

    // clockwise input ends up with the same counts
    auto cw = fft::regular(3, 1);
    std::reverse(cw.begin(), cw.end());
    auto tcw = slicer::band_slab(fft::prism(cw, 1), 0, 1);
    WallLabeling lcw = assign_labels(tcw, tcw.walls[0]);
    CHECK(count_joints(lcw, Joint::OutOut) == 1);
    infer_no_in_in(tcw, tcw.walls[0], lcw);
}

TEST_CASE("gadget kind names round trip")
{
    CHECK(kind_from_string(to_string(Kind::OutOut)) == Kind::OutOut);
    CHECK(kind_from_string("inout") == Kind::InOut);
    CHECK_THROWS_AS(kind_from_string("inin"), Error);
}
