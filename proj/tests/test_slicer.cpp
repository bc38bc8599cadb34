#include "doctest.h"
#include "helpers.hpp"

#include "ff/slicer.hpp"

#include <cmath>

using namespace ff;
using namespace ff::slicer;

namespace {

double total_area(const std::vector<Slab>& slabs)
{
    double a = 0;
    for (const auto& s : slabs) a += s.area();
    return a;
}

mesh::OrientedManifold tetra()
{
    return mesh::orient_generic(mesh::load_mesh(fft::data("tetrahedron.off"), mesh::Format::OFF), 1);
}

// Two separate quads, bottom at z = 0 and top at z = h, bottom lines x = x0 and x = x1.
mesh::Manifold two_walls(double x0, double lean0, double x1, double lean1, double h)
{
    mesh::Manifold m;
    m.vertices = {{x0, 0, 0}, {x0, 3, 0}, {x0 + lean0, 3, h}, {x0 + lean0, 0, h},
                  {x1, 0, 0}, {x1, 3, 0}, {x1 + lean1, 3, h}, {x1 + lean1, 0, h}};
    m.faces = {{0, 1, 2, 3}, {4, 5, 6, 7}};
    m.build_adjacency();
    return m;
}

} // namespace

TEST_CASE("tetrahedron gives three initial slabs")
{
    auto om = tetra();
    auto slabs = slice_at_vertices(om);
    CHECK(slabs.size() == 3);
    CHECK(total_area(slabs) == doctest::Approx(om.rotated.surface_area()).epsilon(1e-9));
    auto [out, d] = refine_to_prismoidal(slabs, 0);
    CHECK(out.size() == 3);
    CHECK(d.residual_nonprismoidal_count == 3);
    for (const auto& s : out) CHECK(!s.prismoidal());
}

TEST_CASE("rotated cube gives seven slabs with cycle walls")
{
    auto om = mesh::orient_generic(fft::cube(), 9);
    auto slabs = slice_at_vertices(om);
    CHECK(slabs.size() == 7);
    CHECK(total_area(slabs) == doctest::Approx(6.0).epsilon(1e-9));
    for (const auto& s : slabs) {
        CHECK(s.walls.size() == 1);
        CHECK(s.walls[0].cycle);
        for (const auto& p : s.pieces) {
            CHECK(std::abs(p.b0.z() - s.z_bottom) == 0);
            CHECK(std::abs(p.t1.z() - s.z_top) == 0);
        }
    }
    auto [out, d] = refine_to_prismoidal(slabs, 5);
    CHECK(total_area(out) == doctest::Approx(6.0).epsilon(1e-9));
    CHECK(d.slab_count == static_cast<int>(out.size()));
    for (const auto& s : out)
        if (!s.residual) CHECK(s.prismoidal());
}

TEST_CASE("vertical square face is one trapezoid wall")
{
    mesh::Manifold m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {0, 0, 1}};
    m.faces = {{0, 1, 2, 3}};
    m.build_adjacency();
    Slab s = band_slab(m, 0, 1);
    REQUIRE(s.walls.size() == 1);
    CHECK(s.walls[0].pieces.size() == 1);
    CHECK(!s.walls[0].cycle);
    CHECK(s.prismoidal());
    CHECK(!s.pieces[0].triangle());
    CHECK(s.area() == doctest::Approx(1.0));
}

TEST_CASE("prismoidal slab is a fixed point of refinement")
{
    auto m = fft::prism(fft::square(1), 1);
    Slab s = band_slab(m, 0, 1);
    CHECK(s.prismoidal());
    auto [out, d] = refine_to_prismoidal({s}, 7);
    CHECK(out.size() == 1);
    CHECK(d.residual_nonprismoidal_count == 0);
    CHECK(d.depth_used == 0);
    CHECK_THROWS_AS(refine_to_prismoidal({s}, -1), Error);
}

TEST_CASE("apex slab halves its residual each round")
{
    mesh::Manifold m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0.5, 0, 1}};
    m.faces = {{0, 1, 2}};
    m.build_adjacency();
    Slab s = band_slab(m, 0, 1);
    CHECK(!s.prismoidal());
    CHECK(s.bad_top);
    for (int d = 0; d <= 10; ++d) {
        auto [out, diag] = refine_to_prismoidal({s}, d);
        int prism = 0;
        for (const auto& o : out) prism += o.prismoidal() ? 1 : 0;
        CHECK(prism == d);
        CHECK(diag.residual_nonprismoidal_count == 1);
        CHECK(diag.residual_height_max == doctest::Approx(std::ldexp(1.0, -d)).epsilon(1e-12));
        CHECK(total_area(out) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("tetrahedron residuals follow gap / 2^d")
{
    auto om = tetra();
    auto slabs = slice_at_vertices(om);
    std::vector<double> prev;
    for (int d = 0; d <= 10; ++d) {
        auto [out, diag] = refine_to_prismoidal(slabs, d);
        std::vector<double> res;
        for (const auto& s : out)
            if (s.residual) res.push_back(s.height());
        // every residual is its gap halved d times
        for (const auto& s : out) {
            if (!s.residual) continue;
            double gap = slabs[s.origin.gap].height();
            CHECK(s.height() == doctest::Approx(std::ldexp(gap, -d)).epsilon(1e-12));
        }
        if (d > 0) {
            // bad planes: bottom of gap 0, both sides of gap 1, top of gap 2
            CHECK(res.size() == 4);
            double total = 0, total_prev = 0;
            for (double r : res) total += r;
            for (double r : prev) total_prev += r;
            if (d > 1) CHECK(total / total_prev == doctest::Approx(0.5).epsilon(1e-12));
        }
        prev = res;
    }
}

TEST_CASE("projection bound example: s = 1, psi = 30 degrees")
{
    double h = 1, lean = std::sqrt(3.0);
    auto m = two_walls(0, -lean, 1, lean, h);
    Slab s = band_slab(m, 0, h);
    REQUIRE(s.pieces.size() == 2);
    DisjointBound b = projection_bound(s);
    CHECK(b.psi == doctest::Approx(kPi / 6).epsilon(1e-12));
    CHECK(b.s_min == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.bound == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(projection_split_count(1.0, 0.5 * std::sin(kPi / 6)) == 4);
    auto out = split_projection_disjoint(s);
    REQUIRE(out.size() == 4);
    for (const auto& o : out) {
        CHECK(o.height() == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(projection_overlaps(o).empty());
    }
    CHECK(out.front().z_bottom == 0);
    CHECK(out.back().z_top == h);
}

TEST_CASE("orthogonal walls split by s_min / 2")
{
    auto m = two_walls(0, 0, 1, 0, 3);
    Slab s = band_slab(m, 0, 3);
    DisjointBound b = projection_bound(s);
    CHECK(b.psi == doctest::Approx(kPi / 2));
    CHECK(b.bound == doctest::Approx(0.5));
    CHECK(split_projection_disjoint(s).size() == 6);
    CHECK(projection_split_count(3, 0.5) == 6);
    CHECK(projection_overlaps(s).empty());
}

TEST_CASE("overlapping projections are found and removed by the split")
{
    auto m = two_walls(0, 2, 1, 2, 1);
    Slab s = band_slab(m, 0, 1);
    CHECK(projection_overlaps(s).size() == 1);
    auto out = split_projection_disjoint(s);
    CHECK(out.size() == 5);
    for (const auto& o : out) CHECK(projection_overlaps(o).empty());
}

TEST_CASE("short slab already below the bound is unchanged")
{
    auto m = two_walls(0, 0, 1, 0, 0.1);
    Slab s = band_slab(m, 0, 0.1);
    CHECK(split_projection_disjoint(s).size() == 1);
}

TEST_CASE("square tube needs clearance splits that shrink the reach")
{
    double L = 1;
    auto m = fft::prism(fft::square(L), L);
    Slab s = band_slab(m, 0, L);
    REQUIRE(s.walls.size() == 1);
    CHECK(s.walls[0].cycle);
    CHECK(s.walls[0].pieces.size() == 4);
    ClearanceReport c = gadget_clearance(s);
    CHECK(!c.ok);
    Slab half = sub_slab(s, 0, L / 2, "h");
    CHECK(gadget_clearance(half).worst_ratio < c.worst_ratio);

    auto out = split_for_gadget_clearance(s);
    CHECK(out.size() > 1);
    // equal halving: a power of two pieces of equal height
    CHECK((out.size() & (out.size() - 1)) == 0);
    double total = 0;
    for (const auto& o : out) {
        CHECK(gadget_clearance(o).ok);
        CHECK(o.height() == doctest::Approx(L / out.size()));
        total += o.area();
    }
    CHECK(total == doctest::Approx(4 * L * L).epsilon(1e-12));
    // the previous level does not fit
    Slab coarse = sub_slab(s, 0, 2 * L / out.size(), "c");
    CHECK(!gadget_clearance(coarse).ok);
}

TEST_CASE("clearance fixed point")
{
    auto m = fft::prism(fft::square(1), 1);
    Slab s = band_slab(m, 0, 1.0 / 64);
    CHECK(gadget_clearance(s).ok);
    CHECK(split_for_gadget_clearance(s).size() == 1);
}

TEST_CASE("bisection keeps walls valid")
{
    auto om = mesh::orient_generic(fft::cube(), 9);
    auto [out, d] = refine_to_prismoidal(slice_at_vertices(om), 3);
    auto halves = bisect_all(out);
    for (const auto& s : halves) {
        std::map<int, int> per_edge;
        for (const auto& p : s.pieces) {
            per_edge[p.e0.id]++;
            per_edge[p.e1.id]++;
        }
        for (const auto& [e, c] : per_edge) CHECK(c <= 2);
        for (const auto& w : s.walls)
            for (size_t k = 0; k + 1 < w.pieces.size(); ++k)
                CHECK(s.pieces[w.pieces[k]].e1.id == s.pieces[w.pieces[k + 1]].e0.id);
    }
    CHECK(total_area(halves) == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("Mobius slabs have open chain walls")
{
    auto om = mesh::orient_generic(mesh::load_mesh(fft::data("mobius.obj"), mesh::Format::OBJ), 3);
    auto slabs = slice_at_vertices(om);
    CHECK(slabs.size() == 4);
    int chains = 0;
    for (const auto& s : slabs)
        for (const auto& w : s.walls) chains += w.cycle ? 0 : 1;
    CHECK(chains > 0);
    for (const auto& s : slabs)
        for (const auto& w : s.walls) CHECK(!w.cycle);
}

TEST_CASE("slab document carries provenance")
{
    auto [out, d] = refine_to_prismoidal(slice_at_vertices(tetra()), 2);
    auto doc = slabs_to_json(out);
    CHECK(doc["slab_schema"] == 1);
    CHECK(doc["slabs"].size() == out.size());
    CHECK(doc["slabs"][0]["origin"]["path"].get<std::string>().rfind("g0", 0) == 0);
}
