#pragma once

#include "ff/gadget.hpp"
#include "ff/mesh.hpp"
#include "ff/slicer.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace fft {

inline std::string data(const std::string& name) { return std::string(FF_DATA_DIR) + "/" + name; }

struct Angles {
    double theta, alpha, beta;
};

// Uniform over the admissible region, margin 1e-3 from every boundary.
inline std::vector<Angles> sample_params(int n, std::uint64_t seed, double margin = 1e-3)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0, ff::kPi);
    std::vector<Angles> out;
    while (static_cast<int>(out.size()) < n) {
        Angles a{U(rng), U(rng), U(rng)};
        if (ff::gadget::admissibility_violation(a.theta, a.alpha, a.beta, margin).empty()) out.push_back(a);
    }
    return out;
}

inline ff::gadget::GadgetPattern make(ff::gadget::Kind k, const Angles& a)
{
    return ff::gadget::build(ff::gadget::canonical_params(a.theta, a.alpha, a.beta), k);
}

// Vertical prism over a polygon, z in [0, height]; open at both ends.
inline ff::mesh::Manifold prism(const std::vector<ff::Vec2>& poly, double height, bool closed = true)
{
    ff::mesh::Manifold m;
    const int n = static_cast<int>(poly.size());
    for (const auto& p : poly) m.vertices.emplace_back(p.x(), p.y(), 0.0);
    for (const auto& p : poly) m.vertices.emplace_back(p.x(), p.y(), height);
    const int faces = closed ? n : n - 1;
    for (int i = 0; i < faces; ++i) {
        int j = (i + 1) % n;
        m.faces.push_back({i, j, n + j, n + i});
    }
    m.build_adjacency();
    return m;
}

// Frustum: bottom polygon scaled by `top_scale` at the top.
inline ff::mesh::Manifold frustum(const std::vector<ff::Vec2>& poly, double height, double top_scale)
{
    ff::mesh::Manifold m;
    const int n = static_cast<int>(poly.size());
    for (const auto& p : poly) m.vertices.emplace_back(p.x(), p.y(), 0.0);
    for (const auto& p : poly) m.vertices.emplace_back(top_scale * p.x(), top_scale * p.y(), height);
    for (int i = 0; i < n; ++i) {
        int j = (i + 1) % n;
        m.faces.push_back({i, j, n + j, n + i});
    }
    m.build_adjacency();
    return m;
}

inline std::vector<ff::Vec2> square(double side)
{
    return {{0, 0}, {side, 0}, {side, side}, {0, side}};
}

inline std::vector<ff::Vec2> regular(int n, double r)
{
    std::vector<ff::Vec2> out;
    for (int i = 0; i < n; ++i) out.emplace_back(r * std::cos(2 * ff::kPi * i / n), r * std::sin(2 * ff::kPi * i / n));
    return out;
}

inline ff::slicer::Slab whole_slab(const ff::mesh::Manifold& m, double z0, double z1)
{
    return ff::slicer::band_slab(m, z0, z1);
}

inline ff::mesh::Manifold cube()
{
    return ff::mesh::load_mesh(data("cube.off"), ff::mesh::Format::OFF);
}

} // namespace fft
