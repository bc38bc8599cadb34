#pragma once

// Thin wrappers over Boost.Geometry for the planar polygon work.

#include "ff/common.hpp"

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/geometry/geometries/segment.hpp>

#include <vector>

namespace ff::poly {

namespace bg = boost::geometry;
using Pt = bg::model::d2::point_xy<double>;
using Polygon = bg::model::polygon<Pt>;   // clockwise, closed
using Multi = bg::model::multi_polygon<Polygon>;
using Segment = bg::model::segment<Pt>;

inline Polygon make(const std::vector<Vec2>& pts)
{
    Polygon p;
    for (const auto& v : pts) bg::append(p.outer(), Pt(v.x(), v.y()));
    if (!pts.empty()) bg::append(p.outer(), Pt(pts[0].x(), pts[0].y()));
    bg::correct(p);
    return p;
}

inline Polygon hull(const std::vector<Vec2>& pts)
{
    bg::model::multi_point<Pt> mp;
    for (const auto& v : pts) bg::append(mp, Pt(v.x(), v.y()));
    Polygon h;
    bg::convex_hull(mp, h);
    return h;
}

inline double area(const Polygon& p) { return std::abs(bg::area(p)); }

inline double intersection_area(const Polygon& a, const Polygon& b)
{
    Multi out;
    bg::intersection(a, b, out);
    return std::abs(bg::area(out));
}

inline Multi intersection(const Polygon& a, const Polygon& b)
{
    Multi out;
    bg::intersection(a, b, out);
    return out;
}

inline Multi unite(const Polygon& a, const Polygon& b)
{
    Multi out;
    bg::union_(a, b, out);
    return out;
}

inline double distance(const Polygon& a, const Polygon& b) { return bg::distance(a, b); }
inline double distance(const Vec2& p, const Polygon& b) { return bg::distance(Pt(p.x(), p.y()), b); }

inline double point_segment(const Vec2& p, const Vec2& a, const Vec2& b)
{
    Vec2 d = b - a;
    double l2 = d.squaredNorm();
    double s = l2 > 0 ? std::clamp((p - a).dot(d) / l2, 0.0, 1.0) : 0.0;
    return (a + s * d - p).norm();
}

inline std::vector<Vec2> ring(const Polygon& p)
{
    std::vector<Vec2> out;
    const auto& r = p.outer();
    for (size_t i = 0; i + 1 < r.size(); ++i) out.emplace_back(r[i].x(), r[i].y());
    return out;
}

} // namespace ff::poly
