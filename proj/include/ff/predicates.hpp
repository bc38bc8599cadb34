#pragma once

#include "ff/common.hpp"

namespace ff::pred {

// Sign of det[b-a, c-a, d-a]: exact (floating filter, rational fallback).
int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);
int orient2d(const Vec2& a, const Vec2& b, const Vec2& c);

// Closed triangles share at least one point. Exact.
bool tri_tri_intersect(const Vec3& p1, const Vec3& q1, const Vec3& r1,
                       const Vec3& p2, const Vec3& q2, const Vec3& r2);

// Closed segment ab against the closed triangle uvw.
bool segment_meets_triangle(const Vec3& a, const Vec3& b, const Vec3& u, const Vec3& v, const Vec3& w);

bool coplanar(const Vec3& p1, const Vec3& q1, const Vec3& r1,
              const Vec3& p2, const Vec3& q2, const Vec3& r2);

} // namespace ff::pred
