#include "ff/predicates.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>

namespace ff::pred {

namespace {

using Q = boost::multiprecision::cpp_rational;

int sign(double x) { return (x > 0) - (x < 0); }
int sign(const Q& x) { return x.sign(); }

// Error bounds for the straightforward evaluation (Shewchuk's stage-A constants).
constexpr double kErr2 = 3.3306690738754716e-16;
constexpr double kErr3 = 7.7715611723761027e-16;

} // namespace

int orient2d(const Vec2& a, const Vec2& b, const Vec2& c)
{
    double l = (b.x() - a.x()) * (c.y() - a.y());
    double r = (b.y() - a.y()) * (c.x() - a.x());
    double det = l - r;
    if (std::abs(det) > kErr2 * (std::abs(l) + std::abs(r))) return sign(det);
    Q ax(a.x()), ay(a.y());
    Q d = (Q(b.x()) - ax) * (Q(c.y()) - ay) - (Q(b.y()) - ay) * (Q(c.x()) - ax);
    return sign(d);
}

int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d)
{
    Vec3 u = b - a, v = c - a, w = d - a;
    double m1 = u.y() * v.z() - u.z() * v.y();
    double m2 = u.z() * v.x() - u.x() * v.z();
    double m3 = u.x() * v.y() - u.y() * v.x();
    double det = w.x() * m1 + w.y() * m2 + w.z() * m3;
    double perm = std::abs(w.x()) * (std::abs(u.y() * v.z()) + std::abs(u.z() * v.y())) +
                  std::abs(w.y()) * (std::abs(u.z() * v.x()) + std::abs(u.x() * v.z())) +
                  std::abs(w.z()) * (std::abs(u.x() * v.y()) + std::abs(u.y() * v.x()));
    // subtractions above are rounded too; be generous before trusting the float
    if (std::abs(det) > 4 * kErr3 * perm) return sign(det);
    Q U[3], V[3], W[3];
    for (int i = 0; i < 3; ++i) {
        U[i] = Q(b[i]) - Q(a[i]);
        V[i] = Q(c[i]) - Q(a[i]);
        W[i] = Q(d[i]) - Q(a[i]);
    }
    Q e = W[0] * (U[1] * V[2] - U[2] * V[1]) + W[1] * (U[2] * V[0] - U[0] * V[2]) + W[2] * (U[0] * V[1] - U[1] * V[0]);
    return sign(e);
}

namespace {

// Drop the coordinate where the plane normal is largest; projection of doubles is exact.
int drop_axis(const Vec3& p, const Vec3& q, const Vec3& r)
{
    Vec3 n = (q - p).cross(r - p);
    int k = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(n[i]) > std::abs(n[k])) k = i;
    return k;
}

Vec2 project(const Vec3& x, int drop)
{
    if (drop == 0) return {x.y(), x.z()};
    if (drop == 1) return {x.z(), x.x()};
    return {x.x(), x.y()};
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p)
{
    return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) && std::min(a.y(), b.y()) <= p.y() &&
           p.y() <= std::max(a.y(), b.y());
}

bool segments_meet(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d)
{
    int o1 = orient2d(a, b, c), o2 = orient2d(a, b, d), o3 = orient2d(c, d, a), o4 = orient2d(c, d, b);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

bool in_triangle(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c)
{
    int s1 = orient2d(a, b, p), s2 = orient2d(b, c, p), s3 = orient2d(c, a, p);
    bool neg = s1 < 0 || s2 < 0 || s3 < 0, pos = s1 > 0 || s2 > 0 || s3 > 0;
    return !(neg && pos);
}

bool tri_tri_2d(const std::array<Vec2, 3>& s, const std::array<Vec2, 3>& t)
{
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (segments_meet(s[i], s[(i + 1) % 3], t[j], t[(j + 1) % 3])) return true;
    return in_triangle(s[0], t[0], t[1], t[2]) || in_triangle(t[0], s[0], s[1], s[2]);
}

bool segment_triangle_2d(const Vec2& a, const Vec2& b, const std::array<Vec2, 3>& t)
{
    for (int j = 0; j < 3; ++j)
        if (segments_meet(a, b, t[j], t[(j + 1) % 3])) return true;
    return in_triangle(a, t[0], t[1], t[2]);
}

// Closed segment ab against the closed triangle uvw.
bool segment_triangle(const Vec3& a, const Vec3& b, const Vec3& u, const Vec3& v, const Vec3& w)
{
    int sa = orient3d(u, v, w, a), sb = orient3d(u, v, w, b);
    if (sa * sb > 0) return false;
    if (sa == 0 && sb == 0) {
        int k = drop_axis(u, v, w);
        return segment_triangle_2d(project(a, k), project(b, k), {project(u, k), project(v, k), project(w, k)});
    }
    int s1 = orient3d(a, b, u, v), s2 = orient3d(a, b, v, w), s3 = orient3d(a, b, w, u);
    bool neg = s1 < 0 || s2 < 0 || s3 < 0, pos = s1 > 0 || s2 > 0 || s3 > 0;
    return !(neg && pos);
}

} // namespace

bool coplanar(const Vec3& p1, const Vec3& q1, const Vec3& r1, const Vec3& p2, const Vec3& q2, const Vec3& r2)
{
    return orient3d(p1, q1, r1, p2) == 0 && orient3d(p1, q1, r1, q2) == 0 && orient3d(p1, q1, r1, r2) == 0;
}

bool tri_tri_intersect(const Vec3& p1, const Vec3& q1, const Vec3& r1, const Vec3& p2, const Vec3& q2,
                       const Vec3& r2)
{
    int a = orient3d(p1, q1, r1, p2), b = orient3d(p1, q1, r1, q2), c = orient3d(p1, q1, r1, r2);
    if ((a > 0 && b > 0 && c > 0) || (a < 0 && b < 0 && c < 0)) return false;
    if (a == 0 && b == 0 && c == 0) {
        int k = drop_axis(p1, q1, r1);
        return tri_tri_2d({project(p1, k), project(q1, k), project(r1, k)},
                          {project(p2, k), project(q2, k), project(r2, k)});
    }
    int d = orient3d(p2, q2, r2, p1), e = orient3d(p2, q2, r2, q1), f = orient3d(p2, q2, r2, r1);
    if ((d > 0 && e > 0 && f > 0) || (d < 0 && e < 0 && f < 0)) return false;
    // the intersection is a segment whose ends lie on edges of one triangle or the other
    const Vec3* A[3] = {&p1, &q1, &r1};
    const Vec3* B[3] = {&p2, &q2, &r2};
    for (int i = 0; i < 3; ++i) {
        if (segment_triangle(*A[i], *A[(i + 1) % 3], p2, q2, r2)) return true;
        if (segment_triangle(*B[i], *B[(i + 1) % 3], p1, q1, r1)) return true;
    }
    return false;
}

bool segment_meets_triangle(const Vec3& a, const Vec3& b, const Vec3& u, const Vec3& v, const Vec3& w)
{
    return segment_triangle(a, b, u, v, w);
}

} // namespace ff::pred
