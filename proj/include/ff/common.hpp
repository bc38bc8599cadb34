#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace ff {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

struct Tolerances {
    double iso = 1e-9;          // absolute, unit spanning edge
    double solve = 1e-11;
    double planar_rel = 1e-9;   // times bounding-box diagonal
    double height_rel = 1e-6;
    double kawasaki = 1e-9;
    double shell = 1e-12;       // adjacency shell for intersection tests
    double param_margin = 1e-3;
};

// Thrown by every stage; `stage` names where it happened.
class Error : public std::runtime_error {
public:
    Error(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

inline double angle_between(const Vec3& a, const Vec3& b)
{
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

inline double angle_between(const Vec2& a, const Vec2& b)
{
    return std::atan2(std::abs(cross2(a, b)), a.dot(b));
}

inline Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

} // namespace ff
