#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace vesicle {

using Vec2 = Eigen::Vector2d;

// z-component of the 3D cross product of two in-plane vectors
inline double cross2(const Vec2& a, const Vec2& b) {
    return a.x() * b.y() - a.y() * b.x();
}

// counter-clockwise quarter turn, (x,y) -> (-y,x)
inline Vec2 perp(const Vec2& v) {
    return Vec2(-v.y(), v.x());
}

// clockwise quarter turn, (x,y) -> (y,-x); outward edge normal of a CCW polygon
inline Vec2 perp_cw(const Vec2& v) {
    return Vec2(v.y(), -v.x());
}

inline Vec2 rotate(const Vec2& v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return Vec2(c * v.x() - s * v.y(), s * v.x() + c * v.y());
}

}  // namespace vesicle
