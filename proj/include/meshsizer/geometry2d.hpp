#pragma once

#include <cmath>

namespace meshsizer {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double squared_norm() const { return x * x + y * y; }
    Vec2 normalized() const { double n = norm(); return {x / n, y / n}; }
    /// Rotated by +90 degrees (counter-clockwise).
    Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Twice the signed area of triangle (a, b, c); positive for CCW ordering.
inline double signed_area2(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b - a).cross(c - a);
}

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Distance from point p to the closed segment [a, b].
inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squared_norm();
    if (len2 == 0.0) return distance(p, a);
    double t = (p - a).dot(ab) / len2;
    t = std::fmin(1.0, std::fmax(0.0, t));
    return distance(p, a + t * ab);
}

}  // namespace meshsizer
