#pragma once

#include <cmath>
#include <cstdint>

namespace drawgraph {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

// Integer pixel coordinate, origin top-left, x rightward, y downward.
struct Px {
    int x = 0;
    int y = 0;

    bool operator==(const Px&) const = default;
    auto operator<=>(const Px&) const = default;
    Vec2 to_vec() const { return {double(x), double(y)}; }
};

} // namespace drawgraph
