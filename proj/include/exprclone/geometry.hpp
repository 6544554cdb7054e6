#pragma once

#include <cmath>

namespace exprclone {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
inline bool operator!=(Vec2 a, Vec2 b) { return !(a == b); }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

// Twice the signed area of triangle (a, b, c). Positive for the canonical
// orientation used throughout (x right, y down).
inline double triangle_area2(Vec2 a, Vec2 b, Vec2 c) {
    return cross(b - a, c - a);
}

struct ImageSize {
    int width = 0;
    int height = 0;
};

inline bool operator==(ImageSize a, ImageSize b) {
    return a.width == b.width && a.height == b.height;
}

} // namespace exprclone
