#pragma once

#include <cmath>

namespace porb {

/// Point or vector in the plane of the two fixed centers.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline Vec2 operator*(Vec2 v, double s) { return s * v; }

inline Vec2& operator+=(Vec2& a, Vec2 b) {
  a.x += b.x;
  a.y += b.y;
  return a;
}

inline Vec2& operator-=(Vec2& a, Vec2 b) {
  a.x -= b.x;
  a.y -= b.y;
  return a;
}

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double squared_norm(Vec2 v) { return dot(v, v); }
inline double norm(Vec2 v) { return std::sqrt(squared_norm(v)); }

}  // namespace porb
