#pragma once

#include <cmath>

namespace bowtie {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm2() const { return x * x + y * y; }
  double norm() const { return std::hypot(x, y); }
  // 90-degree counterclockwise rotation
  Vec2 perp() const { return {-y, x}; }
  Vec2 normalized() const { double n = norm(); return {x / n, y / n}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dist(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

}  // namespace bowtie
