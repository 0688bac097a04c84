#pragma once

#include <array>
#include <cmath>

namespace barnorm {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }

/// Real 2x2 matrix, row-major: [[a11, a12], [a21, a22]].
struct Mat2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }
  static Mat2 rotation(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c, -s, s, c};
  }
  static constexpr Mat2 from_row_major(const std::array<double, 4>& e) {
    return {e[0], e[1], e[2], e[3]};
  }

  constexpr std::array<double, 4> row_major() const { return {a11, a12, a21, a22}; }
  constexpr double trace() const { return a11 + a22; }
  constexpr double det() const { return a11 * a22 - a12 * a21; }
  constexpr Mat2 transposed() const { return {a11, a21, a12, a22}; }
  constexpr bool is_symmetric() const { return a12 == a21; }
  bool is_finite() const {
    return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a21) &&
           std::isfinite(a22);
  }
  /// Largest absolute entry.
  double max_abs() const {
    return std::fmax(std::fmax(std::fabs(a11), std::fabs(a12)),
                     std::fmax(std::fabs(a21), std::fabs(a22)));
  }

  friend constexpr Vec2 operator*(const Mat2& m, Vec2 v) {
    return {m.a11 * v.x + m.a12 * v.y, m.a21 * v.x + m.a22 * v.y};
  }
  friend constexpr Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a11 * n.a11 + m.a12 * n.a21, m.a11 * n.a12 + m.a12 * n.a22,
            m.a21 * n.a11 + m.a22 * n.a21, m.a21 * n.a12 + m.a22 * n.a22};
  }
  friend constexpr Mat2 operator*(double s, const Mat2& m) {
    return {s * m.a11, s * m.a12, s * m.a21, s * m.a22};
  }
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

}  // namespace barnorm
