#pragma once

#include <cmath>

namespace sgfem {

// Second-order forward-mode jet in two variables: value, gradient and
// (symmetric) Hessian. Enough arithmetic for polynomial/rational level sets.
struct Jet2 {
  double v = 0.0;
  double dx = 0.0, dy = 0.0;
  double dxx = 0.0, dxy = 0.0, dyy = 0.0;

  constexpr Jet2() = default;
  constexpr Jet2(double c) : v(c) {}  // NOLINT: constants promote implicitly
  constexpr Jet2(double v_, double dx_, double dy_, double dxx_, double dxy_, double dyy_)
      : v(v_), dx(dx_), dy(dy_), dxx(dxx_), dxy(dxy_), dyy(dyy_) {}

  static constexpr Jet2 var_x(double x) { return {x, 1.0, 0.0, 0.0, 0.0, 0.0}; }
  static constexpr Jet2 var_y(double y) { return {y, 0.0, 1.0, 0.0, 0.0, 0.0}; }
};

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.v + b.v, a.dx + b.dx, a.dy + b.dy, a.dxx + b.dxx, a.dxy + b.dxy, a.dyy + b.dyy};
}
inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.v - b.v, a.dx - b.dx, a.dy - b.dy, a.dxx - b.dxx, a.dxy - b.dxy, a.dyy - b.dyy};
}
inline Jet2 operator-(const Jet2& a) { return {-a.v, -a.dx, -a.dy, -a.dxx, -a.dxy, -a.dyy}; }

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.v * b.v,
          a.dx * b.v + a.v * b.dx,
          a.dy * b.v + a.v * b.dy,
          a.dxx * b.v + 2.0 * a.dx * b.dx + a.v * b.dxx,
          a.dxy * b.v + a.dx * b.dy + a.dy * b.dx + a.v * b.dxy,
          a.dyy * b.v + 2.0 * a.dy * b.dy + a.v * b.dyy};
}

// 1/b via the chain rule: (1/b)' = -b'/b^2, (1/b)'' = 2 b'b'/b^3 - b''/b^2.
inline Jet2 reciprocal(const Jet2& b) {
  const double r = 1.0 / b.v;
  const double r2 = r * r;
  const double r3 = r2 * r;
  return {r,
          -b.dx * r2,
          -b.dy * r2,
          2.0 * b.dx * b.dx * r3 - b.dxx * r2,
          2.0 * b.dx * b.dy * r3 - b.dxy * r2,
          2.0 * b.dy * b.dy * r3 - b.dyy * r2};
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }

inline double value_of(double x) { return x; }
inline double value_of(const Jet2& x) { return x.v; }

}  // namespace sgfem
