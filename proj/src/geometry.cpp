#include "sgfem/geometry.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace sgfem {

namespace {

constexpr double kTieFactor = 1e-12;
constexpr int kEdgeSamples = 8;
constexpr int kMaxQuadrisection = 4;
constexpr int kNewtonMaxIter = 50;
constexpr double kNewtonTol = 1e-12;
constexpr int kCurveSamples = 4096;

double longest_edge(const std::array<Point, 3>& v) {
  return std::max({(v[1] - v[0]).norm(), (v[2] - v[1]).norm(), (v[0] - v[2]).norm()});
}

}  // namespace

LevelSetInterface LevelSetInterface::circle(double radius, Point center) {
  LevelSetInterface s;
  s.kind_ = InterfaceKind::Circle;
  s.radius_ = radius;
  s.center_ = center;
  return s;
}

LevelSetInterface LevelSetInterface::cubic() {
  LevelSetInterface s;
  s.kind_ = InterfaceKind::Cubic;
  auto curve = std::make_shared<std::vector<Point>>();
  for (int i = 0; i <= kCurveSamples; ++i) {
    const double t = -2.0 + 4.0 * i / kCurveSamples;
    curve->emplace_back(t, 3.0 * t * (t - 0.3) * (t - 0.8) + 0.38);
  }
  s.curve_ = std::move(curve);
  return s;
}

LevelSetInterface LevelSetInterface::flower() {
  LevelSetInterface s;
  s.kind_ = InterfaceKind::Flower;
  auto curve = std::make_shared<std::vector<Point>>();
  for (int i = 0; i < kCurveSamples; ++i) {
    const double t = 2.0 * M_PI * i / kCurveSamples;
    const double r = std::pow(0.3 / (1.0 + 0.4 * std::sin(6.0 * t)), 0.25);
    curve->emplace_back(r * std::cos(t), r * std::sin(t));
  }
  s.curve_ = std::move(curve);
  return s;
}

LevelSetInterface LevelSetInterface::half_plane(Point normal, double offset) {
  LevelSetInterface s;
  s.kind_ = InterfaceKind::HalfPlane;
  const double n = normal.norm();
  s.normal_ = normal / n;
  s.offset_ = offset / n;
  return s;
}

std::string LevelSetInterface::name() const {
  switch (kind_) {
    case InterfaceKind::Circle: return "circle";
    case InterfaceKind::Cubic: return "cubic";
    case InterfaceKind::Flower: return "flower";
    case InterfaceKind::HalfPlane: return "half_plane";
  }
  return "unknown";
}

template <class T>
T LevelSetInterface::eval(const T& x, const T& y) const {
  switch (kind_) {
    case InterfaceKind::Circle: {
      const T dx = x - T(center_.x());
      const T dy = y - T(center_.y());
      return dx * dx + dy * dy - T(radius_ * radius_);
    }
    case InterfaceKind::Cubic:
      // x2 - 3 x1 (x1 - 0.3)(x1 - 0.8) - 0.38
      return y - T(3.0) * x * (x - T(0.3)) * (x - T(0.8)) - T(0.38);
    case InterfaceKind::Flower: {
      // r^4 (1 + 0.4 sin 6t) - 0.3 = rho^2 + 0.4 Im(z^6) / rho - 0.3, rho = r^2
      const T rho = x * x + y * y;
      if (value_of(rho) == 0.0) return T(-0.3);
      const T x2 = x * x;
      const T y2 = y * y;
      const T im6 = x * y * (T(6.0) * x2 * x2 - T(20.0) * x2 * y2 + T(6.0) * y2 * y2);
      return rho * rho + T(0.4) * im6 / rho - T(0.3);
    }
    case InterfaceKind::HalfPlane:
      return T(normal_.x()) * x + T(normal_.y()) * y - T(offset_);
  }
  return T(0.0);
}

double LevelSetInterface::phi(const Point& x) const { return eval<double>(x.x(), x.y()); }

LevelSetSample LevelSetInterface::sample(const Point& x) const {
  const Jet2 j = eval<Jet2>(Jet2::var_x(x.x()), Jet2::var_y(x.y()));
  LevelSetSample s;
  s.value = j.v;
  s.grad = Point(j.dx, j.dy);
  s.hess << j.dxx, j.dxy, j.dxy, j.dyy;
  return s;
}

Point LevelSetInterface::grad_phi(const Point& x) const { return sample(x).grad; }

Point LevelSetInterface::normal(const Point& x) const {
  const Point g = grad_phi(x);
  const double n = g.norm();
  return n > 0.0 ? Point(g / n) : Point(Point::Zero());
}

std::optional<double> LevelSetInterface::analytic_distance(const Point& x) const {
  switch (kind_) {
    case InterfaceKind::Circle: return std::abs((x - center_).norm() - radius_);
    case InterfaceKind::HalfPlane: return std::abs(normal_.dot(x) - offset_);
    default: return std::nullopt;
  }
}

std::optional<Point> LevelSetInterface::closest_point(const Point& x, Point p,
                                                     const LevelSetSample& at_p) const {
  // Stationary point of |p - x|^2 / 2 + lambda phi(p).
  const double g0 = at_p.grad.squaredNorm();
  double lambda = g0 > 0.0 ? -(x - p).dot(at_p.grad) / g0 : 0.0;
  for (int it = 0; it < kNewtonMaxIter; ++it) {
    const LevelSetSample s = it == 0 ? at_p : sample(p);
    const double gnorm = s.grad.norm();
    const Point f1 = p - x + lambda * s.grad;
    const double f2 = s.value;
    if (std::abs(f2) <= kNewtonTol * gnorm && f1.norm() <= kNewtonTol) return p;
    Eigen::Matrix3d jac;
    jac.topLeftCorner<2, 2>() = Eigen::Matrix2d::Identity() + lambda * s.hess;
    jac.block<2, 1>(0, 2) = s.grad;
    jac.block<1, 2>(2, 0) = s.grad.transpose();
    jac(2, 2) = 0.0;
    const Eigen::Vector3d rhs(-f1.x(), -f1.y(), -f2);
    const Eigen::FullPivLU<Eigen::Matrix3d> lu(jac);
    if (!lu.isInvertible()) return std::nullopt;
    const Eigen::Vector3d step = lu.solve(rhs);
    if (!step.allFinite()) return std::nullopt;
    p += step.head<2>();
    lambda += step(2);
    if (step.head<2>().norm() <= kNewtonTol * (1.0 + p.norm()) && std::abs(sample(p).value) <= kNewtonTol) return p;
  }
  return std::nullopt;
}

DistanceSample LevelSetInterface::signed_distance(const Point& x) const {
  DistanceSample out;
  if (kind_ == InterfaceKind::Circle) {
    const Point d = x - center_;
    const double r = d.norm();
    out.value = r - radius_;
    out.grad = r > 0.0 ? Point(d / r) : Point(1.0, 0.0);
    return out;
  }
  if (kind_ == InterfaceKind::HalfPlane) {
    out.value = normal_.dot(x) - offset_;
    out.grad = normal_;
    return out;
  }

  const LevelSetSample at_x = sample(x);
  const double sign = at_x.value > 0.0 ? 1.0 : -1.0;

  // Newton from x itself and from the nearest curve sample; keep the closer foot point.
  std::optional<Point> best;
  auto consider = [&](std::optional<Point> p) {
    if (p && (!best || (*p - x).norm() < (*best - x).norm())) best = p;
  };
  consider(closest_point(x, x, at_x));
  if (curve_) {
    const Point* seed = &curve_->front();
    for (const Point& c : *curve_) {
      if ((c - x).squaredNorm() < (*seed - x).squaredNorm()) seed = &c;
    }
    consider(closest_point(x, *seed, sample(*seed)));
  }

  if (best) {
    const Point g = grad_phi(*best);
    const double gn = g.norm();
    if (gn > 0.0) {
      out.value = sign * (x - *best).norm();
      out.grad = g / gn;
      return out;
    }
  }

  const double gn = at_x.grad.norm();
  if (!(gn > 1e-14)) {
    throw NonConvergence("closest-point iteration failed and grad phi vanishes at (" +
                         std::to_string(x.x()) + ", " + std::to_string(x.y()) + ")");
  }
  fallbacks_->fetch_add(1);
  out.value = at_x.value / gn;
  out.grad = at_x.grad / gn;
  out.fallback = true;
  return out;
}

Side vertex_side(const LevelSetInterface& iface, const Point& v, double h) {
  const double f = iface.phi(v);
  if (std::abs(f) < kTieFactor * h) return Side::Minus;
  return f < 0.0 ? Side::Minus : Side::Plus;
}

Side point_side(const LevelSetInterface& iface, const Point& x) {
  return iface.phi(x) <= 0.0 ? Side::Minus : Side::Plus;
}

double one_sided_distance(const LevelSetInterface& iface, const Point& x) {
  if (iface.phi(x) <= 0.0) return 0.0;
  if (auto d = iface.analytic_distance(x)) return *d;
  return std::abs(iface.signed_distance(x).value);
}

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

double SubTriangle::area() const { return signed_area(verts[0], verts[1], verts[2]); }

namespace {

// Number of sign changes along the closed edge a-b, sampled uniformly.
int edge_sign_changes(const LevelSetInterface& iface, const Point& a, const Point& b, double h) {
  int changes = 0;
  Side prev = vertex_side(iface, a, h);
  for (int k = 1; k <= kEdgeSamples; ++k) {
    const Point x = a + (static_cast<double>(k) / kEdgeSamples) * (b - a);
    const Side s = vertex_side(iface, x, h);
    if (s != prev) ++changes;
    prev = s;
  }
  return changes;
}

// Root of phi on the segment a-b where the tie-rule sides of a and b differ.
// The edge is processed in lexicographic endpoint order so that the two
// elements sharing it obtain the bit-identical root.
Point edge_root(const LevelSetInterface& iface, Point a, Point b, double h) {
  if (b.x() < a.x() || (b.x() == a.x() && b.y() < a.y())) std::swap(a, b);
  const double tie = kTieFactor * h;
  const double fa = iface.phi(a);
  const double fb = iface.phi(b);
  if (std::abs(fa) < tie) return a;
  if (std::abs(fb) < tie) return b;

  const Point d = b - a;
  double lo = 0.0, hi = 1.0;
  const bool increasing = fa < fb;
  double t = fa / (fa - fb);
  for (int it = 0; it < 200; ++it) {
    const Point x = a + t * d;
    const LevelSetSample s = iface.sample(x);
    if (std::abs(s.value) <= 1e-12 * std::max(s.grad.norm(), 1e-300) * h) return x;
    if ((s.value < 0.0) == increasing) {
      lo = t;
    } else {
      hi = t;
    }
    if (hi - lo <= 1e-16) return x;
    const double slope = s.grad.dot(d);
    double next = slope != 0.0 ? t - s.value / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  return a + t * d;
}

void push_piece(CutDecomposition& out, const Point& a, const Point& b, const Point& c, Side side,
                double parent_area) {
  const double area = signed_area(a, b, c);
  if (area <= 1e-16 * parent_area) return;
  out.sub_triangles.push_back(SubTriangle{{a, b, c}, side});
}

// Straight split using vertex sides only.
void linear_split(const LevelSetInterface& iface, const std::array<Point, 3>& v,
                  const std::array<Side, 3>& s, double h, double parent_area, CutDecomposition& out) {
  if (s[0] == s[1] && s[1] == s[2]) {
    push_piece(out, v[0], v[1], v[2], s[0], parent_area);
    return;
  }
  int lone = 0;
  if (s[1] != s[0] && s[1] != s[2]) lone = 1;
  if (s[2] != s[0] && s[2] != s[1]) lone = 2;
  const int j = (lone + 1) % 3;
  const int l = (lone + 2) % 3;
  const Point r1 = edge_root(iface, v[lone], v[j], h);
  const Point r2 = edge_root(iface, v[lone], v[l], h);
  push_piece(out, v[lone], r1, r2, s[lone], parent_area);
  push_piece(out, r1, v[j], v[l], s[j], parent_area);
  push_piece(out, r1, v[l], r2, s[j], parent_area);
  if ((r2 - r1).norm() > 0.0) out.segments.push_back(Segment{r1, r2});
}

void decompose_rec(const LevelSetInterface& iface, const std::array<Point, 3>& v, double h,
                   double root_area, int depth, CutDecomposition& out) {
  const std::array<Side, 3> s = {vertex_side(iface, v[0], h), vertex_side(iface, v[1], h),
                                 vertex_side(iface, v[2], h)};
  bool simple = true;
  for (int e = 0; e < 3 && simple; ++e) {
    const int a = e;
    const int b = (e + 1) % 3;
    const int changes = edge_sign_changes(iface, v[a], v[b], h);
    const int expected = s[a] != s[b] ? 1 : 0;
    if (changes != expected) simple = false;
  }
  if (simple || depth >= kMaxQuadrisection) {
    linear_split(iface, v, s, h, root_area, out);
    return;
  }
  const Point m01 = 0.5 * (v[0] + v[1]);
  const Point m12 = 0.5 * (v[1] + v[2]);
  const Point m20 = 0.5 * (v[2] + v[0]);
  decompose_rec(iface, {v[0], m01, m20}, h, root_area, depth + 1, out);
  decompose_rec(iface, {m01, v[1], m12}, h, root_area, depth + 1, out);
  decompose_rec(iface, {m20, m12, v[2]}, h, root_area, depth + 1, out);
  decompose_rec(iface, {m01, m12, m20}, h, root_area, depth + 1, out);
}

}  // namespace

ElementTag classify_element(const LevelSetInterface& iface, const std::array<Point, 3>& verts) {
  const double h = longest_edge(verts);
  const Side s0 = vertex_side(iface, verts[0], h);
  const Side s1 = vertex_side(iface, verts[1], h);
  const Side s2 = vertex_side(iface, verts[2], h);
  if (s0 != s1 || s1 != s2) return ElementTag::Cut;
  for (int e = 0; e < 3; ++e) {
    if (edge_sign_changes(iface, verts[e], verts[(e + 1) % 3], h) != 0) return ElementTag::Cut;
  }
  return s0 == Side::Minus ? ElementTag::InsideMinus : ElementTag::InsidePlus;
}

CutDecomposition decompose_cut_element(const LevelSetInterface& iface,
                                       const std::array<Point, 3>& verts) {
  const double h = longest_edge(verts);
  const double area = signed_area(verts[0], verts[1], verts[2]);
  if (!(area > 0.0)) throw DegenerateCut("element is degenerate or clockwise");
  CutDecomposition out;
  decompose_rec(iface, verts, h, area, 0, out);
  return out;
}

}  // namespace sgfem
