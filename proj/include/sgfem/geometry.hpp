#pragma once

#include "sgfem/common.hpp"
#include "sgfem/jet.hpp"

#include <array>
#include <atomic>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sgfem {

enum class InterfaceKind { Circle, Cubic, Flower, HalfPlane };

/// Level-set value with first and second derivatives at one point.
struct LevelSetSample {
  double value = 0.0;
  Point grad = Point::Zero();
  Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
};

/// Result of a (signed) distance query.
struct DistanceSample {
  double value = 0.0;      // signed distance: positive on the plus side
  Point grad = Point::Zero();  // gradient of the signed distance (unit normal at the foot point)
  bool fallback = false;   // first-order |phi|/|grad phi| estimate was used
};

/// Interface Gamma = {phi = 0}; phi < 0 is the minus subdomain.
class LevelSetInterface {
 public:
  static LevelSetInterface circle(double radius, Point center = Point::Zero());
  /// x2 - 3 x1 (x1 - 0.3)(x1 - 0.8) - 0.38 = 0
  static LevelSetInterface cubic();
  /// r^4 (1 + 0.4 sin 6 theta) - 0.3 = 0
  static LevelSetInterface flower();
  /// normal . x - offset = 0 with |normal| = 1.
  static LevelSetInterface half_plane(Point normal, double offset);

  InterfaceKind kind() const { return kind_; }
  std::string name() const;

  double phi(const Point& x) const;
  Point grad_phi(const Point& x) const;
  LevelSetSample sample(const Point& x) const;
  /// Unit normal grad phi / |grad phi| (points into the plus side).
  Point normal(const Point& x) const;

  /// Exact dist(x, Gamma) when a closed form exists (circle, half-plane).
  std::optional<double> analytic_distance(const Point& x) const;

  /// Signed distance with gradient. Closed form where available, otherwise
  /// closest-point Newton on the Lagrangian system started from x and from
  /// the nearest of a dense set of curve samples; falls back to the
  /// first-order estimate when Newton stalls. Throws NonConvergence only
  /// when the level set is degenerate (vanishing gradient) at the point.
  DistanceSample signed_distance(const Point& x) const;

  /// Number of first-order fallbacks taken so far by signed_distance.
  long fallback_count() const { return fallbacks_->load(); }

  double radius() const { return radius_; }

 private:
  template <class T>
  T eval(const T& x, const T& y) const;
  std::optional<Point> closest_point(const Point& x, Point p, const LevelSetSample& at_p) const;

  InterfaceKind kind_ = InterfaceKind::Circle;
  Point center_ = Point::Zero();
  double radius_ = 0.0;
  Point normal_ = Point(1.0, 0.0);
  double offset_ = 0.0;
  // Dense samples of Gamma seeding the closest-point search (generic curves only).
  std::shared_ptr<const std::vector<Point>> curve_;
  std::shared_ptr<std::atomic<long>> fallbacks_ = std::make_shared<std::atomic<long>>(0);
};

/// Classification tag of a mesh element with respect to Gamma.
enum class ElementTag { InsideMinus, InsidePlus, Cut };

/// Vertex sign with the tie rule: |phi| < 1e-12 h counts as minus.
Side vertex_side(const LevelSetInterface& iface, const Point& v, double h);

/// Minus or plus by the sign of phi at x (phi <= 0 is minus).
Side point_side(const LevelSetInterface& iface, const Point& x);

/// Cut iff phi takes both signs on the closed element: vertex signs differ or
/// a sampled edge changes sign between equal-signed vertices.
ElementTag classify_element(const LevelSetInterface& iface, const std::array<Point, 3>& verts);

/// D~(x): 0 on the minus side, dist(x, Gamma) on the plus side.
double one_sided_distance(const LevelSetInterface& iface, const Point& x);

struct SubTriangle {
  std::array<Point, 3> verts;
  Side side = Side::Minus;
  double area() const;
};

struct Segment {
  Point a, b;
  double length() const { return (b - a).norm(); }
};

struct CutDecomposition {
  std::vector<SubTriangle> sub_triangles;
  std::vector<Segment> segments;
};

/// Splits a cut element into side-tagged sub-triangles and straight interface
/// segments. Elements whose edges carry more than one root are quadrisected
/// (up to depth 4) before the straight-cut split.
CutDecomposition decompose_cut_element(const LevelSetInterface& iface,
                                       const std::array<Point, 3>& verts);

/// Signed area of a triangle (positive for counter-clockwise vertices).
double signed_area(const Point& a, const Point& b, const Point& c);

}  // namespace sgfem
