#include "sgfem/quadrature.hpp"

#include <numeric>
#include <string>

namespace sgfem {

double QuadRule::total_weight() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

QuadRule element_rule(int order) {
  QuadRule r;
  r.degree = order;
  if (order == 2) {
    constexpr double a = 1.0 / 6.0;
    constexpr double b = 2.0 / 3.0;
    r.points = {Point(a, a), Point(b, a), Point(a, b)};
    r.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    return r;
  }
  if (order == 4) {
    // Dunavant degree-4, six points.
    constexpr double a = 0.445948490915964886318329253883;
    constexpr double b = 0.091576213509770743459571463402;
    constexpr double wa = 0.5 * 0.223381589678011465944827355959;
    constexpr double wb = 0.5 * 0.109951743655321867388505977375;
    r.points = {Point(a, a),           Point(1.0 - 2.0 * a, a), Point(a, 1.0 - 2.0 * a),
                Point(b, b),           Point(1.0 - 2.0 * b, b), Point(b, 1.0 - 2.0 * b)};
    r.weights = {wa, wa, wa, wb, wb, wb};
    return r;
  }
  throw UnsupportedOrder("triangle rule of order " + std::to_string(order) + " is not available");
}

LineRule segment_rule(int order) {
  LineRule r;
  r.degree = order;
  if (order == 3) {
    constexpr double d = 0.288675134594812882254574390251;  // 1/(2 sqrt 3)
    r.points = {0.5 - d, 0.5 + d};
    r.weights = {0.5, 0.5};
    return r;
  }
  if (order == 5) {
    constexpr double d = 0.387298334620741688517926539978;  // sqrt(3/5)/2
    r.points = {0.5 - d, 0.5, 0.5 + d};
    r.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    return r;
  }
  throw UnsupportedOrder("segment rule of order " + std::to_string(order) + " is not available");
}

QuadRule map_rule(const QuadRule& ref, const std::array<Point, 3>& tri) {
  QuadRule out;
  out.degree = ref.degree;
  const double jac = 2.0 * signed_area(tri[0], tri[1], tri[2]);
  const Point e1 = tri[1] - tri[0];
  const Point e2 = tri[2] - tri[0];
  out.points.reserve(ref.size());
  out.weights.reserve(ref.size());
  for (std::size_t q = 0; q < ref.size(); ++q) {
    out.points.push_back(tri[0] + ref.points[q].x() * e1 + ref.points[q].y() * e2);
    out.weights.push_back(ref.weights[q] * jac);
  }
  return out;
}

QuadRule map_rule(const LineRule& ref, const Segment& seg) {
  QuadRule out;
  out.degree = ref.degree;
  const double len = seg.length();
  for (std::size_t q = 0; q < ref.points.size(); ++q) {
    out.points.push_back(seg.a + ref.points[q] * (seg.b - seg.a));
    out.weights.push_back(ref.weights[q] * len);
  }
  return out;
}

SideRules cut_rule(const CutDecomposition& decomposition, int order) {
  const QuadRule ref = element_rule(order);
  SideRules rules;
  rules.minus.degree = rules.plus.degree = order;
  for (const auto& sub : decomposition.sub_triangles) {
    const QuadRule mapped = map_rule(ref, sub.verts);
    QuadRule& target = sub.side == Side::Minus ? rules.minus : rules.plus;
    target.points.insert(target.points.end(), mapped.points.begin(), mapped.points.end());
    target.weights.insert(target.weights.end(), mapped.weights.begin(), mapped.weights.end());
  }
  return rules;
}

}  // namespace sgfem
