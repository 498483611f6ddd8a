#pragma once

#include "sgfem/common.hpp"
#include "sgfem/geometry.hpp"

#include <array>
#include <vector>

namespace sgfem {

/// Triangle rule: points in reference coordinates (xi, eta) on the triangle
/// (0,0),(1,0),(0,1), or physical points once mapped. Weights sum to the
/// measure of the integration domain.
struct QuadRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
  double total_weight() const;
};

/// Gauss rule on [0, 1].
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Reference-triangle rule exact for total degree `order` (2 or 4).
QuadRule element_rule(int order);

/// Gauss rule on [0,1] exact to `order` (3 or 5).
LineRule segment_rule(int order);

/// Two-point Gauss nodes in time on an interval, as fractions of its length.
/// Weights are 1/2 each (sum to one).
inline constexpr std::array<double, 2> kTimeGaussFractions = {0.21132486540518711775,
                                                              0.78867513459481288225};
inline constexpr std::array<double, 2> kTimeGaussWeights = {0.5, 0.5};

/// Maps a reference rule onto the physical triangle (a, b, c).
QuadRule map_rule(const QuadRule& ref, const std::array<Point, 3>& tri);

/// Maps a line rule onto a straight segment (physical points, weights scaled by length).
QuadRule map_rule(const LineRule& ref, const Segment& seg);

struct SideRules {
  QuadRule minus;
  QuadRule plus;
  const QuadRule& on(Side s) const { return s == Side::Minus ? minus : plus; }
};

/// Composite rule per side built from the sub-triangles of a decomposition.
SideRules cut_rule(const CutDecomposition& decomposition, int order);

}  // namespace sgfem
