#pragma once

#include "sgfem/common.hpp"

#include <array>
#include <cmath>
#include <iosfwd>
#include <vector>

namespace sgfem {

/// Uniform N x N triangulation of (-1,1)^2. Every grid square is split along
/// its bottom-left to top-right diagonal; all elements are counter-clockwise.
class TriMesh {
 public:
  explicit TriMesh(int n);

  int grid_count() const { return n_; }
  /// Grid spacing 2/N (the legs of every right triangle).
  double h() const { return 2.0 / n_; }
  double longest_edge() const { return std::sqrt(2.0) * h(); }

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_elements() const { return static_cast<int>(elements_.size()); }

  const Point& node(int i) const { return nodes_[i]; }
  const std::array<int, 3>& element(int e) const { return elements_[e]; }
  std::array<Point, 3> element_vertices(int e) const;
  double element_area(int e) const;

  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<std::array<int, 3>>& elements() const { return elements_; }
  const std::vector<int>& boundary_nodes() const { return boundary_nodes_; }
  bool is_boundary_node(int i) const { return is_boundary_[i]; }

  /// Element index of the grid square (i, j), lower (0) or upper (1) half.
  int element_index(int i, int j, int half) const { return 2 * (j * n_ + i) + half; }
  int node_index(int i, int j) const { return j * (n_ + 1) + i; }

  /// Boundary edges as node pairs.
  std::vector<std::array<int, 2>> boundary_edges() const;

  /// Plain-text dump: "node i x y" and "element e a b c" records.
  void dump(std::ostream& os) const;

 private:
  int n_;
  std::vector<Point> nodes_;
  std::vector<std::array<int, 3>> elements_;
  std::vector<int> boundary_nodes_;
  std::vector<char> is_boundary_;
};

TriMesh build_uniform_mesh(int n);

struct PointLocation {
  int element = -1;
  std::array<double, 3> barycentric{};
};

/// Element containing x and its barycentric coordinates. Ties on shared
/// edges go to the lowest element index. Throws OutOfDomain outside [-1,1]^2.
PointLocation locate_point(const TriMesh& mesh, const Point& x);

/// Barycentric coordinates of x with respect to element e (not clamped).
std::array<double, 3> barycentric(const TriMesh& mesh, int e, const Point& x);

}  // namespace sgfem
