#include "sgfem/mesh.hpp"

#include "sgfem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace sgfem {

TriMesh::TriMesh(int n) : n_(n) {
  if (n < 2) throw Error("mesh needs N >= 2, got " + std::to_string(n));
  const double h = 2.0 / n;
  nodes_.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  is_boundary_.assign(static_cast<std::size_t>(n + 1) * (n + 1), 0);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      // Exact endpoints so that boundary coordinates are exactly +-1.
      const double x = i == n ? 1.0 : -1.0 + i * h;
      const double y = j == n ? 1.0 : -1.0 + j * h;
      nodes_.emplace_back(x, y);
      if (i == 0 || j == 0 || i == n || j == n) {
        const int id = node_index(i, j);
        is_boundary_[id] = 1;
        boundary_nodes_.push_back(id);
      }
    }
  }
  elements_.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int bl = node_index(i, j);
      const int br = node_index(i + 1, j);
      const int tl = node_index(i, j + 1);
      const int tr = node_index(i + 1, j + 1);
      elements_.push_back({bl, br, tr});
      elements_.push_back({bl, tr, tl});
    }
  }
}

std::array<Point, 3> TriMesh::element_vertices(int e) const {
  const auto& el = elements_[e];
  return {nodes_[el[0]], nodes_[el[1]], nodes_[el[2]]};
}

double TriMesh::element_area(int e) const {
  const auto v = element_vertices(e);
  return signed_area(v[0], v[1], v[2]);
}

std::vector<std::array<int, 2>> TriMesh::boundary_edges() const {
  std::vector<std::array<int, 2>> edges;
  for (int i = 0; i < n_; ++i) {
    edges.push_back({node_index(i, 0), node_index(i + 1, 0)});
    edges.push_back({node_index(i, n_), node_index(i + 1, n_)});
    edges.push_back({node_index(0, i), node_index(0, i + 1)});
    edges.push_back({node_index(n_, i), node_index(n_, i + 1)});
  }
  return edges;
}

void TriMesh::dump(std::ostream& os) const {
  os.precision(17);
  for (int i = 0; i < num_nodes(); ++i) {
    os << "node " << i << ' ' << nodes_[i].x() << ' ' << nodes_[i].y() << '\n';
  }
  for (int e = 0; e < num_elements(); ++e) {
    os << "element " << e << ' ' << elements_[e][0] << ' ' << elements_[e][1] << ' '
       << elements_[e][2] << '\n';
  }
}

TriMesh build_uniform_mesh(int n) { return TriMesh(n); }

std::array<double, 3> barycentric(const TriMesh& mesh, int e, const Point& x) {
  const auto v = mesh.element_vertices(e);
  const double area = signed_area(v[0], v[1], v[2]);
  const double l1 = signed_area(v[0], x, v[2]) / area;
  const double l2 = signed_area(v[0], v[1], x) / area;
  return {1.0 - l1 - l2, l1, l2};
}

PointLocation locate_point(const TriMesh& mesh, const Point& x) {
  if (!(std::abs(x.x()) <= 1.0 && std::abs(x.y()) <= 1.0)) {
    throw OutOfDomain("point (" + std::to_string(x.x()) + ", " + std::to_string(x.y()) +
                      ") lies outside the closed domain");
  }
  const int n = mesh.grid_count();
  const double h = mesh.h();
  const int ci = std::clamp(static_cast<int>(std::floor((x.x() + 1.0) / h)), 0, n - 1);
  const int cj = std::clamp(static_cast<int>(std::floor((x.y() + 1.0) / h)), 0, n - 1);

  // Candidates from the neighbouring squares so that edge ties resolve to the
  // lowest element index.
  constexpr double eps = 1e-13;
  PointLocation best;
  for (int j = std::max(cj - 1, 0); j <= std::min(cj + 1, n - 1); ++j) {
    for (int i = std::max(ci - 1, 0); i <= std::min(ci + 1, n - 1); ++i) {
      for (int half = 0; half < 2; ++half) {
        const int e = mesh.element_index(i, j, half);
        if (best.element >= 0 && e >= best.element) continue;
        const auto b = barycentric(mesh, e, x);
        if (b[0] >= -eps && b[1] >= -eps && b[2] >= -eps) {
          best.element = e;
          best.barycentric = b;
        }
      }
    }
  }
  if (best.element < 0) throw OutOfDomain("point location failed");
  auto& b = best.barycentric;
  for (double& c : b) c = std::clamp(c, 0.0, 1.0);
  const double s = b[0] + b[1] + b[2];
  for (double& c : b) c /= s;
  return best;
}

}  // namespace sgfem
