#include "doctest.h"
#include "oracles.hpp"

#include "sgfem/geometry.hpp"
#include "sgfem/mesh.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <utility>

using namespace sgfem;

TEST_SUITE("mesh") {

TEST_CASE("node, element and boundary counts") {
  const TriMesh m2(2);
  CHECK(m2.num_nodes() == 9);
  CHECK(m2.num_elements() == 8);
  CHECK(m2.boundary_nodes().size() == 8);
  const TriMesh m8 = build_uniform_mesh(8);
  CHECK(m8.num_nodes() == 81);
  CHECK(m8.num_elements() == 128);
  CHECK(m8.h() == 0.25);
  CHECK_THROWS(TriMesh(1));
}

TEST_CASE("element areas add up to the square") {
  for (int n : {2, 3, 8, 17, 64}) {
    const TriMesh mesh(n);
    double area = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) area += mesh.element_area(e);
    CHECK(std::abs(area - 4.0) <= 1e-14 * 4.0 * n);
  }
}

TEST_CASE("orientation and equal areas") {
  const TriMesh mesh(10);
  const double ref = mesh.element_area(0);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto v = mesh.element_vertices(e);
    CHECK(signed_area(v[0], v[1], v[2]) > 0.0);
    CHECK(signed_area(v[0], v[1], v[2]) == doctest::Approx(ref).epsilon(1e-13));
  }
}

TEST_CASE("edge incidence is one on the boundary and two inside") {
  const TriMesh mesh(7);
  std::map<std::pair<int, int>, int> count;
  for (const auto& el : mesh.elements()) {
    for (int k = 0; k < 3; ++k) {
      int a = el[k], b = el[(k + 1) % 3];
      count[{std::min(a, b), std::max(a, b)}]++;
    }
  }
  int boundary = 0;
  for (const auto& [edge, c] : count) {
    const Point& a = mesh.node(edge.first);
    const Point& b = mesh.node(edge.second);
    const bool on_boundary = (std::abs(a.x()) == 1.0 && a.x() == b.x()) || (std::abs(a.y()) == 1.0 && a.y() == b.y());
    CHECK(c == (on_boundary ? 1 : 2));
    boundary += on_boundary;
  }
  CHECK(boundary == 4 * 7);
  CHECK(mesh.boundary_edges().size() == 4 * 7u);
}

TEST_CASE("boundary nodes are the nodes with max-norm one") {
  const TriMesh mesh(6);
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    CHECK(mesh.is_boundary_node(i) == (mesh.node(i).cwiseAbs().maxCoeff() == 1.0));
  }
}

TEST_CASE("locating points") {
  const TriMesh mesh(8);
  const auto corner = locate_point(mesh, Point(-1.0, -1.0));
  CHECK(corner.element == 0);
  std::array<double, 3> sorted = corner.barycentric;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted[2] == doctest::Approx(1.0));
  CHECK(sorted[0] == doctest::Approx(0.0));

  const int e = mesh.element_index(3, 5, 1);
  const auto v = mesh.element_vertices(e);
  const auto at_centroid = locate_point(mesh, (v[0] + v[1] + v[2]) / 3.0);
  CHECK(at_centroid.element == e);
  for (double b : at_centroid.barycentric) CHECK(b == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  CHECK_THROWS_AS(locate_point(mesh, Point(1.2, 0.0)), OutOfDomain);
  CHECK_THROWS_AS(locate_point(mesh, Point(0.0, -1.0 - 1e-9)), OutOfDomain);
}

TEST_CASE("barycentric round trip") {
  const TriMesh mesh(16);
  oracle::Lcg rng(5);
  for (int i = 0; i < 1000; ++i) {
    const Point x(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const auto loc = locate_point(mesh, x);
    const auto v = mesh.element_vertices(loc.element);
    Point back = Point::Zero();
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) {
      CHECK(loc.barycentric[k] >= 0.0);
      CHECK(loc.barycentric[k] <= 1.0);
      back += loc.barycentric[k] * v[k];
      sum += loc.barycentric[k];
    }
    CHECK(std::abs(sum - 1.0) <= 1e-14);
    CHECK((back - x).norm() <= 1e-14);
  }
}

TEST_CASE("shared edges resolve to the lowest element index") {
  const TriMesh mesh(4);
  // Point on the diagonal of square (1, 1): shared by its lower and upper halves.
  const Point mid = 0.5 * (mesh.node(mesh.node_index(1, 1)) + mesh.node(mesh.node_index(2, 2)));
  CHECK(locate_point(mesh, mid).element == mesh.element_index(1, 1, 0));
}

TEST_CASE("dump writes one record per node and element") {
  const TriMesh mesh(3);
  std::ostringstream os;
  mesh.dump(os);
  std::istringstream is(os.str());
  std::string line;
  int nodes = 0, elements = 0;
  while (std::getline(is, line)) {
    nodes += line.rfind("node ", 0) == 0;
    elements += line.rfind("element ", 0) == 0;
  }
  CHECK(nodes == 16);
  CHECK(elements == 18);
}

}  // TEST_SUITE
