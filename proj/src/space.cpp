#include "sgfem/space.hpp"

#include "sgfem/parallel.hpp"

#include <algorithm>
#include <set>

namespace sgfem {

std::array<Point, 3> hat_gradients(const std::array<Point, 3>& v) {
  const double a2 = 2.0 * signed_area(v[0], v[1], v[2]);
  return {Point((v[1].y() - v[2].y()) / a2, (v[2].x() - v[1].x()) / a2),
          Point((v[2].y() - v[0].y()) / a2, (v[0].x() - v[2].x()) / a2),
          Point((v[0].y() - v[1].y()) / a2, (v[1].x() - v[0].x()) / a2)};
}

SgfemSpace::SgfemSpace(std::shared_ptr<const TriMesh> mesh, LevelSetInterface iface)
    : mesh_(std::move(mesh)), iface_(std::move(iface)) {
  const TriMesh& m = *mesh_;
  const int ne = m.num_elements();
  const int nn = m.num_nodes();
  const double h = m.longest_edge();

  tags_.resize(ne);
  parallel_for(ne, [&](int e) { tags_[e] = classify_element(iface_, m.element_vertices(e)); });

  cut_slot_.assign(ne, -1);
  for (int e = 0; e < ne; ++e) {
    if (tags_[e] == ElementTag::Cut) {
      cut_slot_[e] = static_cast<int>(cut_elements_.size());
      cut_elements_.push_back(e);
    }
  }
  decompositions_.resize(cut_elements_.size());
  parallel_for(static_cast<int>(cut_elements_.size()), [&](int k) {
    decompositions_[k] = decompose_cut_element(iface_, m.element_vertices(cut_elements_[k]));
  });

  std::vector<char> enriched(nn, 0);
  for (int e : cut_elements_) {
    for (int v : m.element(e)) enriched[v] = 1;
  }
  enr_dof_.assign(nn, -1);
  for (int i = 0; i < nn; ++i) {
    if (enriched[i]) {
      enr_dof_[i] = nn + static_cast<int>(enr_nodes_.size());
      enr_nodes_.push_back(i);
    }
  }

  nodal_distance_.assign(nn, 0.0);
  node_side_.assign(nn, Side::Minus);
  parallel_for(nn, [&](int i) {
    node_side_[i] = vertex_side(iface_, m.node(i), h);
    if (node_side_[i] == Side::Plus) {
      nodal_distance_[i] = std::abs(iface_.signed_distance(m.node(i)).value);
    }
  });

  is_constrained_.assign(num_dofs(), 0);
  for (int b : m.boundary_nodes()) {
    is_constrained_[b] = 1;
    if (enr_dof_[b] >= 0) is_constrained_[enr_dof_[b]] = 1;
  }
  for (int d = 0; d < num_dofs(); ++d) {
    if (is_constrained_[d]) constrained_.push_back(d);
  }
}

const CutDecomposition* SgfemSpace::decomposition(int e) const {
  const int slot = cut_slot_[e];
  return slot >= 0 ? &decompositions_[slot] : nullptr;
}

bool SgfemSpace::element_enriched(int e) const {
  for (int v : mesh_->element(e)) {
    if (enr_dof_[v] >= 0) return true;
  }
  return false;
}

BasisEval SgfemSpace::eval_basis(int e, const Point& ref, std::optional<Side> side) const {
  const auto v = mesh_->element_vertices(e);
  const Point x = v[0] + ref.x() * (v[1] - v[0]) + ref.y() * (v[2] - v[0]);
  return eval_basis_physical(e, x, side);
}

BasisEval SgfemSpace::eval_basis_physical(int e, const Point& x, std::optional<Side> side) const {
  const auto& el = mesh_->element(e);
  const auto v = mesh_->element_vertices(e);
  const auto grads = hat_gradients(v);
  const double area = signed_area(v[0], v[1], v[2]);
  const std::array<double, 3> lam = {signed_area(x, v[1], v[2]) / area,
                                     signed_area(v[0], x, v[2]) / area,
                                     signed_area(v[0], v[1], x) / area};
  BasisEval b;
  for (int k = 0; k < 3; ++k) {
    b.dofs[k] = el[k];
    b.values[k] = lam[k];
    b.grads[k] = grads[k];
  }
  b.count = 3;
  if (!element_enriched(e)) return b;

  // D~ at x and its linear interpolant.
  const Side s = side.value_or(point_side(iface_, x));
  double dist = 0.0;
  Point dist_grad = Point::Zero();
  if (s == Side::Plus) {
    const DistanceSample ds = iface_.signed_distance(x);
    dist = ds.value;
    dist_grad = ds.grad;
  }
  double interp = 0.0;
  Point interp_grad = Point::Zero();
  for (int k = 0; k < 3; ++k) {
    interp += lam[k] * nodal_distance_[el[k]];
    interp_grad += grads[k] * nodal_distance_[el[k]];
  }
  const double bubble = dist - interp;
  const Point bubble_grad = dist_grad - interp_grad;
  for (int k = 0; k < 3; ++k) {
    const int dof = enr_dof_[el[k]];
    if (dof < 0) continue;
    b.dofs[b.count] = dof;
    b.values[b.count] = lam[k] * bubble;
    b.grads[b.count] = grads[k] * bubble + lam[k] * bubble_grad;
    ++b.count;
  }
  return b;
}

double SgfemSpace::evaluate(const Vector& coeffs, const Point& x) const {
  const PointLocation loc = locate_point(*mesh_, x);
  return eval_basis_physical(loc.element, x).value_of(coeffs);
}

std::shared_ptr<const SgfemSpace> build_space(std::shared_ptr<const TriMesh> mesh, LevelSetInterface iface) {
  return std::make_shared<const SgfemSpace>(std::move(mesh), std::move(iface));
}

ConstraintRecord apply_dirichlet(const SgfemSpace& space, const std::function<double(int node)>& boundary_value) {
  const TriMesh& m = space.mesh();
  const double h = m.longest_edge();
  ConstraintRecord rec;
  std::set<int> pinned_enr;
  for (int b : m.boundary_nodes()) {
    if (space.enrichment_dof(b) >= 0) pinned_enr.insert(space.enrichment_dof(b));
  }
  // Hats restricted to a boundary edge are nonzero only at its endpoints, so
  // an enrichment function touching a cut boundary edge belongs to one of them.
  std::set<int> extra;
  for (const auto& edge : m.boundary_edges()) {
    const Side s0 = vertex_side(space.interface(), m.node(edge[0]), h);
    const Side s1 = vertex_side(space.interface(), m.node(edge[1]), h);
    if (s0 == s1) continue;
    for (int node : edge) {
      const int dof = space.enrichment_dof(node);
      if (dof >= 0 && !pinned_enr.count(dof)) extra.insert(dof);
    }
  }
  pinned_enr.insert(extra.begin(), extra.end());

  for (int d : space.constrained_dofs()) {
    rec.dofs.push_back(d);
    rec.values.push_back(space.is_enrichment_dof(d) ? 0.0 : boundary_value(d));
  }
  rec.extra_enrichment_pins.assign(extra.begin(), extra.end());
  rec.pinned_enrichment = static_cast<int>(pinned_enr.size());
  return rec;
}

}  // namespace sgfem
