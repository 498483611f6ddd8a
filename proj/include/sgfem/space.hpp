#pragma once

#include "sgfem/common.hpp"
#include "sgfem/geometry.hpp"
#include "sgfem/mesh.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace sgfem {

/// Values and gradients of all basis functions active at one point.
/// At most 3 standard hats plus 3 enrichments.
struct BasisEval {
  static constexpr int kMax = 6;
  int count = 0;
  std::array<int, kMax> dofs{};
  std::array<double, kMax> values{};
  std::array<Point, kMax> grads{};

  double value_of(const Vector& coeffs) const {
    double s = 0.0;
    for (int k = 0; k < count; ++k) s += values[k] * coeffs[dofs[k]];
    return s;
  }
  Point grad_of(const Vector& coeffs) const {
    Point g = Point::Zero();
    for (int k = 0; k < count; ++k) g += grads[k] * coeffs[dofs[k]];
    return g;
  }
};

/// S_h = S_FEM + span{ phi_i (D~ - I_h D~) : i in I_enr }.
///
/// Standard DOF i is mesh node i; enrichment DOFs follow, numbered in
/// increasing node order. I_enr holds every vertex of every cut element.
class SgfemSpace {
 public:
  SgfemSpace(std::shared_ptr<const TriMesh> mesh, LevelSetInterface iface);

  const TriMesh& mesh() const { return *mesh_; }
  std::shared_ptr<const TriMesh> mesh_ptr() const { return mesh_; }
  const LevelSetInterface& interface() const { return iface_; }

  int num_dofs() const { return mesh_->num_nodes() + static_cast<int>(enr_nodes_.size()); }
  int num_standard_dofs() const { return mesh_->num_nodes(); }
  int num_enrichment_dofs() const { return static_cast<int>(enr_nodes_.size()); }

  ElementTag tag(int e) const { return tags_[e]; }
  /// Decomposition of a cut element, nullptr otherwise.
  const CutDecomposition* decomposition(int e) const;
  const std::vector<int>& cut_elements() const { return cut_elements_; }
  /// True when some vertex of e carries an enrichment DOF.
  bool element_enriched(int e) const;

  const std::vector<int>& enrichment_nodes() const { return enr_nodes_; }
  /// Enrichment DOF of a node, or -1.
  int enrichment_dof(int node) const { return enr_dof_[node]; }
  bool is_enrichment_dof(int dof) const { return dof >= num_standard_dofs(); }
  int node_of_enrichment_dof(int dof) const { return enr_nodes_[dof - num_standard_dofs()]; }

  /// D~(P_i) under the vertex tie rule.
  double nodal_distance(int node) const { return nodal_distance_[node]; }
  Side node_side(int node) const { return node_side_[node]; }

  /// Standard DOFs of boundary nodes plus enrichment DOFs at boundary nodes.
  const std::vector<int>& constrained_dofs() const { return constrained_; }
  bool is_constrained(int dof) const { return is_constrained_[dof]; }

  /// Basis at a reference point (xi, eta) of element e. `side` selects the
  /// branch of D~ (plus: smooth signed-distance extension, minus: 0); when
  /// absent the side is the sign of phi at the point.
  BasisEval eval_basis(int e, const Point& ref, std::optional<Side> side = std::nullopt) const;
  BasisEval eval_basis_physical(int e, const Point& x, std::optional<Side> side = std::nullopt) const;

  /// Field value at a physical point (locates the element).
  double evaluate(const Vector& coeffs, const Point& x) const;

 private:
  std::shared_ptr<const TriMesh> mesh_;
  LevelSetInterface iface_;
  std::vector<ElementTag> tags_;
  std::vector<int> cut_elements_;
  std::vector<int> cut_slot_;
  std::vector<CutDecomposition> decompositions_;
  std::vector<int> enr_nodes_;
  std::vector<int> enr_dof_;
  std::vector<double> nodal_distance_;
  std::vector<Side> node_side_;
  std::vector<int> constrained_;
  std::vector<char> is_constrained_;
};

std::shared_ptr<const SgfemSpace> build_space(std::shared_ptr<const TriMesh> mesh, LevelSetInterface iface);

/// Pinned DOF values. Sorted by DOF.
struct ConstraintRecord {
  std::vector<int> dofs;
  std::vector<double> values;
  /// Enrichment DOFs pinned because their basis is nonzero on a boundary
  /// edge cut by Gamma, excluding those already at boundary nodes.
  std::vector<int> extra_enrichment_pins;
  /// Enrichment DOFs pinned in total (boundary nodes and cut boundary edges).
  int pinned_enrichment = 0;
};

/// Standard boundary DOFs take `boundary_value(node)`; every enrichment DOF
/// whose function can be nonzero on the boundary is pinned to 0.
ConstraintRecord apply_dirichlet(const SgfemSpace& space, const std::function<double(int node)>& boundary_value);

/// Hat-function gradients of a triangle.
std::array<Point, 3> hat_gradients(const std::array<Point, 3>& v);

}  // namespace sgfem
