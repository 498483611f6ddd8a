#pragma once

#include "sgfem/common.hpp"
#include "sgfem/linear_solver.hpp"
#include "sgfem/space.hpp"

#include <memory>
#include <vector>

namespace sgfem {

/// Spatial quadrature orders used when building an IntegrationCache.
struct AssemblyOrders {
  int plain = 2;     ///< elements without enrichment
  int enriched = 4;  ///< cut elements and elements touching an enrichment node
};

struct IntegrationPoint {
  Point x;
  double weight = 0.0;
  Side side = Side::Minus;
  int element = -1;
  BasisEval basis;
};

/// Physical quadrature points over Omega with the basis evaluated at each.
/// Points of one element are contiguous and elements appear in index order.
class IntegrationCache {
 public:
  explicit IntegrationCache(std::shared_ptr<const SgfemSpace> space, AssemblyOrders orders = {});

  const SgfemSpace& space() const { return *space_; }
  const std::vector<IntegrationPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  /// Points of element e are [element_begin(e), element_begin(e + 1)).
  std::size_t element_begin(int e) const { return offsets_[e]; }

  /// Discrete field values at every point.
  Vector evaluate(const Vector& coeffs) const;
  /// Sum_q w_q values_q phi_i(x_q) for every DOF i.
  Vector load_from_values(const Vector& values) const;

 private:
  std::shared_ptr<const SgfemSpace> space_;
  std::vector<IntegrationPoint> points_;
  std::vector<std::size_t> offsets_;
};

struct InterfacePoint {
  Point x;
  double weight = 0.0;
  int element = -1;
  BasisEval basis;
};

/// Quadrature on the piecewise-linear interface (one polyline segment per
/// cut-element piece), with the trace of the basis at each point.
class InterfaceCache {
 public:
  explicit InterfaceCache(std::shared_ptr<const SgfemSpace> space, int order = 3);

  const SgfemSpace& space() const { return *space_; }
  const std::vector<InterfacePoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const Vector& weights() const { return weights_; }
  double total_length() const { return weights_.sum(); }

  /// Q x ndof matrix of basis values at the points.
  const SparseMatrix& trace_matrix() const { return trace_; }
  Vector trace(const Vector& coeffs) const { return trace_ * coeffs; }
  /// Sum_q w_q values_q phi_i(x_q) for every DOF i.
  Vector load_from_values(const Vector& values) const;

 private:
  std::shared_ptr<const SgfemSpace> space_;
  std::vector<InterfacePoint> points_;
  Vector weights_;
  SparseMatrix trace_;
};

SparseMatrix assemble_mass(const IntegrationCache& cache);
SparseMatrix assemble_stiffness(const IntegrationCache& cache, double beta_minus, double beta_plus);

/// Convenience forms building a default cache.
SparseMatrix assemble_mass(std::shared_ptr<const SgfemSpace> space);
SparseMatrix assemble_stiffness(std::shared_ptr<const SgfemSpace> space, double beta_minus, double beta_plus);

/// (1/|I|) int_I (f, w_h) dt for I = [t0, t1], two-point Gauss in time.
Vector assemble_volume_load(const IntegrationCache& cache, const SpaceTimeField& f, double t0, double t1);

/// (1/|I|) int_I <gamma, w_h>_Gamma dt for I = [t0, t1].
Vector assemble_interface_load(const InterfaceCache& cache, const InterfaceField& gamma, double t0, double t1);

/// Free / constrained split of the DOFs of a space.
class DofPartition {
 public:
  explicit DofPartition(const SgfemSpace& space);

  int num_dofs() const { return static_cast<int>(free_index_.size()); }
  int num_free() const { return static_cast<int>(free_.size()); }
  const std::vector<int>& free_dofs() const { return free_; }
  const std::vector<int>& constrained_dofs() const { return constrained_; }
  /// Position among the free DOFs, or -1.
  int free_index(int dof) const { return free_index_[dof]; }

  SparseMatrix free_block(const SparseMatrix& a) const;
  /// Columns restricted to the constrained DOFs, rows to the free ones.
  SparseMatrix coupling_block(const SparseMatrix& a) const;
  Vector gather_free(const Vector& full) const;
  Vector gather_constrained(const Vector& full) const;
  void scatter_free(const Vector& free_values, Vector& full) const;

 private:
  std::vector<int> free_;
  std::vector<int> constrained_;
  std::vector<int> free_index_;
  std::vector<int> constrained_index_;
};

/// R_h w in the lifted Dirichlet space: a(R_h w, v) = a(w, v) for free v,
/// boundary values of the standard DOFs from w, pinned enrichments 0.
Vector elliptic_projection(const IntegrationCache& cache, const SparseMatrix& stiffness, double beta_minus,
                           double beta_plus, const SpaceTimeField& w, const SpaceTimeGradient& grad_w,
                           double t = 0.0);

/// a(w, v_i) for every DOF i.
Vector energy_load(const IntegrationCache& cache, double beta_minus, double beta_plus,
                   const SpaceTimeGradient& grad_w, double t = 0.0);

}  // namespace sgfem
