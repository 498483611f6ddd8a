#include "sgfem/assembly.hpp"

#include "sgfem/parallel.hpp"
#include "sgfem/quadrature.hpp"

#include <Eigen/Dense>

namespace sgfem {

namespace {

using Triplet = Eigen::Triplet<double>;

std::vector<IntegrationPoint> element_points(const SgfemSpace& space, int e, const AssemblyOrders& orders) {
  std::vector<IntegrationPoint> out;
  const bool enriched = space.element_enriched(e);
  const int order = enriched ? orders.enriched : orders.plain;
  auto push = [&](const QuadRule& rule, Side side) {
    for (std::size_t q = 0; q < rule.size(); ++q) {
      IntegrationPoint p;
      p.x = rule.points[q];
      p.weight = rule.weights[q];
      p.side = side;
      p.element = e;
      p.basis = space.eval_basis_physical(e, p.x, side);
      out.push_back(p);
    }
  };
  if (const CutDecomposition* cut = space.decomposition(e)) {
    const SideRules rules = cut_rule(*cut, order);
    push(rules.minus, Side::Minus);
    push(rules.plus, Side::Plus);
  } else {
    const Side side = space.tag(e) == ElementTag::InsidePlus ? Side::Plus : Side::Minus;
    push(map_rule(element_rule(order), space.mesh().element_vertices(e)), side);
  }
  return out;
}

/// Sums local contributions of each element (upper triangle mirrored so the
/// result is exactly symmetric).
template <class Kernel>
SparseMatrix assemble_bilinear(const IntegrationCache& cache, Kernel kernel) {
  const SgfemSpace& space = cache.space();
  const int ne = space.mesh().num_elements();
  const int ndof = space.num_dofs();
  std::vector<std::vector<Triplet>> local(ne);
  parallel_for(ne, [&](int e) {
    const std::size_t begin = cache.element_begin(e);
    const std::size_t end = cache.element_begin(e + 1);
    if (begin == end) return;
    const int count = cache.points()[begin].basis.count;
    Eigen::Matrix<double, BasisEval::kMax, BasisEval::kMax> k =
        Eigen::Matrix<double, BasisEval::kMax, BasisEval::kMax>::Zero();
    for (std::size_t q = begin; q < end; ++q) {
      const IntegrationPoint& p = cache.points()[q];
      for (int a = 0; a < count; ++a) {
        for (int b = a; b < count; ++b) k(a, b) += kernel(p, a, b);
      }
    }
    const BasisEval& basis = cache.points()[begin].basis;
    auto& out = local[e];
    out.reserve(count * count);
    for (int a = 0; a < count; ++a) {
      out.emplace_back(basis.dofs[a], basis.dofs[a], k(a, a));
      for (int b = a + 1; b < count; ++b) {
        out.emplace_back(basis.dofs[a], basis.dofs[b], k(a, b));
        out.emplace_back(basis.dofs[b], basis.dofs[a], k(a, b));
      }
    }
  });
  std::vector<Triplet> all;
  for (const auto& l : local) all.insert(all.end(), l.begin(), l.end());
  SparseMatrix m(ndof, ndof);
  m.setFromTriplets(all.begin(), all.end());
  m.makeCompressed();
  return m;
}

}  // namespace

IntegrationCache::IntegrationCache(std::shared_ptr<const SgfemSpace> space, AssemblyOrders orders)
    : space_(std::move(space)) {
  const int ne = space_->mesh().num_elements();
  std::vector<std::vector<IntegrationPoint>> per_element(ne);
  parallel_for(ne, [&](int e) { per_element[e] = element_points(*space_, e, orders); });
  offsets_.resize(ne + 1);
  std::size_t total = 0;
  for (int e = 0; e < ne; ++e) {
    offsets_[e] = total;
    total += per_element[e].size();
  }
  offsets_[ne] = total;
  points_.reserve(total);
  for (auto& pts : per_element) points_.insert(points_.end(), pts.begin(), pts.end());
}

Vector IntegrationCache::evaluate(const Vector& coeffs) const {
  Vector out(points_.size());
  for (std::size_t q = 0; q < points_.size(); ++q) out[q] = points_[q].basis.value_of(coeffs);
  return out;
}

Vector IntegrationCache::load_from_values(const Vector& values) const {
  Vector out = Vector::Zero(space_->num_dofs());
  for (std::size_t q = 0; q < points_.size(); ++q) {
    const IntegrationPoint& p = points_[q];
    const double s = p.weight * values[q];
    for (int k = 0; k < p.basis.count; ++k) out[p.basis.dofs[k]] += s * p.basis.values[k];
  }
  return out;
}

InterfaceCache::InterfaceCache(std::shared_ptr<const SgfemSpace> space, int order) : space_(std::move(space)) {
  const LineRule rule = segment_rule(order);
  const auto& cut = space_->cut_elements();
  std::vector<std::vector<InterfacePoint>> per_element(cut.size());
  parallel_for(static_cast<int>(cut.size()), [&](int k) {
    const int e = cut[k];
    for (const Segment& seg : space_->decomposition(e)->segments) {
      const QuadRule mapped = map_rule(rule, seg);
      for (std::size_t q = 0; q < mapped.size(); ++q) {
        InterfacePoint p;
        p.x = mapped.points[q];
        p.weight = mapped.weights[q];
        p.element = e;
        p.basis = space_->eval_basis_physical(e, p.x);
        per_element[k].push_back(p);
      }
    }
  });
  for (auto& pts : per_element) points_.insert(points_.end(), pts.begin(), pts.end());
  weights_.resize(points_.size());
  std::vector<Triplet> entries;
  for (std::size_t q = 0; q < points_.size(); ++q) {
    weights_[q] = points_[q].weight;
    const BasisEval& b = points_[q].basis;
    for (int k = 0; k < b.count; ++k) entries.emplace_back(static_cast<int>(q), b.dofs[k], b.values[k]);
  }
  trace_.resize(static_cast<Eigen::Index>(points_.size()), space_->num_dofs());
  trace_.setFromTriplets(entries.begin(), entries.end());
  trace_.makeCompressed();
}

Vector InterfaceCache::load_from_values(const Vector& values) const {
  return trace_.transpose() * Vector(weights_.cwiseProduct(values));
}

SparseMatrix assemble_mass(const IntegrationCache& cache) {
  return assemble_bilinear(cache, [](const IntegrationPoint& p, int a, int b) {
    return p.weight * p.basis.values[a] * p.basis.values[b];
  });
}

SparseMatrix assemble_stiffness(const IntegrationCache& cache, double beta_minus, double beta_plus) {
  return assemble_bilinear(cache, [=](const IntegrationPoint& p, int a, int b) {
    const double beta = p.side == Side::Minus ? beta_minus : beta_plus;
    return p.weight * beta * p.basis.grads[a].dot(p.basis.grads[b]);
  });
}

SparseMatrix assemble_mass(std::shared_ptr<const SgfemSpace> space) {
  return assemble_mass(IntegrationCache(std::move(space)));
}

SparseMatrix assemble_stiffness(std::shared_ptr<const SgfemSpace> space, double beta_minus, double beta_plus) {
  return assemble_stiffness(IntegrationCache(std::move(space)), beta_minus, beta_plus);
}

Vector assemble_volume_load(const IntegrationCache& cache, const SpaceTimeField& f, double t0, double t1) {
  const auto& pts = cache.points();
  Vector values = Vector::Zero(static_cast<Eigen::Index>(pts.size()));
  for (int k = 0; k < 2; ++k) {
    const double t = t0 + kTimeGaussFractions[k] * (t1 - t0);
    for (std::size_t q = 0; q < pts.size(); ++q) values[q] += kTimeGaussWeights[k] * f(pts[q].x, t, pts[q].side);
  }
  return cache.load_from_values(values);
}

Vector assemble_interface_load(const InterfaceCache& cache, const InterfaceField& gamma, double t0, double t1) {
  const auto& pts = cache.points();
  Vector values = Vector::Zero(static_cast<Eigen::Index>(pts.size()));
  for (int k = 0; k < 2; ++k) {
    const double t = t0 + kTimeGaussFractions[k] * (t1 - t0);
    for (std::size_t q = 0; q < pts.size(); ++q) values[q] += kTimeGaussWeights[k] * gamma(pts[q].x, t);
  }
  return cache.load_from_values(values);
}

DofPartition::DofPartition(const SgfemSpace& space) {
  const int n = space.num_dofs();
  free_index_.assign(n, -1);
  constrained_index_.assign(n, -1);
  for (int d = 0; d < n; ++d) {
    if (space.is_constrained(d)) {
      constrained_index_[d] = static_cast<int>(constrained_.size());
      constrained_.push_back(d);
    } else {
      free_index_[d] = static_cast<int>(free_.size());
      free_.push_back(d);
    }
  }
}

SparseMatrix DofPartition::free_block(const SparseMatrix& a) const {
  std::vector<Triplet> entries;
  entries.reserve(a.nonZeros());
  for (int col = 0; col < a.outerSize(); ++col) {
    const int fc = free_index_[col];
    if (fc < 0) continue;
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      const int fr = free_index_[it.row()];
      if (fr >= 0) entries.emplace_back(fr, fc, it.value());
    }
  }
  SparseMatrix out(num_free(), num_free());
  out.setFromTriplets(entries.begin(), entries.end());
  out.makeCompressed();
  return out;
}

SparseMatrix DofPartition::coupling_block(const SparseMatrix& a) const {
  std::vector<Triplet> entries;
  for (int col = 0; col < a.outerSize(); ++col) {
    const int cc = constrained_index_[col];
    if (cc < 0) continue;
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      const int fr = free_index_[it.row()];
      if (fr >= 0) entries.emplace_back(fr, cc, it.value());
    }
  }
  SparseMatrix out(num_free(), static_cast<Eigen::Index>(constrained_.size()));
  out.setFromTriplets(entries.begin(), entries.end());
  out.makeCompressed();
  return out;
}

Vector DofPartition::gather_free(const Vector& full) const {
  Vector out(num_free());
  for (int i = 0; i < num_free(); ++i) out[i] = full[free_[i]];
  return out;
}

Vector DofPartition::gather_constrained(const Vector& full) const {
  Vector out(static_cast<Eigen::Index>(constrained_.size()));
  for (std::size_t i = 0; i < constrained_.size(); ++i) out[i] = full[constrained_[i]];
  return out;
}

void DofPartition::scatter_free(const Vector& free_values, Vector& full) const {
  for (int i = 0; i < num_free(); ++i) full[free_[i]] = free_values[i];
}

Vector energy_load(const IntegrationCache& cache, double beta_minus, double beta_plus,
                   const SpaceTimeGradient& grad_w, double t) {
  Vector out = Vector::Zero(cache.space().num_dofs());
  for (const IntegrationPoint& p : cache.points()) {
    const double beta = p.side == Side::Minus ? beta_minus : beta_plus;
    const Point g = p.weight * beta * grad_w(p.x, t, p.side);
    for (int k = 0; k < p.basis.count; ++k) out[p.basis.dofs[k]] += g.dot(p.basis.grads[k]);
  }
  return out;
}

Vector elliptic_projection(const IntegrationCache& cache, const SparseMatrix& stiffness, double beta_minus,
                           double beta_plus, const SpaceTimeField& w, const SpaceTimeGradient& grad_w, double t) {
  const SgfemSpace& space = cache.space();
  const DofPartition part(space);
  Vector coeffs = Vector::Zero(space.num_dofs());
  for (int d : part.constrained_dofs()) {
    if (!space.is_enrichment_dof(d)) coeffs[d] = w(space.mesh().node(d), t, space.node_side(d));
  }
  const Vector rhs = energy_load(cache, beta_minus, beta_plus, grad_w, t);
  const Vector rhs_free =
      part.gather_free(rhs) - part.coupling_block(stiffness) * part.gather_constrained(coeffs);
  if (rhs_free.norm() == 0.0) return coeffs;
  part.scatter_free(linear_solve(part.free_block(stiffness), rhs_free), coeffs);
  return coeffs;
}

}  // namespace sgfem
