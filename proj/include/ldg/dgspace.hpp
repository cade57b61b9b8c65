#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "ldg/mesh.hpp"

namespace ldg {

using ScalarFunction = std::function<double(const Point&)>;
using VectorFunction = std::function<Eigen::Vector2d(const Point&)>;
/// Gradient of a two-component field: row c is the gradient of component c.
using GradientFunction = std::function<Eigen::Matrix2d(const Point&)>;

/// Quadrature on the reference triangle {x, y >= 0, x + y <= 1}; weights sum
/// to 1/2.
struct TriangleQuadrature {
  std::vector<Point> points;
  std::vector<double> weights;
  int exact_degree = 0;
  std::size_t size() const { return points.size(); }
};

/// Quadrature on [0, 1]; weights sum to 1.
struct EdgeQuadrature {
  std::vector<double> points;
  std::vector<double> weights;
  int exact_degree = 0;
  std::size_t size() const { return points.size(); }
};

/// Collapsed (Duffy) Gauss-Legendre product rule. Supports degree_exact <= 20.
TriangleQuadrature triangle_quadrature(int degree_exact);
/// Gauss-Legendre rule. Supports degree_exact <= 29.
EdgeQuadrature edge_quadrature(int degree_exact);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Nodal Lagrange basis of degree k on equispaced reference nodes. Node order:
/// the three vertices, then edge nodes of sides (0,1), (1,2), (2,0) walked from
/// the first to the second vertex, then interior nodes.
class LagrangeBasis {
 public:
  explicit LagrangeBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Point>& nodes() const { return nodes_; }

  Eigen::VectorXd values(const Point& p) const;
  /// size() x 2 matrix of reference gradients.
  Eigen::MatrixX2d gradients(const Point& p) const;

 private:
  int degree_;
  std::vector<Point> nodes_;
  std::vector<std::array<int, 2>> exponents_;
  Eigen::MatrixXd coeffs_;  // monomial coefficients, one column per basis function
};

struct BasisEvaluation {
  Eigen::VectorXd values;
  Eigen::MatrixX2d gradients;
};

BasisEvaluation eval_basis(int k, const Point& p);

/// Basis tables at the quadrature points of one triangle side.
struct SideTable {
  Eigen::MatrixXd values;                // nq x nb
  std::vector<Eigen::MatrixX2d> grads;   // per point, nb x 2 reference gradients
};

/// Broken polynomial space of degree k over a mesh. Dofs are triangle-major:
/// scalar dof of local node i on triangle t is t * dofs_per_triangle() + i.
class DgSpace {
 public:
  DgSpace(std::shared_ptr<const Mesh> mesh, int degree);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  int degree() const { return basis_.degree(); }
  int dofs_per_triangle() const { return basis_.size(); }
  std::size_t total_scalar_dofs() const { return mesh_->num_triangles() * dofs_per_triangle(); }
  std::size_t dof(std::size_t t, int i) const { return t * dofs_per_triangle() + i; }

  const LagrangeBasis& basis() const { return basis_; }
  const TriangleQuadrature& volume_rule() const { return volume_rule_; }
  const EdgeQuadrature& edge_rule() const { return edge_rule_; }

  /// nq x nb basis values at the volume quadrature points.
  const Eigen::MatrixXd& volume_values() const { return volume_values_; }
  /// Reference gradients at volume quadrature point q (nb x 2).
  const Eigen::MatrixX2d& volume_ref_gradients(std::size_t q) const { return volume_grads_[q]; }

  /// Table for local side s, walked forward (reversed == false) from local
  /// vertex s to s+1, or backward.
  const SideTable& side_table(int side, bool reversed) const { return side_tables_[2 * side + reversed]; }

  /// Inverse-transpose of the affine map Jacobian of triangle t.
  const Eigen::Matrix2d& inv_jacobian_t(std::size_t t) const { return inv_jac_t_[t]; }
  /// |det J| = 2 * area.
  double jacobian_det(std::size_t t) const { return det_[t]; }

  Point map_to_physical(std::size_t t, const Point& ref) const;
  Point map_to_reference(std::size_t t, const Point& x) const;
  Point node_position(std::size_t t, int i) const { return map_to_physical(t, basis_.nodes()[i]); }

  /// True when local node i of triangle t lies on a boundary edge of the
  /// mesh, including vertex nodes that only touch the boundary.
  bool node_on_boundary(std::size_t t, int i) const;

  /// Whether an edge's T- side is traversed against the edge orientation.
  bool minus_side_reversed(std::size_t edge) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  LagrangeBasis basis_;
  TriangleQuadrature volume_rule_;
  EdgeQuadrature edge_rule_;
  Eigen::MatrixXd volume_values_;
  std::vector<Eigen::MatrixX2d> volume_grads_;
  std::vector<SideTable> side_tables_;
  std::vector<Eigen::Matrix2d> inv_jac_t_;
  std::vector<double> det_;
  std::vector<bool> boundary_vertex_;
};

DgSpace build_space(Mesh mesh, int k);
DgSpace build_space(std::shared_ptr<const Mesh> mesh, int k);

/// Dof vector of a scalar (components == 1) or two-component field, stored
/// in block layout [all u dofs; all v dofs].
struct Coefficients {
  int components = 1;
  Eigen::VectorXd values;

  Coefficients() = default;
  Coefficients(int comps, std::size_t scalar_dofs)
      : components(comps), values(Eigen::VectorXd::Zero(comps * static_cast<Eigen::Index>(scalar_dofs))) {}
  Coefficients(int comps, Eigen::VectorXd v) : components(comps), values(std::move(v)) {}

  std::size_t scalar_dofs() const { return static_cast<std::size_t>(values.size()) / components; }
  auto component(int c) { return values.segment(c * scalar_dofs(), scalar_dofs()); }
  auto component(int c) const { return values.segment(c * scalar_dofs(), scalar_dofs()); }
};

Coefficients interpolate(const ScalarFunction& f, const DgSpace& s);
Coefficients interpolate(const VectorFunction& f, const DgSpace& s);

/// Value of component c of Z inside triangle t at reference point ref.
double evaluate(const DgSpace& s, const Coefficients& z, int c, std::size_t t, const Point& ref);
/// Point evaluation by triangle search; returns false if x is outside the mesh.
bool evaluate_at(const DgSpace& s, const Coefficients& z, const Point& x, Eigen::VectorXd& out);

/// Exact re-expression of a coarse field on the uniformly refined space.
/// Throws std::invalid_argument when the spaces are not nested.
Coefficients prolong(const DgSpace& coarse, const Coefficients& z, const DgSpace& fine);

/// Exact re-expression of a field in a space of higher or equal degree on the
/// same mesh.
Coefficients raise_degree(const DgSpace& low, const Coefficients& z, const DgSpace& high);

}  // namespace ldg
