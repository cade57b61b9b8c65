#include "ldg/dgspace.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/LU>

namespace ldg {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

TriangleQuadrature triangle_quadrature(int degree_exact) {
  if (degree_exact < 0 || degree_exact > 20)
    throw std::invalid_argument("triangle_quadrature: unsupported degree " +
                                std::to_string(degree_exact));
  // (a, b) in [0,1]^2 -> (a, b (1 - a)), Jacobian (1 - a) raises the degree in a by one.
  const int n = (degree_exact + 2 + 1) / 2;
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  TriangleQuadrature rule;
  rule.exact_degree = degree_exact;
  for (int i = 0; i < n; ++i) {
    const double a = 0.5 * (x[i] + 1.0);
    for (int j = 0; j < n; ++j) {
      const double b = 0.5 * (x[j] + 1.0);
      rule.points.emplace_back(a, b * (1.0 - a));
      rule.weights.push_back(0.25 * w[i] * w[j] * (1.0 - a));
    }
  }
  return rule;
}

EdgeQuadrature edge_quadrature(int degree_exact) {
  if (degree_exact < 0 || degree_exact > 29)
    throw std::invalid_argument("edge_quadrature: unsupported degree " +
                                std::to_string(degree_exact));
  const int n = (degree_exact + 2) / 2;
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  EdgeQuadrature rule;
  rule.exact_degree = degree_exact;
  for (int i = 0; i < n; ++i) {
    rule.points.push_back(0.5 * (x[i] + 1.0));
    rule.weights.push_back(0.5 * w[i]);
  }
  return rule;
}

LagrangeBasis::LagrangeBasis(int degree) : degree_(degree) {
  if (degree < 1 || degree > 3)
    throw std::invalid_argument("LagrangeBasis: degree must be 1, 2 or 3, got " +
                                std::to_string(degree));
  const double k = degree;
  const std::array<Point, 3> v{Point(0, 0), Point(1, 0), Point(0, 1)};
  for (const auto& p : v) nodes_.push_back(p);
  for (int s = 0; s < 3; ++s)
    for (int j = 1; j < degree; ++j) nodes_.push_back(v[s] + (j / k) * (v[(s + 1) % 3] - v[s]));
  for (int j = 1; j < degree; ++j)
    for (int i = 1; i + j < degree; ++i) nodes_.emplace_back(i / k, j / k);

  for (int d = 0; d <= degree; ++d)
    for (int b = 0; b <= d; ++b) exponents_.push_back({d - b, b});

  const int nb = size();
  Eigen::MatrixXd vand(nb, nb);
  for (int i = 0; i < nb; ++i)
    for (int m = 0; m < nb; ++m)
      vand(i, m) = std::pow(nodes_[i].x(), exponents_[m][0]) * std::pow(nodes_[i].y(), exponents_[m][1]);
  coeffs_ = vand.fullPivLu().inverse();
}

Eigen::VectorXd LagrangeBasis::values(const Point& p) const {
  const int nb = size();
  Eigen::VectorXd mono(nb);
  for (int m = 0; m < nb; ++m)
    mono[m] = std::pow(p.x(), exponents_[m][0]) * std::pow(p.y(), exponents_[m][1]);
  return coeffs_.transpose() * mono;
}

Eigen::MatrixX2d LagrangeBasis::gradients(const Point& p) const {
  const int nb = size();
  Eigen::MatrixX2d dmono(nb, 2);
  for (int m = 0; m < nb; ++m) {
    const int a = exponents_[m][0], b = exponents_[m][1];
    dmono(m, 0) = a == 0 ? 0.0 : a * std::pow(p.x(), a - 1) * std::pow(p.y(), b);
    dmono(m, 1) = b == 0 ? 0.0 : b * std::pow(p.x(), a) * std::pow(p.y(), b - 1);
  }
  return coeffs_.transpose() * dmono;
}

BasisEvaluation eval_basis(int k, const Point& p) {
  LagrangeBasis basis(k);
  return {basis.values(p), basis.gradients(p)};
}

DgSpace::DgSpace(std::shared_ptr<const Mesh> mesh, int degree)
    : mesh_(std::move(mesh)),
      basis_(degree),
      volume_rule_(triangle_quadrature(4 * degree)),
      edge_rule_(edge_quadrature(2 * degree + 1)) {
  if (!mesh_) throw std::invalid_argument("DgSpace: null mesh");
  if (mesh_->triangle_edges.size() != mesh_->num_triangles())
    throw std::invalid_argument("DgSpace: mesh edges are not classified");

  const int nb = basis_.size();
  volume_values_.resize(static_cast<Eigen::Index>(volume_rule_.size()), nb);
  for (std::size_t q = 0; q < volume_rule_.size(); ++q) {
    volume_values_.row(static_cast<Eigen::Index>(q)) = basis_.values(volume_rule_.points[q]).transpose();
    volume_grads_.push_back(basis_.gradients(volume_rule_.points[q]));
  }

  const std::array<Point, 3> v{Point(0, 0), Point(1, 0), Point(0, 1)};
  for (int s = 0; s < 3; ++s) {
    for (int rev = 0; rev < 2; ++rev) {
      SideTable tab;
      tab.values.resize(static_cast<Eigen::Index>(edge_rule_.size()), nb);
      for (std::size_t q = 0; q < edge_rule_.size(); ++q) {
        const double t = rev ? 1.0 - edge_rule_.points[q] : edge_rule_.points[q];
        const Point p = v[s] + t * (v[(s + 1) % 3] - v[s]);
        tab.values.row(static_cast<Eigen::Index>(q)) = basis_.values(p).transpose();
        tab.grads.push_back(basis_.gradients(p));
      }
      side_tables_.push_back(std::move(tab));
    }
  }

  boundary_vertex_.assign(mesh_->num_vertices(), false);
  for (const Edge& e : mesh_->edges)
    if (e.is_boundary()) boundary_vertex_[e.vertices[0]] = boundary_vertex_[e.vertices[1]] = true;

  inv_jac_t_.reserve(mesh_->num_triangles());
  det_.reserve(mesh_->num_triangles());
  for (std::size_t t = 0; t < mesh_->num_triangles(); ++t) {
    const auto& tri = mesh_->triangles[t];
    const Point& p0 = mesh_->vertices[tri[0]];
    Eigen::Matrix2d jac;
    jac.col(0) = mesh_->vertices[tri[1]] - p0;
    jac.col(1) = mesh_->vertices[tri[2]] - p0;
    det_.push_back(std::abs(jac.determinant()));
    inv_jac_t_.push_back(jac.inverse().transpose());
  }
}

Point DgSpace::map_to_physical(std::size_t t, const Point& ref) const {
  const auto& tri = mesh_->triangles[t];
  const Point& p0 = mesh_->vertices[tri[0]];
  return p0 + ref.x() * (mesh_->vertices[tri[1]] - p0) + ref.y() * (mesh_->vertices[tri[2]] - p0);
}

Point DgSpace::map_to_reference(std::size_t t, const Point& x) const {
  const Point& p0 = mesh_->vertices[mesh_->triangles[t][0]];
  return inv_jac_t_[t].transpose() * (x - p0);
}

bool DgSpace::node_on_boundary(std::size_t t, int i) const {
  const Point& p = basis_.nodes()[i];
  const std::array<double, 3> bary{1.0 - p.x() - p.y(), p.x(), p.y()};
  // a vertex node can touch the boundary through a neighbouring triangle
  for (int j = 0; j < 3; ++j)
    if (std::abs(bary[j] - 1.0) < 1e-12) return boundary_vertex_[mesh_->triangles[t][j]];
  for (int s = 0; s < 3; ++s) {
    // side s is opposite the vertex (s + 2) % 3
    if (std::abs(bary[(s + 2) % 3]) < 1e-12 &&
        mesh_->edges[mesh_->triangle_edges[t][s]].is_boundary())
      return true;
  }
  return false;
}

bool DgSpace::minus_side_reversed(std::size_t edge) const {
  const Edge& e = mesh_->edges[edge];
  const auto& tri = mesh_->triangles[e.triangles[1]];
  return tri[e.sides[1]] != e.vertices[0];
}

DgSpace build_space(Mesh mesh, int k) {
  return DgSpace(std::make_shared<const Mesh>(std::move(mesh)), k);
}

DgSpace build_space(std::shared_ptr<const Mesh> mesh, int k) { return DgSpace(std::move(mesh), k); }

Coefficients interpolate(const ScalarFunction& f, const DgSpace& s) {
  Coefficients z(1, s.total_scalar_dofs());
  const int nb = s.dofs_per_triangle();
  for (std::size_t t = 0; t < s.mesh().num_triangles(); ++t)
    for (int i = 0; i < nb; ++i) z.values[static_cast<Eigen::Index>(s.dof(t, i))] = f(s.node_position(t, i));
  return z;
}

Coefficients interpolate(const VectorFunction& f, const DgSpace& s) {
  const std::size_t n = s.total_scalar_dofs();
  Coefficients z(2, n);
  const int nb = s.dofs_per_triangle();
  for (std::size_t t = 0; t < s.mesh().num_triangles(); ++t) {
    for (int i = 0; i < nb; ++i) {
      const Eigen::Vector2d val = f(s.node_position(t, i));
      const auto d = static_cast<Eigen::Index>(s.dof(t, i));
      z.values[d] = val[0];
      z.values[d + static_cast<Eigen::Index>(n)] = val[1];
    }
  }
  return z;
}

double evaluate(const DgSpace& s, const Coefficients& z, int c, std::size_t t, const Point& ref) {
  const int nb = s.dofs_per_triangle();
  const auto local = z.component(c).segment(static_cast<Eigen::Index>(s.dof(t, 0)), nb);
  return s.basis().values(ref).dot(local);
}

bool evaluate_at(const DgSpace& s, const Coefficients& z, const Point& x, Eigen::VectorXd& out) {
  constexpr double tol = 1e-12;
  for (std::size_t t = 0; t < s.mesh().num_triangles(); ++t) {
    const Point r = s.map_to_reference(t, x);
    if (r.x() >= -tol && r.y() >= -tol && r.x() + r.y() <= 1.0 + tol) {
      out.resize(z.components);
      for (int c = 0; c < z.components; ++c) out[c] = evaluate(s, z, c, t, r);
      return true;
    }
  }
  return false;
}

Coefficients prolong(const DgSpace& coarse, const Coefficients& z, const DgSpace& fine) {
  const Mesh& cm = coarse.mesh();
  const Mesh& fm = fine.mesh();
  if (coarse.degree() != fine.degree())
    throw std::invalid_argument("prolong: spaces have different degrees");
  if (fm.parent_map.size() != fm.num_triangles() || fm.num_triangles() != 4 * cm.num_triangles())
    throw std::invalid_argument("prolong: fine mesh is not a uniform refinement of the coarse mesh");
  if (z.scalar_dofs() != coarse.total_scalar_dofs())
    throw std::invalid_argument("prolong: coefficient vector does not match the coarse space");

  const int nb = fine.dofs_per_triangle();
  Coefficients out(z.components, fine.total_scalar_dofs());
  for (std::size_t t = 0; t < fm.num_triangles(); ++t) {
    const int parent = fm.parent_map[t];
    if (parent < 0 || static_cast<std::size_t>(parent) >= cm.num_triangles())
      throw std::invalid_argument("prolong: parent index out of range");
    for (int i = 0; i < nb; ++i) {
      const Point r = coarse.map_to_reference(static_cast<std::size_t>(parent), fine.node_position(t, i));
      if (r.x() < -1e-10 || r.y() < -1e-10 || r.x() + r.y() > 1.0 + 1e-10)
        throw std::invalid_argument("prolong: child triangle " + std::to_string(t) +
                                    " is not contained in its parent");
      const Eigen::VectorXd phi = coarse.basis().values(r);
      for (int c = 0; c < z.components; ++c) {
        const auto local = z.component(c).segment(static_cast<Eigen::Index>(coarse.dof(parent, 0)), nb);
        out.component(c)[static_cast<Eigen::Index>(fine.dof(t, i))] = phi.dot(local);
      }
    }
  }
  return out;
}

Coefficients raise_degree(const DgSpace& low, const Coefficients& z, const DgSpace& high) {
  if (high.degree() < low.degree()) throw std::invalid_argument("raise_degree: target degree is lower");
  if (&low.mesh() != &high.mesh() && (low.mesh().num_triangles() != high.mesh().num_triangles() ||
                                      low.mesh().vertices != high.mesh().vertices))
    throw std::invalid_argument("raise_degree: spaces live on different meshes");
  if (z.scalar_dofs() != low.total_scalar_dofs())
    throw std::invalid_argument("raise_degree: coefficient vector does not match the source space");

  const int nl = low.dofs_per_triangle();
  const int nh = high.dofs_per_triangle();
  // the same reference-to-physical map on both sides, so one table serves all triangles
  Eigen::MatrixXd table(nh, nl);
  for (int i = 0; i < nh; ++i) table.row(i) = low.basis().values(high.basis().nodes()[i]).transpose();
  Coefficients out(z.components, high.total_scalar_dofs());
  for (std::size_t t = 0; t < low.mesh().num_triangles(); ++t)
    for (int c = 0; c < z.components; ++c)
      out.component(c).segment(static_cast<Eigen::Index>(high.dof(t, 0)), nh) =
          table * z.component(c).segment(static_cast<Eigen::Index>(low.dof(t, 0)), nl);
  return out;
}

}  // namespace ldg
