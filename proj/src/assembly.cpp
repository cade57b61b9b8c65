#include "ldg/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ldg {

namespace {

using Triplet = Eigen::Triplet<double>;

SparseMatrix from_triplets(Eigen::Index n, const std::vector<Triplet>& trip) {
  SparseMatrix m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

Eigen::MatrixX2d physical_gradients(const DgSpace& s, std::size_t t, const Eigen::MatrixX2d& ref) {
  return ref * s.inv_jacobian_t(t).transpose();
}

void add_block(std::vector<Triplet>& trip, std::size_t row0, std::size_t col0, const Eigen::MatrixXd& blk) {
  for (Eigen::Index i = 0; i < blk.rows(); ++i)
    for (Eigen::Index j = 0; j < blk.cols(); ++j)
      if (blk(i, j) != 0.0)
        trip.emplace_back(static_cast<Eigen::Index>(row0) + i, static_cast<Eigen::Index>(col0) + j, blk(i, j));
}

/// Trace data of one side of an edge at one quadrature point.
struct Trace {
  Eigen::VectorXd values;
  Eigen::VectorXd normal_derivs;
};

Trace side_trace(const DgSpace& s, std::size_t t, int side, bool reversed, std::size_t q, const Point& n) {
  const SideTable& tab = s.side_table(side, reversed);
  Trace tr;
  tr.values = tab.values.row(static_cast<Eigen::Index>(q)).transpose();
  tr.normal_derivs = physical_gradients(s, t, tab.grads[q]) * n;
  return tr;
}

/// Integration points along a boundary edge, split at data breakpoints.
struct EdgePoint {
  Point x;
  Point ref;  // reference coordinates in the owning triangle
  double weight;
};

std::vector<EdgePoint> boundary_points(const DgSpace& s, std::size_t edge, const EdgeQuadrature& rule,
                                       const BreakpointFunction& breaks) {
  const Mesh& m = s.mesh();
  const Edge& e = m.edges[edge];
  const Point& a = m.vertices[e.vertices[0]];
  const Point& b = m.vertices[e.vertices[1]];
  std::vector<double> cuts{0.0, 1.0};
  if (breaks) {
    for (double t : breaks(a, b))
      if (t > 1e-14 && t < 1.0 - 1e-14) cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());

  const auto tri = static_cast<std::size_t>(e.triangles[0]);
  std::vector<EdgePoint> pts;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k], hi = cuts[k + 1];
    if (hi - lo < 1e-15) continue;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double t = lo + (hi - lo) * rule.points[q];
      const Point x = a + t * (b - a);
      pts.push_back({x, s.map_to_reference(tri, x), (hi - lo) * rule.weights[q] * e.length});
    }
  }
  return pts;
}

void check_two_components(const Coefficients& z, const DgSpace& s, const char* who) {
  if (z.components != 2)
    throw std::invalid_argument(std::string(who) + ": expected a two-component field, got " +
                                std::to_string(z.components));
  if (z.scalar_dofs() != s.total_scalar_dofs())
    throw std::invalid_argument(std::string(who) + ": field does not match the space");
}

SparseMatrix assemble_scalar_interior_penalty(const DgSpace& s, const FormParams& p, bool consistency) {
  const Mesh& m = s.mesh();
  const int nb = s.dofs_per_triangle();
  const auto& vrule = s.volume_rule();
  const auto& erule = s.edge_rule();
  std::vector<Triplet> trip;
  trip.reserve(m.num_triangles() * nb * nb + m.num_edges() * 4 * nb * nb);

  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nb, nb);
    for (std::size_t q = 0; q < vrule.size(); ++q) {
      const Eigen::MatrixX2d g = physical_gradients(s, t, s.volume_ref_gradients(q));
      k.noalias() += (vrule.weights[q] * s.jacobian_det(t)) * g * g.transpose();
    }
    add_block(trip, s.dof(t, 0), s.dof(t, 0), k);
  }

  const double lambda = p.lambda;
  for (std::size_t ei = 0; ei < m.num_edges(); ++ei) {
    const Edge& e = m.edges[ei];
    const double pen = p.penalty_weight(m, e);
    const auto tp = static_cast<std::size_t>(e.triangles[0]);
    if (e.is_boundary()) {
      Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nb, nb);
      for (std::size_t q = 0; q < erule.size(); ++q) {
        const Trace tr = side_trace(s, tp, e.sides[0], false, q, e.normal);
        const double w = erule.weights[q] * e.length;
        k.noalias() += (w * pen) * tr.values * tr.values.transpose();
        if (consistency) {
          k.noalias() -= w * tr.values * tr.normal_derivs.transpose();
          k.noalias() += (w * lambda) * tr.normal_derivs * tr.values.transpose();
        }
      }
      add_block(trip, s.dof(tp, 0), s.dof(tp, 0), k);
      continue;
    }

    const auto tm = static_cast<std::size_t>(e.triangles[1]);
    const bool rev = s.minus_side_reversed(ei);
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(2 * nb, 2 * nb);
    Eigen::VectorXd jump(2 * nb), avg(2 * nb);
    for (std::size_t q = 0; q < erule.size(); ++q) {
      const Trace plus = side_trace(s, tp, e.sides[0], false, q, e.normal);
      const Trace minus = side_trace(s, tm, e.sides[1], rev, q, e.normal);
      jump << plus.values, -minus.values;
      avg << 0.5 * plus.normal_derivs, 0.5 * minus.normal_derivs;
      const double w = erule.weights[q] * e.length;
      k.noalias() += (w * pen) * jump * jump.transpose();
      if (consistency) {
        // rows are test functions: -{d theta/dn}[phi] + lambda {d phi/dn}[theta]
        k.noalias() -= w * jump * avg.transpose();
        k.noalias() += (w * lambda) * avg * jump.transpose();
      }
    }
    const std::array<std::size_t, 2> base{s.dof(tp, 0), s.dof(tm, 0)};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) add_block(trip, base[a], base[b], k.block(a * nb, b * nb, nb, nb));
  }
  return from_triplets(static_cast<Eigen::Index>(s.total_scalar_dofs()), trip);
}

}  // namespace

const TriangleQuadrature& load_volume_rule() {
  static const TriangleQuadrature rule = triangle_quadrature(16);
  return rule;
}

const EdgeQuadrature& load_edge_rule() {
  static const EdgeQuadrature rule = edge_quadrature(15);
  return rule;
}

SparseMatrix assemble_scalar_a_dg(const DgSpace& s, const FormParams& p) {
  p.validate();
  return assemble_scalar_interior_penalty(s, p, true);
}

SparseMatrix assemble_scalar_dg_gram(const DgSpace& s, const FormParams& p) {
  p.validate();
  return assemble_scalar_interior_penalty(s, p, false);
}

SparseMatrix assemble_scalar_mass(const DgSpace& s) {
  const int nb = s.dofs_per_triangle();
  const auto& vrule = s.volume_rule();
  Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(nb, nb);
  for (std::size_t q = 0; q < vrule.size(); ++q) {
    const Eigen::VectorXd phi = s.volume_values().row(static_cast<Eigen::Index>(q)).transpose();
    ref.noalias() += vrule.weights[q] * phi * phi.transpose();
  }
  std::vector<Triplet> trip;
  trip.reserve(s.mesh().num_triangles() * nb * nb);
  for (std::size_t t = 0; t < s.mesh().num_triangles(); ++t)
    add_block(trip, s.dof(t, 0), s.dof(t, 0), s.jacobian_det(t) * ref);
  return from_triplets(static_cast<Eigen::Index>(s.total_scalar_dofs()), trip);
}

Eigen::VectorXd assemble_scalar_boundary_load(const DgSpace& s, const ScalarFunction& g,
                                              const FormParams& p, const BreakpointFunction& breaks) {
  p.validate();
  const Mesh& m = s.mesh();
  const int nb = s.dofs_per_triangle();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.total_scalar_dofs()));
  for (std::size_t ei = 0; ei < m.num_edges(); ++ei) {
    const Edge& e = m.edges[ei];
    if (!e.is_boundary()) continue;
    const auto t = static_cast<std::size_t>(e.triangles[0]);
    const double pen = p.penalty_weight(m, e);
    auto local = out.segment(static_cast<Eigen::Index>(s.dof(t, 0)), nb);
    for (const EdgePoint& ep : boundary_points(s, ei, load_edge_rule(), breaks)) {
      const double gv = g(ep.x);
      if (gv == 0.0) continue;
      const Eigen::VectorXd phi = s.basis().values(ep.ref);
      const Eigen::VectorXd dn = physical_gradients(s, t, s.basis().gradients(ep.ref)) * e.normal;
      local += (ep.weight * gv) * (p.lambda * dn + pen * phi);
    }
  }
  return out;
}

SparseMatrix block_diagonal(const SparseMatrix& scalar) {
  const Eigen::Index n = scalar.rows();
  std::vector<Triplet> trip;
  trip.reserve(2 * static_cast<std::size_t>(scalar.nonZeros()));
  for (Eigen::Index r = 0; r < scalar.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(scalar, r); it; ++it) {
      trip.emplace_back(it.row(), it.col(), it.value());
      trip.emplace_back(it.row() + n, it.col() + n, it.value());
    }
  return from_triplets(2 * n, trip);
}

SystemMatrix assemble_a_dg(const DgSpace& s, const FormParams& p) {
  return {block_diagonal(assemble_scalar_a_dg(s, p)), p.lambda == -1};
}

SystemMatrix assemble_c_dg(const DgSpace& s, double linear) {
  SparseMatrix m = block_diagonal(assemble_scalar_mass(s));
  m *= linear;
  return {std::move(m), true};
}

SystemMatrix assemble_dg_gram(const DgSpace& s, const FormParams& p) {
  return {block_diagonal(assemble_scalar_dg_gram(s, p)), true};
}

LoadVector assemble_boundary_load(const DgSpace& s, const VectorFunction& g, const FormParams& p,
                                  const BreakpointFunction& breaks) {
  const auto n = static_cast<Eigen::Index>(s.total_scalar_dofs());
  LoadVector out(2 * n);
  out.head(n) = assemble_scalar_boundary_load(s, [&](const Point& x) { return g(x)[0]; }, p, breaks);
  out.tail(n) = assemble_scalar_boundary_load(s, [&](const Point& x) { return g(x)[1]; }, p, breaks);
  return out;
}

LoadVector assemble_body_load(const DgSpace& s, const VectorFunction& f) {
  const auto n = static_cast<Eigen::Index>(s.total_scalar_dofs());
  const int nb = s.dofs_per_triangle();
  const auto& rule = load_volume_rule();
  std::vector<Eigen::VectorXd> phi;
  phi.reserve(rule.size());
  for (const auto& pt : rule.points) phi.push_back(s.basis().values(pt));

  LoadVector out = LoadVector::Zero(2 * n);
  for (std::size_t t = 0; t < s.mesh().num_triangles(); ++t) {
    const auto d = static_cast<Eigen::Index>(s.dof(t, 0));
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d fv = f(s.map_to_physical(t, rule.points[q]));
      const double w = rule.weights[q] * s.jacobian_det(t);
      out.segment(d, nb) += (w * fv[0]) * phi[q];
      out.segment(d + n, nb) += (w * fv[1]) * phi[q];
    }
  }
  return out;
}

LoadVector apply_B_residual(const DgSpace& s, const Coefficients& z, double cubic) {
  check_two_components(z, s, "apply_B_residual");
  const auto n = static_cast<Eigen::Index>(s.total_scalar_dofs());
  const int nb = s.dofs_per_triangle();
  const auto& rule = s.volume_rule();
  const Eigen::MatrixXd& vals = s.volume_values();
  const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), static_cast<Eigen::Index>(rule.size()));

  LoadVector out = LoadVector::Zero(2 * n);
  for (std::size_t t = 0; t < s.mesh().num_triangles(); ++t) {
    const auto d = static_cast<Eigen::Index>(s.dof(t, 0));
    const Eigen::VectorXd u = vals * z.values.segment(d, nb);
    const Eigen::VectorXd v = vals * z.values.segment(d + n, nb);
    const Eigen::ArrayXd scale = (cubic * s.jacobian_det(t)) * w.array() * (u.array().square() + v.array().square());
    out.segment(d, nb) += vals.transpose() * (scale * u.array()).matrix();
    out.segment(d + n, nb) += vals.transpose() * (scale * v.array()).matrix();
  }
  return out;
}

SystemMatrix assemble_B_linearized(const DgSpace& s, const Coefficients& z, double cubic) {
  check_two_components(z, s, "assemble_B_linearized");
  const auto n = s.total_scalar_dofs();
  const int nb = s.dofs_per_triangle();
  const auto& rule = s.volume_rule();
  const Eigen::MatrixXd& vals = s.volume_values();
  const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), static_cast<Eigen::Index>(rule.size()));

  std::vector<Triplet> trip;
  trip.reserve(s.mesh().num_triangles() * 4 * nb * nb);
  for (std::size_t t = 0; t < s.mesh().num_triangles(); ++t) {
    const auto d = static_cast<Eigen::Index>(s.dof(t, 0));
    const Eigen::ArrayXd u = (vals * z.values.segment(d, nb)).array();
    const Eigen::ArrayXd v = (vals * z.values.segment(d + static_cast<Eigen::Index>(n), nb)).array();
    const Eigen::ArrayXd wt = (cubic * s.jacobian_det(t)) * w.array();
    const Eigen::ArrayXd mod2 = u.square() + v.square();
    const Eigen::ArrayXd cuu = wt * (mod2 + 2.0 * u * u);
    const Eigen::ArrayXd cvv = wt * (mod2 + 2.0 * v * v);
    const Eigen::ArrayXd cuv = wt * (2.0 * u * v);
    const Eigen::MatrixXd kuu = vals.transpose() * cuu.matrix().asDiagonal() * vals;
    const Eigen::MatrixXd kvv = vals.transpose() * cvv.matrix().asDiagonal() * vals;
    const Eigen::MatrixXd kuv = vals.transpose() * cuv.matrix().asDiagonal() * vals;
    const std::size_t r = s.dof(t, 0);
    add_block(trip, r, r, kuu);
    add_block(trip, r + n, r + n, kvv);
    add_block(trip, r, r + n, kuv);
    add_block(trip, r + n, r, kuv);
  }
  return {from_triplets(2 * static_cast<Eigen::Index>(n), trip), true};
}

DiscreteSystem::DiscreteSystem(const DgSpace& s, ProblemSpec prob)
    : space_(&s), problem_(std::move(prob)) {
  problem_.params.validate();
  SystemMatrix a = assemble_a_dg(s, problem_.params);
  SystemMatrix c = assemble_c_dg(s, problem_.linear);
  linear_.matrix = a.matrix + c.matrix;
  linear_.symmetric = a.symmetric;

  const auto n = static_cast<Eigen::Index>(s.total_scalar_dofs());
  load_ = problem_.g ? assemble_boundary_load(s, problem_.g, problem_.params, problem_.g_breakpoints)
                     : LoadVector::Zero(2 * n);
  if (problem_.f) load_ += assemble_body_load(s, problem_.f);
  gram_ = assemble_dg_gram(s, problem_.params).matrix;
}

LoadVector DiscreteSystem::residual(const Coefficients& z) const {
  check_two_components(z, *space_, "residual");
  LoadVector r = linear_.matrix * z.values - load_;
  if (problem_.cubic != 0.0) r += apply_B_residual(*space_, z, problem_.cubic);
  return r;
}

SystemMatrix DiscreteSystem::jacobian(const Coefficients& z) const {
  check_two_components(z, *space_, "jacobian");
  if (problem_.cubic == 0.0) return linear_;
  SystemMatrix b = assemble_B_linearized(*space_, z, problem_.cubic);
  return {linear_.matrix + b.matrix, linear_.symmetric};
}

double DiscreteSystem::dg_norm(const Eigen::VectorXd& v) const {
  return std::sqrt(std::max(0.0, v.dot(gram_ * v)));
}

LoadVector residual(const DgSpace& s, const Coefficients& z, const ProblemSpec& prob) {
  return DiscreteSystem(s, prob).residual(z);
}

SystemMatrix jacobian(const DgSpace& s, const Coefficients& z, const ProblemSpec& prob) {
  return DiscreteSystem(s, prob).jacobian(z);
}

}  // namespace ldg
