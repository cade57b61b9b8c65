#include <doctest.h>

#include <cmath>
#include <random>

#include "ldg/analysis.hpp"
#include "support.hpp"

using namespace ldg;
using ldg::test::random_reference_point;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

double monomial_integral(const TriangleQuadrature& q, int a, int b) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * std::pow(q.points[i].x(), a) * std::pow(q.points[i].y(), b);
  return s;
}

}  // namespace

TEST_CASE("triangle quadrature integrates monomials exactly") {
  for (int deg = 1; deg <= 20; ++deg) {
    const TriangleQuadrature q = triangle_quadrature(deg);
    CHECK(q.exact_degree >= deg);
    double wsum = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      CHECK(q.weights[i] > 0.0);
      CHECK(q.points[i].x() >= 0.0);
      CHECK(q.points[i].y() >= 0.0);
      CHECK(q.points[i].x() + q.points[i].y() <= 1.0 + 1e-15);
      wsum += q.weights[i];
    }
    CHECK(wsum == doctest::Approx(0.5).epsilon(1e-14));
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b) {
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        CHECK(std::abs(monomial_integral(q, a, b) - exact) <= 1e-14 + 1e-12 * exact);
      }
  }
  CHECK(monomial_integral(triangle_quadrature(2), 1, 1) == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
  CHECK_THROWS(triangle_quadrature(21));
}

TEST_CASE("edge quadrature") {
  for (int deg = 1; deg <= 29; ++deg) {
    const EdgeQuadrature q = edge_quadrature(deg);
    for (int m = 0; m <= deg; ++m) {
      double s = 0.0;
      for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * std::pow(q.points[i], m);
      CHECK(s == doctest::Approx(1.0 / (m + 1)).epsilon(1e-13));
    }
  }
  const EdgeQuadrature q7 = edge_quadrature(7);
  double s = 0.0;
  for (std::size_t i = 0; i < q7.size(); ++i) s += q7.weights[i] * std::pow(q7.points[i], 7);
  CHECK(s == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("Lagrange basis") {
  std::mt19937_64 rng(7);
  for (int k = 1; k <= 3; ++k) {
    const LagrangeBasis b(k);
    CHECK(b.size() == (k + 1) * (k + 2) / 2);
    for (int i = 0; i < 50; ++i) {
      const Point p = random_reference_point(rng);
      CHECK(b.values(p).sum() == doctest::Approx(1.0).epsilon(1e-13));
      const Eigen::Vector2d gs = b.gradients(p).colwise().sum().transpose();
      CHECK(gs.norm() < 1e-12);
    }
    for (int i = 0; i < b.size(); ++i) {
      const Eigen::VectorXd v = b.values(b.nodes()[i]);
      for (int j = 0; j < b.size(); ++j) CHECK(v[j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-13));
    }
    // gradients against central differences
    const Point p = random_reference_point(rng);
    const double t = 1e-6;
    const Eigen::MatrixX2d g = b.gradients(p);
    const Eigen::VectorXd dx = (b.values(p + Point(t, 0)) - b.values(p - Point(t, 0))) / (2 * t);
    const Eigen::VectorXd dy = (b.values(p + Point(0, t)) - b.values(p - Point(0, t))) / (2 * t);
    CHECK((g.col(0) - dx).norm() < 1e-7);
    CHECK((g.col(1) - dy).norm() < 1e-7);
  }
  const Eigen::VectorXd v1 = LagrangeBasis(1).values({0, 0});
  CHECK(v1[0] == 1.0);
  CHECK(v1[1] == 0.0);
  CHECK(v1[2] == 0.0);
  // k = 2: node 3 is the midpoint of side (0,1)
  const Eigen::VectorXd v2 = LagrangeBasis(2).values({0.5, 0.0});
  for (int j = 0; j < 6; ++j) CHECK(v2[j] == doctest::Approx(j == 3 ? 1.0 : 0.0).epsilon(1e-14));
}

TEST_CASE("dof counts") {
  CHECK(build_space(build_square_mesh(1), 1).total_scalar_dofs() == 6);
  CHECK(build_space(build_square_mesh(4), 3).total_scalar_dofs() == 320);
  const DgSpace s = build_space(build_square_mesh(1), 1);
  CHECK(Coefficients(2, s.total_scalar_dofs()).values.size() == 12);
}

TEST_CASE("reference map round trip") {
  const DgSpace s = build_space(build_annulus_mesh(0.5, 1.0, 16, 3), 2);
  std::mt19937_64 rng(3);
  for (std::size_t t = 0; t < s.mesh().num_triangles(); t += 5) {
    const Point r = random_reference_point(rng);
    CHECK((s.map_to_reference(t, s.map_to_physical(t, r)) - r).norm() < 1e-13);
    CHECK(s.jacobian_det(t) == doctest::Approx(2.0 * s.mesh().signed_area(t)).epsilon(1e-13));
  }
}

TEST_CASE("interpolation") {
  const FormParams p = FormParams::defaults(1);
  const DgSpace s1 = build_space(build_square_mesh(3), 1);

  const Coefficients one = interpolate(ScalarFunction([](const Point&) { return 1.0; }), s1);
  CHECK((one.values.array() == 1.0).all());
  CHECK(broken_h1_seminorm(s1, one) < 1e-14);

  const Coefficients xs = interpolate(ScalarFunction([](const Point& x) { return x.x(); }), s1);
  const ExactSolution ex{[](const Point& x) { return Eigen::Vector2d(x.x(), 0.0); },
                         [](const Point&) { Eigen::Matrix2d g = Eigen::Matrix2d::Zero(); g(0, 0) = 1.0; return g; }};
  Coefficients xv(2, s1.total_scalar_dofs());
  xv.component(0) = xs.values;
  CHECK(dg_error(s1, xv, ex, p) < 1e-12);

  // degree-k polynomials are reproduced at every degree
  std::mt19937_64 rng(11);
  for (int k = 1; k <= 3; ++k) {
    const DgSpace s = build_space(build_annulus_mesh(0.5, 1.0, 16, 3), k);
    auto poly = [k](const Point& x) {
      const double a = x.x(), b = x.y();
      const double ab = k >= 2 ? a * b : 0.0;
      return Eigen::Vector2d(std::pow(a, k) - 2 * std::pow(b, k) + ab, 1.0 + std::pow(a + b, k));
    };
    auto grad = [k](const Point& x) {
      const double a = x.x(), b = x.y();
      Eigen::Matrix2d g;
      const double c = k >= 2 ? 1.0 : 0.0;
      g << k * std::pow(a, k - 1) + c * b, -2 * k * std::pow(b, k - 1) + c * a,
          k * std::pow(a + b, k - 1), k * std::pow(a + b, k - 1);
      return g;
    };
    const Coefficients z = interpolate(VectorFunction(poly), s);
    CHECK(dg_error(s, z, ExactSolution{poly, grad}, FormParams::defaults(k)) < 1e-10);
    for (int i = 0; i < 20; ++i) {
      const std::size_t t = rng() % s.mesh().num_triangles();
      const Point r = random_reference_point(rng);
      const Eigen::Vector2d want = poly(s.map_to_physical(t, r));
      CHECK(std::abs(evaluate(s, z, 0, t, r) - want[0]) < 1e-12);
      CHECK(std::abs(evaluate(s, z, 1, t, r) - want[1]) < 1e-12);
    }
  }
}

TEST_CASE("interpolation error ratio for a bubble") {
  auto f = [](const Point& x) { return Eigen::Vector2d(x.x() * (1 - x.x()) * x.y() * (1 - x.y()), 0.0); };
  double prev = 0.0;
  for (int n : {8, 16, 32}) {
    const DgSpace s = build_space(build_square_mesh(n), 1);
    const double e = l2_error(s, interpolate(VectorFunction(f), s), VectorFunction(f));
    if (prev > 0.0) CHECK(prev / e == doctest::Approx(4.0).epsilon(0.05));
    prev = e;
  }
}

TEST_CASE("prolongation is exact on nested meshes") {
  std::mt19937_64 rng(20190403);
  for (int k = 1; k <= 3; ++k) {
    auto coarse_mesh = std::make_shared<const Mesh>(build_annulus_mesh(0.5, 1.0, 16, 3));
    auto fine_mesh = std::make_shared<const Mesh>(refine_uniform(*coarse_mesh));
    const DgSpace coarse(coarse_mesh, k), fine(fine_mesh, k);
    const Coefficients z = ldg::test::random_field(coarse, rng);
    const Coefficients zf = prolong(coarse, z, fine);
    std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi), rad(0.55, 0.9);
    int evaluated = 0;
    for (int i = 0; i < 100; ++i) {
      const double th = ang(rng), r = rad(rng);
      const Point x(r * std::cos(th), r * std::sin(th));
      Eigen::VectorXd a, b;
      if (!evaluate_at(coarse, z, x, a) || !evaluate_at(fine, zf, x, b)) continue;
      CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
      ++evaluated;
    }
    CHECK(evaluated > 90);

    // prolong of an interpolant equals the fine interpolant for degree-k data
    auto poly = [k](const Point& x) { return Eigen::Vector2d(std::pow(x.x() - x.y(), k), 2.0 * x.y()); };
    const Coefficients pc = prolong(coarse, interpolate(VectorFunction(poly), coarse), fine);
    CHECK((pc.values - interpolate(VectorFunction(poly), fine).values).cwiseAbs().maxCoeff() < 1e-12);

    const DgSpace other = build_space(build_square_mesh(2), k);
    CHECK_THROWS_AS(prolong(coarse, z, other), std::invalid_argument);
  }
  // constants stay constant
  const DgSpace c = build_space(build_square_mesh(2), 2);
  const DgSpace f = build_space(refine_uniform(build_square_mesh(2)), 2);
  const Coefficients k3 = prolong(c, interpolate(ScalarFunction([](const Point&) { return 3.0; }), c), f);
  CHECK((k3.values.array() - 3.0).abs().maxCoeff() < 1e-13);
}

TEST_CASE("degree elevation is exact") {
  std::mt19937_64 rng(5);
  auto mesh = ldg::test::square(3);
  for (int k = 1; k <= 2; ++k) {
    const DgSpace lo(mesh, k), hi(mesh, k + 1);
    const Coefficients z = ldg::test::random_field(lo, rng);
    const Coefficients zh = raise_degree(lo, z, hi);
    for (int i = 0; i < 50; ++i) {
      const std::size_t t = rng() % mesh->num_triangles();
      const Point r = random_reference_point(rng);
      for (int c = 0; c < 2; ++c) CHECK(std::abs(evaluate(lo, z, c, t, r) - evaluate(hi, zh, c, t, r)) < 1e-12);
    }
  }
}

TEST_CASE("boundary node classification") {
  const DgSpace s = build_space(build_square_mesh(2), 3);
  for (std::size_t t = 0; t < s.mesh().num_triangles(); ++t)
    for (int i = 0; i < s.dofs_per_triangle(); ++i) {
      const Point x = s.node_position(t, i);
      const bool on = std::min({x.x(), x.y(), 1 - x.x(), 1 - x.y()}) < 1e-12;
      CHECK(s.node_on_boundary(t, i) == on);
    }
}
