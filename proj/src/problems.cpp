#include "ldg/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ldg/assembly.hpp"
#include "ldg/solver.hpp"

namespace ldg {

ProblemSpec polynomial_problem(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("polynomial_problem: eps must be positive");
  const double c = landau_coefficient(eps);

  ProblemSpec p;
  p.name = "polynomial";
  p.domain = Domain::square;
  p.eps = eps;
  p.cubic = c;
  p.linear = -c;

  auto w = [](const Point& x) { return x.x() * (1.0 - x.x()) * x.y() * (1.0 - x.y()); };
  ExactSolution exact;
  exact.value = [w](const Point& x) {
    const double v = w(x);
    return Eigen::Vector2d(v, v);
  };
  exact.gradient = [](const Point& x) {
    const double gx = (1.0 - 2.0 * x.x()) * x.y() * (1.0 - x.y());
    const double gy = x.x() * (1.0 - x.x()) * (1.0 - 2.0 * x.y());
    Eigen::Matrix2d g;
    g << gx, gy, gx, gy;
    return g;
  };
  p.g = exact.value;
  p.f = [w, c](const Point& x) {
    const double v = w(x);
    const double minus_lap = 2.0 * x.y() * (1.0 - x.y()) + 2.0 * x.x() * (1.0 - x.x());
    const double fc = minus_lap + c * (2.0 * v * v - 1.0) * v;
    return Eigen::Vector2d(fc, fc);
  };
  p.exact = std::move(exact);
  return p;
}

double trapezoid(double t, double d) {
  if (!(d > 0.0 && d < 0.5)) throw std::invalid_argument("trapezoid: d must lie in (0, 1/2)");
  if (t <= d) return t / d;
  if (t >= 1.0 - d) return (1.0 - t) / d;
  return 1.0;
}

ProblemSpec well_problem(double eps) {
  if (!(eps > 0.0) || !(3.0 * eps < 0.5))
    throw std::invalid_argument("well_problem: need 0 < eps < 1/6 so that d = 3 eps < 1/2");
  const double c = landau_coefficient(eps);
  const double d = 3.0 * eps;

  ProblemSpec p;
  p.name = "well";
  p.domain = Domain::square;
  p.eps = eps;
  p.cubic = c;
  p.linear = -c;
  p.g = [d](const Point& x) {
    constexpr double tol = 1e-12;
    const bool horizontal = std::abs(x.y()) < tol || std::abs(x.y() - 1.0) < tol;
    const bool vertical = std::abs(x.x()) < tol || std::abs(x.x() - 1.0) < tol;
    if (horizontal) return Eigen::Vector2d(trapezoid(std::clamp(x.x(), 0.0, 1.0), d), 0.0);
    if (vertical) return Eigen::Vector2d(-trapezoid(std::clamp(x.y(), 0.0, 1.0), d), 0.0);
    // off the boundary: use the nearest side
    const double dy = std::min(x.y(), 1.0 - x.y());
    const double dx = std::min(x.x(), 1.0 - x.x());
    if (dy <= dx) return Eigen::Vector2d(trapezoid(std::clamp(x.x(), 0.0, 1.0), d), 0.0);
    return Eigen::Vector2d(-trapezoid(std::clamp(x.y(), 0.0, 1.0), d), 0.0);
  };
  p.g_breakpoints = [d](const Point& a, const Point& b) {
    std::vector<double> out;
    for (double level : {d, 1.0 - d}) {
      for (int axis = 0; axis < 2; ++axis) {
        const double da = b[axis] - a[axis];
        if (std::abs(da) < 1e-15) continue;
        const double t = (level - a[axis]) / da;
        if (t > 0.0 && t < 1.0) out.push_back(t);
      }
    }
    return out;
  };
  return p;
}

ProblemSpec annulus_problem() {
  const double cc = kAnnulusMaterialC / kAnnulusMaterialA;
  ProblemSpec p;
  p.name = "annulus";
  p.domain = Domain::annulus;
  p.material_constant = cc;
  p.cubic = 2.0 * cc;
  p.linear = -1.0;

  ExactSolution exact;
  exact.value = [](const Point& x) {
    const double r2 = x.squaredNorm();
    return Eigen::Vector2d(2.0 * x.x() * x.x() / r2 - 1.0, 2.0 * x.x() * x.y() / r2);
  };
  exact.gradient = [](const Point& x) {
    const double X = x.x(), Y = x.y();
    const double r4 = x.squaredNorm() * x.squaredNorm();
    Eigen::Matrix2d g;
    g << 4.0 * X * Y * Y / r4, -4.0 * X * X * Y / r4,
        2.0 * Y * (Y * Y - X * X) / r4, 2.0 * X * (X * X - Y * Y) / r4;
    return g;
  };
  p.g = exact.value;
  // Psi = (cos 2phi, sin 2phi): -Lap Psi = 4/r^2 Psi and |Psi| = 1.
  p.f = [cc, val = exact.value](const Point& x) -> Eigen::Vector2d {
    return (4.0 / x.squaredNorm() - 1.0 + 2.0 * cc) * val(x);
  };
  p.exact = std::move(exact);
  return p;
}

WellState WellState::make(WellStateKind kind) {
  constexpr double pi = std::numbers::pi;
  WellState s;
  s.kind = kind;
  switch (kind) {
    case WellStateKind::D1: s.angles = {pi / 2, pi / 2, 0.0, 0.0}; break;
    case WellStateKind::D2: s.angles = {pi / 2, pi / 2, pi, pi}; break;
    case WellStateKind::R1: s.angles = {pi / 2, pi / 2, pi, 0.0}; break;
    case WellStateKind::R2: s.angles = {pi / 2, pi / 2, 0.0, pi}; break;
    case WellStateKind::R3: s.angles = {3 * pi / 2, pi / 2, pi, pi}; break;
    case WellStateKind::R4: s.angles = {pi / 2, 3 * pi / 2, pi, pi}; break;
  }
  return s;
}

WellState WellState::from_name(const std::string& name) {
  for (WellStateKind k : kAllWellStates) {
    WellState s = make(k);
    if (s.name() == name) return s;
  }
  throw std::invalid_argument("unknown well state '" + name + "' (expected D1, D2, R1, R2, R3 or R4)");
}

std::string WellState::name() const {
  switch (kind) {
    case WellStateKind::D1: return "D1";
    case WellStateKind::D2: return "D2";
    case WellStateKind::R1: return "R1";
    case WellStateKind::R2: return "R2";
    case WellStateKind::R3: return "R3";
    case WellStateKind::R4: return "R4";
  }
  return "?";
}

double WellState::boundary_angle(const Point& p) const {
  const std::array<double, 4> dist{std::abs(p.x()), std::abs(1.0 - p.x()), std::abs(p.y()), std::abs(1.0 - p.y())};
  std::size_t best = 0;
  for (std::size_t i = 1; i < 4; ++i)
    if (dist[i] < dist[best]) best = i;
  return angles[best];
}

Coefficients initial_guess_director(const DgSpace& s, const WellState& state, const FormParams& p,
                                    const VectorFunction& g) {
  const SystemMatrix a{assemble_scalar_a_dg(s, p), p.lambda == -1};
  const Eigen::VectorXd rhs =
      assemble_scalar_boundary_load(s, [&state](const Point& x) { return state.boundary_angle(x); }, p);
  const Eigen::VectorXd theta = solve_linear(a, rhs);

  const std::size_t n = s.total_scalar_dofs();
  Coefficients z(2, n);
  const int nb = s.dofs_per_triangle();
  for (std::size_t t = 0; t < s.mesh().num_triangles(); ++t) {
    for (int i = 0; i < nb; ++i) {
      const auto d = static_cast<Eigen::Index>(s.dof(t, i));
      const double mag = s.node_on_boundary(t, i) ? g(s.node_position(t, i)).norm() : 1.0;
      z.values[d] = mag * std::cos(2.0 * theta[d]);
      z.values[d + static_cast<Eigen::Index>(n)] = mag * std::sin(2.0 * theta[d]);
    }
  }
  return z;
}

Coefficients initial_guess_director(const DgSpace& s, const WellState& state, const FormParams& p,
                                    double eps) {
  return initial_guess_director(s, state, p, well_problem(eps).g);
}

ProblemSpec problem_by_name(const std::string& name, double eps) {
  if (name == "polynomial") return polynomial_problem(eps);
  if (name == "annulus") return annulus_problem();
  if (name.rfind("well:", 0) == 0) {
    const WellState st = WellState::from_name(name.substr(5));
    ProblemSpec p = well_problem(eps);
    p.name = "well:" + st.name();
    return p;
  }
  throw std::invalid_argument("unknown problem '" + name + "' (expected polynomial, well:<state> or annulus)");
}

}  // namespace ldg
