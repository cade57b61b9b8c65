#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ldg/dgspace.hpp"
#include "ldg/forms.hpp"

namespace ldg {

enum class Domain { square, annulus };

/// Parameter values in (0, 1) where boundary data has a kink along the
/// segment a -> b. Used to split edge quadrature so piecewise-smooth data is
/// integrated exactly.
using BreakpointFunction = std::function<std::vector<double>(const Point& a, const Point& b)>;

struct ExactSolution {
  VectorFunction value;
  GradientFunction gradient;
};

/// The semilinear problem -Lap(Psi) + cubic |Psi|^2 Psi + linear Psi = f with
/// Psi = g weakly on the boundary.
///
/// Landau-de Gennes scaling: cubic = 2/eps^2, linear = -2/eps^2.
/// Annulus scaling: cubic = 2 C, linear = -1.
struct ProblemSpec {
  std::string name;
  Domain domain = Domain::square;
  double eps = 0.0;                // 0 when the problem is not eps-scaled
  double material_constant = 0.0;  // annulus C, 0 otherwise
  double cubic = 0.0;
  double linear = 0.0;
  VectorFunction g;
  BreakpointFunction g_breakpoints;  // optional
  VectorFunction f;                  // optional, zero when empty
  std::optional<ExactSolution> exact;
  FormParams params;
};

ProblemSpec polynomial_problem(double eps);

/// Piecewise-linear ramp: t/d on [0, d], 1 on [d, 1-d], (1-t)/d on [1-d, 1].
double trapezoid(double t, double d);

ProblemSpec well_problem(double eps);

inline constexpr double kAnnulusMaterialA = 0.172e6;
inline constexpr double kAnnulusMaterialC = 1.73e6;
inline constexpr double kAnnulusInnerRadius = 0.5;
inline constexpr double kAnnulusOuterRadius = 1.0;

ProblemSpec annulus_problem();

/// The six equilibria of the square well.
enum class WellStateKind { D1, D2, R1, R2, R3, R4 };

struct WellState {
  WellStateKind kind = WellStateKind::D1;
  /// Director angles on x = 0, x = 1, y = 0, y = 1.
  std::array<double, 4> angles{};

  static WellState make(WellStateKind kind);
  static WellState from_name(const std::string& name);
  std::string name() const;
  /// Boundary angle at a point of the unit square boundary.
  double boundary_angle(const Point& p) const;
};

inline constexpr std::array<WellStateKind, 6> kAllWellStates{
    WellStateKind::D1, WellStateKind::D2, WellStateKind::R1,
    WellStateKind::R2, WellStateKind::R3, WellStateKind::R4};

/// Solves the scalar dG Laplace problem for the director angle with the
/// state's boundary angles, then forms s (cos 2 theta, sin 2 theta) with
/// s = 1 at interior nodes and s = |g| at boundary nodes.
Coefficients initial_guess_director(const DgSpace& s, const WellState& state, const FormParams& p,
                                    const VectorFunction& g);
/// Same, with g from well_problem(eps).
Coefficients initial_guess_director(const DgSpace& s, const WellState& state, const FormParams& p,
                                    double eps);

/// Builds a problem by CLI name: "polynomial", "well:D1" ... "well:R4", "annulus".
ProblemSpec problem_by_name(const std::string& name, double eps);

}  // namespace ldg
