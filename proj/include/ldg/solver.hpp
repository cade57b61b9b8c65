#pragma once

#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldg/assembly.hpp"

namespace ldg {

enum class LinearBackend { direct, iterative };

std::string to_string(LinearBackend b);

/// Thrown when a linear solve cannot reach its residual target.
class LinearSolveError : public std::runtime_error {
 public:
  LinearSolveError(const std::string& what, double achieved)
      : std::runtime_error(what + " (relative residual " + format(achieved) + ")"),
        achieved_residual(achieved) {}
  double achieved_residual;

 private:
  static std::string format(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", x);
    return buf;
  }
};

/// Solves M x = rhs with relative residual |M x - rhs| / |rhs| below rtol,
/// otherwise throws LinearSolveError. rtol <= 0 selects the backend default:
/// 1e-12 for the direct sparse factorization, 1e-10 for preconditioned BiCGSTAB.
Eigen::VectorXd solve_linear(const SystemMatrix& m, const Eigen::VectorXd& rhs,
                             LinearBackend backend = LinearBackend::direct, double rtol = 0.0);

struct NewtonConfig {
  double tol_dg = 1e-10;   // dG norm of the correction
  double tol_res = 1e-10;  // Euclidean norm of the residual vector
  int max_iter = 50;
  LinearBackend backend = LinearBackend::direct;
  /// Relative residual accepted from each Newton linear solve. Late Newton
  /// steps have tiny right-hand sides, so the backend default is out of
  /// reach on fine meshes.
  double linear_rtol = 1e-8;

  void validate() const;
};

struct NewtonRecord {
  int iteration = 0;
  double correction_dg = 0.0;
  double residual_norm = 0.0;
  /// |delta^n| / |delta^{n-1}|^2, from the second iteration on.
  std::optional<double> quadratic_ratio;
};

struct NewtonTrace {
  double initial_residual = 0.0;
  std::vector<NewtonRecord> records;

  int iterations() const { return static_cast<int>(records.size()); }
};

enum class NewtonStatus { converged, max_iterations, singular_jacobian };

struct NewtonResult {
  Coefficients solution;
  NewtonTrace trace;
  NewtonStatus status = NewtonStatus::max_iterations;
  std::string message;

  bool converged() const { return status == NewtonStatus::converged; }
};

/// Delta-form Newton: DN_h(Z) delta = -N_h(Z), Z += delta.
NewtonResult newton_solve(const DiscreteSystem& sys, Coefficients z0, const NewtonConfig& cfg = {});
NewtonResult newton_solve(const DgSpace& s, const ProblemSpec& prob, Coefficients z0,
                          const NewtonConfig& cfg = {});

struct KantorovichConfig {
  int samples = 20;
  /// Sampling radius in the dG norm around Z0; <= 0 selects 2 b.
  double radius = 0.0;
  std::uint64_t seed = 20190403;
  std::size_t max_dofs = 4000;
};

/// Newton-Kantorovich quantities at Z0, computed densely. The Lipschitz
/// constant is a sampled lower estimate, so certification is advisory.
struct KantorovichReport {
  double a = 0.0;          // |DN_h(Z0)^{-1}| from the dual to the dG norm
  double b = 0.0;          // dG norm of the first Newton correction
  double lipschitz = 0.0;  // sampled
  double h_star = 0.0;
  bool certified = false;
  double r = std::numeric_limits<double>::quiet_NaN();
  double r_star = std::numeric_limits<double>::quiet_NaN();
  int samples = 0;
  double sample_radius = 0.0;
};

KantorovichReport kantorovich_diagnostic(const DiscreteSystem& sys, const Coefficients& z0,
                                         const KantorovichConfig& cfg = {});

}  // namespace ldg
