#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ldg/assembly.hpp"
#include "ldg/problems.hpp"
#include "ldg/solver.hpp"

namespace ldg {

// Norms and errors. Two-component fields use the product norm.

double dg_norm(const DgSpace& s, const Coefficients& z, const FormParams& p);
/// dG norm of Z - exact; boundary jumps are measured as Z - exact.
double dg_error(const DgSpace& s, const Coefficients& z, const ExactSolution& exact, const FormParams& p);
/// dG norm of Z - reference, both on the same space.
double dg_error(const DgSpace& s, const Coefficients& z, const Coefficients& reference, const FormParams& p);

double broken_h1_seminorm(const DgSpace& s, const Coefficients& z);
double l2_norm(const DgSpace& s, const Coefficients& z);
double l2_error(const DgSpace& s, const Coefficients& z, const VectorFunction& exact);
double l2_error(const DgSpace& s, const Coefficients& z, const Coefficients& reference);

/// int |grad Psi|^2 + eps^-2 (|Psi|^2 - 1)^2 with the broken gradient.
double energy(const DgSpace& s, const Coefficients& z, double eps);

/// Experimental orders log(e_n / e_i) / log(h_n / h_i) against the record
/// with the smallest h; returned in input order with that record skipped.
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& h);

struct ErrorRecord {
  double h = 0.0;
  std::size_t dofs = 0;  // scalar dofs
  std::optional<double> err_dg;
  std::optional<double> err_l2;
  std::optional<double> energy;
  int newton_iterations = 0;
  double eps = 0.0;
  int k = 1;
  bool converged = true;
};

struct ConvergenceTable {
  std::string label;
  std::vector<ErrorRecord> records;
  /// One per record except the finest; empty optionals where an order is
  /// undefined.
  std::vector<std::optional<double>> order_dg;
  std::vector<std::optional<double>> order_l2;

  void compute_orders();
};

/// What the well study measures errors against.
///   finest:   the finest study level itself (its own error row is empty)
///   refined:  one extra uniformly refined level at the same degree
///   elevated: degree k + 1 on the finest study mesh
enum class ReferenceKind { finest, refined, elevated };
std::string to_string(ReferenceKind r);
ReferenceKind reference_kind_from_string(const std::string& s);

struct StudyOptions {
  int k = 1;
  int levels = 1;
  FormParams params = FormParams::defaults(1);
  NewtonConfig newton;
  /// Start each level from the prolonged previous solution.
  bool warmstart = false;
  ReferenceKind reference = ReferenceKind::finest;
};

struct LevelOutcome {
  std::shared_ptr<const DgSpace> space;
  Coefficients solution;
  NewtonTrace trace;
  NewtonStatus status = NewtonStatus::converged;
  std::string message;
};

struct StudyResult {
  ConvergenceTable table;
  std::vector<LevelOutcome> levels;
  std::optional<LevelOutcome> reference;

  bool all_converged() const;
};

/// Manufactured-solution study: Newton from Z0 = 0 on each level, errors
/// against the exact solution.
StudyResult run_manufactured_study(const ProblemSpec& prob, const Mesh& base, const StudyOptions& opt);

/// Square-well study for one state: director initial guess on each level,
/// errors against the reference solution through prolongation. A refined or
/// elevated reference is warm-started from the finest level.
StudyResult run_well_study(double eps, const WellState& state, const Mesh& base, const StudyOptions& opt);

/// One manufactured study per eps; non-convergent cells are flagged, not
/// raised.
std::vector<ConvergenceTable> epsilon_sweep(const std::string& family, const std::vector<double>& eps_list,
                                            const Mesh& base, const StudyOptions& opt);

}  // namespace ldg
