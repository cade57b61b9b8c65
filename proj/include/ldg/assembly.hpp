#pragma once

#include "ldg/dgspace.hpp"
#include "ldg/forms.hpp"
#include "ldg/problems.hpp"

namespace ldg {

// Scalar building blocks over one component.

/// a_h - J + lambda J^T + J^sigma over interior and boundary edges.
SparseMatrix assemble_scalar_a_dg(const DgSpace& s, const FormParams& p);
SparseMatrix assemble_scalar_mass(const DgSpace& s);
/// Gram matrix of the dG norm: broken H1 seminorm plus penalized jumps.
SparseMatrix assemble_scalar_dg_gram(const DgSpace& s, const FormParams& p);
/// lambda int dphi/dn g + int (sigma/h_E) g phi over boundary edges.
Eigen::VectorXd assemble_scalar_boundary_load(const DgSpace& s, const ScalarFunction& g,
                                              const FormParams& p,
                                              const BreakpointFunction& breaks = {});

/// diag(scalar, scalar) over the block [u; v] layout.
SparseMatrix block_diagonal(const SparseMatrix& scalar);

// Two-component forms.

SystemMatrix assemble_a_dg(const DgSpace& s, const FormParams& p);
/// linear * mass, block diagonal. The Landau-de Gennes form uses linear = -2/eps^2.
SystemMatrix assemble_c_dg(const DgSpace& s, double linear);
SystemMatrix assemble_dg_gram(const DgSpace& s, const FormParams& p);

LoadVector assemble_boundary_load(const DgSpace& s, const VectorFunction& g, const FormParams& p,
                                  const BreakpointFunction& breaks = {});
LoadVector assemble_body_load(const DgSpace& s, const VectorFunction& f);

/// Entries cubic * sum_T int |Z|^2 (Z . Phi).
LoadVector apply_B_residual(const DgSpace& s, const Coefficients& z, double cubic);
/// Matrix of cubic * sum_T int |Z|^2 (Theta . Phi) + 2 (Z . Theta)(Z . Phi).
SystemMatrix assemble_B_linearized(const DgSpace& s, const Coefficients& z, double cubic);

/// Quadrature rule used for load vectors and error integrals of
/// non-polynomial data.
const TriangleQuadrature& load_volume_rule();
const EdgeQuadrature& load_edge_rule();

/// Caches the Z-independent parts of the discrete system for one problem on
/// one space. The space must outlive this object.
class DiscreteSystem {
 public:
  DiscreteSystem(const DgSpace& s, ProblemSpec prob);

  const DgSpace& space() const { return *space_; }
  const ProblemSpec& problem() const { return problem_; }
  /// A_dG + C_dG.
  const SystemMatrix& linear_part() const { return linear_; }
  /// Boundary plus body load.
  const LoadVector& load() const { return load_; }
  const SparseMatrix& gram() const { return gram_; }

  LoadVector residual(const Coefficients& z) const;
  SystemMatrix jacobian(const Coefficients& z) const;
  double dg_norm(const Eigen::VectorXd& v) const;

 private:
  const DgSpace* space_;
  ProblemSpec problem_;
  SystemMatrix linear_;
  LoadVector load_;
  SparseMatrix gram_;
};

/// N_h(Z; .) - L: A Z + B(Z,Z,Z,.) + C Z - L_boundary - L_body.
LoadVector residual(const DgSpace& s, const Coefficients& z, const ProblemSpec& prob);
/// A + 3 B(Z, Z, ., .) + C.
SystemMatrix jacobian(const DgSpace& s, const Coefficients& z, const ProblemSpec& prob);

}  // namespace ldg
