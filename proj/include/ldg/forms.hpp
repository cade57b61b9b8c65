#pragma once

#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "ldg/mesh.hpp"

namespace ldg {

/// Penalty denominator on an edge: its own length, or the global mesh size.
enum class PenaltyScaling { local, global };

std::string to_string(PenaltyScaling p);
PenaltyScaling penalty_scaling_from_string(const std::string& s);

/// Parameters of the interior-penalty form. lambda = -1, 0, +1 selects the
/// symmetric, incomplete and non-symmetric variants.
struct FormParams {
  double sigma = 10.0;
  int lambda = -1;
  PenaltyScaling penalty = PenaltyScaling::local;

  /// sigma = 10 k^2, SIPG, local penalty scaling.
  static FormParams defaults(int k);
  /// Throws std::invalid_argument on sigma <= 0 or lambda outside {-1, 0, 1}.
  void validate() const;
  /// sigma / h_E for the given edge.
  double penalty_weight(const Mesh& m, const Edge& e) const;
};

/// Row-major (compressed sparse row) storage.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using LoadVector = Eigen::VectorXd;

struct SystemMatrix {
  SparseMatrix matrix;
  bool symmetric = false;

  Eigen::Index rows() const { return matrix.rows(); }
};

/// 2 / eps^2, the coefficient of the Landau-de Gennes bulk term.
inline double landau_coefficient(double eps) { return 2.0 / (eps * eps); }

}  // namespace ldg
