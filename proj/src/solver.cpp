#include "ldg/solver.hpp"

#include <cmath>
#include <optional>
#include <random>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace ldg {

std::string to_string(LinearBackend b) { return b == LinearBackend::direct ? "direct" : "iterative"; }

namespace {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

double relative_residual(const SparseMatrix& m, const Eigen::VectorXd& x, const Eigen::VectorXd& rhs) {
  const double nb = rhs.norm();
  const double nr = (m * x - rhs).norm();
  return nb > 0.0 ? nr / nb : nr;
}

template <class Factorization>
std::optional<Eigen::VectorXd> factor_and_solve(const ColMatrix& a, const SparseMatrix& m,
                                                const Eigen::VectorXd& rhs, double& res) {
  Factorization f;
  f.compute(a);
  if (f.info() != Eigen::Success) return std::nullopt;
  Eigen::VectorXd x = f.solve(rhs);
  res = relative_residual(m, x, rhs);
  // a few steps of iterative refinement with the same factors
  for (int it = 0; it < 3 && std::isfinite(res) && res >= 1e-13; ++it) {
    const Eigen::VectorXd r = rhs - m * x;
    x += f.solve(r);
    res = relative_residual(m, x, rhs);
  }
  return x;
}

Eigen::VectorXd solve_direct(const SparseMatrix& m, bool symmetric, const Eigen::VectorXd& rhs, double rtol) {
  ColMatrix a = m;
  a.makeCompressed();
  double res = 1.0;
  if (symmetric) {
    // LDL^T without pivoting; fall back to LU when it breaks down
    auto x = factor_and_solve<Eigen::SimplicialLDLT<ColMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>>(a, m, rhs, res);
    if (x && std::isfinite(res) && res < rtol) return *x;
  }
  auto x = factor_and_solve<Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>>>(a, m, rhs, res);
  if (!x) throw LinearSolveError("sparse LU factorization failed", 1.0);
  if (!std::isfinite(res) || res >= rtol) throw LinearSolveError("direct solve inaccurate", res);
  return *x;
}

Eigen::VectorXd solve_iterative(const SparseMatrix& m, const Eigen::VectorXd& rhs, double rtol) {
  Eigen::BiCGSTAB<SparseMatrix, Eigen::IncompleteLUT<double>> solver;
  solver.preconditioner().setDroptol(1e-6);
  solver.preconditioner().setFillfactor(20);
  solver.setTolerance(std::min(1e-12, 0.01 * rtol));
  solver.setMaxIterations(std::max<Eigen::Index>(1000, m.rows()));
  solver.compute(m);
  if (solver.info() != Eigen::Success) throw LinearSolveError("ILUT preconditioner failed", 1.0);
  Eigen::VectorXd x = solver.solve(rhs);
  const double res = relative_residual(m, x, rhs);
  if (!std::isfinite(res) || res >= rtol) throw LinearSolveError("iterative solve did not converge", res);
  return x;
}

}  // namespace

Eigen::VectorXd solve_linear(const SystemMatrix& m, const Eigen::VectorXd& rhs, LinearBackend backend, double rtol) {
  if (m.matrix.rows() != m.matrix.cols() || m.matrix.rows() != rhs.size())
    throw std::invalid_argument("solve_linear: dimension mismatch");
  if (rhs.size() == 0) return {};
  if (rtol <= 0.0) rtol = backend == LinearBackend::direct ? 1e-12 : 1e-10;
  return backend == LinearBackend::direct ? solve_direct(m.matrix, m.symmetric, rhs, rtol)
                                          : solve_iterative(m.matrix, rhs, rtol);
}

void NewtonConfig::validate() const {
  if (!(tol_dg > 0.0) || !(tol_res > 0.0)) throw std::invalid_argument("Newton tolerances must be positive");
  if (max_iter < 1) throw std::invalid_argument("Newton max_iter must be >= 1");
  if (!(linear_rtol > 0.0)) throw std::invalid_argument("Newton linear_rtol must be positive");
}

NewtonResult newton_solve(const DiscreteSystem& sys, Coefficients z0, const NewtonConfig& cfg) {
  cfg.validate();
  NewtonResult out;
  out.solution = std::move(z0);
  Eigen::VectorXd r = sys.residual(out.solution);
  out.trace.initial_residual = r.norm();

  double prev = 0.0;
  for (int n = 1; n <= cfg.max_iter; ++n) {
    Eigen::VectorXd delta;
    try {
      delta = solve_linear(sys.jacobian(out.solution), -r, cfg.backend, cfg.linear_rtol);
    } catch (const LinearSolveError& e) {
      out.status = NewtonStatus::singular_jacobian;
      out.message = "singular Jacobian at iteration " + std::to_string(n) + ": " + e.what();
      return out;
    }
    out.solution.values += delta;
    r = sys.residual(out.solution);

    NewtonRecord rec;
    rec.iteration = n;
    rec.correction_dg = sys.dg_norm(delta);
    rec.residual_norm = r.norm();
    if (n > 1 && prev > 0.0) rec.quadratic_ratio = rec.correction_dg / (prev * prev);
    prev = rec.correction_dg;
    out.trace.records.push_back(rec);

    if (!std::isfinite(rec.correction_dg) || !std::isfinite(rec.residual_norm)) {
      out.status = NewtonStatus::max_iterations;
      out.message = "Newton iterates became non-finite at iteration " + std::to_string(n);
      return out;
    }
    if (rec.correction_dg < cfg.tol_dg && rec.residual_norm < cfg.tol_res) {
      out.status = NewtonStatus::converged;
      out.message = "converged in " + std::to_string(n) + " iterations";
      return out;
    }
  }
  out.status = NewtonStatus::max_iterations;
  out.message = "no convergence after " + std::to_string(cfg.max_iter) + " iterations";
  return out;
}

NewtonResult newton_solve(const DgSpace& s, const ProblemSpec& prob, Coefficients z0, const NewtonConfig& cfg) {
  DiscreteSystem sys(s, prob);
  return newton_solve(sys, std::move(z0), cfg);
}

KantorovichReport kantorovich_diagnostic(const DiscreteSystem& sys, const Coefficients& z0,
                                         const KantorovichConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(z0.values.size());
  if (static_cast<std::size_t>(n) > cfg.max_dofs)
    throw std::invalid_argument("kantorovich_diagnostic: " + std::to_string(n) +
                                " dofs exceed the dense limit of " + std::to_string(cfg.max_dofs));
  if (cfg.samples < 1) throw std::invalid_argument("kantorovich_diagnostic: need at least one sample");

  const Eigen::MatrixXd gram = Eigen::MatrixXd(sys.gram());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0)
    throw std::runtime_error("kantorovich_diagnostic: dG Gram matrix is not positive definite");
  const Eigen::MatrixXd g_inv_half =
      eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();

  // Operator norm from the dG norm to its dual: |G^{-1/2} M G^{-1/2}|_2.
  auto scaled = [&](const SparseMatrix& m) -> Eigen::MatrixXd { return g_inv_half * Eigen::MatrixXd(m) * g_inv_half; };

  KantorovichReport rep;
  const SystemMatrix jac = sys.jacobian(z0);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled(jac.matrix));
  const double smin = svd.singularValues().minCoeff();
  if (!(smin > 0.0)) throw std::runtime_error("kantorovich_diagnostic: Jacobian is singular at Z0");
  rep.a = 1.0 / smin;

  const Eigen::VectorXd delta = solve_linear(jac, -sys.residual(z0));
  rep.b = sys.dg_norm(delta);

  const double z0_norm = sys.dg_norm(z0.values);
  rep.sample_radius = cfg.radius > 0.0 ? cfg.radius : std::max(2.0 * rep.b, 1e-8 * (1.0 + z0_norm));

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto sample = [&]() {
    Coefficients y = z0;
    Eigen::VectorXd d(n);
    for (Eigen::Index i = 0; i < n; ++i) d[i] = normal(rng);
    y.values += (rep.sample_radius * unit(rng) / sys.dg_norm(d)) * d;
    return y;
  };

  for (int k = 0; k < cfg.samples; ++k) {
    const Coefficients y1 = sample();
    const Coefficients y2 = sample();
    const double dist = sys.dg_norm(y1.values - y2.values);
    if (!(dist > 0.0)) continue;
    const SparseMatrix diff = sys.jacobian(y1).matrix - sys.jacobian(y2).matrix;
    const double op = diff.nonZeros() == 0 ? 0.0 : Eigen::JacobiSVD<Eigen::MatrixXd>(scaled(diff)).singularValues()(0);
    rep.lipschitz = std::max(rep.lipschitz, op / dist);
    ++rep.samples;
  }

  rep.h_star = rep.a * rep.b * rep.lipschitz;
  rep.certified = rep.h_star <= 0.5;
  if (rep.certified) {
    if (rep.lipschitz == 0.0) {
      rep.r = 0.0;
      rep.r_star = std::numeric_limits<double>::infinity();
    } else {
      const double root = std::sqrt(1.0 - 2.0 * rep.h_star);
      const double al = rep.a * rep.lipschitz;
      rep.r = std::max(0.0, (1.0 - root) / al - rep.b);
      rep.r_star = (1.0 + root) / al;
    }
  }
  return rep;
}

}  // namespace ldg
