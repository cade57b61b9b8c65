// ldg: command-line driver for the dG Landau-de Gennes solver.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <fstream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "ldg/io.hpp"
#include "ldg/study.hpp"

namespace {

struct Flags {
  std::optional<std::string> problem, reference, penalty, state, out, solver, config, print_config;
  std::optional<int> k, lambda, levels, n, n_seg, n_rings, max_iter;
  std::optional<double> eps, sigma, tol_dg, tol_res;
  std::optional<bool> vtk;
  std::optional<std::uint64_t> seed;
  std::vector<double> eps_list;
  bool warmstart = false;
};

void add_study_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON config; explicit flags override it");
  app->add_option("--problem", f.problem, "polynomial | annulus | well | well:<state>");
  app->add_option("--k", f.k, "polynomial degree")->check(CLI::Range(1, 3));
  app->add_option("--eps", f.eps, "epsilon");
  app->add_option("--sigma", f.sigma, "penalty parameter (default 10 k^2)");
  app->add_option("--lambda", f.lambda, "-1 SIPG, 0 IIPG, 1 NIPG")->check(CLI::IsMember({-1, 0, 1}));
  app->add_option("--penalty", f.penalty, "penalty denominator")->check(CLI::IsMember({"local", "global"}));
  app->add_option("--levels", f.levels, "number of refinement levels");
  app->add_option("--n", f.n, "base square mesh subdivisions");
  app->add_option("--state", f.state, "well state")->check(CLI::IsMember({"D1", "D2", "R1", "R2", "R3", "R4"}));
  app->add_option("--n-seg", f.n_seg, "annulus segments per ring");
  app->add_option("--n-rings", f.n_rings, "annulus rings");
  app->add_option("--reference", f.reference, "well: error reference")
      ->check(CLI::IsMember({"finest", "refined", "elevated"}));
  app->add_option("--eps-list", f.eps_list, "sweep: eps values")->delimiter(',');
  app->add_option("--tol-dg", f.tol_dg, "Newton tolerance on the correction");
  app->add_option("--tol-res", f.tol_res, "Newton tolerance on the residual");
  app->add_option("--max-iter", f.max_iter, "Newton iteration cap");
  app->add_option("--solver", f.solver, "linear solver")->check(CLI::IsMember({"direct", "iterative"}));
  app->add_option("--out", f.out, "output directory");
  app->add_option("--vtk", f.vtk, "write a VTK file of the finest field");
  app->add_option("--seed", f.seed, "seed for randomized checks");
  app->add_flag("--warmstart", f.warmstart, "start each level from the previous solution");
  app->add_option("--print-config", f.print_config, "write the effective config to this path and continue");
}

ldg::RunConfig resolve(const std::string& command, const Flags& f) {
  ldg::RunConfig c = f.config ? ldg::load_config(*f.config) : ldg::RunConfig::defaults_for(command);
  if (f.config && c.command != command) {
    // keep file values, switch driver
    c.command = command;
  }
  if (f.problem) c.problem = *f.problem;
  if (f.k) c.k = *f.k;
  if (f.eps) c.eps = *f.eps;
  if (f.sigma) c.sigma = *f.sigma;
  if (f.lambda) c.lambda = *f.lambda;
  if (f.penalty) c.penalty = *f.penalty;
  if (f.levels) c.levels = *f.levels;
  if (f.n) c.n = *f.n;
  if (f.state) c.state = *f.state;
  if (f.n_seg) c.n_seg = *f.n_seg;
  if (f.n_rings) c.n_rings = *f.n_rings;
  if (f.reference) c.reference = *f.reference;
  if (!f.eps_list.empty()) c.eps_list = f.eps_list;
  if (f.tol_dg) c.tol_dg = *f.tol_dg;
  if (f.tol_res) c.tol_res = *f.tol_res;
  if (f.max_iter) c.max_iter = *f.max_iter;
  if (f.solver) c.solver = *f.solver;
  if (f.out) c.out = *f.out;
  if (f.vtk) c.vtk = *f.vtk;
  if (f.seed) c.seed = *f.seed;
  if (f.warmstart) c.warmstart = true;
  c.validate();
  return c;
}

void print_table(const ldg::ConvergenceTable& t) {
  std::printf("%s\n", t.label.c_str());
  std::printf("%12s %9s %13s %8s %13s %8s %13s %6s\n", "h", "dofs", "err_dg", "ord_dg", "err_l2", "ord_l2",
              "energy", "newton");
  auto opt = [](const std::optional<double>& x, const char* f, char* buf) {
    if (x) std::snprintf(buf, 32, f, *x);
    else std::snprintf(buf, 32, "-");
    return buf;
  };
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    const auto& r = t.records[i];
    char b1[32], b2[32], b3[32], b4[32], b5[32];
    const std::optional<double> odg = i < t.order_dg.size() ? t.order_dg[i] : std::nullopt;
    const std::optional<double> ol2 = i < t.order_l2.size() ? t.order_l2[i] : std::nullopt;
    std::printf("%12.6e %9zu %13s %8s %13s %8s %13s %6d\n", r.h, r.dofs, opt(r.err_dg, "%.6e", b1),
                opt(odg, "%.4f", b2), opt(r.err_l2, "%.6e", b3), opt(ol2, "%.4f", b4), opt(r.energy, "%.6f", b5),
                r.newton_iterations);
  }
}

int mesh_info(const std::string& domain, int n, int n_seg, int n_rings, int levels,
              const std::optional<std::string>& mesh_file, const std::optional<std::string>& write_file) {
  ldg::Mesh m = mesh_file                ? ldg::read_mesh_file(*mesh_file)
                : domain == "annulus"    ? ldg::build_annulus_mesh(ldg::kAnnulusInnerRadius,
                                                                   ldg::kAnnulusOuterRadius, n_seg, n_rings)
                                         : ldg::build_square_mesh(n);
  std::printf("%5s %9s %9s %9s %9s %9s %13s %6s\n", "level", "V", "E", "T", "E_int", "E_bdry", "h", "V-E+T");
  for (int l = 0; l < levels; ++l) {
    if (l > 0) m = ldg::refine_uniform(m);
    std::printf("%5d %9zu %9zu %9zu %9zu %9zu %13.6e %6ld\n", l, m.num_vertices(), m.num_edges(),
                m.num_triangles(), m.num_interior_edges(), m.num_boundary_edges(), m.h, m.euler_characteristic());
  }
  if (write_file) ldg::write_mesh_file(*write_file, m);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* t = std::getenv("LDG_THREADS")) {
    const int nt = std::atoi(t);
    if (nt > 0) Eigen::setNbThreads(nt);
  }

  CLI::App app{"Discontinuous Galerkin solver for the reduced Landau-de Gennes model"};
  app.require_subcommand(1);

  std::map<std::string, Flags> flags;
  for (const char* name : {"converge", "well", "annulus", "sweep"}) {
    const std::string desc = std::string("run the ") + name + " study";
    add_study_flags(app.add_subcommand(name, desc), flags[name]);
  }

  std::string domain = "square";
  int mi_n = 4, mi_seg = 16, mi_rings = 2, mi_levels = 1;
  std::optional<std::string> mi_mesh, mi_write;
  auto* mi = app.add_subcommand("mesh-info", "print mesh statistics per refinement level");
  mi->add_option("--domain", domain)->check(CLI::IsMember({"square", "annulus"}));
  mi->add_option("--n", mi_n);
  mi->add_option("--n-seg", mi_seg);
  mi->add_option("--n-rings", mi_rings);
  mi->add_option("--levels", mi_levels);
  mi->add_option("--mesh", mi_mesh, "read an ldgmesh file instead");
  mi->add_option("--write", mi_write, "write the finest mesh to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (mi->parsed()) return mesh_info(domain, mi_n, mi_seg, mi_rings, mi_levels, mi_mesh, mi_write);

    std::string command;
    for (auto* sub : app.get_subcommands()) command = sub->get_name();
    const Flags& f = flags.at(command);

    ldg::RunConfig cfg;
    try {
      cfg = resolve(command, f);
    } catch (const ldg::ConfigError& e) {
      std::cerr << "ldg: " << e.what() << '\n';
      return 1;
    }
    if (f.print_config) {
      std::ofstream os(*f.print_config);
      os << ldg::serialize_config(cfg);
    }

    const ldg::StudyOutput out = ldg::run_study(cfg);
    for (const auto& t : out.tables) print_table(t);
    for (const auto& p : out.files) std::printf("wrote %s\n", p.c_str());
    for (const auto& msg : out.failures) std::fprintf(stderr, "not converged: %s\n", msg.c_str());
    return out.exit_code();
  } catch (const ldg::ConfigError& e) {
    std::cerr << "ldg: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "ldg: error: " << e.what() << '\n';
    return 3;
  }
}
