// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Usage: acceptance [criterion ...]   (default: all of 1..7)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ldg/analysis.hpp"

using namespace ldg;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void note(const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), fmt, args...);
    notes.emplace_back(buf);
  }
  void require(bool ok, const char* fmt, auto... args) {
    if (!ok) pass = false;
    char buf[512];
    std::snprintf(buf, sizeof(buf), fmt, args...);
    notes.emplace_back(std::string(ok ? "ok    " : "FAIL  ") + buf);
  }
};

struct NamedTrace {
  std::string run;
  NewtonTrace trace;
};

// Newton traces of every benchmark run, inspected by criterion 4.
std::vector<NamedTrace> g_traces;

void keep_traces(const std::string& name, const StudyResult& r) {
  for (std::size_t l = 0; l < r.levels.size(); ++l)
    if (r.levels[l].status == NewtonStatus::converged)
      g_traces.push_back({name + " level " + std::to_string(l + 1), r.levels[l].trace});
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void print_table(Outcome& o, const ConvergenceTable& t) {
  o.note("%-10s %6s %12s %7s %12s %7s %12s %3s", "h", "dofs", "err_dg", "ord", "err_l2", "ord", "energy", "it");
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    const auto& r = t.records[i];
    auto num = [](const std::optional<double>& x, const char* f) {
      char b[32];
      if (x) std::snprintf(b, sizeof(b), f, *x);
      else std::snprintf(b, sizeof(b), "-");
      return std::string(b);
    };
    const auto odg = i < t.order_dg.size() ? t.order_dg[i] : std::nullopt;
    const auto ol2 = i < t.order_l2.size() ? t.order_l2[i] : std::nullopt;
    o.note("%-10.4e %6zu %12s %7s %12s %7s %12s %3d", r.h, r.dofs, num(r.err_dg, "%.4e").c_str(),
           num(odg, "%.3f").c_str(), num(r.err_l2, "%.4e").c_str(), num(ol2, "%.3f").c_str(),
           num(r.energy, "%.6f").c_str(), r.newton_iterations);
  }
}

StudyOptions options(int k, int levels) {
  StudyOptions o;
  o.k = k;
  o.levels = levels;
  o.params = FormParams::defaults(k);
  return o;
}

bool within(std::optional<double> x, double target, double tol) { return x && std::abs(*x - target) <= tol; }

// 1: polynomial benchmark orders for k = 1, 2, 3.
Outcome polynomial_orders() {
  Outcome o;
  const double limit[4] = {0, 180, 900, 900};
  for (int k = 1; k <= 3; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    const StudyResult r = run_manufactured_study(polynomial_problem(0.2), build_square_mesh(4), options(k, 5));
    const double secs = seconds_since(t0);
    keep_traces("polynomial k=" + std::to_string(k), r);
    o.note("k = %d (%.1f s)", k, secs);
    print_table(o, r.table);
    o.require(r.all_converged(), "k=%d all levels converged", k);
    const auto a_dg = r.table.order_dg.empty() ? std::nullopt : r.table.order_dg[0];
    const auto a_l2 = r.table.order_l2.empty() ? std::nullopt : r.table.order_l2[0];
    o.require(within(a_dg, k, 0.15), "k=%d dG alpha_1 = %.4f, target %d +- 0.15", k, a_dg.value_or(NAN), k);
    o.require(within(a_l2, k + 1, 0.2), "k=%d L2 alpha_1 = %.4f, target %d +- 0.2", k, a_l2.value_or(NAN), k + 1);
    o.require(secs < limit[k], "k=%d runtime %.1f s < %.0f s", k, secs, limit[k]);
  }
  return o;
}

// 2: square well, six states.
Outcome well_benchmark() {
  Outcome o;
  const std::map<WellStateKind, double> energy_ref{{WellStateKind::D1, 77.94112012}, {WellStateKind::R1, 86.57670525}};
  const auto t0 = std::chrono::steady_clock::now();
  for (WellStateKind kind : kAllWellStates) {
    const WellState st = WellState::make(kind);
    const auto ts = std::chrono::steady_clock::now();
    const StudyResult r = run_well_study(0.02, st, build_square_mesh(16), options(1, 4));
    keep_traces("well " + st.name(), r);
    o.note("state %s (%.1f s)", st.name().c_str(), seconds_since(ts));
    print_table(o, r.table);
    o.require(r.all_converged(), "%s all levels converged", st.name().c_str());
    if (auto it = energy_ref.find(kind); it != energy_ref.end()) {
      const auto e = r.table.records.back().energy;
      const double rel = e ? std::abs(*e - it->second) / it->second : INFINITY;
      o.require(rel <= 0.02, "%s finest energy %.6f vs %.8f (rel %.2e, limit 2%%)", st.name().c_str(),
                e.value_or(NAN), it->second, rel);
      const auto a_dg = r.table.order_dg.empty() ? std::nullopt : r.table.order_dg[0];
      const auto a_l2 = r.table.order_l2.empty() ? std::nullopt : r.table.order_l2[0];
      o.require(within(a_dg, 0.95, 0.15), "%s dG alpha_1 = %.4f, target 0.95 +- 0.15", st.name().c_str(),
                a_dg.value_or(NAN));
      o.require(within(a_l2, 2.0, 0.25), "%s L2 alpha_1 = %.4f, target 2.0 +- 0.25", st.name().c_str(),
                a_l2.value_or(NAN));
    }
  }
  const double secs = seconds_since(t0);
  o.require(secs < 600, "runtime %.1f s < 600 s", secs);
  return o;
}

// 3: polygonal annulus.
Outcome annulus_benchmark() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const Mesh base = build_annulus_mesh(kAnnulusInnerRadius, kAnnulusOuterRadius, 32, 4);
  const StudyResult r = run_manufactured_study(annulus_problem(), base, options(1, 5));
  const double secs = seconds_since(t0);
  keep_traces("annulus", r);
  print_table(o, r.table);
  o.require(r.all_converged(), "all levels converged");
  const auto a_dg = r.table.order_dg.empty() ? std::nullopt : r.table.order_dg[0];
  const auto a_l2 = r.table.order_l2.empty() ? std::nullopt : r.table.order_l2[0];
  o.require(within(a_dg, 1.0, 0.15), "dG alpha_1 = %.4f, target 1.0 +- 0.15", a_dg.value_or(NAN));
  o.require(within(a_l2, 1.9, 0.25), "L2 alpha_1 = %.4f, target 1.9 +- 0.25", a_l2.value_or(NAN));
  o.require(secs < 300, "runtime %.1f s < 300 s", secs);
  return o;
}

// 4: quadratic convergence on the traces gathered by 1-3. The terminal step,
// whose correction is below tol_dg, sits at the roundoff floor; its ratio is
// printed but not judged.
Outcome newton_quadratic() {
  Outcome o;
  if (g_traces.empty()) {
    const StudyResult r = run_manufactured_study(polynomial_problem(0.2), build_square_mesh(4), options(1, 5));
    keep_traces("polynomial k=1", r);
  }
  const double floor = NewtonConfig{}.tol_dg;
  int worst_iters = 0;
  double worst_spread = 0.0;
  std::string worst_run;
  std::size_t checked = 0, short_runs = 0;
  for (const auto& nt : g_traces) {
    worst_iters = std::max(worst_iters, nt.trace.iterations());
    std::vector<double> q;
    for (const auto& rec : nt.trace.records)
      if (rec.quadratic_ratio && rec.correction_dg >= floor) q.push_back(*rec.quadratic_ratio);
    const auto& last = nt.trace.records.back();
    const double terminal = last.quadratic_ratio.value_or(NAN);
    if (q.size() < 2) {
      ++short_runs;
      o.note("%s: %d its, fewer than two ratios above the floor (terminal ratio %.3e)", nt.run.c_str(),
             nt.trace.iterations(), terminal);
      continue;
    }
    const double a = q[q.size() - 2], b = q.back();
    const double spread = std::max(a, b) / std::min(a, b);
    ++checked;
    if (spread >= 10.0) o.pass = false;
    if (spread > worst_spread) {
      worst_spread = spread;
      worst_run = nt.run;
    }
    o.note("%s%s: %d its, last ratios %.3e %.3e (factor %.2f); terminal |delta| %.1e ratio %.3e",
           spread < 10.0 ? "" : "FAIL ", nt.run.c_str(), nt.trace.iterations(), a, b, spread, last.correction_dg,
           terminal);
  }
  o.require(checked > 0, "%zu converged runs with two ratios above |delta| = %.0e, %zu with fewer", checked, floor,
            short_runs);
  o.require(worst_spread < 10.0, "largest factor between the last two ratios %.2f (%s), limit 10", worst_spread,
            worst_run.c_str());
  o.require(worst_iters <= 12, "most Newton iterations %d, limit 12", worst_iters);
  return o;
}

// 5: epsilon sweep at fixed k = 1.
Outcome epsilon_trend() {
  Outcome o;
  const std::vector<double> eps_list{0.2, 0.1, 0.05};
  const auto tables = epsilon_sweep("polynomial", eps_list, build_square_mesh(4), options(1, 4));
  std::vector<std::optional<double>> coarse;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    o.note("eps = %g", eps_list[i]);
    print_table(o, tables[i]);
    for (std::size_t l = 0; l < tables[i].records.size(); ++l)
      if (!tables[i].records[l].converged) o.note("flagged: eps=%g level %zu did not converge", eps_list[i], l + 1);
    coarse.push_back(tables[i].records.front().err_dg);
  }
  for (std::size_t i = 0; i + 1 < coarse.size(); ++i) {
    const bool have = coarse[i] && coarse[i + 1];
    o.require(have && *coarse[i + 1] > *coarse[i], "coarsest dG error eps=%g: %.4e < eps=%g: %.4e", eps_list[i],
              coarse[i].value_or(NAN), eps_list[i + 1], coarse[i + 1].value_or(NAN));
  }
  return o;
}

// 6: property suites.
Point random_ref(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  double a = d(rng), b = d(rng);
  if (a + b > 1.0) { a = 1.0 - a; b = 1.0 - b; }
  return {a, b};
}

Coefficients random_field(const DgSpace& s, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Coefficients z(2, s.total_scalar_dofs());
  for (Eigen::Index i = 0; i < z.values.size(); ++i) z.values[i] = d(rng);
  return z;
}

Outcome property_suites() {
  Outcome o;
  std::mt19937_64 rng(20190403);

  {  // Jacobian vs central differences
    double worst = 0.0;
    int n = 0;
    for (int k = 1; k <= 3; ++k) {
      auto mesh = std::make_shared<const Mesh>(build_square_mesh(2));
      const DgSpace s(mesh, k);
      for (const ProblemSpec& prob : {polynomial_problem(0.2), well_problem(0.05)}) {
        const DiscreteSystem sys(s, prob);
        for (int i = 0; i < 4; ++i, ++n) {
          const Coefficients z = random_field(s, rng), th = random_field(s, rng);
          Coefficients zp = z, zm = z;
          zp.values += 1e-5 * th.values;
          zm.values -= 1e-5 * th.values;
          const Eigen::VectorXd fd = (sys.residual(zp) - sys.residual(zm)) / 2e-5;
          const Eigen::VectorXd jv = sys.jacobian(z).matrix * th.values;
          worst = std::max(worst, (fd - jv).norm() / jv.norm());
        }
      }
    }
    o.require(worst < 1e-6 && n >= 20, "Jacobian vs central differences: %d states, worst relative error %.2e", n, worst);
  }
  {  // symmetry and coercivity of A_dG
    double asym = 0.0, min_eig = INFINITY;
    for (int n : {1, 2, 4, 8})
      for (int k = 1; k <= 3; ++k) {
        const DgSpace s(std::make_shared<const Mesh>(build_square_mesh(n)), k);
        const Eigen::MatrixXd a(assemble_scalar_a_dg(s, FormParams::defaults(k)));
        asym = std::max(asym, (a - a.transpose()).cwiseAbs().maxCoeff() / a.cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
        min_eig = std::min(min_eig, eig.eigenvalues().minCoeff());
      }
    o.require(asym < 1e-10, "A_dG symmetry (lambda=-1, n<=8, k=1..3): relative asymmetry %.2e", asym);
    o.require(min_eig > 0.0, "A_dG positive definite at sigma=10k^2: smallest eigenvalue %.3e", min_eig);
  }
  {  // quadrature
    double worst = 0.0;
    for (int deg = 1; deg <= 20; ++deg) {
      const TriangleQuadrature q = triangle_quadrature(deg);
      for (int a = 0; a <= deg; ++a)
        for (int b = 0; a + b <= deg; ++b) {
          double s = 0.0;
          for (std::size_t i = 0; i < q.size(); ++i)
            s += q.weights[i] * std::pow(q.points[i].x(), a) * std::pow(q.points[i].y(), b);
          const double exact = std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 3.0);
          worst = std::max(worst, std::abs(s - exact) / exact);
        }
    }
    o.require(worst < 1e-12, "quadrature vs factorial formula (degrees 1..20): worst relative error %.2e", worst);
  }
  {  // mesh identities
    bool ok = true;
    int meshes = 0;
    auto check = [&](const Mesh& m, long euler) {
      ++meshes;
      ok = ok && 3 * m.num_triangles() == 2 * m.num_interior_edges() + m.num_boundary_edges() &&
           m.euler_characteristic() == euler;
    };
    for (int n : {1, 2, 4, 8, 16}) {
      Mesh m = build_square_mesh(n);
      for (int l = 0; l < 4 && m.num_triangles() < 40000; ++l, m = refine_uniform(m)) check(m, 1);
    }
    for (auto [seg, rings] : {std::pair{16, 2}, {32, 4}}) {
      Mesh m = build_annulus_mesh(0.5, 1.0, seg, rings);
      for (int l = 0; l < 5; ++l, m = refine_uniform(m)) check(m, 0);
    }
    o.require(ok, "handshake and Euler identities on %d generated meshes", meshes);
  }
  {  // B vectorized vs expanded quartic forms
    double worst = 0.0;
    const TriangleQuadrature rule = triangle_quadrature(20);
    for (int k = 1; k <= 3; ++k) {
      const DgSpace s(std::make_shared<const Mesh>(build_square_mesh(k == 1 ? 1 : 2)), k);
      const auto n = static_cast<Eigen::Index>(s.total_scalar_dofs());
      const int nb = s.dofs_per_triangle();
      const Coefficients z = random_field(s, rng);
      const LoadVector got = apply_B_residual(s, z, 1.0);
      LoadVector want = LoadVector::Zero(2 * n);
      for (std::size_t t = 0; t < s.mesh().num_triangles(); ++t) {
        const auto d = static_cast<Eigen::Index>(s.dof(t, 0));
        for (std::size_t q = 0; q < rule.size(); ++q) {
          const Eigen::VectorXd phi = s.basis().values(rule.points[q]);
          const double w = rule.weights[q] * s.jacobian_det(t);
          const double u = phi.dot(z.values.segment(d, nb)), v = phi.dot(z.values.segment(d + n, nb));
          // b(u,u,u,.) + b(v,v,u,.) and b(u,u,v,.) + b(v,v,v,.)
          want.segment(d, nb) += w * (u * u * u + v * v * u) * phi;
          want.segment(d + n, nb) += w * (u * u * v + v * v * v) * phi;
        }
      }
      worst = std::max(worst, (got - want).cwiseAbs().maxCoeff() / std::max(1.0, want.cwiseAbs().maxCoeff()));
    }
    o.require(worst < 1e-12, "B_dG vectorized vs expanded: worst relative difference %.2e", worst);
  }
  {  // delta form vs literal step
    double worst = 0.0;
    for (int k = 1; k <= 3; ++k) {
      const DgSpace s(std::make_shared<const Mesh>(build_square_mesh(4)), k);
      const ProblemSpec prob = polynomial_problem(0.2);
      const DiscreteSystem sys(s, prob);
      const Coefficients z = random_field(s, rng, 0.2);
      const SystemMatrix j = sys.jacobian(z);
      const Eigen::VectorXd a = z.values + solve_linear(j, -sys.residual(z));
      const Eigen::VectorXd b = solve_linear(j, 2.0 * apply_B_residual(s, z, prob.cubic) + sys.load());
      worst = std::max(worst, (a - b).norm() / std::max(1.0, b.norm()));
    }
    o.require(worst < 1e-10, "delta form vs literal Newton step: worst relative difference %.2e", worst);
  }
  {  // prolongation
    double worst = 0.0;
    for (int k = 1; k <= 3; ++k) {
      auto coarse_mesh = std::make_shared<const Mesh>(build_square_mesh(3));
      const DgSpace coarse(coarse_mesh, k), fine(std::make_shared<const Mesh>(refine_uniform(*coarse_mesh)), k);
      const Coefficients z = random_field(coarse, rng);
      const Coefficients zf = prolong(coarse, z, fine);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (int i = 0; i < 100; ++i) {
        const Point x(u(rng), u(rng));
        Eigen::VectorXd a, b;
        if (evaluate_at(coarse, z, x, a) && evaluate_at(fine, zf, x, b))
          worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
      }
    }
    o.require(worst < 1e-12, "prolongation at 100 random points per degree: worst difference %.2e", worst);
  }
  {  // two-triangle indicator
    const DgSpace s(std::make_shared<const Mesh>(build_square_mesh(1)), 1);
    Coefficients v(1, s.total_scalar_dofs());
    for (int i = 0; i < 3; ++i) v.values[static_cast<Eigen::Index>(s.dof(1, i))] = 1.0;
    FormParams p = FormParams::defaults(1);
    const double local = std::pow(dg_norm(s, v, p), 2);
    p.penalty = PenaltyScaling::global;
    const double global = std::pow(dg_norm(s, v, p), 2);
    const double sigma = p.sigma;
    o.require(std::abs(local - 3 * sigma) < 1e-12 * sigma, "indicator dG norm^2, local scaling: %.12g (3 sigma = %.12g)",
              local, 3 * sigma);
    o.require(std::abs(global - sigma * (1 + std::sqrt(2.0))) < 1e-12 * sigma,
              "indicator dG norm^2, global scaling: %.12g (sigma (1 + sqrt 2) = %.12g)", global,
              sigma * (1 + std::sqrt(2.0)));
  }
  return o;
}

// 7: Kantorovich certificate at the interpolated exact solution.
Outcome kantorovich() {
  Outcome o;
  const DgSpace s(std::make_shared<const Mesh>(build_square_mesh(4)), 1);
  const ProblemSpec prob = polynomial_problem(0.2);
  const DiscreteSystem sys(s, prob);
  const Coefficients z0 = interpolate(prob.exact->value, s);
  const KantorovichReport rep = kantorovich_diagnostic(sys, z0);
  o.note("a = %.4e, b = %.4e, L (sampled, %d pairs, radius %.2e) = %.4e", rep.a, rep.b, rep.samples,
         rep.sample_radius, rep.lipschitz);
  o.note("h* = %.4e, r = %.4e, r* = %.4e", rep.h_star, rep.r, rep.r_star);
  o.require(rep.certified, "certified (h* = %.4e <= 1/2)", rep.h_star);
  const NewtonResult nr = newton_solve(sys, z0);
  o.require(nr.converged(), "Newton from Z0 converged in %d iterations", nr.trace.iterations());
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"polynomial benchmark orders", polynomial_orders},
      {"square well benchmark", well_benchmark},
      {"annulus benchmark", annulus_benchmark},
      {"Newton quadratic convergence", newton_quadratic},
      {"epsilon sweep trend", epsilon_trend},
      {"property suites", property_suites},
      {"Kantorovich diagnostic", kantorovich}};

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  if (selected.empty())
    for (int i = 1; i <= 7; ++i) selected.insert(i);

  int failed = 0;
  std::vector<std::string> summary;
  for (int i = 1; i <= 7; ++i) {
    if (!selected.count(i)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i - 1].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.notes.push_back(std::string("exception: ") + e.what());
    }
    char line[160];
    std::snprintf(line, sizeof(line), "criterion %d %s: %s (%.1f s)", i, criteria[i - 1].first,
                  o.pass ? "PASS" : "FAIL", seconds_since(t0));
    std::printf("%s\n", line);
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    summary.emplace_back(line);
    if (!o.pass) ++failed;
  }
  std::printf("\nsummary\n");
  for (const auto& s : summary) std::printf("  %s\n", s.c_str());
  return failed == 0 ? 0 : 1;
}
