#include "ldg/analysis.hpp"


#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace ldg {

namespace {

double sum_quadratic_forms(const SparseMatrix& m, const Coefficients& z) {
  double total = 0.0;
  for (int c = 0; c < z.components; ++c) {
    const Eigen::VectorXd v = z.component(c);
    total += v.dot(m * v);
  }
  return total;
}

void check_field(const DgSpace& s, const Coefficients& z, const char* who) {
  if (z.scalar_dofs() != s.total_scalar_dofs())
    throw std::invalid_argument(std::string(who) + ": field does not match the space");
}

/// Reference-basis tables at the points of the high-order volume rule.
struct LoadTables {
  std::vector<Eigen::VectorXd> values;
  std::vector<Eigen::MatrixX2d> grads;
};

LoadTables load_tables(const DgSpace& s) {
  LoadTables tab;
  for (const auto& p : load_volume_rule().points) {
    tab.values.push_back(s.basis().values(p));
    tab.grads.push_back(s.basis().gradients(p));
  }
  return tab;
}

}  // namespace

double dg_norm(const DgSpace& s, const Coefficients& z, const FormParams& p) {
  check_field(s, z, "dg_norm");
  return std::sqrt(std::max(0.0, sum_quadratic_forms(assemble_scalar_dg_gram(s, p), z)));
}

double dg_error(const DgSpace& s, const Coefficients& z, const Coefficients& reference, const FormParams& p) {
  check_field(s, reference, "dg_error");
  Coefficients diff = z;
  diff.values -= reference.values;
  return dg_norm(s, diff, p);
}

double dg_error(const DgSpace& s, const Coefficients& z, const ExactSolution& exact, const FormParams& p) {
  check_field(s, z, "dg_error");
  p.validate();
  const Mesh& m = s.mesh();
  const int nb = s.dofs_per_triangle();
  const auto& rule = load_volume_rule();
  const LoadTables tab = load_tables(s);
  const int nc = z.components;

  double total = 0.0;
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Eigen::Matrix2d ge = exact.gradient(s.map_to_physical(t, rule.points[q]));
      const Eigen::MatrixX2d g = tab.grads[q] * s.inv_jacobian_t(t).transpose();
      for (int c = 0; c < nc; ++c) {
        const auto local = z.component(c).segment(static_cast<Eigen::Index>(s.dof(t, 0)), nb);
        const Eigen::RowVector2d gz = local.transpose() * g;
        total += rule.weights[q] * s.jacobian_det(t) * (gz - ge.row(c)).squaredNorm();
      }
    }
  }

  const auto& erule = s.edge_rule();
  const auto& brule = load_edge_rule();
  for (std::size_t ei = 0; ei < m.num_edges(); ++ei) {
    const Edge& e = m.edges[ei];
    const double pen = p.penalty_weight(m, e);
    const auto tp = static_cast<std::size_t>(e.triangles[0]);
    if (e.is_boundary()) {
      const Point& a = m.vertices[e.vertices[0]];
      const Point& b = m.vertices[e.vertices[1]];
      for (std::size_t q = 0; q < brule.size(); ++q) {
        const Point x = a + brule.points[q] * (b - a);
        const Eigen::VectorXd phi = s.basis().values(s.map_to_reference(tp, x));
        const Eigen::Vector2d ex = exact.value(x);
        for (int c = 0; c < nc; ++c) {
          const double zv = phi.dot(z.component(c).segment(static_cast<Eigen::Index>(s.dof(tp, 0)), nb));
          total += pen * brule.weights[q] * e.length * (zv - ex[c]) * (zv - ex[c]);
        }
      }
      continue;
    }
    const auto tm = static_cast<std::size_t>(e.triangles[1]);
    const SideTable& sp = s.side_table(e.sides[0], false);
    const SideTable& sm = s.side_table(e.sides[1], s.minus_side_reversed(ei));
    for (std::size_t q = 0; q < erule.size(); ++q) {
      const auto qi = static_cast<Eigen::Index>(q);
      for (int c = 0; c < nc; ++c) {
        const double jump = sp.values.row(qi).dot(z.component(c).segment(static_cast<Eigen::Index>(s.dof(tp, 0)), nb)) -
                            sm.values.row(qi).dot(z.component(c).segment(static_cast<Eigen::Index>(s.dof(tm, 0)), nb));
        total += pen * erule.weights[q] * e.length * jump * jump;
      }
    }
  }
  return std::sqrt(std::max(0.0, total));
}

double broken_h1_seminorm(const DgSpace& s, const Coefficients& z) {
  check_field(s, z, "broken_h1_seminorm");
  const int nb = s.dofs_per_triangle();
  const auto& rule = s.volume_rule();
  double total = 0.0;
  for (std::size_t t = 0; t < s.mesh().num_triangles(); ++t)
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Eigen::MatrixX2d g = s.volume_ref_gradients(q) * s.inv_jacobian_t(t).transpose();
      for (int c = 0; c < z.components; ++c)
        total += rule.weights[q] * s.jacobian_det(t) *
                 (z.component(c).segment(static_cast<Eigen::Index>(s.dof(t, 0)), nb).transpose() * g).squaredNorm();
    }
  return std::sqrt(total);
}

double l2_norm(const DgSpace& s, const Coefficients& z) {
  check_field(s, z, "l2_norm");
  return std::sqrt(std::max(0.0, sum_quadratic_forms(assemble_scalar_mass(s), z)));
}

double l2_error(const DgSpace& s, const Coefficients& z, const Coefficients& reference) {
  check_field(s, reference, "l2_error");
  Coefficients diff = z;
  diff.values -= reference.values;
  return l2_norm(s, diff);
}

double l2_error(const DgSpace& s, const Coefficients& z, const VectorFunction& exact) {
  check_field(s, z, "l2_error");
  const int nb = s.dofs_per_triangle();
  const auto& rule = load_volume_rule();
  const LoadTables tab = load_tables(s);
  double total = 0.0;
  for (std::size_t t = 0; t < s.mesh().num_triangles(); ++t)
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d ex = exact(s.map_to_physical(t, rule.points[q]));
      for (int c = 0; c < z.components; ++c) {
        const double zv = tab.values[q].dot(z.component(c).segment(static_cast<Eigen::Index>(s.dof(t, 0)), nb));
        total += rule.weights[q] * s.jacobian_det(t) * (zv - ex[c]) * (zv - ex[c]);
      }
    }
  return std::sqrt(total);
}

double energy(const DgSpace& s, const Coefficients& z, double eps) {
  if (z.components != 2) throw std::invalid_argument("energy: expected a two-component field");
  check_field(s, z, "energy");
  const int nb = s.dofs_per_triangle();
  const auto& rule = s.volume_rule();
  const auto n = static_cast<Eigen::Index>(s.total_scalar_dofs());
  const double inv_eps2 = 1.0 / (eps * eps);
  double total = 0.0;
  for (std::size_t t = 0; t < s.mesh().num_triangles(); ++t) {
    const auto d = static_cast<Eigen::Index>(s.dof(t, 0));
    const auto u = z.values.segment(d, nb);
    const auto v = z.values.segment(d + n, nb);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto qi = static_cast<Eigen::Index>(q);
      const Eigen::MatrixX2d g = s.volume_ref_gradients(q) * s.inv_jacobian_t(t).transpose();
      const double uq = s.volume_values().row(qi).dot(u);
      const double vq = s.volume_values().row(qi).dot(v);
      const double bulk = uq * uq + vq * vq - 1.0;
      const double grad2 = (u.transpose() * g).squaredNorm() + (v.transpose() * g).squaredNorm();
      total += rule.weights[q] * s.jacobian_det(t) * (grad2 + inv_eps2 * bulk * bulk);
    }
  }
  return total;
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& h) {
  if (errors.size() != h.size()) throw std::invalid_argument("eoc: errors and h differ in length");
  if (errors.size() < 2) throw std::invalid_argument("eoc: need at least two records");
  for (double e : errors)
    if (!(e > 0.0)) throw std::invalid_argument("eoc: errors must be positive");
  const auto finest = static_cast<std::size_t>(std::min_element(h.begin(), h.end()) - h.begin());
  std::vector<double> out;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (i == finest) continue;
    out.push_back(std::log(errors[finest] / errors[i]) / std::log(h[finest] / h[i]));
  }
  return out;
}

void ConvergenceTable::compute_orders() {
  const std::size_t n = records.size();
  order_dg.assign(n > 0 ? n - 1 : 0, std::nullopt);
  order_l2.assign(n > 0 ? n - 1 : 0, std::nullopt);
  auto fill = [&](auto getter, std::vector<std::optional<double>>& orders) {
    std::optional<std::size_t> ref;
    for (std::size_t i = 0; i < n; ++i) {
      const auto e = getter(records[i]);
      if (e && *e > 0.0 && (!ref || records[i].h < records[*ref].h)) ref = i;
    }
    if (!ref) return;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const auto e = getter(records[i]);
      if (i == *ref || !e || !(*e > 0.0)) continue;
      orders[i] = std::log(*getter(records[*ref]) / *e) / std::log(records[*ref].h / records[i].h);
    }
  };
  fill([](const ErrorRecord& r) { return r.err_dg; }, order_dg);
  fill([](const ErrorRecord& r) { return r.err_l2; }, order_l2);
}

std::string to_string(ReferenceKind r) {
  switch (r) {
    case ReferenceKind::finest: return "finest";
    case ReferenceKind::refined: return "refined";
    case ReferenceKind::elevated: return "elevated";
  }
  return "elevated";
}

ReferenceKind reference_kind_from_string(const std::string& s) {
  if (s == "finest") return ReferenceKind::finest;
  if (s == "refined") return ReferenceKind::refined;
  if (s == "elevated") return ReferenceKind::elevated;
  throw std::invalid_argument("unknown reference kind '" + s + "' (finest, refined, elevated)");
}

bool StudyResult::all_converged() const {
  bool ok = std::all_of(levels.begin(), levels.end(),
                        [](const LevelOutcome& l) { return l.status == NewtonStatus::converged; });
  if (reference) ok = ok && reference->status == NewtonStatus::converged;
  return ok;
}

namespace {

std::vector<std::shared_ptr<const Mesh>> mesh_hierarchy(const Mesh& base, int count) {
  std::vector<std::shared_ptr<const Mesh>> meshes;
  meshes.push_back(std::make_shared<const Mesh>(base));
  for (int l = 1; l < count; ++l) meshes.push_back(std::make_shared<const Mesh>(refine_uniform(*meshes.back())));
  return meshes;
}

void check_options(const StudyOptions& opt) {
  if (opt.levels < 1) throw std::invalid_argument("study: levels must be >= 1");
  opt.params.validate();
  opt.newton.validate();
}

}  // namespace

StudyResult run_manufactured_study(const ProblemSpec& prob_in, const Mesh& base, const StudyOptions& opt) {
  check_options(opt);
  if (!prob_in.exact) throw std::invalid_argument("run_manufactured_study: problem has no exact solution");
  ProblemSpec prob = prob_in;
  prob.params = opt.params;

  StudyResult res;
  res.table.label = prob.name;
  const auto meshes = mesh_hierarchy(base, opt.levels);
  for (int l = 0; l < opt.levels; ++l) {
    auto space = std::make_shared<const DgSpace>(meshes[l], opt.k);
    DiscreteSystem sys(*space, prob);
    Coefficients z0(2, space->total_scalar_dofs());
    if (opt.warmstart && l > 0 && res.levels.back().status == NewtonStatus::converged)
      z0 = prolong(*res.levels.back().space, res.levels.back().solution, *space);
    NewtonResult nr = newton_solve(sys, std::move(z0), opt.newton);

    ErrorRecord rec;
    rec.h = meshes[l]->h;
    rec.dofs = space->total_scalar_dofs();
    rec.newton_iterations = nr.trace.iterations();
    rec.eps = prob.eps;
    rec.k = opt.k;
    rec.converged = nr.converged();
    if (rec.converged) {
      rec.err_dg = dg_error(*space, nr.solution, *prob.exact, prob.params);
      rec.err_l2 = l2_error(*space, nr.solution, prob.exact->value);
      if (prob.eps > 0.0) rec.energy = energy(*space, nr.solution, prob.eps);
    }
    res.table.records.push_back(rec);
    res.levels.push_back({space, std::move(nr.solution), std::move(nr.trace), nr.status, nr.message});
  }
  res.table.compute_orders();
  return res;
}

StudyResult run_well_study(double eps, const WellState& state, const Mesh& base, const StudyOptions& opt) {
  check_options(opt);
  ProblemSpec prob = well_problem(eps);
  prob.name = "well:" + state.name();
  prob.params = opt.params;

  const auto meshes = mesh_hierarchy(base, opt.levels + (opt.reference == ReferenceKind::refined ? 1 : 0));
  std::vector<LevelOutcome> outcomes;
  for (int l = 0; l < opt.levels; ++l) {
    auto space = std::make_shared<const DgSpace>(meshes[l], opt.k);
    DiscreteSystem sys(*space, prob);
    Coefficients z0 = (opt.warmstart && l > 0 && outcomes.back().status == NewtonStatus::converged)
                          ? prolong(*outcomes.back().space, outcomes.back().solution, *space)
                          : initial_guess_director(*space, state, prob.params, prob.g);
    NewtonResult nr = newton_solve(sys, std::move(z0), opt.newton);
    outcomes.push_back({space, std::move(nr.solution), std::move(nr.trace), nr.status, nr.message});
  }

  // lifts a level-l field into the reference space
  std::function<Coefficients(int, const Coefficients&)> lift;
  std::optional<LevelOutcome> reference;
  const LevelOutcome& finest = outcomes.back();
  if (opt.reference == ReferenceKind::finest) {
    lift = [&](int l, const Coefficients& z) {
      Coefficients up = z;
      for (int j = l; j + 1 < opt.levels; ++j) up = prolong(*outcomes[j].space, up, *outcomes[j + 1].space);
      return up;
    };
  } else {
    ProblemSpec ref_prob = prob;
    std::shared_ptr<const DgSpace> space;
    if (opt.reference == ReferenceKind::refined) {
      space = std::make_shared<const DgSpace>(meshes.back(), opt.k);
    } else {
      space = std::make_shared<const DgSpace>(meshes[opt.levels - 1], opt.k + 1);
      // same penalty scaling relative to the default for the higher degree
      ref_prob.params.sigma = opt.params.sigma * FormParams::defaults(opt.k + 1).sigma / FormParams::defaults(opt.k).sigma;
    }
    auto to_ref = [&, space](const Coefficients& z) {
      return opt.reference == ReferenceKind::refined ? prolong(*finest.space, z, *space)
                                                     : raise_degree(*finest.space, z, *space);
    };
    Coefficients z0 = finest.status == NewtonStatus::converged
                          ? to_ref(finest.solution)
                          : initial_guess_director(*space, state, ref_prob.params, ref_prob.g);
    DiscreteSystem sys(*space, ref_prob);
    NewtonResult nr = newton_solve(sys, std::move(z0), opt.newton);
    reference = LevelOutcome{space, std::move(nr.solution), std::move(nr.trace), nr.status, nr.message};
    lift = [&, to_ref](int l, const Coefficients& z) {
      Coefficients up = z;
      for (int j = l; j + 1 < opt.levels; ++j) up = prolong(*outcomes[j].space, up, *outcomes[j + 1].space);
      return to_ref(up);
    };
  }
  const LevelOutcome& ref = reference ? *reference : finest;
  const bool ref_ok = ref.status == NewtonStatus::converged;

  StudyResult res;
  res.table.label = prob.name;
  for (int l = 0; l < opt.levels; ++l) {
    const LevelOutcome& lo = outcomes[l];
    ErrorRecord rec;
    rec.h = meshes[l]->h;
    rec.dofs = lo.space->total_scalar_dofs();
    rec.newton_iterations = lo.trace.iterations();
    rec.eps = eps;
    rec.k = opt.k;
    rec.converged = lo.status == NewtonStatus::converged;
    if (rec.converged) {
      rec.energy = energy(*lo.space, lo.solution, eps);
      const bool is_ref = !reference && l == opt.levels - 1;
      if (ref_ok && !is_ref) {
        const Coefficients up = lift(l, lo.solution);
        rec.err_dg = dg_error(*ref.space, up, ref.solution, prob.params);
        rec.err_l2 = l2_error(*ref.space, up, ref.solution);
      }
    }
    res.table.records.push_back(rec);
  }
  res.table.compute_orders();
  res.reference = std::move(reference);
  res.levels = std::move(outcomes);
  return res;
}

std::vector<ConvergenceTable> epsilon_sweep(const std::string& family, const std::vector<double>& eps_list,
                                            const Mesh& base, const StudyOptions& opt) {
  if (family != "polynomial") throw std::invalid_argument("epsilon_sweep: unsupported family '" + family + "'");
  std::vector<ConvergenceTable> out;
  for (double eps : eps_list) {
    StudyResult r = run_manufactured_study(polynomial_problem(eps), base, opt);
    r.table.label = family + ":eps=" + std::to_string(eps);
    out.push_back(std::move(r.table));
  }
  return out;
}

}  // namespace ldg
