#include "ldg/study.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ldg/io.hpp"

namespace ldg {

namespace {

using nlohmann::json;

const std::set<std::string> kCommands{"converge", "well", "annulus", "sweep"};

[[noreturn]] void field_error(const std::string& key, const std::string& what) {
  throw ConfigError("config field '" + key + "': " + what);
}

int get_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) field_error(key, "expected an integer");
  return v.get<int>();
}

double get_double(const json& v, const std::string& key) {
  if (!v.is_number()) field_error(key, "expected a number");
  return v.get<double>();
}

bool get_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) field_error(key, "expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) field_error(key, "expected a string");
  return v.get<std::string>();
}

}  // namespace

RunConfig RunConfig::defaults_for(const std::string& command) {
  RunConfig c;
  c.command = command;
  if (command == "well") {
    c.problem = "well";
    c.eps = 0.02;
    c.levels = 4;
    c.n = 16;
  } else if (command == "annulus") {
    c.problem = "annulus";
    c.levels = 5;
    c.n_seg = 32;
    c.n_rings = 4;
  } else if (command == "sweep") {
    c.levels = 4;
  }
  return c;
}

void RunConfig::validate() const {
  if (!kCommands.count(command)) field_error("command", "unknown command '" + command + "'");
  if (k < 1 || k > 3) field_error("k", "must be 1, 2 or 3");
  if (!(eps > 0.0)) field_error("eps", "must be positive");
  if (sigma && !(*sigma > 0.0)) field_error("sigma", "must be positive");
  if (lambda < -1 || lambda > 1) field_error("lambda", "must be -1, 0 or 1");
  if (penalty != "local" && penalty != "global") field_error("penalty", "must be 'local' or 'global'");
  if (levels < 1) field_error("levels", "must be >= 1");
  if (n < 1) field_error("n", "must be >= 1");
  if (n_seg < 8) field_error("n-seg", "must be >= 8");
  if (n_rings < 2) field_error("n-rings", "must be >= 2");
  if (!(tol_dg > 0.0)) field_error("tol-dg", "must be positive");
  if (!(tol_res > 0.0)) field_error("tol-res", "must be positive");
  if (max_iter < 1) field_error("max-iter", "must be >= 1");
  if (solver != "direct" && solver != "iterative") field_error("solver", "must be 'direct' or 'iterative'");
  if (out.empty()) field_error("out", "must not be empty");
  if (reference != "finest" && reference != "refined" && reference != "elevated")
    field_error("reference", "must be 'finest', 'refined' or 'elevated'");
  if (command == "sweep") {
    if (eps_list.empty()) field_error("eps-list", "must not be empty");
    for (double e : eps_list)
      if (!(e > 0.0)) field_error("eps-list", "entries must be positive");
  }
  try {
    WellState::from_name(state);
  } catch (const std::exception&) {
    field_error("state", "unknown state '" + state + "'");
  }
  if (command == "converge" && problem != "polynomial" && problem != "annulus")
    field_error("problem", "converge needs 'polynomial' or 'annulus', got '" + problem + "'");
  if (command == "sweep" && problem != "polynomial") field_error("problem", "sweep supports 'polynomial' only");
  if (command == "well" && problem != "well" && problem.rfind("well:", 0) != 0)
    field_error("problem", "well needs 'well' or 'well:<state>'");
}

FormParams RunConfig::form_params() const {
  FormParams p = FormParams::defaults(k);
  if (sigma) p.sigma = *sigma;
  p.lambda = lambda;
  p.penalty = penalty_scaling_from_string(penalty);
  return p;
}

NewtonConfig RunConfig::newton_config() const {
  NewtonConfig c;
  c.tol_dg = tol_dg;
  c.tol_res = tol_res;
  c.max_iter = max_iter;
  c.backend = solver == "iterative" ? LinearBackend::iterative : LinearBackend::direct;
  return c;
}

StudyOptions RunConfig::study_options() const {
  StudyOptions o;
  o.k = k;
  o.levels = levels;
  o.params = form_params();
  o.newton = newton_config();
  o.warmstart = warmstart;
  o.reference = reference_kind_from_string(reference);
  return o;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");

  std::string command = "converge";
  if (j.contains("command")) command = get_string(j["command"], "command");
  if (!kCommands.count(command)) field_error("command", "unknown command '" + command + "'");
  RunConfig c = RunConfig::defaults_for(command);

  for (const auto& [key, v] : j.items()) {
    if (key == "command") continue;
    else if (key == "problem") c.problem = get_string(v, key);
    else if (key == "k") c.k = get_int(v, key);
    else if (key == "eps") c.eps = get_double(v, key);
    else if (key == "sigma") c.sigma = v.is_null() ? std::nullopt : std::optional<double>(get_double(v, key));
    else if (key == "lambda") c.lambda = get_int(v, key);
    else if (key == "penalty") c.penalty = get_string(v, key);
    else if (key == "levels") c.levels = get_int(v, key);
    else if (key == "n") c.n = get_int(v, key);
    else if (key == "state") c.state = get_string(v, key);
    else if (key == "n-seg") c.n_seg = get_int(v, key);
    else if (key == "n-rings") c.n_rings = get_int(v, key);
    else if (key == "reference") c.reference = get_string(v, key);
    else if (key == "eps-list") {
      if (!v.is_array()) field_error(key, "expected an array of numbers");
      c.eps_list.clear();
      for (const auto& e : v) c.eps_list.push_back(get_double(e, key));
    }
    else if (key == "tol-dg") c.tol_dg = get_double(v, key);
    else if (key == "tol-res") c.tol_res = get_double(v, key);
    else if (key == "max-iter") c.max_iter = get_int(v, key);
    else if (key == "solver") c.solver = get_string(v, key);
    else if (key == "warmstart") c.warmstart = get_bool(v, key);
    else if (key == "out") c.out = get_string(v, key);
    else if (key == "vtk") c.vtk = get_bool(v, key);
    else if (key == "seed") {
      if (!v.is_number_unsigned()) field_error(key, "expected a non-negative integer");
      c.seed = v.get<std::uint64_t>();
    }
    else throw ConfigError("config: unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string serialize_config(const RunConfig& c) {
  json j = json::object();
  j["command"] = c.command;
  j["problem"] = c.problem;
  j["k"] = c.k;
  j["eps"] = c.eps;
  j["sigma"] = c.sigma ? json(*c.sigma) : json(nullptr);
  j["lambda"] = c.lambda;
  j["penalty"] = c.penalty;
  j["levels"] = c.levels;
  j["n"] = c.n;
  j["state"] = c.state;
  j["n-seg"] = c.n_seg;
  j["n-rings"] = c.n_rings;
  j["reference"] = c.reference;
  j["eps-list"] = c.eps_list;
  j["tol-dg"] = c.tol_dg;
  j["tol-res"] = c.tol_res;
  j["max-iter"] = c.max_iter;
  j["solver"] = c.solver;
  j["warmstart"] = c.warmstart;
  j["out"] = c.out;
  j["vtk"] = c.vtk;
  j["seed"] = c.seed;
  return j.dump(2) + "\n";
}

std::string file_stem(const std::string& label) {
  std::string s = label;
  for (char& ch : s)
    if (ch == ':' || ch == '=' || ch == '/' || ch == ' ') ch = '_';
  return s;
}

namespace {

void collect_failures(const StudyResult& r, StudyOutput& out) {
  for (std::size_t l = 0; l < r.levels.size(); ++l)
    if (r.levels[l].status != NewtonStatus::converged)
      out.failures.push_back(r.table.label + " level " + std::to_string(l + 1) + ": " + r.levels[l].message);
  if (r.reference && r.reference->status != NewtonStatus::converged)
    out.failures.push_back(r.table.label + " reference level: " + r.reference->message);
}

void write_outputs(const RunConfig& cfg, const StudyResult& r, StudyOutput& out) {
  const std::filesystem::path dir(cfg.out);
  const std::string stem = file_stem(r.table.label);
  const std::string csv = (dir / (stem + ".csv")).string();
  export_csv(r.table, csv);
  out.files.push_back(csv);
  if (!cfg.vtk) return;
  const LevelOutcome* finest = nullptr;
  if (r.reference && r.reference->status == NewtonStatus::converged) finest = &*r.reference;
  for (auto it = r.levels.rbegin(); !finest && it != r.levels.rend(); ++it)
    if (it->status == NewtonStatus::converged) finest = &*it;
  if (!finest) return;
  const std::string vtk = (dir / (stem + ".vtk")).string();
  export_vtk(*finest->space, finest->solution, vtk);
  out.files.push_back(vtk);
}

}  // namespace

StudyOutput run_study(const RunConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out);
  const StudyOptions opt = cfg.study_options();
  StudyOutput out;

  if (cfg.command == "sweep") {
    const Mesh base = build_square_mesh(cfg.n);
    for (double eps : cfg.eps_list) {
      StudyResult r = run_manufactured_study(polynomial_problem(eps), base, opt);
      std::ostringstream label;
      label << "sweep_eps" << eps;
      r.table.label = label.str();
      collect_failures(r, out);
      write_outputs(cfg, r, out);
      out.tables.push_back(std::move(r.table));
    }
    const std::string all = (std::filesystem::path(cfg.out) / "sweep.csv").string();
    std::ofstream os(all);
    if (!os) throw std::runtime_error("cannot open '" + all + "' for writing");
    for (std::size_t i = 0; i < out.tables.size(); ++i) write_csv(os, out.tables[i], i == 0);
    out.files.push_back(all);
    return out;
  }

  StudyResult r;
  if (cfg.command == "well") {
    const std::string name = cfg.problem.rfind("well:", 0) == 0 ? cfg.problem.substr(5) : cfg.state;
    r = run_well_study(cfg.eps, WellState::from_name(name), build_square_mesh(cfg.n), opt);
  } else if (cfg.command == "annulus" || cfg.problem == "annulus") {
    const Mesh base = build_annulus_mesh(kAnnulusInnerRadius, kAnnulusOuterRadius, cfg.n_seg, cfg.n_rings);
    r = run_manufactured_study(annulus_problem(), base, opt);
  } else {
    r = run_manufactured_study(polynomial_problem(cfg.eps), build_square_mesh(cfg.n), opt);
  }
  collect_failures(r, out);
  write_outputs(cfg, r, out);
  out.tables.push_back(std::move(r.table));
  return out;
}

}  // namespace ldg
