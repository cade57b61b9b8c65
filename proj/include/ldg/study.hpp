#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldg/analysis.hpp"

namespace ldg {

/// Bad config file or field value. The message names the line or the field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a study needs. JSON keys match the CLI flag names.
struct RunConfig {
  std::string command = "converge";  // converge | well | annulus | sweep
  std::string problem = "polynomial";
  int k = 1;
  double eps = 0.2;
  std::optional<double> sigma;  // unset: 10 k^2
  int lambda = -1;
  std::string penalty = "local";
  int levels = 5;
  int n = 4;
  std::string state = "D1";
  int n_seg = 16;
  int n_rings = 2;
  std::string reference = "finest";  // finest | refined | elevated
  std::vector<double> eps_list{0.2, 0.1, 0.05};
  double tol_dg = 1e-10;
  double tol_res = 1e-10;
  int max_iter = 50;
  std::string solver = "direct";
  bool warmstart = false;
  std::string out = "out";
  bool vtk = true;
  std::uint64_t seed = 20190403;

  /// Per-command defaults for eps, levels and n.
  static RunConfig defaults_for(const std::string& command);

  void validate() const;
  FormParams form_params() const;
  NewtonConfig newton_config() const;
  StudyOptions study_options() const;

  bool operator==(const RunConfig&) const = default;
};

/// Throws ConfigError on malformed JSON, unknown keys or bad values. Missing
/// keys take the defaults of the config's command.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

struct StudyOutput {
  std::vector<ConvergenceTable> tables;
  std::vector<std::string> files;
  /// One line per level whose Newton solve did not converge.
  std::vector<std::string> failures;

  bool all_converged() const { return failures.empty(); }
  int exit_code() const { return all_converged() ? 0 : 2; }
};

/// Runs the configured study level by level, writes <out>/<label>.csv for
/// each table and a VTK file of the finest field.
StudyOutput run_study(const RunConfig& cfg);

/// Table label made safe for a file name ("well:D1" -> "well_D1").
std::string file_stem(const std::string& label);

}  // namespace ldg
