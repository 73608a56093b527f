#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "frameforge/classify.hpp"
#include "frameforge/serialize.hpp"

namespace frameforge {

/// Resolved run configuration (config file plus CLI overrides), echoed
/// verbatim into every report.
struct RunConfig {
  FamilySpec family;
  GridSpec grid;
  JetKind jet_kind = JetKind::analytic;
  Steps steps;
  ClassifyTols ctols;

  // Section pass/fail thresholds; unset values resolve by jet kind.
  std::optional<Real> residual_tol;  // default 1e-6 analytic, 1e-4 fd
  std::optional<Real> codazzi_tol;   // default 1e-4 analytic, 1e-2 fd
  std::optional<Real> gauss_tol;     // default 1e-5 analytic, 1e-3 fd
  Real invariance_tol = 1e-8;
  Real pullback_tol = 1e-9;

  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::string out_dir = "out";
  bool export_csv = true;
  bool export_obj = false;
  bool export_curvature_csv = false;

  Real resolved_residual_tol() const;
  Real resolved_codazzi_tol() const;
  Real resolved_gauss_tol() const;
};

RunConfig config_from_json(const ojson& j);
ojson config_to_json(const RunConfig& config);

/// Named tolerance override (--tol name=value). Recognized names:
/// const, umb, geo, family, residual, codazzi, gauss, invariance, pullback,
/// h_fd, h_frame, h_form.
void apply_tol_override(RunConfig& config, const std::string& name, Real value);

struct CmdResult {
  int exit_code = 0;
  ojson report;
};

ojson classification_to_json(const Classification& c);

/// Exit codes: 0 success / homogeneous, 1 classified non-homogeneous,
/// 2 residual violation or runtime failure, 3 invalid input.
CmdResult cmd_generate(const RunConfig& config);
CmdResult cmd_analyze(const RunConfig& config);
CmdResult cmd_classify(const RunConfig& config);
CmdResult cmd_verify_isometry(const RunConfig& config);

struct CliOverrides {
  std::optional<std::string> out_dir;
  std::optional<std::string> grid;  // "N1xN2"
  std::vector<std::string> tols;    // "name=value"
  std::vector<std::uint64_t> seeds;
};

/// Loads the config file, applies overrides, dispatches the command, writes
/// the report to <out_dir>/report.json and maps exceptions to exit codes.
int run_command(const std::string& command, const std::string& config_path,
                const CliOverrides& overrides, std::ostream& log, std::ostream& err);

}  // namespace frameforge
