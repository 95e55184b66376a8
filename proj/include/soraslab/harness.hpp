#pragma once
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "soraslab/analysis.hpp"
#include "soraslab/assembly.hpp"
#include "soraslab/decomp.hpp"
#include "soraslab/krylov.hpp"
#include "soraslab/schwarz.hpp"

namespace soras {

/// One fully resolved experiment. Presets fill every field; explicit keys
/// (config file or --set) override preset values.
struct ExperimentConfig {
  std::string preset;  // table1..table5, fov, or empty for explicit setups
  int N = 2;
  int ny = 60;
  int overlap_layers = 1;  // delta = 2 * layers * h
  PuKind pu = PuKind::PU2;
  VelocityKind velocity = VelocityKind::Zero;
  double c0 = 1.0;
  double nu = 1.0;
  bool supg = false;
  double source_x = 0.5, source_y = 0.1;
  double tol = 1e-6;
  int maxit = 1000;
  bool random_x0 = false;
  std::uint64_t seed = 0;
  SchwarzVariant variant = SchwarzVariant::SORAS;
  std::string out;  // CSV path, empty = stdout / none
};

struct ExperimentRow {
  ExperimentConfig config;
  int iterations = -1;
  bool converged = false;
  double final_residual = 0.0;
  double c_tilde_min = 0.0;
  SolveReport report;
  std::string error;  // nonempty if the cell failed, prefixed by its stage
};

// Fills every field from the named preset (empty name = leave defaults).
// Unknown names throw.
ExperimentConfig apply_preset(const std::string& name);

// Flat key=value configuration with '#' comments; keys mirror the CLI
// flags. parse_config reads assignments, apply_config_entries folds them
// into a config (starting from the preset when one is named).
std::map<std::string, std::string> parse_config(std::istream& in);
ExperimentConfig apply_config_entries(const std::map<std::string, std::string>& entries);

/// Runs mesh -> decomposition -> PU -> assembly -> preconditioner ->
/// GMRES for one configuration. Module failures are reported in the row's
/// error field with the failing stage name. Logs a "hypothesis (3)
/// violated" line when min c~ <= 0.
ExperimentRow run_experiment(const ExperimentConfig& config);

struct TableOptions {
  std::string out;            // CSV path; empty = no file
  bool full_scaling = false;  // extend table4 to N = 32, 64
  std::uint64_t seed = 0;     // random x0 seed for table4
  int n_angles = 64;          // fov resolution
};

/// Result of a full table run. Tables 1-4 fill `rows` (coefficient row
/// outer, then overlap/subdomain count, then PU1 before PU2); table5
/// fills `spectra` and fov fills `fovs` (overlap outer, PU1 before PU2).
struct TableResult {
  std::vector<ExperimentRow> rows;
  std::vector<SpectrumReport> spectra;
  std::vector<FovReport> fovs;
  bool all_ok = true;
};

TableResult run_table(const std::string& preset, const TableOptions& opts);

void write_experiment_csv(const std::vector<ExperimentRow>& rows, std::ostream& out);

const char* velocity_name(VelocityKind kind);
const char* pu_name(PuKind kind);

}  // namespace soras
