// Command-line front end: single experiment runs, full table sweeps, and
// the spectral / numerical-range diagnostics, all emitting CSV.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "soraslab/harness.hpp"

namespace {

using namespace soras;

int do_run(const std::string& config_path, const std::vector<std::string>& sets,
           const std::string& out_flag, bool seed_given, std::uint64_t seed) {
  std::map<std::string, std::string> entries;
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) {
      std::cerr << "error: cannot open config file " << config_path << "\n";
      return 2;
    }
    entries = parse_config(f);
  }
  for (const std::string& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
      return 2;
    }
    entries[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  ExperimentConfig config = apply_config_entries(entries);
  if (seed_given) config.seed = seed;
  if (!out_flag.empty()) config.out = out_flag;

  const ExperimentRow row = run_experiment(config);
  write_experiment_csv({row}, std::cout);
  if (!config.out.empty()) {
    const bool fresh =
        !std::filesystem::exists(config.out) || std::filesystem::file_size(config.out) == 0;
    std::ofstream f(config.out, std::ios::app);
    if (!f) {
      std::cerr << "error: cannot open " << config.out << "\n";
      return 2;
    }
    std::ostringstream body;
    write_experiment_csv({row}, body);
    std::string text = body.str();
    if (!fresh) text.erase(0, text.find('\n') + 1);  // keep one header per file
    f << text;
  }
  if (!row.error.empty()) {
    std::cerr << "error: " << row.error << "\n";
    return 2;
  }
  return row.converged ? 0 : 2;
}

int do_single_fov(const std::string& out, const std::string& pu, int layers, int angles) {
  std::map<std::string, std::string> entries{{"preset", "fov"}, {"pu", pu},
                                             {"overlap_layers", std::to_string(layers)}};
  const ExperimentConfig config = apply_config_entries(entries);
  const Mesh mesh = build_strip_mesh(config.N, config.ny);
  const auto subs = add_overlap(mesh, partition_strips(mesh, config.N), config.overlap_layers);
  const auto pu_weights = build_pu(config.pu, mesh, subs, config.overlap_layers);
  Coefficients coeffs;
  coeffs.c0 = config.c0;
  coeffs.nu = config.nu;
  coeffs.velocity = config.velocity;
  const SourceTerm source;
  const AssembledSystem sys = assemble_global(mesh, coeffs, source);
  std::vector<CsrMatrix> locals;
  for (const Subdomain& s : subs) locals.push_back(assemble_local(mesh, s, coeffs));
  const SorasPreconditioner M(subs, pu_weights, locals, config.variant);
  const auto interior = interior_nodes(mesh);

  const DenseMatrix P = preconditioned_dense(sys.A, M.op(), interior);
  const FovReport rep = fov_boundary(P, angles);
  std::ofstream f(out);
  if (!f) {
    std::cerr << "error: cannot open " << out << "\n";
    return 2;
  }
  write_fov_csv(rep, f);
  std::cout << "numerical range boundary (" << pu << ", delta=" << 2 * layers << "h): area "
            << rep.area() << ", written to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Overlapping Schwarz laboratory for the reaction-convection-diffusion equation"};
  app.require_subcommand(1);

  std::string config_path, out;
  std::vector<std::string> sets;
  std::uint64_t seed = 0;
  bool full = false;
  int angles = 64, layers = 1;
  std::string table_name, pu = "PU2";

  CLI::App* run = app.add_subcommand("run", "run one experiment and append a CSV row");
  run->add_option("--config", config_path, "key=value config file");
  run->add_option("--set", sets, "override, e.g. --set nu=0.001")->take_all();
  auto* seed_opt = run->add_option("--seed", seed, "seed for the random initial guess");
  run->add_option("--out", out, "CSV file to append to");

  CLI::App* table = app.add_subcommand("table", "run a full table sweep");
  table->add_option("name", table_name, "table1..table5 or fov")->required();
  table->add_option("--out", out, "output CSV path");
  table->add_flag("--full", full, "extend table4 to N=32,64");
  table->add_option("--seed", seed, "seed for the random initial guess (table4)");
  table->add_option("--angles", angles, "angle count for fov");

  CLI::App* fov = app.add_subcommand("fov", "numerical range boundary for one configuration");
  fov->add_option("--out", out, "output CSV path");
  fov->add_option("--pu", pu, "PU1 or PU2");
  fov->add_option("--layers", layers, "overlap layers (delta = 2*layers*h)");
  fov->add_option("--angles", angles, "angle count");

  CLI::App* spectrum = app.add_subcommand("spectrum", "extreme eigenvalues over the overlap grid");
  spectrum->add_option("--out", out, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return do_run(config_path, sets, out, !seed_opt->empty(), seed);
    if (table->parsed()) {
      soras::TableOptions opts;
      opts.out = out.empty() ? table_name + ".csv" : out;
      opts.full_scaling = full;
      opts.seed = seed;
      opts.n_angles = angles;
      return soras::run_table(table_name, opts).all_ok ? 0 : 2;
    }
    if (fov->parsed()) return do_single_fov(out.empty() ? "fov.csv" : out, pu, layers, angles);
    if (spectrum->parsed()) {
      soras::TableOptions opts;
      opts.out = out.empty() ? "spectrum.csv" : out;
      return soras::run_table("table5", opts).all_ok ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
