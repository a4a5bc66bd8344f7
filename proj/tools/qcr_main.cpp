// Batch verification harness.  Subcommands select a suite (or all of them),
// a flat key=value config file supplies campaign parameters, and flags
// override file values.  Reports go to stdout or --out as JSON or CSV.
//
// Exit codes: 0 all checks passed, 1 at least one check failed, 2 on
// configuration or I/O errors.

#include <qcr/suites.hpp>

#include <CLI11.hpp>

#include <iostream>

namespace {

struct FlagValues {
  std::string config_path;
  int rank = 0;
  std::string hbar_text;
  int max_level = -1;
  long mc_samples = 0;
  long long seed = -1;
  std::string format;
  std::string out_path;
  int torus_points = -1;
  int hermite_nodes = 0;
  bool timings = false;
  std::vector<std::string> tol_overrides;
};

qcr::CampaignConfig assemble_config(const FlagValues& f, const CLI::App& app) {
  qcr::CampaignConfig cfg;
  if (!f.config_path.empty()) cfg = qcr::parse_config_file(f.config_path);
  if (app.count("--rank")) cfg.rank = f.rank;
  if (app.count("--hbar")) qcr::apply_config_entry(cfg, "hbar_list", f.hbar_text);
  if (app.count("--max-level")) cfg.max_level = f.max_level;
  if (app.count("--mc-samples")) cfg.mc_samples = f.mc_samples;
  if (app.count("--seed")) cfg.seed = static_cast<std::uint64_t>(f.seed);
  if (app.count("--format")) cfg.format = f.format;
  if (app.count("--out")) cfg.out_path = f.out_path;
  if (app.count("--torus-points")) cfg.torus_points_per_dim = f.torus_points;
  if (app.count("--hermite-nodes")) cfg.hermite_nodes = f.hermite_nodes;
  if (f.timings) cfg.timings = true;
  for (const std::string& kv : f.tol_overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw qcr::ConfigError("--tol expects key=value, got '" + kv + "'");
    qcr::apply_config_entry(cfg, "tol_" + kv.substr(0, eq), kv.substr(eq + 1));
  }
  qcr::validate_config(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification harness for the torus-reduction isometry library.\n"
               "The QCR_WORKERS environment variable caps the worker threads;\n"
               "results are identical for any worker count."};
  app.fallthrough();
  app.require_subcommand(1);

  FlagValues f;
  app.add_option("--config", f.config_path, "flat key=value config file");
  app.add_option("--rank", f.rank, "maximum rank to sweep (1-3)");
  app.add_option("--hbar", f.hbar_text, "comma-separated list of hbar values");
  app.add_option("--max-level", f.max_level, "dominant-weight enumeration cap");
  app.add_option("--mc-samples", f.mc_samples, "Monte Carlo sample count");
  app.add_option("--seed", f.seed, "64-bit campaign seed");
  app.add_option("--format", f.format, "report format: json or csv");
  app.add_option("--out", f.out_path, "report file path (default stdout)");
  app.add_option("--torus-points", f.torus_points, "torus grid points per dimension (0 = auto)");
  app.add_option("--hermite-nodes", f.hermite_nodes, "Gauss-Hermite nodes per dimension");
  app.add_flag("--timings", f.timings, "record wall-clock times in rows (breaks byte determinism)");
  app.add_option("--tol", f.tol_overrides, "tolerance override key=value (repeatable)")
      ->take_all();

  for (const auto& [name, desc] : qcr::suite_descriptions()) {
    app.add_subcommand(name, desc);
  }
  app.add_subcommand("all", "run every suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    const qcr::CampaignConfig cfg = assemble_config(f, app);
    const std::string suite = app.get_subcommands().front()->get_name();
    const auto rows = (suite == "all") ? qcr::run_all(cfg) : qcr::run_suite(suite, cfg);
    qcr::write_report(cfg, rows, std::cout);
    return qcr::all_rows_pass(rows) ? 0 : 1;
  } catch (const qcr::ConfigError& e) {
    std::cerr << "qcr: config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qcr: error: " << e.what() << "\n";
    return 2;
  }
}
