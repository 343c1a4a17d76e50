// Command-line front end: field sweeps, tau sweeps, noisy scaling runs,
// static reference curves, and oracle validation.
#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "xyq/errors.hpp"
#include "xyq/run_config.hpp"
#include "xyq/runner.hpp"

namespace {

struct RawArgs {
  std::string config_path;
  std::string out_dir;
  std::string tau, xi, r, measures, h_grid, fit_window;
  int n = -1;
  double gamma = std::nan("");
  double h_i = std::nan(""), h_f = std::nan("");
  double rel_tol = std::nan(""), abs_tol = std::nan("");
  double dt_noise = std::nan(""), dt_prop = std::nan("");
  int n_oracle = -1, trajectories = -1;
  long long seed = -1;
  bool synthetic = false;
};

void add_common(CLI::App* sub, RawArgs& raw) {
  sub->add_option("--config", raw.config_path, "flat key=value config file");
  sub->add_option("--out", raw.out_dir, "output directory");
  sub->add_option("--N", raw.n, "number of sites (even)");
  sub->add_option("--gamma", raw.gamma, "anisotropy");
  sub->add_option("--h-i", raw.h_i, "initial field");
  sub->add_option("--h-f", raw.h_f, "final field");
  sub->add_option("--tau", raw.tau, "comma list of ramp times");
  sub->add_option("--xi", raw.xi, "comma list of noise strengths");
  sub->add_option("--r", raw.r, "comma list of separations (1,2)");
  sub->add_option("--measures", raw.measures, "comma list: qfi,lqc_x,lqc_y,lqc_z");
  sub->add_option("--h-grid", raw.h_grid, "field grid min:max:count");
  sub->add_option("--rel-tol", raw.rel_tol, "integrator relative tolerance");
  sub->add_option("--abs-tol", raw.abs_tol, "integrator absolute tolerance");
  sub->add_option("--N-oracle", raw.n_oracle, "oracle chain size (<= 12)");
  sub->add_option("--trajectories", raw.trajectories, "noise trajectories");
  sub->add_option("--seed", raw.seed, "trajectory RNG seed");
  sub->add_option("--dt-noise", raw.dt_noise, "noise discretization step");
  sub->add_option("--dt-prop", raw.dt_prop, "oracle propagator substep");
  sub->add_option("--fit-window", raw.fit_window, "exp-decay fit window lo:hi");
}

// config file first, command-line overrides second
xyq::RunConfig assemble(xyq::Subcommand cmd, const RawArgs& raw) {
  xyq::RunConfig cfg;
  cfg.cmd = cmd;
  if (!raw.config_path.empty()) xyq::apply_config_file(cfg, raw.config_path);
  if (!raw.out_dir.empty()) cfg.out_dir = raw.out_dir;
  if (raw.n >= 0) cfg.n_sites = raw.n;
  if (!std::isnan(raw.gamma)) cfg.gamma = raw.gamma;
  if (!std::isnan(raw.h_i)) cfg.h_initial = raw.h_i;
  if (!std::isnan(raw.h_f)) cfg.h_final = raw.h_f;
  if (!raw.tau.empty()) cfg.tau_list = xyq::parse_double_list(raw.tau);
  if (!raw.xi.empty()) cfg.xi_list = xyq::parse_double_list(raw.xi);
  if (!raw.r.empty()) cfg.r_list = xyq::parse_int_list(raw.r);
  if (!raw.measures.empty()) cfg.measures = xyq::parse_measure_list(raw.measures);
  if (!raw.h_grid.empty()) cfg.h_grid = xyq::parse_h_grid(raw.h_grid);
  if (!std::isnan(raw.rel_tol)) cfg.rel_tol = raw.rel_tol;
  if (!std::isnan(raw.abs_tol)) cfg.abs_tol = raw.abs_tol;
  if (raw.n_oracle >= 0) cfg.n_oracle = raw.n_oracle;
  if (raw.trajectories >= 0) cfg.trajectories = raw.trajectories;
  if (raw.seed >= 0) cfg.seed = static_cast<std::uint64_t>(raw.seed);
  if (!std::isnan(raw.dt_noise)) cfg.dt_noise = raw.dt_noise;
  if (!std::isnan(raw.dt_prop)) cfg.dt_prop = raw.dt_prop;
  if (!raw.fit_window.empty()) {
    xyq::apply_key_value(cfg, "fit-window", raw.fit_window);
  }
  cfg.synthetic = raw.synthetic;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transverse-field XY chain quench simulator: QFI and "
               "Wigner-Yanase skew information under noiseless and noisy ramps"};
  app.require_subcommand(1);

  RawArgs raw;
  CLI::App* field = app.add_subcommand("field-sweep",
                                       "measures vs instantaneous field during a ramp");
  CLI::App* tau = app.add_subcommand("tau-sweep", "endpoint measures vs ramp time");
  CLI::App* scaling = app.add_subcommand(
      "scaling", "tau sweeps per xi with peak location and decay/power-law fits");
  CLI::App* validate =
      app.add_subcommand("validate", "cross-check pipeline against the exact oracle");
  CLI::App* static_ref =
      app.add_subcommand("static", "ground-state reference curves");
  for (CLI::App* sub : {field, tau, scaling, validate, static_ref}) add_common(sub, raw);
  scaling->add_flag("--synthetic", raw.synthetic,
                    "run the fit machinery on synthetic peak data");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return xyq::kExitConfigError;
  }

  xyq::Subcommand cmd = xyq::Subcommand::field_sweep;
  if (tau->parsed()) cmd = xyq::Subcommand::tau_sweep;
  else if (scaling->parsed()) cmd = xyq::Subcommand::scaling;
  else if (validate->parsed()) cmd = xyq::Subcommand::validate;
  else if (static_ref->parsed()) cmd = xyq::Subcommand::static_ref;

  try {
    return xyq::run(assemble(cmd, raw));
  } catch (const xyq::config_error& e) {
    std::cerr << "error [config]: " << e.what() << "\n";
    return xyq::kExitConfigError;
  }
}
