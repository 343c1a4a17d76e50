#include "xyq/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "xyq/correlators.hpp"
#include "xyq/errors.hpp"
#include "xyq/oracle.hpp"
#include "xyq/rdm.hpp"

namespace xyq {

namespace {

std::vector<double> resolve_h_grid(const HGridSpec& g) {
  if (g.count == 1) return {g.lo};
  return lin_grid(g.lo, g.hi, g.count);
}

std::vector<double> default_scaling_xi() { return {0.15, 0.2, 0.25, 0.3, 0.35, 0.4}; }

std::vector<SweepRecord> filter_r(std::vector<SweepRecord> records,
                                  const std::vector<int>& r_list) {
  std::erase_if(records, [&](const SweepRecord& rec) {
    return std::find(r_list.begin(), r_list.end(), rec.r) == r_list.end();
  });
  return records;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

double measure_of(const oracle::MeasureValues& v, MeasureId id) {
  switch (id) {
    case MeasureId::qfi: return v.qfi;
    case MeasureId::lqc_x: return v.lqc_x;
    case MeasureId::lqc_y: return v.lqc_y;
    case MeasureId::lqc_z: return v.lqc_z;
  }
  return 0.0;
}

double measure_of(const MeasureResult& m, MeasureId id) {
  switch (id) {
    case MeasureId::qfi: return m.qfi;
    case MeasureId::lqc_x: return m.lqc_x;
    case MeasureId::lqc_y: return m.lqc_y;
    case MeasureId::lqc_z: return m.lqc_z;
  }
  return 0.0;
}

// momentum-pipeline RDMs at the end of the ramp
std::array<TwoSpinRDM, 2> pipeline_final_rdms(const ChainSpec& spec,
                                              const RampProtocol& protocol,
                                              const IntegratorConfig& icfg) {
  const std::vector<Mode> modes = momentum_grid(spec);
  const std::array<double, 1> endpoint{protocol.t_end()};
  const auto snapshots = evolve_chain(spec, protocol, icfg, endpoint);
  const ContractionTable table =
      contractions(modes, snapshots[0], protocol.h_final, 2, spec.n_sites);
  const SpinCorrelators corr = spin_correlators(table);
  const SnapshotTag tag{protocol.tau, protocol.xi, protocol.h_final, endpoint[0]};
  return {assemble_rdm(corr, 1, tag), assemble_rdm(corr, 2, tag)};
}

}  // namespace

ScalingOutput run_scaling(const RunConfig& cfg) {
  ScalingOutput out;
  const std::vector<double> xis = cfg.xi_list.empty() ? default_scaling_xi() : cfg.xi_list;
  const std::vector<double> taus =
      cfg.tau_list.empty() ? log_grid(1.0, 100.0, 25) : cfg.tau_list;

  if (cfg.synthetic) {
    // synthetic injection: peak shape v = (tau/tau_m) exp(1 - tau/tau_m) with
    // tau_m = (xi^2)^(-2/3); exercises the full peak/fit machinery
    for (double xi : xis) {
      const double tau_m = std::pow(xi * xi, -2.0 / 3.0);
      for (double tau : taus)
        for (MeasureId id : cfg.measures)
          for (int r : cfg.r_list)
            out.records.push_back(
                {tau, xi, r, id, cfg.h_final,
                 (tau / tau_m) * std::exp(1.0 - tau / tau_m)});
    }
  } else {
    for (double xi : xis) {
      const auto records =
          tau_sweep(cfg.chain(), xi, taus, cfg.measures, cfg.integrator());
      out.records.insert(out.records.end(), records.begin(), records.end());
    }
  }

  for (MeasureId id : cfg.measures) {
    for (int r : cfg.r_list) {
      std::vector<std::pair<double, double>> xi_tau_m;
      for (double xi : xis) {
        const auto series = filter_series(out.records, id, r, xi);
        if (series.empty()) continue;
        FitResult peak = locate_peak(series);
        out.fits.push_back({peak, to_string(id), r, xi});
        xi_tau_m.emplace_back(xi, peak.tau_m);

        const double lo =
            cfg.fit_window_hi > 0 ? cfg.fit_window_lo : 2.0 * peak.tau_m;
        const double hi = cfg.fit_window_hi > 0 ? cfg.fit_window_hi : taus.back();
        out.fits.push_back({fit_exp_decay(series, lo, hi), to_string(id), r, xi});
        // ln-ln companion on the same window (diagnostic; exp fit is primary)
        out.fits.push_back({fit_tau_power_law(series, lo, hi), to_string(id), r, xi});
      }
      if (xi_tau_m.size() >= 4)
        out.fits.push_back({fit_power_law(xi_tau_m), to_string(id), r, std::nullopt});
    }
  }
  return out;
}

ValidationReport run_validation(const RunConfig& cfg) {
  ValidationReport report;
  ChainSpec spec = cfg.chain();
  spec.n_sites = cfg.n_oracle;
  spec.validate();

  auto line = [&report](const std::string& s) {
    report.lines.push_back(s);
  };

  // noiseless cross-check
  const std::vector<double> taus =
      cfg.tau_list.empty() ? std::vector<double>{0.5, 2.0} : cfg.tau_list;
  for (double tau : taus) {
    const RampProtocol protocol{tau, 0.0, spec.h_initial, spec.h_final};
    const auto pipeline = pipeline_final_rdms(spec, protocol, cfg.integrator());
    const oracle::DenseChainState exact =
        oracle::noiseless_evolve(spec, protocol, cfg.dt_prop);
    for (int r = 1; r <= 2; ++r) {
      const Eigen::Matrix4cd exact_rdm = oracle::reduced_rdm(exact, 0, r);
      const Eigen::Matrix4cd diff = pipeline[r - 1].matrix() - exact_rdm;
      const double dev = diff.cwiseAbs().maxCoeff();
      report.max_noiseless_dev = std::max(report.max_noiseless_dev, dev);

      const MeasureResult pm = evaluate_measures(pipeline[r - 1]);
      const TwoSpinRDM ox = oracle::to_x_state(exact_rdm, r, 1e-7);
      const MeasureResult om = evaluate_measures(ox);
      for (MeasureId id : {MeasureId::qfi, MeasureId::lqc_x, MeasureId::lqc_y,
                           MeasureId::lqc_z})
        report.max_measure_dev = std::max(
            report.max_measure_dev, std::abs(measure_of(pm, id) - measure_of(om, id)));
      std::ostringstream os;
      os << "noiseless tau=" << tau << " r=" << r << ": max RDM dev " << dev;
      line(os.str());
    }
  }

  // noisy cross-check
  if (!cfg.xi_list.empty() && cfg.trajectories > 0) {
    report.noisy_ran = true;
    const double tau = cfg.tau_list.empty() ? 1.0 : cfg.tau_list.front();
    for (double xi : cfg.xi_list) {
      const RampProtocol protocol{tau, xi, spec.h_initial, spec.h_final};
      const auto pipeline = pipeline_final_rdms(spec, protocol, cfg.integrator());
      oracle::EnsembleConfig ecfg;
      ecfg.trajectories = cfg.trajectories;
      ecfg.seed = cfg.seed;
      ecfg.dt_noise = cfg.dt_noise;
      ecfg.dt_prop = cfg.dt_prop;
      const oracle::TrajectoryEnsemble ens = oracle::run_trajectories(spec, protocol, ecfg);
      for (int r = 1; r <= 2; ++r) {
        const Eigen::Matrix4cd pm = pipeline[r - 1].matrix();
        double worst = 0.0;
        for (int a = 0; a < 4; ++a) {
          for (int b = 0; b < 4; ++b) {
            const auto dev = pm(a, b) - ens.rdm_mean[r - 1](a, b);
            const auto se = ens.rdm_stderr[r - 1](a, b);
            if (std::abs(dev.real()) > 1e-9 || se.real() > 1e-12)
              worst = std::max(worst,
                               std::abs(dev.real()) / std::max(se.real(), 1e-12));
            if (std::abs(dev.imag()) > 1e-9 || se.imag() > 1e-12)
              worst = std::max(worst,
                               std::abs(dev.imag()) / std::max(se.imag(), 1e-12));
          }
        }
        const MeasureResult pmeas = evaluate_measures(pipeline[r - 1]);
        for (MeasureId id : {MeasureId::qfi, MeasureId::lqc_x, MeasureId::lqc_y,
                             MeasureId::lqc_z}) {
          const double dev =
              std::abs(measure_of(pmeas, id) - measure_of(ens.measure_mean[r - 1], id));
          const double se = measure_of(ens.measure_stderr[r - 1], id);
          if (dev > 1e-9 || se > 1e-12)
            worst = std::max(worst, dev / std::max(se, 1e-12));
        }
        report.max_noisy_z = std::max(report.max_noisy_z, worst);
        std::ostringstream os;
        os << "noisy xi=" << xi << " tau=" << tau << " r=" << r << " (M="
           << cfg.trajectories << "): worst |dev|/stderr = " << worst;
        line(os.str());
      }
    }
  }

  report.passed = report.max_noiseless_dev <= 1e-6 && report.max_measure_dev <= 1e-5 &&
                  (!report.noisy_ran || report.max_noisy_z <= 3.0);
  return report;
}

int run(const RunConfig& cfg) {
  const char* stage = "config";
  try {
    cfg.validate();
    const std::string provenance = resolved_config_text(cfg);
    switch (cfg.cmd) {
      case Subcommand::field_sweep: {
        stage = "field-sweep";
        const std::vector<double> taus =
            cfg.tau_list.empty() ? std::vector<double>{500.0} : cfg.tau_list;
        const std::vector<double> xis =
            cfg.xi_list.empty() ? std::vector<double>{0.0} : cfg.xi_list;
        const std::vector<double> grid = resolve_h_grid(cfg.h_grid);
        std::vector<SweepRecord> records;
        for (double tau : taus)
          for (double xi : xis) {
            const auto chunk = field_sweep(cfg.chain(), tau, xi, cfg.measures, grid,
                                           cfg.integrator());
            records.insert(records.end(), chunk.begin(), chunk.end());
          }
        write_records_csv(out_path(cfg, "field_sweep.csv"),
                          filter_r(std::move(records), cfg.r_list), provenance);
        return kExitOk;
      }
      case Subcommand::tau_sweep: {
        stage = "tau-sweep";
        const std::vector<double> taus =
            cfg.tau_list.empty() ? log_grid(1.0, 200.0, 25) : cfg.tau_list;
        const std::vector<double> xis =
            cfg.xi_list.empty() ? std::vector<double>{0.0} : cfg.xi_list;
        std::vector<SweepRecord> records;
        for (double xi : xis) {
          const auto chunk =
              tau_sweep(cfg.chain(), xi, taus, cfg.measures, cfg.integrator());
          records.insert(records.end(), chunk.begin(), chunk.end());
        }
        write_records_csv(out_path(cfg, "tau_sweep.csv"),
                          filter_r(std::move(records), cfg.r_list), provenance);
        return kExitOk;
      }
      case Subcommand::scaling: {
        stage = "scaling";
        ScalingOutput out = run_scaling(cfg);
        write_records_csv(out_path(cfg, "scaling.csv"),
                          filter_r(std::move(out.records), cfg.r_list), provenance);
        write_fits_json(out_path(cfg, "fits.json"), out.fits, provenance);
        return kExitOk;
      }
      case Subcommand::static_ref: {
        stage = "static";
        const std::vector<double> grid = resolve_h_grid(cfg.h_grid);
        auto records = static_reference(cfg.chain(), grid, cfg.measures);
        write_records_csv(out_path(cfg, "static.csv"),
                          filter_r(std::move(records), cfg.r_list), provenance);
        return kExitOk;
      }
      case Subcommand::validate: {
        stage = "validate";
        const ValidationReport report = run_validation(cfg);
        for (const std::string& s : report.lines) std::cout << s << "\n";
        std::cout << "max noiseless RDM deviation: " << report.max_noiseless_dev
                  << " (tolerance 1e-6)\n";
        std::cout << "max noiseless measure deviation: " << report.max_measure_dev
                  << " (tolerance 1e-5)\n";
        if (report.noisy_ran)
          std::cout << "max noisy z-score: " << report.max_noisy_z
                    << " (tolerance 3)\n";
        if (!report.passed) {
          std::cerr << "error [validate]: oracle cross-check failed\n";
          return kExitValidationFailure;
        }
        std::cout << "validation passed\n";
        return kExitOk;
      }
    }
    return kExitOk;
  } catch (const config_error& e) {
    std::cerr << "error [" << stage << "] (config): " << e.what() << "\n";
    return kExitConfigError;
  } catch (const validation_error& e) {
    std::cerr << "error [" << stage << "] (validation): " << e.what() << "\n";
    return kExitValidationFailure;
  } catch (const compute_error& e) {
    std::cerr << "error [" << stage << "] (compute): " << e.what() << "\n";
    return kExitComputeError;
  } catch (const std::exception& e) {
    std::cerr << "error [" << stage << "]: " << e.what() << "\n";
    return kExitComputeError;
  }
}

}  // namespace xyq
