#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "enpp/csv.hpp"
#include "enpp/error.hpp"
#include "enpp/experiments.hpp"
#include "enpp/snapshot.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kViolation = 1, kConfigError = 2, kNumericalFailure = 3 };

struct RunArgs {
  std::string config;
  bool strict = false;
  bool renormalize = false;
  std::string output;
};

enpp::RunConfig load(const RunArgs& args, enpp::Mode mode) {
  enpp::RunConfig config = enpp::parse_config(args.config);
  config.mode = mode;
  if (args.strict) config.strict = true;
  if (args.renormalize) config.renormalize_charge = true;
  if (!args.output.empty()) config.output = args.output;
  return config;
}

void print_violations(const enpp::InvariantReport& report) {
  for (const auto& v : report.violations) {
    std::cerr << "violation: " << v.invariant << " at t = " << v.first_time << ": " << v.detail << '\n';
  }
}

int simulate(const RunArgs& args) {
  const auto config = load(args, enpp::Mode::simulate);
  const auto outcome = enpp::run_simulation(config);
  std::cout << "steps " << outcome.steps << " dt " << outcome.dt << " samples "
            << outcome.trajectory.size() << '\n'
            << "blowup integral " << outcome.monitor.total() << '\n'
            << "violations " << outcome.report.violations.size() << '\n'
            << "output " << config.output.string() << '\n';
  print_violations(outcome.report);
  return config.strict && !outcome.report.ok() ? kViolation : kOk;
}

int iterate(const RunArgs& args) {
  const auto config = load(args, enpp::Mode::iterate);
  const auto outcome = enpp::run_iteration(config);
  const auto& r = outcome.report;
  std::cout << "iterations " << r.iterations << " converged " << (r.converged ? "yes" : "no")
            << " non_contraction " << (r.non_contraction ? "yes" : "no") << '\n'
            << "energy " << outcome.energy << " lifespan_bound " << outcome.lifespan_bound << '\n';
  for (std::size_t m = 0; m < r.ratios.size(); ++m) std::cout << "ratio " << m << ' ' << r.ratios[m] << '\n';
  if (r.non_contraction) std::cerr << "violation: Picard iteration does not contract\n";
  return config.strict && r.non_contraction ? kViolation : kOk;
}

int invlimit(const RunArgs& args) {
  const auto config = load(args, enpp::Mode::invlimit);
  const auto fit = enpp::inviscid_experiment(config);
  enpp::write_ratefit(std::cout, fit);
  bool bad = fit.degenerate || !fit.errors_decreasing;
  if (fit.degenerate) std::cerr << "violation: rate fit is degenerate (" << fit.degenerate_reason << ")\n";
  if (!fit.errors_decreasing) std::cerr << "violation: errors do not decrease with the viscosity\n";
  if (!fit.degenerate && fit.slope < 0.45) {
    std::cerr << "violation: fitted slope " << fit.slope << " is below 1/2\n";
    bad = true;
  }
  return config.strict && bad ? kViolation : kOk;
}

int besov(const std::string& path, double s, double p, double r, const std::string& component) {
  const enpp::Snapshot snap = enpp::read_snapshot(fs::path(path));
  const enpp::BesovSpec spec(s, p, r);
  const enpp::DyadicPartition partition(snap.grid);
  const int d = snap.grid.dim();
  const int count = static_cast<int>(snap.fields.size());
  const bool state = count == d + 2;

  auto velocity = [&] {
    return enpp::VectorField(std::vector<enpp::Field>(snap.fields.begin(), snap.fields.begin() + d));
  };
  auto field_index = [&](const std::string& c) -> int {
    if (state && c == "n") return d;
    if (state && c == "p") return d + 1;
    std::size_t used = 0;
    int idx = -1;
    try {
      idx = std::stoi(c, &used);
    } catch (const std::exception&) {
    }
    if (used != c.size() || idx < 0 || idx >= count) {
      throw enpp::InvalidArgument("unknown component '" + c + "' (snapshot has " +
                                  std::to_string(count) + " fields)");
    }
    return idx;
  };

  std::cout.precision(17);
  if (component == "u") {
    if (!state) throw enpp::InvalidArgument("snapshot holds no velocity");
    std::cout << enpp::besov_norm(velocity(), spec, partition) << '\n';
  } else if (!component.empty()) {
    std::cout << enpp::besov_norm(snap.fields[field_index(component)], spec, partition) << '\n';
  } else if (state) {
    std::cout << "u " << enpp::besov_norm(velocity(), spec, partition) << '\n'
              << "n " << enpp::besov_norm(snap.fields[d], spec, partition) << '\n'
              << "p " << enpp::besov_norm(snap.fields[d + 1], spec, partition) << '\n';
  } else {
    for (int i = 0; i < count; ++i) {
      std::cout << i << ' ' << enpp::besov_norm(snap.fields[i], spec, partition) << '\n';
    }
  }
  return kOk;
}

int check(const std::string& dir, const std::string& out_dir, bool strict) {
  const auto trajectory = enpp::load_trajectory(dir);
  const enpp::DyadicPartition partition(trajectory.front().grid());
  const auto report = enpp::invariant_report(trajectory, {}, &partition);
  const auto monitor = enpp::blowup_monitor(trajectory);
  const fs::path out = out_dir.empty() ? fs::path(dir) : fs::path(out_dir);
  fs::create_directories(out);
  std::ofstream csv_out(out / "report.csv", std::ios::binary);
  enpp::write_report_csv(csv_out, report, &monitor);
  std::cout << "samples " << trajectory.size() << " violations " << report.violations.size() << '\n';
  print_violations(report);
  return strict && !report.ok() ? kViolation : kOk;
}

void add_run_options(CLI::App* cmd, RunArgs& args) {
  cmd->add_option("--config", args.config, "run configuration file")->required()->check(CLI::ExistingFile);
  cmd->add_flag("--strict", args.strict, "exit with status 1 on any invariant violation");
  cmd->add_flag("--renormalize-charge", args.renormalize,
                "shift the positive charge so total charges agree");
  cmd->add_option("--output", args.output, "output directory (overrides the config)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Euler-Nernst-Planck-Poisson solver and Besov diagnostics"};
  app.require_subcommand(1);

  RunArgs sim_args, it_args, inv_args;
  add_run_options(app.add_subcommand("simulate", "integrate a preset and write the invariant report"), sim_args);
  add_run_options(app.add_subcommand("iterate", "Picard iteration with contraction diagnostics"), it_args);
  add_run_options(app.add_subcommand("invlimit", "inviscid-limit sweep and rate fit"), inv_args);

  std::string field, component;
  double s = 0.0, p = 2.0, r = 2.0;
  auto* bn = app.add_subcommand("besov-norm", "Besov norm of fields in a snapshot");
  bn->add_option("--field", field, "snapshot file")->required()->check(CLI::ExistingFile);
  bn->add_option("--s", s, "regularity")->required();
  bn->add_option("--p", p, "integrability, 'inf' allowed")->required();
  bn->add_option("--r", r, "summability, 'inf' allowed")->required();
  bn->add_option("--component", component, "u, n, p or a field index");

  std::string traj, out_dir;
  bool check_strict = false;
  auto* ck = app.add_subcommand("check", "recompute the invariant report of a stored trajectory");
  ck->add_option("--trajectory", traj, "run directory containing snapshots/")->required();
  ck->add_option("--out", out_dir, "where report.csv goes (default: the trajectory directory)");
  ck->add_flag("--strict", check_strict, "exit with status 1 on any invariant violation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (app.got_subcommand("simulate")) return simulate(sim_args);
    if (app.got_subcommand("iterate")) return iterate(it_args);
    if (app.got_subcommand("invlimit")) return invlimit(inv_args);
    if (app.got_subcommand("besov-norm")) return besov(field, s, p, r, component);
    return check(traj, out_dir, check_strict);
  } catch (const enpp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const enpp::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kConfigError;
  } catch (const enpp::FormatError& e) {
    std::cerr << "bad input: " << e.what() << '\n';
    return kConfigError;
  } catch (const enpp::GridMismatch& e) {
    std::cerr << "bad input: " << e.what() << '\n';
    return kConfigError;
  } catch (const enpp::NonNeutral& e) {
    std::cerr << "non-neutral charges: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const enpp::CflViolation& e) {
    std::cerr << "CFL violation: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}
