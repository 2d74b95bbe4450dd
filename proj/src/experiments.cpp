#include "enpp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "enpp/csv.hpp"
#include "enpp/error.hpp"
#include "enpp/snapshot.hpp"

namespace enpp {
namespace fs = std::filesystem;

namespace {

StepOptions step_options(const RunConfig& config) {
  StepOptions options;
  options.formulation = config.formulation;
  options.cfl = config.cfl;
  options.charge = config.renormalize_charge ? ChargePolicy::renormalize : ChargePolicy::strict;
  return options;
}

bool finite(const Field& f) {
  const auto v = f.real();
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

bool finite(const SimState& s) {
  return finite(s.n) && finite(s.p) &&
         std::all_of(s.u.components().begin(), s.u.components().end(),
                     [](const Field& c) { return finite(c); });
}

void require_finite(const SimState& s, int index) {
  if (!finite(s)) {
    std::ostringstream os;
    os << "solution became non-finite at step " << index << " (t = " << s.t << ")";
    throw NumericalFailure(os.str());
  }
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::vector<SimState> run_trajectory(const SimState& initial, const RunConfig& config, int steps,
                                     const DyadicPartition& partition) {
  SimState start = initial;
  if (config.renormalize_charge) start.p = renormalize_charge(start.n, start.p);
  require_neutral(start.n, start.p);
  return integrate(start, config.horizon, steps, config.cadence, step_options(config), &partition,
                   [](const SimState& s, int k) { require_finite(s, k); });
}

std::string snapshot_name(std::size_t index) { return "t_" + std::to_string(index) + ".bin"; }

// Bit-exact description of everything the reference run depends on.
std::string reference_key(const RunConfig& config, int steps) {
  std::ostringstream os;
  os << std::hexfloat;
  const InitialSpec& in = config.initial;
  os << "grid " << config.dim << ' ' << config.points << ' ' << config.length << '\n'
     << "initial " << in.preset << ' ' << in.amplitude << ' ' << in.charge_amplitude << ' '
     << in.background << ' ' << in.width << ' ' << in.charge_imbalance << ' ' << in.seed << '\n'
     << "T " << config.horizon << '\n'
     << "steps " << steps << '\n'
     << "cadence " << config.cadence << '\n'
     << "formulation " << static_cast<int>(config.formulation) << '\n'
     << "renormalize " << config.renormalize_charge << '\n';
  return os.str();
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Field real_difference(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid(), "run_distance");
  std::vector<double> d(a.real().size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.real()[i] - b.real()[i];
  return Field::from_real(a.grid(), std::move(d));
}

}  // namespace

SimulationOutcome run_simulation(const RunConfig& config, bool write_outputs) {
  const SimState initial = make_initial_state(config);
  const DyadicPartition partition(initial.grid());

  SimulationOutcome outcome;
  outcome.steps = plan_steps(config, initial);
  outcome.dt = config.horizon / outcome.steps;
  outcome.trajectory = run_trajectory(initial, config, outcome.steps, partition);

  ReportOptions options = config.tolerances;
  options.besov_specs = config.besov_specs;
  outcome.report = invariant_report(outcome.trajectory, options, &partition);
  outcome.monitor = blowup_monitor(outcome.trajectory);

  if (write_outputs) {
    fs::create_directories(config.output);
    {
      auto out = open_output(config.output / "report.csv");
      write_report_csv(out, outcome.report, &outcome.monitor);
    }
    {
      auto out = open_output(config.output / "violations.csv");
      write_violations_csv(out, outcome.report);
    }
    if (!config.besov_specs.empty()) {
      auto out = open_output(config.output / "besov.csv");
      write_besov_csv(out, besov_trajectory(outcome.trajectory, config.besov_specs, config.rho, partition));
    }
    save_trajectory(config.output, outcome.trajectory);
  }
  return outcome;
}

IterationOutcome run_iteration(const RunConfig& config, bool write_outputs) {
  SimState initial = make_initial_state(config);
  if (config.renormalize_charge) initial.p = renormalize_charge(initial.n, initial.p);
  require_neutral(initial.n, initial.p);
  const DyadicPartition partition(initial.grid());

  IterationOutcome outcome;
  outcome.steps = plan_steps(config, initial);
  outcome.dt = config.horizon / outcome.steps;
  outcome.energy = initial_energy(initial.u, initial.n, initial.p, config.indices, partition);
  outcome.lifespan_bound = lifespan_lower_bound(initial.u, initial.n, initial.p, config.lifespan_c,
                                                config.lifespan_r, config.indices, partition);

  PicardOptions options;
  options.horizon = config.horizon;
  options.dt = outcome.dt;
  options.max_iterations = config.max_iterations;
  options.tolerance = config.picard_tolerance;
  options.indices = config.indices;
  outcome.report = picard_solve(initial.u, initial.n, initial.p, config.viscosity, options, partition).report;

  if (write_outputs) {
    fs::create_directories(config.output);
    auto out = open_output(config.output / "iterations.csv");
    csv::write_row(out, {"m", "energy", "difference", "ratio"});
    const IterationReport& r = outcome.report;
    for (std::size_t m = 0; m < r.energy.size(); ++m) {
      const std::string f = m < r.difference.size() ? csv::format_number(r.difference[m]) : "";
      const std::string q = m >= 1 && m - 1 < r.ratios.size() ? csv::format_number(r.ratios[m - 1]) : "";
      csv::write_row(out, {std::to_string(m), csv::format_number(r.energy[m]), f, q});
    }
    auto life = open_output(config.output / "lifespan.txt");
    life << std::setprecision(17);
    life << "energy " << outcome.energy << '\n'
         << "c " << config.lifespan_c << '\n'
         << "r " << config.lifespan_r << '\n'
         << "lifespan_bound " << outcome.lifespan_bound << '\n'
         << "horizon " << config.horizon << '\n'
         << "horizon_within_bound " << (config.horizon <= outcome.lifespan_bound ? "true" : "false") << '\n'
         << "converged " << (r.converged ? "true" : "false") << '\n'
         << "non_contraction " << (r.non_contraction ? "true" : "false") << '\n'
         << "iterations " << r.iterations << '\n';
  }
  return outcome;
}

RateFit fit_rate(std::vector<double> viscosities, std::vector<double> err_u,
                 std::vector<double> err_n, std::vector<double> err_p) {
  const std::size_t m = viscosities.size();
  if (err_u.size() != m || err_n.size() != m || err_p.size() != m) {
    throw InvalidArgument("fit_rate: error lists must match the viscosity list");
  }
  RateFit fit;
  fit.viscosities = std::move(viscosities);
  fit.err_u = std::move(err_u);
  fit.err_n = std::move(err_n);
  fit.err_p = std::move(err_p);
  fit.err_total.resize(m);
  for (std::size_t i = 0; i < m; ++i) fit.err_total[i] = fit.err_u[i] + fit.err_n[i] + fit.err_p[i];

  fit.errors_decreasing = m >= 2;
  for (std::size_t i = 1; i < m; ++i) {
    fit.errors_decreasing = fit.errors_decreasing && fit.err_total[i] < fit.err_total[i - 1];
  }

  auto degenerate = [&](std::string reason) {
    fit.degenerate = true;
    fit.degenerate_reason = std::move(reason);
    fit.slope = fit.intercept = fit.residual = std::numeric_limits<double>::quiet_NaN();
    return fit;
  };
  if (m < 2) return degenerate("fewer than two viscosities");
  for (std::size_t i = 0; i < m; ++i) {
    if (!(fit.viscosities[i] > 0.0)) return degenerate("nonpositive viscosity");
    if (!(fit.err_total[i] > 0.0) || !std::isfinite(fit.err_total[i])) {
      return degenerate("nonpositive or non-finite error");
    }
  }
  std::vector<double> x(m), y(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = std::log(fit.viscosities[i]);
    y[i] = std::log(fit.err_total[i]);
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / m;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) return degenerate("viscosities are all equal");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

std::array<double, 3> run_distance(const std::vector<SimState>& a, const std::vector<SimState>& b,
                                   const MeasureIndices& indices,
                                   const DyadicPartition& partition) {
  if (a.size() != b.size()) {
    throw GridMismatch("run_distance: runs have " + std::to_string(a.size()) + " and " +
                       std::to_string(b.size()) + " samples");
  }
  std::vector<VectorField> du;
  std::vector<Field> dn, dp;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k].t - b[k].t) > 1e-12 * std::max(1.0, std::abs(a[k].t))) {
      throw GridMismatch("run_distance: sample times differ");
    }
    std::vector<Field> comps;
    for (int i = 0; i < a[k].u.dim(); ++i) comps.push_back(real_difference(a[k].u[i], b[k].u[i]));
    du.emplace_back(std::move(comps));
    dn.push_back(real_difference(a[k].n, b[k].n));
    dp.push_back(real_difference(a[k].p, b[k].p));
  }
  const BesovSpec su{indices.velocity.s - 1.0, indices.velocity.p, indices.velocity.r};
  const BesovSpec sc{indices.charge.s - 1.0, indices.charge.p, indices.charge.r};
  return {timespace_besov_norm(std::span<const VectorField>(du), 1.0, kInf, su, partition),
          timespace_besov_norm(std::span<const Field>(dn), 1.0, kInf, sc, partition),
          timespace_besov_norm(std::span<const Field>(dp), 1.0, kInf, sc, partition)};
}

RateFit inviscid_experiment(const RunConfig& config, bool write_outputs) {
  RunConfig ref_config = config;
  ref_config.viscosity = 0.0;
  const SimState initial = make_initial_state(ref_config);
  const DyadicPartition partition(initial.grid());
  const int steps = plan_steps(ref_config, initial);

  std::vector<SimState> reference;
  const fs::path cache = config.output / "reference";
  const std::string key = reference_key(config, steps);
  if (write_outputs && fs::exists(cache / "key.txt") && read_text(cache / "key.txt") == key) {
    reference = load_trajectory(cache);
  } else {
    reference = run_trajectory(initial, ref_config, steps, partition);
    if (write_outputs) {
      fs::remove_all(cache);
      save_trajectory(cache, reference);
      auto out = open_output(cache / "key.txt");
      out << key;
    }
  }

  const std::size_t count = config.viscosities.size();
  std::vector<std::array<double, 3>> errors(count);
  std::vector<std::exception_ptr> failures(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        SimState start = initial;
        start.nu = config.viscosities[i];
        RunConfig c = config;
        c.viscosity = config.viscosities[i];
        errors[i] = run_distance(run_trajectory(start, c, steps, partition), reference,
                                 config.indices, partition);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::max<std::size_t>(1, std::min<std::size_t>(count, config.threads > 0 ? config.threads : count));
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  std::vector<double> eu(count), en(count), ep(count);
  for (std::size_t i = 0; i < count; ++i) {
    eu[i] = errors[i][0];
    en[i] = errors[i][1];
    ep[i] = errors[i][2];
  }
  RateFit fit = fit_rate(config.viscosities, eu, en, ep);

  if (write_outputs) {
    fs::create_directories(config.output);
    {
      auto out = open_output(config.output / "rates.csv");
      write_rates_csv(out, fit);
    }
    auto out = open_output(config.output / "ratefit.txt");
    write_ratefit(out, fit);
  }
  return fit;
}

void write_rates_csv(std::ostream& out, const RateFit& fit) {
  csv::write_row(out, {"nu", "err_u", "err_n", "err_p", "err_total"});
  for (std::size_t i = 0; i < fit.viscosities.size(); ++i) {
    csv::write_row(out, {csv::format_number(fit.viscosities[i]), csv::format_number(fit.err_u[i]),
                         csv::format_number(fit.err_n[i]), csv::format_number(fit.err_p[i]),
                         csv::format_number(fit.err_total[i])});
  }
}

void write_ratefit(std::ostream& out, const RateFit& fit) {
  out << "slope " << csv::format_number(fit.slope) << '\n'
      << "intercept " << csv::format_number(fit.intercept) << '\n'
      << "residual " << csv::format_number(fit.residual) << '\n'
      << "degenerate " << (fit.degenerate ? "true" : "false") << '\n';
  if (fit.degenerate) out << "degenerate_reason " << fit.degenerate_reason << '\n';
  out << "errors_decreasing " << (fit.errors_decreasing ? "true" : "false") << '\n'
      << "viscosities " << fit.viscosities.size() << '\n';
}

void save_trajectory(const fs::path& directory, const std::vector<SimState>& trajectory) {
  const fs::path dir = directory / "snapshots";
  fs::create_directories(dir);
  auto times = open_output(dir / "times.csv");
  csv::write_row(times, {"index", "t", "nu"});
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const SimState& s = trajectory[k];
    std::vector<Field> fields = s.u.components();
    fields.push_back(s.n);
    fields.push_back(s.p);
    write_snapshot(dir / snapshot_name(k), s.grid(), fields);
    csv::write_row(times, {std::to_string(k), csv::format_number(s.t), csv::format_number(s.nu)});
  }
}

std::vector<SimState> load_trajectory(const fs::path& directory) {
  const fs::path dir = directory / "snapshots";
  if (!fs::exists(dir / "times.csv")) {
    throw FormatError(dir.string() + ": no times.csv, not a trajectory directory");
  }
  const auto rows = csv::parse(read_text(dir / "times.csv"));
  if (rows.empty() || rows[0] != std::vector<std::string>{"index", "t", "nu"}) {
    throw FormatError((dir / "times.csv").string() + ": expected header index,t,nu");
  }
  std::vector<SimState> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() == 1 && rows[r][0].empty()) continue;
    if (rows[r].size() != 3) throw FormatError("times.csv: row " + std::to_string(r) + " has wrong arity");
    double t = 0.0, nu = 0.0;
    try {
      t = std::stod(rows[r][1]);
      nu = std::stod(rows[r][2]);
    } catch (const std::exception&) {
      throw FormatError("times.csv: row " + std::to_string(r) + " is not numeric");
    }
    Snapshot snap = read_snapshot(dir / ("t_" + rows[r][0] + ".bin"));
    const int d = snap.grid.dim();
    if (static_cast<int>(snap.fields.size()) != d + 2) {
      throw FormatError("snapshot " + rows[r][0] + ": expected " + std::to_string(d + 2) + " fields");
    }
    if (!out.empty() && !(snap.grid == out.front().grid())) {
      throw GridMismatch("snapshot " + rows[r][0] + ": grid differs from the first snapshot");
    }
    std::vector<Field> comps(snap.fields.begin(), snap.fields.begin() + d);
    out.push_back(SimState{VectorField(std::move(comps)), snap.fields[d], snap.fields[d + 1], t, nu});
  }
  if (out.empty()) throw FormatError(dir.string() + ": trajectory has no samples");
  return out;
}

InvariantReport check_trajectory(const fs::path& directory, const ReportOptions& options) {
  const auto trajectory = load_trajectory(directory);
  const DyadicPartition partition(trajectory.front().grid());
  return invariant_report(trajectory, options, &partition);
}

}  // namespace enpp
