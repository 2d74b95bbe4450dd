#include "enpp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>
#include <ostream>
#include <sstream>

#include "enpp/csv.hpp"
#include "enpp/error.hpp"

namespace enpp {

const Violation* InvariantReport::find(const std::string& invariant) const {
  for (const auto& v : violations) {
    if (v.invariant == invariant) return &v;
  }
  return nullptr;
}

namespace {

double power_sum(const Field& f, double a) {
  const double norm = lp_norm(f, a);
  return std::pow(norm, a);
}

class ViolationLog {
 public:
  explicit ViolationLog(std::vector<Violation>& out) : out_(out) {}

  void flag(const std::string& name, double t, const std::string& detail) {
    for (const auto& v : out_) {
      if (v.invariant == name) return;
    }
    out_.push_back({name, t, detail});
  }

 private:
  std::vector<Violation>& out_;
};

std::string describe(const char* what, double value, double limit) {
  std::ostringstream os;
  os.precision(6);
  os << what << " = " << value << " (limit " << limit << ")";
  return os.str();
}

}  // namespace

InvariantReport invariant_report(const std::vector<SimState>& trajectory,
                                 const ReportOptions& options, const DyadicPartition* partition) {
  InvariantReport report;
  report.besov_specs = options.besov_specs;
  if (trajectory.empty()) return report;
  if (!options.besov_specs.empty() && partition == nullptr) {
    throw InvalidArgument("invariant_report: Besov measurements need a partition");
  }
  ViolationLog log(report.violations);

  for (const auto& s : trajectory) {
    InvariantSample x;
    x.t = s.t;
    x.div_u_l2 = lp_norm(divergence(s.u), 2.0);
    x.min_n = s.n.min();
    x.min_p = s.p.min();
    const double volume = std::pow(s.grid().length(), s.grid().dim());
    x.mass_n = s.n.mean() * volume;
    x.mass_p = s.p.mean() * volume;
    x.lp_sum_2 = power_sum(s.n, 2.0) + power_sum(s.p, 2.0);
    x.lp_sum_4 = power_sum(s.n, 4.0) + power_sum(s.p, 4.0);
    x.charge_l2 = lp_norm(s.n - s.p, 2.0);
    try {
      const Potential pot = solve_potential(s.n, s.p, ChargePolicy::strict);
      x.grad_phi_l2 = lp_norm(pot.grad_phi, 2.0);
      x.grad_phi_linf = lp_norm(pot.grad_phi, kInf);
    } catch (const NonNeutral& e) {
      x.grad_phi_l2 = std::nan("");
      x.grad_phi_linf = std::nan("");
      log.flag("electroneutrality", s.t, e.what());
    }
    const double u2 = lp_norm(s.u, 2.0);
    x.kinetic_energy = 0.5 * u2 * u2;
    for (const auto& spec : options.besov_specs) {
      x.besov.push_back(besov_norm(s.u, spec, *partition));
      x.besov.push_back(besov_norm(s.n, spec, *partition));
      x.besov.push_back(besov_norm(s.p, spec, *partition));
    }
    report.samples.push_back(std::move(x));
  }

  const auto& first = report.samples.front();
  const SimState& s0 = trajectory.front();
  const bool nonnegative_start = first.min_n >= 0.0 && first.min_p >= 0.0;
  const double amplitude = std::max({s0.n.max(), s0.p.max(), 0.0});
  const double tol_pos = options.positivity_fraction * amplitude;
  const bool charge_free = std::max({std::abs(s0.n.max()), std::abs(s0.n.min()),
                                     std::abs(s0.p.max()), std::abs(s0.p.min())}) == 0.0;

  const double l1_n0 = lp_norm(s0.n, 1.0);
  const double l1_p0 = lp_norm(s0.p, 1.0);

  for (std::size_t k = 0; k < report.samples.size(); ++k) {
    const auto& x = report.samples[k];
    const SimState& s = trajectory[k];
    if (k > 0 && !(x.t > report.samples[k - 1].t)) {
      log.flag("time_order", x.t, "sample times are not strictly increasing");
    }
    const double div_limit = options.div_tolerance * std::max(1.0, lp_norm(s.u, 2.0));
    if (x.div_u_l2 > div_limit) log.flag("divergence", x.t, describe("||div u||_2", x.div_u_l2, div_limit));

    for (auto [name, mass, mass0, scale] :
         {std::tuple{"mass_n", x.mass_n, first.mass_n, l1_n0},
          std::tuple{"mass_p", x.mass_p, first.mass_p, l1_p0}}) {
      const double limit = options.mass_tolerance * std::max(scale, 1e-300);
      if (std::abs(mass - mass0) > limit) {
        log.flag(name, x.t, describe("mass drift", std::abs(mass - mass0), limit));
      }
    }
    if (nonnegative_start) {
      if (x.min_n < -tol_pos) log.flag("positivity_n", x.t, describe("min n", x.min_n, -tol_pos));
      if (x.min_p < -tol_pos) log.flag("positivity_p", x.t, describe("min p", x.min_p, -tol_pos));
    }
    if (k > 0) {
      const auto& prev = report.samples[k - 1];
      if (x.lp_sum_2 > prev.lp_sum_2 * (1.0 + options.lp_slack)) {
        log.flag("lp_dissipation_2", x.t, describe("||n||_2^2 + ||p||_2^2", x.lp_sum_2, prev.lp_sum_2));
      }
      if (x.lp_sum_4 > prev.lp_sum_4 * (1.0 + options.lp_slack)) {
        log.flag("lp_dissipation_4", x.t, describe("||n||_4^4 + ||p||_4^4", x.lp_sum_4, prev.lp_sum_4));
      }
      if (s.nu > 0.0 && charge_free &&
          x.kinetic_energy > prev.kinetic_energy * (1.0 + options.lp_slack)) {
        log.flag("kinetic_energy", x.t, describe("kinetic energy", x.kinetic_energy, prev.kinetic_energy));
      }
    }
    // The smallest nonzero lattice wavenumber is 2 pi / L.
    const double grad_phi_limit = x.charge_l2 * s.grid().length() / (2.0 * std::numbers::pi);
    if (x.grad_phi_l2 > grad_phi_limit * (1.0 + 1e-12) + 1e-300) {
      log.flag("grad_phi_bound", x.t, describe("||grad phi||_2", x.grad_phi_l2, grad_phi_limit));
    }
  }
  return report;
}

double grad_linf(const VectorField& u) {
  const Grid& g = u.grid();
  std::vector<double> acc(g.size(), 0.0);
  for (int i = 0; i < u.dim(); ++i) {
    for (int j = 0; j < u.dim(); ++j) {
      const Field d = derivative(u[j], i);
      const auto r = d.real();
      for (std::size_t s = 0; s < acc.size(); ++s) acc[s] += r[s] * r[s];
    }
  }
  return std::sqrt(*std::max_element(acc.begin(), acc.end()));
}

BlowupMonitor blowup_monitor(const std::vector<SimState>& trajectory, double threshold) {
  BlowupMonitor m;
  m.threshold = threshold;
  double running = 0.0;
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const SimState& s = trajectory[k];
    if (k > 0) running += (s.t - trajectory[k - 1].t) * m.grad_u_linf.back();
    m.times.push_back(s.t);
    m.grad_u_linf.push_back(grad_linf(s.u));
    m.integral.push_back(running);
    m.sup_u_linf = std::max(m.sup_u_linf, lp_norm(s.u, kInf));
    if (running > threshold) m.exceeded = true;
  }
  return m;
}

BesovTable besov_trajectory(const std::vector<SimState>& trajectory,
                            const std::vector<BesovSpec>& specs, double rho,
                            const DyadicPartition& partition) {
  if (specs.empty()) throw InvalidArgument("besov_trajectory: no Besov specs given");
  if (trajectory.empty()) throw InvalidArgument("besov_trajectory: empty trajectory");
  BesovTable table;
  table.rho = rho;
  for (const auto& s : trajectory) table.times.push_back(s.t);
  const double dt = trajectory.size() > 1 ? trajectory[1].t - trajectory[0].t : 1.0;

  std::vector<VectorField> us;
  std::vector<Field> ns, ps;
  for (const auto& s : trajectory) {
    us.push_back(s.u);
    ns.push_back(s.n);
    ps.push_back(s.p);
  }
  for (const auto& spec : specs) {
    BesovSeries series;
    series.spec = spec;
    for (std::size_t k = 0; k < trajectory.size(); ++k) {
      series.u.push_back(besov_norm(us[k], spec, partition));
      series.n.push_back(besov_norm(ns[k], spec, partition));
      series.p.push_back(besov_norm(ps[k], spec, partition));
    }
    series.aggregate_u = timespace_besov_norm(std::span<const VectorField>(us), dt, rho, spec, partition);
    series.aggregate_n = timespace_besov_norm(std::span<const Field>(ns), dt, rho, spec, partition);
    series.aggregate_p = timespace_besov_norm(std::span<const Field>(ps), dt, rho, spec, partition);
    table.series.push_back(std::move(series));
  }
  return table;
}

void write_report_csv(std::ostream& out, const InvariantReport& report,
                      const BlowupMonitor* monitor) {
  std::vector<std::string> header{"t",          "div_u_l2",    "min_n",        "min_p",
                                  "mass_n",     "mass_p",      "lp_sum_2",     "lp_sum_4",
                                  "grad_phi_l2", "grad_phi_linf", "charge_l2", "kinetic_energy"};
  if (monitor) {
    header.push_back("grad_u_linf");
    header.push_back("blowup_integral");
  }
  for (const auto& spec : report.besov_specs) {
    for (const char* f : {"u", "n", "p"}) header.push_back(std::string("besov_") + f + " " + spec.label());
  }
  csv::write_row(out, header);
  for (std::size_t k = 0; k < report.samples.size(); ++k) {
    const auto& x = report.samples[k];
    std::vector<double> values{x.t,        x.div_u_l2,    x.min_n,         x.min_p,
                               x.mass_n,   x.mass_p,      x.lp_sum_2,      x.lp_sum_4,
                               x.grad_phi_l2, x.grad_phi_linf, x.charge_l2, x.kinetic_energy};
    if (monitor) {
      values.push_back(monitor->grad_u_linf.at(k));
      values.push_back(monitor->integral.at(k));
    }
    values.insert(values.end(), x.besov.begin(), x.besov.end());
    std::vector<std::string> row;
    for (double v : values) row.push_back(csv::format_number(v));
    csv::write_row(out, row);
  }
}

void write_violations_csv(std::ostream& out, const InvariantReport& report) {
  csv::write_row(out, {"invariant", "first_time", "detail"});
  for (const auto& v : report.violations) {
    csv::write_row(out, {v.invariant, csv::format_number(v.first_time), v.detail});
  }
}

void write_besov_csv(std::ostream& out, const BesovTable& table) {
  std::vector<std::string> header{"t"};
  for (const auto& s : table.series) {
    for (const char* f : {"u", "n", "p"}) header.push_back(std::string("besov_") + f + " " + s.spec.label());
  }
  csv::write_row(out, header);
  for (std::size_t k = 0; k < table.times.size(); ++k) {
    std::vector<std::string> row{csv::format_number(table.times[k])};
    for (const auto& s : table.series) {
      row.push_back(csv::format_number(s.u[k]));
      row.push_back(csv::format_number(s.n[k]));
      row.push_back(csv::format_number(s.p[k]));
    }
    csv::write_row(out, row);
  }
  std::vector<std::string> agg{"aggregate"};
  for (const auto& s : table.series) {
    agg.push_back(csv::format_number(s.aggregate_u));
    agg.push_back(csv::format_number(s.aggregate_n));
    agg.push_back(csv::format_number(s.aggregate_p));
  }
  csv::write_row(out, agg);
}

}  // namespace enpp
