#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "enpp/dynamics.hpp"

namespace enpp {

/// Thresholds for the monitored invariants.
struct ReportOptions {
  std::vector<BesovSpec> besov_specs;
  double div_tolerance = 1e-8;        ///< relative to max(1, ||u||_2)
  double mass_tolerance = 1e-10;      ///< relative drift of the integrals of n and p
  double positivity_fraction = 1e-6;  ///< tol_pos = fraction * max initial amplitude
  double lp_slack = 1e-6;             ///< allowed relative growth of the L^a sums per sample
};

struct InvariantSample {
  double t = 0.0;
  double div_u_l2 = 0.0;
  double min_n = 0.0;
  double min_p = 0.0;
  double mass_n = 0.0;
  double mass_p = 0.0;
  double lp_sum_2 = 0.0;  ///< ||n||_2^2 + ||p||_2^2
  double lp_sum_4 = 0.0;  ///< ||n||_4^4 + ||p||_4^4
  double grad_phi_l2 = 0.0;
  double grad_phi_linf = 0.0;
  double charge_l2 = 0.0;  ///< ||n - p||_2
  double kinetic_energy = 0.0;
  /// Besov norms of u, n, p for each configured spec, in that order.
  std::vector<double> besov;
};

struct Violation {
  std::string invariant;
  double first_time = 0.0;
  std::string detail;
};

struct InvariantReport {
  std::vector<BesovSpec> besov_specs;
  std::vector<InvariantSample> samples;
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  const Violation* find(const std::string& invariant) const;
};

/// Evaluate every monitored quantity along a trajectory and flag the first
/// breach of each invariant. Never throws on a breach.
InvariantReport invariant_report(const std::vector<SimState>& trajectory,
                                 const ReportOptions& options = {},
                                 const DyadicPartition* partition = nullptr);

/// Running continuation functional int_0^t ||grad u||_{L^inf} dt' (left
/// rectangle rule) and the running sup of ||u||_{L^inf}.
struct BlowupMonitor {
  std::vector<double> times;
  std::vector<double> grad_u_linf;
  std::vector<double> integral;  ///< value of the integral up to times[k]
  double sup_u_linf = 0.0;
  double threshold = kInf;
  bool exceeded = false;

  double total() const { return integral.empty() ? 0.0 : integral.back(); }
  /// Branch used when p_1 = infinity: sup ||u||_inf + integral.
  double linf_branch() const { return sup_u_linf + total(); }
};

BlowupMonitor blowup_monitor(const std::vector<SimState>& trajectory, double threshold = kInf);

/// Pointwise max of the Frobenius norm of Du.
double grad_linf(const VectorField& u);

struct BesovSeries {
  BesovSpec spec;
  std::vector<double> u, n, p;  ///< instantaneous norms per sample
  double aggregate_u = 0.0;     ///< time-space norm over the whole trajectory
  double aggregate_n = 0.0;
  double aggregate_p = 0.0;
};

struct BesovTable {
  std::vector<double> times;
  double rho = kInf;
  std::vector<BesovSeries> series;
};

/// Samples must be uniformly spaced in time.
BesovTable besov_trajectory(const std::vector<SimState>& trajectory,
                            const std::vector<BesovSpec>& specs, double rho,
                            const DyadicPartition& partition);

/// One header row plus one row per sample, RFC 4180.
void write_report_csv(std::ostream& out, const InvariantReport& report,
                      const BlowupMonitor* monitor = nullptr);
void write_violations_csv(std::ostream& out, const InvariantReport& report);
void write_besov_csv(std::ostream& out, const BesovTable& table);

}  // namespace enpp
