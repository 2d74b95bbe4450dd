#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "enpp/config.hpp"

namespace enpp {

struct SimulationOutcome {
  std::vector<SimState> trajectory;  ///< every cadence-th state, starting at t = 0
  InvariantReport report;
  BlowupMonitor monitor;
  int steps = 0;
  double dt = 0.0;
};

/// Integrate the configured preset to T. When `write_outputs` is set the
/// output directory receives report.csv, violations.csv, besov.csv (if
/// specs are configured) and snapshots/t_<index>.bin with snapshots/times.csv.
SimulationOutcome run_simulation(const RunConfig& config, bool write_outputs = true);

struct IterationOutcome {
  IterationReport report;
  double energy = 0.0;          ///< E_0 in the configured indices
  double lifespan_bound = 0.0;  ///< c / (1 + E_0^r)
  int steps = 0;
  double dt = 0.0;
};

/// Picard iteration of the paraproduct formulation on [0, T]; writes
/// iterations.csv and lifespan.txt.
IterationOutcome run_iteration(const RunConfig& config, bool write_outputs = true);

struct RateFit {
  std::vector<double> viscosities;
  std::vector<double> err_u, err_n, err_p, err_total;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< RMS misfit in log space
  bool degenerate = false;
  std::string degenerate_reason;
  bool errors_decreasing = false;  ///< err_total strictly decreases along the list
};

/// Least-squares fit of log(err_total) against log(nu). Lists that cannot
/// be fitted (fewer than two distinct positive nu, or a nonpositive error)
/// are flagged degenerate instead of throwing.
RateFit fit_rate(std::vector<double> viscosities, std::vector<double> err_u,
                 std::vector<double> err_n, std::vector<double> err_p);

/// Distance between two runs sampled at the same times:
/// ||du||_{L~inf B^{s1-1}_{p1,r1}}, ||dn||, ||dp|| in L~inf B^{s2-1}_{p2,r2}.
std::array<double, 3> run_distance(const std::vector<SimState>& a, const std::vector<SimState>& b,
                                   const MeasureIndices& indices,
                                   const DyadicPartition& partition);

/// Reference run with nu = 0 first, then the viscosity sweep in parallel;
/// the reference is cached under <output>/reference. Writes rates.csv and
/// ratefit.txt.
RateFit inviscid_experiment(const RunConfig& config, bool write_outputs = true);

void write_rates_csv(std::ostream& out, const RateFit& fit);
void write_ratefit(std::ostream& out, const RateFit& fit);

/// Load snapshots/t_<index>.bin and snapshots/times.csv from a run directory.
std::vector<SimState> load_trajectory(const std::filesystem::path& directory);
void save_trajectory(const std::filesystem::path& directory, const std::vector<SimState>& trajectory);

/// Re-evaluate the invariant report of a stored trajectory.
InvariantReport check_trajectory(const std::filesystem::path& directory,
                                 const ReportOptions& options = {});

}  // namespace enpp
