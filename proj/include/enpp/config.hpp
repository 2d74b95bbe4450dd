#pragma once

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "enpp/diagnostics.hpp"
#include "enpp/dynamics.hpp"

namespace enpp {

enum class Mode { simulate, iterate, invlimit };

/// Named initial data. Every preset is smooth, band-limited to the 2/3
/// rule, solenoidal, and (unless charge_imbalance != 0) electroneutral.
struct InitialSpec {
  std::string preset = "charged-taylor-green";
  double amplitude = 1.0;         ///< velocity amplitude
  double charge_amplitude = 0.1;  ///< charge perturbation amplitude a
  double background = 1.0;       ///< background charge density
  double width = 0.5;             ///< blob width (charged-blob)
  double charge_imbalance = 0.0;  ///< relative excess of positive charge (charged-blob)
  std::uint64_t seed = 1;         ///< random-solenoidal
};

/// A validated run description.
struct RunConfig {
  int dim = 2;
  int points = 64;
  double length = 2.0 * std::numbers::pi;

  InitialSpec initial;

  Mode mode = Mode::simulate;
  double viscosity = 0.0;
  double horizon = 0.5;
  std::optional<double> dt;  ///< empty: choose from the CFL bound
  double cfl = 0.5;
  int cadence = 1;
  Formulation formulation = Formulation::enpp;
  bool renormalize_charge = false;
  bool strict = false;
  std::filesystem::path output = "out";

  std::vector<BesovSpec> besov_specs;
  double rho = kInf;
  MeasureIndices indices;
  ReportOptions tolerances;

  int max_iterations = 20;
  double picard_tolerance = 1e-8;

  double lifespan_c = 0.1;
  double lifespan_r = 4.0;

  std::vector<double> viscosities{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  int threads = 0;  ///< 0: one thread per viscosity

  Grid grid() const { return make_grid(dim, points, length); }
};

/// Parse the line-oriented `key = value` format with `[section]` headers.
/// Comments start with '#' or ';'. Errors carry "<source>:<line>:" prefixes.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(std::string_view text, const std::string& source = "<config>");

/// All known keys as "section.key", for documentation and suggestions.
std::vector<std::string> known_config_keys();

/// Closest known key within edit distance 3, if any.
std::optional<std::string> suggest_key(std::string_view unknown);

/// Step count for a run: honours an explicit dt (which must divide the
/// horizon into a whole number of cadence blocks) or derives one from the
/// CFL bound of `initial`, rounded up to a multiple of the cadence.
int plan_steps(const RunConfig& config, const SimState& initial);

/// Initial state for the configured preset at time 0.
SimState make_initial_state(const RunConfig& config);

}  // namespace enpp
