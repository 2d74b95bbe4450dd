#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "enpp/field.hpp"
#include "enpp/littlewood_paley.hpp"
#include "enpp/operators.hpp"

namespace enpp {

/// Velocity, negative and positive charge densities at time t.
struct SimState {
  VectorField u;
  Field n;
  Field p;
  double t = 0.0;
  double nu = 0.0;

  const Grid& grid() const { return n.grid(); }
};

/// Time derivatives of (u, n, p).
struct Tendencies {
  VectorField du;
  Field dn;
  Field dp;
};

/// Full right-hand side of the original system with pressure removed by
/// Leray projection:
///   du/dt = P(-u.grad u + (n - p) grad phi) + nu Laplacian u
///   dn/dt = -div(u n) + Laplacian n - div(n grad phi)
///   dp/dt = -div(u p) + Laplacian p + div(p grad phi)
Tendencies rhs_enpp(const SimState& state, ChargePolicy policy = ChargePolicy::strict);

/// Terms of the paraproduct form, kept for inspection.
struct ModifiedPieces {
  VectorField advection;       ///< u.grad u
  VectorField pi;              ///< Pi(u, u)
  VectorField lorentz;         ///< P((n - p) psi), psi = grad (-Laplacian)^{-1}(p - n)
  Field transport_n;           ///< T_u grad n + T_{grad n} u + div R(u, n)
  Field transport_p;
  Field drift_n;               ///< div(n psi)
  Field drift_p;               ///< div(p psi)
};

struct ModifiedRhs {
  Tendencies tendencies;
  ModifiedPieces pieces;
};

/// Right-hand side of the paraproduct formulation:
///   du/dt = -u.grad u - Pi(u, u) + P((n - p) psi) + nu Laplacian u
///   dn/dt = Laplacian n - (T_u grad n + T_{grad n} u + div R(u n)) - div(n psi)
///   dp/dt = Laplacian p - (T_u grad p + T_{grad p} u + div R(u p)) + div(p psi)
ModifiedRhs rhs_modified(const SimState& state, const DyadicPartition& partition,
                         ChargePolicy policy = ChargePolicy::strict);

enum class Formulation { enpp, modified };

struct StepOptions {
  Formulation formulation = Formulation::enpp;
  double cfl = 0.5;
  ChargePolicy charge = ChargePolicy::strict;
  /// Skip the CFL check (used by convergence studies with prescribed dt).
  bool check_cfl = true;
};

/// Largest dt allowed by dt <= cfl * (L/N) / max(||u||_inf, 1).
double max_stable_dt(const SimState& state, double cfl);

/// One integrating-factor Heun step: diffusion is applied exactly through
/// e^{dt Laplacian} (e^{nu dt Laplacian} on u), the nonlinear terms by a
/// two-stage explicit scheme, and the velocity is re-projected afterwards.
/// The modified formulation needs a partition.
SimState step(const SimState& state, double dt, const StepOptions& options = {},
              const DyadicPartition* partition = nullptr);

/// e^{t Laplacian} f.
Field heat_propagate(const Field& f, double t);
VectorField heat_propagate(const VectorField& f, double t);

/// Advance from state.t to state.t + horizon in `steps` equal steps and
/// return the initial state followed by every `cadence`-th state.
std::vector<SimState> integrate(const SimState& initial, double horizon, int steps, int cadence,
                                const StepOptions& options = {},
                                const DyadicPartition* partition = nullptr,
                                const std::function<void(const SimState&, int)>& observer = {});

/// Besov indices used to measure velocity and charges.
struct MeasureIndices {
  BesovSpec velocity{2.6, 2.0, 2.0};
  BesovSpec charge{1.6, 2.0, 2.0};

  /// s_1' = s_1 - 1.
  BesovSpec velocity_loss() const { return {velocity.s - 1.0, charge.p, charge.r}; }
};

/// c / (1 + (||u0||_{B^{s1}} + ||n0||_{B^{s2}} + ||p0||_{B^{s2}})^r).
double lifespan_lower_bound(const VectorField& u0, const Field& n0, const Field& p0, double c,
                            double r, const MeasureIndices& indices,
                            const DyadicPartition& partition);

/// ||u0||_{B^{s1}} + ||n0||_{B^{s2}} + ||p0||_{B^{s2}}.
double initial_energy(const VectorField& u0, const Field& n0, const Field& p0,
                      const MeasureIndices& indices, const DyadicPartition& partition);

struct PicardOptions {
  double horizon = 0.1;
  double dt = 0.01;
  int max_iterations = 20;
  double tolerance = 1e-8;
  MeasureIndices indices;
};

struct IterationReport {
  std::vector<double> energy;      ///< E^m for m = 0, 1, ...
  std::vector<double> difference;  ///< F^m = distance between iterates m+1 and m
  std::vector<double> ratios;      ///< F^{m+1} / F^m
  bool converged = false;
  bool non_contraction = false;
  int iterations = 0;  ///< number of linear solves performed
};

struct PicardResult {
  std::vector<SimState> trajectory;  ///< final iterate at every step time
  IterationReport report;
};

/// Successive approximation of the paraproduct formulation: iterate m+1
/// solves the linear transport / heat system whose coefficients and sources
/// are frozen from iterate m, starting from (u0, e^{t Lap} n0, e^{t Lap} p0).
PicardResult picard_solve(const VectorField& u0, const Field& n0, const Field& p0, double nu,
                          const PicardOptions& options, const DyadicPartition& partition);

/// Energy functional E of a trajectory sampled every dt.
double iterate_energy(const std::vector<SimState>& trajectory, double dt,
                      const MeasureIndices& indices, const DyadicPartition& partition);
/// Difference functional F between two trajectories sampled every dt.
double iterate_difference(const std::vector<SimState>& next, const std::vector<SimState>& prev,
                          double dt, const MeasureIndices& indices,
                          const DyadicPartition& partition);

struct LifespanCalibration {
  double constant = 0.0;  ///< c such that the bound equals the accepted horizon
  double horizon = 0.0;   ///< largest tried horizon with every ratio <= 1/2
  double energy = 0.0;    ///< E^0
  std::vector<double> ratios;
};

/// Halve the horizon from `start` until Picard iteration contracts with
/// every ratio at most 1/2, then solve the lifespan formula for c.
LifespanCalibration calibrate_lifespan(const VectorField& u0, const Field& n0, const Field& p0,
                                       double r, double start, const PicardOptions& options,
                                       const DyadicPartition& partition, int max_halvings = 8);

}  // namespace enpp
