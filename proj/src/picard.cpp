#include <algorithm>
#include <cmath>

#include "dynamics_internal.hpp"
#include "enpp/dynamics.hpp"
#include "enpp/error.hpp"

namespace enpp {
namespace {

// Sources of the linear system that depend only on the frozen iterate.
struct FrozenSources {
  VectorField u;  // coefficient advecting the new velocity
  VectorField du;
  Field dn;
  Field dp;
};

Field frozen_transport(const VectorField& u, const Field& c, const DyadicPartition& partition) {
  Field out = Field::zeros(c.grid());
  for (int i = 0; i < u.dim(); ++i) {
    const BonyPieces b = bony_decompose(u[i], derivative(c, i), partition);
    out += b.paraproduct_uv;
    out += b.paraproduct_vu;
    out += derivative(remainder(u[i], c, partition), i);
  }
  return out;
}

FrozenSources frozen_sources(const SimState& s, const DyadicPartition& partition) {
  const Potential pot = solve_potential(s.n, s.p, ChargePolicy::strict);
  const VectorField lorentz = leray_project(detail::scale_field(s.n - s.p, pot.grad_phi));
  return FrozenSources{
      s.u, lorentz - pi_bilinear(s.u, s.u, partition),
      -frozen_transport(s.u, s.n, partition) -
          divergence(detail::scale_field(s.n, pot.grad_phi)),
      -frozen_transport(s.u, s.p, partition) + divergence(detail::scale_field(s.p, pot.grad_phi))};
}

struct Iterate {
  std::vector<SimState> states;      // at t_k, k = 0..steps
  std::vector<SimState> predictors;  // stage-two coefficient state of step k
};

Iterate initial_iterate(const VectorField& u0, const Field& n0, const Field& p0, double nu,
                        int steps, double dt) {
  Iterate it;
  for (int k = 0; k <= steps; ++k) {
    const double t = k * dt;
    it.states.push_back(SimState{u0, heat_propagate(n0, t), heat_propagate(p0, t), t, nu});
  }
  for (int k = 0; k < steps; ++k) it.predictors.push_back(it.states[k + 1]);
  return it;
}

Iterate next_iterate(const Iterate& prev, double dt, const DyadicPartition& partition) {
  const int steps = static_cast<int>(prev.predictors.size());
  Iterate it;
  it.states.push_back(prev.states.front());
  for (int k = 0; k < steps; ++k) {
    const FrozenSources stage0 = frozen_sources(prev.states[k], partition);
    const FrozenSources stage1 = frozen_sources(prev.predictors[k], partition);
    auto linear = [&](const SimState& q, int stage) {
      const FrozenSources& src = stage == 0 ? stage0 : stage1;
      return Tendencies{src.du - advect(src.u, q.u), src.dn, src.dp};
    };
    detail::HeunResult r = detail::heun_step(it.states.back(), dt, linear);
    r.next.t = (k + 1) * dt;
    it.states.push_back(std::move(r.next));
    it.predictors.push_back(std::move(r.predictor));
  }
  return it;
}

template <typename Get>
auto collect(const std::vector<SimState>& states, Get get) {
  using T = std::decay_t<decltype(get(states.front()))>;
  std::vector<T> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(get(s));
  return out;
}

}  // namespace

double initial_energy(const VectorField& u0, const Field& n0, const Field& p0,
                      const MeasureIndices& indices, const DyadicPartition& partition) {
  return besov_norm(u0, indices.velocity, partition) + besov_norm(n0, indices.charge, partition) +
         besov_norm(p0, indices.charge, partition);
}

double lifespan_lower_bound(const VectorField& u0, const Field& n0, const Field& p0, double c,
                            double r, const MeasureIndices& indices,
                            const DyadicPartition& partition) {
  if (!(c > 0.0)) throw InvalidArgument("lifespan constant c must be positive");
  if (!(r >= 4.0)) throw InvalidArgument("lifespan exponent r must be at least 4");
  const double e0 = initial_energy(u0, n0, p0, indices, partition);
  return c / (1.0 + std::pow(e0, r));
}

double iterate_energy(const std::vector<SimState>& trajectory, double dt,
                      const MeasureIndices& indices, const DyadicPartition& partition) {
  const auto us = collect(trajectory, [](const SimState& s) { return s.u; });
  const auto ns = collect(trajectory, [](const SimState& s) { return s.n; });
  const auto ps = collect(trajectory, [](const SimState& s) { return s.p; });
  const BesovSpec smooth{indices.charge.s + 2.0, indices.charge.p, indices.charge.r};
  double e = timespace_besov_norm(std::span<const VectorField>(us), dt, kInf, indices.velocity,
                                  partition);
  for (const auto* c : {&ns, &ps}) {
    e += timespace_besov_norm(std::span<const Field>(*c), dt, kInf, indices.charge, partition);
    e += timespace_besov_norm(std::span<const Field>(*c), dt, 1.0, smooth, partition);
  }
  return e;
}

double iterate_difference(const std::vector<SimState>& next, const std::vector<SimState>& prev,
                          double dt, const MeasureIndices& indices,
                          const DyadicPartition& partition) {
  if (next.size() != prev.size()) throw InvalidArgument("iterate_difference: length mismatch");
  std::vector<VectorField> du;
  std::vector<Field> dn, dp;
  for (std::size_t k = 0; k < next.size(); ++k) {
    du.push_back(next[k].u - prev[k].u);
    dn.push_back(next[k].n - prev[k].n);
    dp.push_back(next[k].p - prev[k].p);
  }
  const BesovSpec rough{indices.charge.s - 1.0, indices.charge.p, indices.charge.r};
  const BesovSpec smooth{indices.charge.s + 1.0, indices.charge.p, indices.charge.r};
  double f = timespace_besov_norm(std::span<const VectorField>(du), dt, kInf,
                                  indices.velocity_loss(), partition);
  for (const auto* c : {&dn, &dp}) {
    f += timespace_besov_norm(std::span<const Field>(*c), dt, kInf, rough, partition);
    f += timespace_besov_norm(std::span<const Field>(*c), dt, 1.0, smooth, partition);
  }
  return f;
}

PicardResult picard_solve(const VectorField& u0, const Field& n0, const Field& p0, double nu,
                          const PicardOptions& options, const DyadicPartition& partition) {
  if (!(options.horizon > 0.0)) throw InvalidArgument("picard_solve: horizon must be positive");
  if (!(options.dt > 0.0)) throw InvalidArgument("picard_solve: dt must be positive");
  if (options.max_iterations < 1) throw InvalidArgument("picard_solve: need at least one iteration");
  require_neutral(n0, p0);

  const int steps = std::max(1, static_cast<int>(std::ceil(options.horizon / options.dt - 1e-9)));
  const double dt = options.horizon / steps;

  Iterate current = initial_iterate(u0, n0, p0, nu, steps, dt);
  IterationReport report;
  report.energy.push_back(iterate_energy(current.states, dt, options.indices, partition));
  const double scale = std::max(report.energy.front(), 1e-300);

  int growing = 0;
  for (int m = 0; m < options.max_iterations; ++m) {
    Iterate next = next_iterate(current, dt, partition);
    ++report.iterations;
    const double f = iterate_difference(next.states, current.states, dt, options.indices, partition);
    report.energy.push_back(iterate_energy(next.states, dt, options.indices, partition));
    if (!report.difference.empty()) {
      const double prev = report.difference.back();
      // Ratios below round-off level carry no information.
      if (prev > 1e-13 * scale) {
        const double ratio = f / prev;
        report.ratios.push_back(ratio);
        growing = ratio >= 1.0 ? growing + 1 : 0;
      }
    }
    report.difference.push_back(f);
    current = std::move(next);
    if (f < options.tolerance) {
      report.converged = true;
      break;
    }
    if (growing >= 3 || !std::isfinite(f)) {
      report.non_contraction = true;
      break;
    }
  }
  return PicardResult{std::move(current.states), std::move(report)};
}

LifespanCalibration calibrate_lifespan(const VectorField& u0, const Field& n0, const Field& p0,
                                       double r, double start, const PicardOptions& options,
                                       const DyadicPartition& partition, int max_halvings) {
  LifespanCalibration cal;
  cal.energy = initial_energy(u0, n0, p0, options.indices, partition);
  double horizon = start;
  for (int h = 0; h <= max_halvings; ++h, horizon *= 0.5) {
    PicardOptions opts = options;
    opts.horizon = horizon;
    opts.dt = std::min(options.dt, horizon);
    const PicardResult res = picard_solve(u0, n0, p0, 0.0, opts, partition);
    const auto& ratios = res.report.ratios;
    const bool halves = res.report.converged &&
                        std::all_of(ratios.begin(), ratios.end(), [](double q) { return q <= 0.5; });
    if (halves) {
      cal.horizon = horizon;
      cal.ratios = ratios;
      cal.constant = horizon * (1.0 + std::pow(cal.energy, r));
      return cal;
    }
  }
  throw Error("calibrate_lifespan: no horizon with contraction ratio <= 1/2 found");
}

}  // namespace enpp
