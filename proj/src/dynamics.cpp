#include "enpp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dynamics_internal.hpp"
#include "enpp/error.hpp"

namespace enpp {

namespace detail {

VectorField scale_field(const Field& f, const VectorField& v) {
  std::vector<Field> out;
  for (const auto& c : v.components()) out.push_back(dealiased_product(f, c));
  return VectorField(std::move(out));
}

HeunResult heun_step(const SimState& state, double dt, const NonlinearTerm& nonlinear) {
  const double visc = state.nu * dt;
  const Tendencies k0 = nonlinear(state, 0);

  SimState pred{heat_propagate(state.u + dt * k0.du, visc),
                heat_propagate(state.n + dt * k0.dn, dt),
                heat_propagate(state.p + dt * k0.dp, dt), state.t + dt, state.nu};
  const Tendencies k1 = nonlinear(pred, 1);

  const double h = 0.5 * dt;
  SimState next{heat_propagate(state.u + h * k0.du, visc) + h * k1.du,
                heat_propagate(state.n + h * k0.dn, dt) + h * k1.dn,
                heat_propagate(state.p + h * k0.dp, dt) + h * k1.dp, state.t + dt, state.nu};
  return {std::move(next), std::move(pred)};
}

}  // namespace detail

namespace {

Tendencies nonlinear_enpp(const SimState& s, ChargePolicy policy) {
  const Field p = policy == ChargePolicy::renormalize ? renormalize_charge(s.n, s.p) : s.p;
  const Potential pot = solve_potential(s.n, p, ChargePolicy::strict);
  const Field charge = s.n - p;

  const VectorField force = detail::scale_field(charge, pot.grad_phi);
  const VectorField du = leray_project(force - advect(s.u, s.u));
  const Field dn = -divergence(detail::scale_field(s.n, s.u)) -
                   divergence(detail::scale_field(s.n, pot.grad_phi));
  const Field dp = -divergence(detail::scale_field(p, s.u)) +
                   divergence(detail::scale_field(p, pot.grad_phi));
  return {du, dn, dp};
}

Field transport(const VectorField& u, const Field& c, const DyadicPartition& partition) {
  Field out = Field::zeros(c.grid());
  for (int i = 0; i < u.dim(); ++i) {
    const BonyPieces b = bony_decompose(u[i], derivative(c, i), partition);
    out += b.paraproduct_uv;
    out += b.paraproduct_vu;
    out += derivative(remainder(u[i], c, partition), i);
  }
  return out;
}

ModifiedPieces modified_pieces(const SimState& s, const DyadicPartition& partition,
                               ChargePolicy policy) {
  const Field p = policy == ChargePolicy::renormalize ? renormalize_charge(s.n, s.p) : s.p;
  const Potential pot = solve_potential(s.n, p, ChargePolicy::strict);
  return ModifiedPieces{advect(s.u, s.u),
                        pi_bilinear(s.u, s.u, partition),
                        leray_project(detail::scale_field(s.n - p, pot.grad_phi)),
                        transport(s.u, s.n, partition),
                        transport(s.u, p, partition),
                        divergence(detail::scale_field(s.n, pot.grad_phi)),
                        divergence(detail::scale_field(p, pot.grad_phi))};
}

Tendencies nonlinear_modified(const ModifiedPieces& m) {
  return {m.lorentz - m.advection - m.pi, -m.transport_n - m.drift_n, m.drift_p - m.transport_p};
}

}  // namespace

Tendencies rhs_enpp(const SimState& state, ChargePolicy policy) {
  Tendencies t = nonlinear_enpp(state, policy);
  if (state.nu != 0.0) t.du += state.nu * laplacian(state.u);
  t.dn += laplacian(state.n);
  t.dp += laplacian(state.p);
  return t;
}

ModifiedRhs rhs_modified(const SimState& state, const DyadicPartition& partition,
                         ChargePolicy policy) {
  ModifiedPieces pieces = modified_pieces(state, partition, policy);
  Tendencies t = nonlinear_modified(pieces);
  if (state.nu != 0.0) t.du += state.nu * laplacian(state.u);
  t.dn += laplacian(state.n);
  t.dp += laplacian(state.p);
  return {std::move(t), std::move(pieces)};
}

double max_stable_dt(const SimState& state, double cfl) {
  const double umax = lp_norm(state.u, kInf);
  return cfl * state.grid().spacing() / std::max(umax, 1.0);
}

Field heat_propagate(const Field& f, double t) {
  if (t < 0.0) throw InvalidArgument("heat_propagate: negative duration");
  if (t == 0.0) return f;
  const auto k2 = f.grid().wavenumber_squared();
  std::vector<double> symbol(k2.size());
  for (std::size_t s = 0; s < k2.size(); ++s) symbol[s] = std::exp(-t * k2[s]);
  return f.apply_multiplier(symbol);
}

VectorField heat_propagate(const VectorField& f, double t) {
  if (t == 0.0) return f;
  std::vector<Field> out;
  for (const auto& c : f.components()) out.push_back(heat_propagate(c, t));
  return VectorField(std::move(out));
}

SimState step(const SimState& state, double dt, const StepOptions& options,
              const DyadicPartition* partition) {
  if (!(dt > 0.0)) throw InvalidArgument("step: dt must be positive");
  if (options.check_cfl) {
    const double limit = max_stable_dt(state, options.cfl);
    if (dt > limit * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << "dt = " << dt << " exceeds the CFL bound " << limit;
      throw CflViolation(os.str());
    }
  }
  if (options.formulation == Formulation::modified && partition == nullptr) {
    throw InvalidArgument("step: the modified formulation needs a dyadic partition");
  }

  SimState start = state;
  if (options.charge == ChargePolicy::renormalize) start.p = renormalize_charge(state.n, state.p);
  require_neutral(start.n, start.p);

  detail::NonlinearTerm nonlinear;
  if (options.formulation == Formulation::enpp) {
    nonlinear = [](const SimState& s, int) { return nonlinear_enpp(s, ChargePolicy::strict); };
  } else {
    nonlinear = [partition](const SimState& s, int) {
      return nonlinear_modified(modified_pieces(s, *partition, ChargePolicy::strict));
    };
  }
  SimState next = detail::heun_step(start, dt, nonlinear).next;
  next.u = leray_project(next.u);
  return next;
}

std::vector<SimState> integrate(const SimState& initial, double horizon, int steps, int cadence,
                                const StepOptions& options, const DyadicPartition* partition,
                                const std::function<void(const SimState&, int)>& observer) {
  if (steps <= 0) throw InvalidArgument("integrate: step count must be positive");
  if (cadence <= 0) throw InvalidArgument("integrate: cadence must be positive");
  const double dt = horizon / steps;
  std::vector<SimState> out{initial};
  if (observer) observer(initial, 0);
  SimState s = initial;
  for (int k = 1; k <= steps; ++k) {
    s = step(s, dt, options, partition);
    // Pin the clock to the grid of step times.
    s.t = initial.t + k * dt;
    if (observer) observer(s, k);
    if (k % cadence == 0) out.push_back(s);
  }
  return out;
}

}  // namespace enpp
