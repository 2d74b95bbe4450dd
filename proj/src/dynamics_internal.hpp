#pragma once

#include <functional>

#include "enpp/dynamics.hpp"

namespace enpp::detail {

/// Pointwise f * v, dealiased per component.
VectorField scale_field(const Field& f, const VectorField& v);

/// Result of one integrating-factor Heun step together with its predictor.
struct HeunResult {
  SimState next;
  SimState predictor;
};

/// Nonlinear tendencies evaluated at a stage state; stage is 0 for the
/// start of the step and 1 for the predictor.
using NonlinearTerm = std::function<Tendencies(const SimState&, int stage)>;

HeunResult heun_step(const SimState& state, double dt, const NonlinearTerm& nonlinear);

}  // namespace enpp::detail
