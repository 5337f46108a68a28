#pragma once

#include <optional>
#include <vector>

#include "acsol/soliton.hpp"

namespace acsol {

// (r, H, dH/dr, f, df/dr) on the link.
struct RadialState {
  double r = 0.0;
  TensorField H;
  TensorField K;
  TensorField f;
  TensorField phi;
};

struct SecondDerivatives {
  TensorField H_rr;
  TensorField f_rr;
};

// Second r-derivatives from the evolution and trace equations.
SecondDerivatives rhs(const LinkManifold& link, const RadialState& state,
                      SolitonMode mode = SolitonMode::Expander,
                      DiffMethod method = DiffMethod::Spectral);

// State assembled from the truncated series and its r-derivative at r0.
RadialState init_from_series(const ExpansionCoefficients& c, double r0);

// Pointwise constraint left-hand side and S - S_const at a state.
struct StateConstraints {
  TensorField constraint;  // (0,1)
  TensorField s;           // scalar, constant removed
};
StateConstraints state_constraints(const LinkManifold& link, const RadialState& state,
                                   SolitonMode mode, double s_constant,
                                   DiffMethod method = DiffMethod::Spectral);

struct MonitorSample {
  double r;
  double constraint_norm;
  double s_norm;
  double deviation;  // relative sup-norm distance of H to the series; NaN without one
};

struct TrajectoryMonitor {
  std::vector<MonitorSample> samples;
};

struct IntegrateOptions {
  double r_end = 0.0;
  double step = 0.05;
  int stride = 10;
  SolitonMode mode = SolitonMode::Expander;
  DiffMethod method = DiffMethod::Spectral;
  // Value of S on the exact solution; subtracted before reporting.
  double s_constant = 0.0;
  // Largest accepted relative change of (H, K) over one step.
  double max_relative_change = 0.5;
};

struct Trajectory {
  RadialState final_state;
  TrajectoryMonitor monitor;
};

// Fixed-step classical RK4 from initial.r to options.r_end (either direction;
// the last step is shortened to land on r_end).  When a series is supplied
// the monitor also records the deviation from its evaluation.
Trajectory integrate(const LinkManifold& link, const RadialState& initial,
                     const IntegrateOptions& options,
                     const ExpansionCoefficients* reference = nullptr);

}  // namespace acsol
