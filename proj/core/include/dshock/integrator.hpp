#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dshock/cascade.hpp"

namespace dshock {

/// dt = cfl * eps / speed_bound (cfl * eps when the bound is zero).
double stable_dt(double epsilon, double cfl, double speed_bound);

/// Splits [t0, t1] into the fewest equal steps no larger than dt_max.
struct StepPlan {
  std::size_t steps = 0;
  double dt = 0.0;
};
StepPlan plan_interval(double t0, double t1, double dt_max);

struct StepControl {
  double cfl = 0.5;
  double t_end = 0.0;
  std::vector<double> snapshot_times;  // sorted, within [0, t_end]
};

/// Advances every evolved field by dt * rhs, increments time and step, then
/// lets the model refresh derived fields. Throws BlowUpError on non-finite
/// evolved values and leaves `state` untouched in that case.
void euler_step(const Model& model, CascadeState& state, double dt);

struct Trajectory {
  std::vector<CascadeState> snapshots;
  bool diverged = false;
  double divergence_time = 0.0;
  std::string divergence_field;
  std::string message;
  std::size_t steps = 0;
};

/// Runs to control.t_end, recording the initial state, every requested
/// snapshot time and the final time. Blow-up ends the run early with the
/// trajectory flagged as diverged.
Trajectory run(const Model& model, const StepControl& control);

/// As run, but calls `observer` on each recorded snapshot instead of storing
/// it; the returned trajectory keeps only the final snapshot.
Trajectory run_streaming(const Model& model, const StepControl& control,
                         const std::function<void(const CascadeState&)>& observer);

}  // namespace dshock
