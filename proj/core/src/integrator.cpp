#include "dshock/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dshock/error.hpp"

namespace dshock {

double stable_dt(double epsilon, double cfl, double speed_bound) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidParams, "epsilon must be positive");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw Error(ErrorKind::InvalidParams, "cfl must lie in (0, 1]");
  if (speed_bound <= 0.0) return cfl * epsilon;
  return cfl * epsilon / speed_bound;
}

StepPlan plan_interval(double t0, double t1, double dt_max) {
  if (!(dt_max > 0.0)) throw Error(ErrorKind::UnstableStep, "dt must be positive");
  const double span = t1 - t0;
  if (span <= 0.0) return {0, 0.0};
  // Tolerate rounding so an exact multiple does not gain an extra step.
  const double ratio = span / dt_max;
  auto steps = static_cast<std::size_t>(std::ceil(ratio * (1.0 - 1e-12)));
  steps = std::max<std::size_t>(steps, 1);
  return {steps, span / static_cast<double>(steps)};
}

void euler_step(const Model& model, CascadeState& state, double dt) {
  FieldRhs rhs = model.rhs(state);
  for (auto& [name, r] : rhs) {
    const Field& cur = state.get(name);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = cur[i] + dt * r[i];
    if (!r.all_finite()) throw BlowUpError(state.time + dt, name, cur.max_abs());
  }
  for (auto& [name, r] : rhs) state.set(name, std::move(r));
  state.time += dt;
  ++state.step;
  model.refresh(state, dt);
}

namespace {

std::vector<double> schedule(const StepControl& control) {
  if (control.t_end < 0.0) throw Error(ErrorKind::Validation, "t_end must be nonnegative");
  std::set<double> times(control.snapshot_times.begin(), control.snapshot_times.end());
  for (double t : times)
    if (t < 0.0 || t > control.t_end)
      throw Error(ErrorKind::Validation, "snapshot time outside [0, t_end]");
  times.insert(0.0);
  times.insert(control.t_end);
  return {times.begin(), times.end()};
}

}  // namespace

Trajectory run_streaming(const Model& model, const StepControl& control,
                         const std::function<void(const CascadeState&)>& observer) {
  const auto times = schedule(control);
  if (control.t_end > model.valid_until())
    throw Error(ErrorKind::Validation,
                "t_end = " + std::to_string(control.t_end) +
                    " exceeds the validity time of the exact velocity (" +
                    std::to_string(model.valid_until()) + ")");
  const double dt_max = stable_dt(model.epsilon(), control.cfl, model.speed_bound());
  Trajectory traj;
  CascadeState state = model.initial_state();
  observer(state);
  for (std::size_t k = 1; k < times.size(); ++k) {
    const StepPlan plan = plan_interval(times[k - 1], times[k], dt_max);
    try {
      for (std::size_t s = 0; s < plan.steps; ++s) {
        euler_step(model, state, plan.dt);
        ++traj.steps;
      }
    } catch (const BlowUpError& e) {
      traj.diverged = true;
      traj.divergence_time = e.time();
      traj.divergence_field = e.field();
      traj.message = e.what();
      break;
    }
    // Land exactly on the requested time despite accumulated rounding.
    state.time = times[k];
    observer(state);
  }
  traj.snapshots.push_back(state);
  return traj;
}

Trajectory run(const Model& model, const StepControl& control) {
  std::vector<CascadeState> snaps;
  Trajectory traj = run_streaming(model, control, [&](const CascadeState& s) { snaps.push_back(s); });
  if (!traj.diverged) {
    traj.snapshots = std::move(snaps);
  } else {
    // Keep the recorded snapshots plus the last finite state.
    CascadeState last = std::move(traj.snapshots.back());
    traj.snapshots = std::move(snaps);
    traj.snapshots.push_back(std::move(last));
  }
  return traj;
}

}  // namespace dshock
