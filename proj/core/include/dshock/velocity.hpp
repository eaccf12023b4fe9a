#pragma once

#include <limits>
#include <optional>

#include "dshock/analytic.hpp"
#include "dshock/grid.hpp"
#include "dshock/mollifier.hpp"

namespace dshock {

enum class VelocityKind { ExactRiemann, Numeric, PrescribedAnalytic };

/// Describes the bounded velocity family u^eps for du/dt + d(a u^2)/dx = 0.
struct VelocitySpec {
  VelocityKind kind = VelocityKind::ExactRiemann;
  double a = 1.0;
  double left = 0.0;   // Riemann state for x < 0
  double right = 0.0;  // Riemann state for x > 0
  AnalyticProfile expression;  // prescribed velocity, or numeric initial data
  double beta = 0.1;           // smoothing layer width eps^beta
  BumpProfile smoothing;

  /// M1: sup |u0| for Riemann and numeric data, sup |expression| otherwise.
  double u_bound() const;

  friend bool operator==(const VelocitySpec&, const VelocitySpec&) = default;
};

/// Entropy solution on the line for a single jump at x = 0.
double riemann_velocity(double u_left, double u_right, double a, double x, double t);

/// Entropy solution on the torus for periodic step data: u_left on [-pi, 0),
/// u_right on [0, pi). Valid until the waves from 0 and +-pi meet.
double periodic_riemann_velocity(double u_left, double u_right, double a, double x, double t);

/// First time at which the two waves of the periodic Riemann problem interact.
double periodic_riemann_interaction_time(double u_left, double u_right, double a);

struct SignSplit {
  Field plus;
  Field minus;
};

/// u+ = max(0, u), u- = max(0, -u).
SignSplit sign_split(const Field& u);

/// One Euler step of du/dt = -d(a u^2)/dx written in flux-split form with
/// transport velocity a*u. Requires dt * 2|a| * max|u| <= eps, otherwise
/// throws ErrorKind::UnstableStep. When `smooth` is set, a conservative
/// 3-cell average follows the step.
Field step_velocity_numeric(const Field& u, double eps, double dt, double a, bool smooth);

/// Number of steps between smoothing passes: ceil(eps^(beta - 1)).
std::size_t numeric_smoothing_interval(double eps, double beta);

/// Evaluates u^eps(., t) on a grid for the exact-Riemann and prescribed kinds.
class VelocityField {
 public:
  VelocityField(const Grid& grid, const VelocitySpec& spec, double epsilon);

  const VelocitySpec& spec() const noexcept { return spec_; }
  /// Smoothed field at time t. For numeric velocities this is the smoothed
  /// initial data; the caller evolves it.
  Field at(double t) const;
  double bound() const noexcept { return bound_; }
  /// Time after which the exact periodic Riemann solution is no longer valid.
  double valid_until() const noexcept { return valid_until_; }

 private:
  Grid grid_;
  VelocitySpec spec_;
  std::optional<Kernel> smoothing_;
  double bound_ = 0.0;
  double valid_until_ = std::numeric_limits<double>::infinity();
};

}  // namespace dshock
