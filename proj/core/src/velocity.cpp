#include "dshock/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dshock/error.hpp"

namespace dshock {

double AnalyticProfile::operator()(double x) const {
  double v = constant;
  for (const auto& m : sin_modes) v += m.amplitude * std::sin(m.wavenumber * x);
  for (const auto& m : cos_modes) v += m.amplitude * std::cos(m.wavenumber * x);
  return v;
}

double AnalyticProfile::derivative(double x) const {
  double d = 0.0;
  for (const auto& m : sin_modes) d += m.amplitude * m.wavenumber * std::cos(m.wavenumber * x);
  for (const auto& m : cos_modes) d -= m.amplitude * m.wavenumber * std::sin(m.wavenumber * x);
  return d;
}

double AnalyticProfile::bound() const {
  double b = std::abs(constant);
  for (const auto& m : sin_modes) b += std::abs(m.amplitude);
  for (const auto& m : cos_modes) b += std::abs(m.amplitude);
  return b;
}

double AnalyticProfile::lower_bound() const {
  double b = constant;
  for (const auto& m : sin_modes) b -= std::abs(m.amplitude);
  for (const auto& m : cos_modes) b -= std::abs(m.amplitude);
  return b;
}

bool AnalyticProfile::is_zero() const {
  auto zero = [](const Mode& m) { return m.amplitude == 0.0; };
  return constant == 0.0 && std::all_of(sin_modes.begin(), sin_modes.end(), zero) &&
         std::all_of(cos_modes.begin(), cos_modes.end(), zero);
}

double VelocitySpec::u_bound() const {
  if (kind == VelocityKind::PrescribedAnalytic) return expression.bound();
  if (kind == VelocityKind::Numeric && !expression.is_zero()) return expression.bound();
  return std::max(std::abs(left), std::abs(right));
}

namespace {

// Edge speeds of the wave emanating from a jump (left | right).
struct Wave {
  double lo_speed;
  double hi_speed;
};

Wave wave_of(double u_left, double u_right, double a) {
  const double cl = 2.0 * a * u_left;
  const double cr = 2.0 * a * u_right;
  if (cl > cr) {
    const double s = a * (u_left + u_right);
    return {s, s};
  }
  return {cl, cr};
}

double wrap_to(double x, double lo) {
  double y = std::fmod(x - lo, kPeriod);
  if (y < 0.0) y += kPeriod;
  return lo + y;
}

}  // namespace

double riemann_velocity(double u_left, double u_right, double a, double x, double t) {
  if (u_left == u_right) return u_left;
  if (t <= 0.0) {
    if (x < 0.0) return u_left;
    if (x > 0.0) return u_right;
    return 0.5 * (u_left + u_right);
  }
  const double cl = 2.0 * a * u_left;
  const double cr = 2.0 * a * u_right;
  if (cl > cr) {
    const double s = a * (u_left + u_right);
    const double xs = s * t;
    if (x < xs) return u_left;
    if (x > xs) return u_right;
    return 0.5 * (u_left + u_right);
  }
  if (x <= cl * t) return u_left;
  if (x >= cr * t) return u_right;
  return x / (2.0 * a * t);
}

double periodic_riemann_interaction_time(double u_left, double u_right, double a) {
  if (u_left == u_right) return std::numeric_limits<double>::infinity();
  const Wave w0 = wave_of(u_left, u_right, a);   // at x = 0
  const Wave wp = wave_of(u_right, u_left, a);   // at x = pi
  // Gap holding u_right: from 0 + w0.hi*t to pi + wp.lo*t.
  // Gap holding u_left: from pi + wp.hi*t to 2pi + w0.lo*t.
  double t_hit = std::numeric_limits<double>::infinity();
  const double closing1 = w0.hi_speed - wp.lo_speed;
  const double closing2 = wp.hi_speed - w0.lo_speed;
  if (closing1 > 0.0) t_hit = std::min(t_hit, std::numbers::pi / closing1);
  if (closing2 > 0.0) t_hit = std::min(t_hit, std::numbers::pi / closing2);
  return t_hit;
}

double periodic_riemann_velocity(double u_left, double u_right, double a, double x, double t) {
  if (u_left == u_right) return u_left;
  const Wave w0 = wave_of(u_left, u_right, a);
  const Wave wp = wave_of(u_right, u_left, a);
  const double pi = std::numbers::pi;
  // Midpoints of the two constant-state gaps split the torus into the domain
  // of the wave at 0 and the domain of the wave at pi.
  const double mid_right = 0.5 * (w0.hi_speed * t + pi + wp.lo_speed * t);
  const double mid_left = 0.5 * (pi + wp.hi_speed * t + kPeriod + w0.lo_speed * t);
  const double y = wrap_to(x, mid_left - kPeriod);
  if (y < mid_right) return riemann_velocity(u_left, u_right, a, y, t);
  return riemann_velocity(u_right, u_left, a, y - pi, t);
}

SignSplit sign_split(const Field& u) {
  SignSplit s{Field(u.grid()), Field(u.grid())};
  for (std::size_t i = 0; i < u.size(); ++i) {
    s.plus[i] = std::max(0.0, u[i]);
    s.minus[i] = std::max(0.0, -u[i]);
  }
  return s;
}

Field step_velocity_numeric(const Field& u, double eps, double dt, double a, bool smooth) {
  const Grid& g = u.grid();
  if (g.dimension() != 1)
    throw Error(ErrorKind::UnsupportedDimension, "numeric velocity is 1-D only");
  const double speed = 2.0 * std::abs(a) * u.max_abs();
  if (dt * speed > eps * (1.0 + 1e-12))
    throw Error(ErrorKind::UnstableStep,
                "numeric velocity step dt = " + std::to_string(dt) +
                    " violates dt * 2|a| max|u| <= eps (limit " +
                    std::to_string(speed > 0 ? eps / speed : 0.0) + ")");
  const std::size_t n = g.cells_per_axis();
  const double lambda = dt / eps;
  Field next(g);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t im = (i + n - 1) % n;
    const std::size_t ip = (i + 1) % n;
    const double fm = a * u[im];
    const double fi = a * u[i];
    const double fp = a * u[ip];
    next[i] = u[i] + lambda * (u[im] * std::max(0.0, fm) - u[i] * std::abs(fi) +
                               u[ip] * std::max(0.0, -fp));
  }
  if (!smooth) return next;
  Field avg(g);
  for (std::size_t i = 0; i < n; ++i)
    avg[i] = (next[(i + n - 1) % n] + next[i] + next[(i + 1) % n]) / 3.0;
  return avg;
}

std::size_t numeric_smoothing_interval(double eps, double beta) {
  return static_cast<std::size_t>(std::max(1.0, std::ceil(std::pow(eps, beta - 1.0))));
}

VelocityField::VelocityField(const Grid& grid, const VelocitySpec& spec, double epsilon)
    : grid_(grid), spec_(spec), bound_(spec.u_bound()) {
  if (grid.dimension() != 1)
    throw Error(ErrorKind::UnsupportedDimension, "velocity fields are evaluated on 1-D grids");
  const bool riemann_data = spec.kind == VelocityKind::ExactRiemann ||
                            (spec.kind == VelocityKind::Numeric && spec.expression.is_zero());
  if (riemann_data && spec.left != spec.right) {
    smoothing_ = build_kernel(grid, spec.beta, epsilon, spec.smoothing);
    if (spec.kind == VelocityKind::ExactRiemann)
      valid_until_ = periodic_riemann_interaction_time(spec.left, spec.right, spec.a);
  }
}

Field VelocityField::at(double t) const {
  switch (spec_.kind) {
    case VelocityKind::PrescribedAnalytic:
      return Field::sample(grid_, [&](double x) { return spec_.expression(x); });
    case VelocityKind::Numeric:
      if (!spec_.expression.is_zero())
        return Field::sample(grid_, [&](double x) { return spec_.expression(x); });
      t = 0.0;
      [[fallthrough]];
    case VelocityKind::ExactRiemann: {
      const Field raw = Field::sample(grid_, [&](double x) {
        return periodic_riemann_velocity(spec_.left, spec_.right, spec_.a, x, t);
      });
      return smoothing_ ? convolve(raw, *smoothing_) : raw;
    }
  }
  return Field(grid_);
}

}  // namespace dshock
