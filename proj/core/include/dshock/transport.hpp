#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "dshock/grid.hpp"

namespace dshock {

/// Flux-split transport stencil on a periodic line:
///   rhs[i] = (b/eps) * (X[i-1] u+[i-1] - X[i] |u[i]| + X[i+1] u-[i+1]).
/// Writes into `out`; the spans must have equal length.
void transport_rhs_into(std::span<const double> density, std::span<const double> velocity,
                        double eps, double b, std::span<double> out);

Field transport_rhs(const Field& density, const Field& velocity, double eps, double b = 1.0);

/// Same stencil applied along x with `velocity_x` and along y with `velocity_y`.
Field transport_rhs_2d(const Field& density, const Field& velocity_x, const Field& velocity_y,
                       double eps);

/// Bounded scalar flux f(u, v) for the nonlinear 2x2 flux-split system.
///
/// Identifiers: `tanh_scaled(c)` = tanh(c u), `sin_sum(c1,c2)` = sin(c1 u + c2 v),
/// `const(c)` = c. Anything else is rejected with ErrorKind::InvalidFlux.
class FluxFunction {
 public:
  enum class Kind { TanhScaled, SinSum, Constant };

  FluxFunction() = default;
  static FluxFunction parse(std::string_view id);
  static FluxFunction tanh_scaled(double c) { return {Kind::TanhScaled, c, 0.0}; }
  static FluxFunction sin_sum(double c1, double c2) { return {Kind::SinSum, c1, c2}; }
  static FluxFunction constant(double c) { return {Kind::Constant, c, 0.0}; }

  double operator()(double u, double v) const;
  /// sup over R^2 of |f|.
  double bound() const;
  Kind kind() const noexcept { return kind_; }
  std::string to_string() const;

  friend bool operator==(const FluxFunction&, const FluxFunction&) = default;

 private:
  FluxFunction(Kind kind, double c1, double c2) : kind_(kind), c1_(c1), c2_(c2) {}

  Kind kind_ = Kind::Constant;
  double c1_ = 0.0;
  double c2_ = 0.0;
};

struct NonlinearRhs {
  Field u;
  Field v;
};

/// du/dt and dv/dt of the flux-split 2x2 system with transport velocities
/// f(u, v) and g(u, v) evaluated pointwise.
NonlinearRhs nonlinear_rhs(const Field& u, const Field& v, const FluxFunction& f,
                           const FluxFunction& g, double eps);

}  // namespace dshock
