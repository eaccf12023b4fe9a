#pragma once

#include <array>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dshock/analytic.hpp"
#include "dshock/grid.hpp"
#include "dshock/mollifier.hpp"
#include "dshock/transport.hpp"
#include "dshock/velocity.hpp"

namespace dshock {

/// P(v) = sum coeffs[k] v^k.
struct Polynomial {
  std::vector<double> coeffs;

  static Polynomial monomial(int degree, double coefficient = 1.0);

  double operator()(double v) const;
  double derivative(double v) const;
  /// Index of the highest nonzero coefficient, -1 for the zero polynomial.
  int degree() const;
  bool is_zero() const { return degree() < 0; }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

/// Regularization ladder parameters. epsilon is the grid spacing.
struct SchemeParams {
  double epsilon = 4e-3;
  double alpha = 0.3;
  double beta = 0.15;
  double gamma = 0.0;  // only read when a Z equation is present
  int n = 2;
  double cfl = 0.5;
  BumpProfile mollifier;
  /// When false only the structural constraints are checked (positive
  /// exponents, beta < alpha, kernels at least two cells wide), which lets
  /// ladder studies run outside the proven range.
  bool enforce_theorem_bounds = true;

  /// Throws ErrorKind::InvalidParams naming the violated inequality.
  void validate(bool has_z) const;

  friend bool operator==(const SchemeParams&, const SchemeParams&) = default;
};

enum class SystemFamily { PS3, PS4, TwoD, Nonlinear2x2 };

std::string to_string(SystemFamily family);
SystemFamily parse_family(const std::string& text);

/// System selection and coefficients.
///
/// PS3:  u_t + (a u^2)_x = 0, v_t + b (u v)_x = 0, w_t + c (u w)_x + P(v)_x = 0.
/// PS4:  as PS3 with (b, c, P multiplier, Z source) = ps4_coeffs and
///       Z_t + ps4[1] (u Z)_x + ps4[3] (v w)_x = 0.
/// TwoD: rho_t + div(rho (u, v)) = 0, w_t + div(w (u, v)) + P(rho)_x + Q(rho)_y = 0.
/// Nonlinear2x2: u_t + (u f(u,v))_x = 0, v_t + (v g(u,v))_x = 0.
struct SystemSpec {
  SystemFamily family = SystemFamily::PS3;
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
  Polynomial P = Polynomial::monomial(2);
  Polynomial Q;
  std::array<double, 4> ps4_coeffs{2.0, 2.0, 2.0, 6.0};
  FluxFunction f = FluxFunction::constant(0.0);
  FluxFunction g = FluxFunction::constant(0.0);

  bool has_z() const { return family == SystemFamily::PS4; }
  /// Effective transport multipliers of v and w, and the source multiplier.
  double v_transport() const { return family == SystemFamily::PS4 ? ps4_coeffs[0] : b; }
  double w_transport() const { return family == SystemFamily::PS4 ? ps4_coeffs[1] : c; }
  double w_source() const { return family == SystemFamily::PS4 ? ps4_coeffs[2] : 1.0; }

  friend bool operator==(const SystemSpec&, const SystemSpec&) = default;
};

/// Initial data for one field.
///
/// Riemann data jump from `left` (x < 0) to `right` (x > 0) and are smoothed
/// over eps^alpha with the mollifier. In 2-D the profile is
/// expression(x) + expression_y(y) and Riemann jumps are along x.
struct InitialData {
  enum class Kind { Zero, Riemann, Analytic };
  Kind kind = Kind::Zero;
  double left = 0.0;
  double right = 0.0;
  AnalyticProfile expression;
  AnalyticProfile expression_y;

  static InitialData riemann(double l, double r) { return {Kind::Riemann, l, r, {}, {}}; }
  static InitialData analytic(AnalyticProfile p) { return {Kind::Analytic, 0.0, 0.0, std::move(p), {}}; }

  friend bool operator==(const InitialData&, const InitialData&) = default;
};

/// Everything needed to build a model, independent of output scheduling.
struct Problem {
  SystemSpec system;
  SchemeParams params;
  VelocitySpec velocity;    // x velocity (the only one in 1-D)
  VelocitySpec velocity_y;  // 2-D only; a function of y
  std::map<std::string, InitialData> initial;

  InitialData initial_for(const std::string& name) const;
  /// Throws ErrorKind::Validation / InvalidParams for inconsistent setups.
  void validate() const;

  friend bool operator==(const Problem&, const Problem&) = default;
};

/// Number of cells per axis giving spacing closest to `epsilon`.
std::size_t cells_for_epsilon(double epsilon);

/// Named fields at one time. Evolved and derived fields share the map; the
/// model decides which are which.
struct CascadeState {
  double time = 0.0;
  std::size_t step = 0;
  std::map<std::string, Field> fields;

  const Field& get(const std::string& name) const;
  Field& get(const std::string& name);
  bool has(const std::string& name) const { return fields.count(name) != 0; }
  void set(const std::string& name, Field f);
};

using FieldRhs = std::vector<std::pair<std::string, Field>>;

/// A semi-discrete system: evolved fields advance by forward Euler, derived
/// fields (velocity, mollified densities) are refreshed after every step.
class Model {
 public:
  virtual ~Model() = default;

  virtual const Grid& grid() const = 0;
  double epsilon() const { return grid().spacing(); }
  virtual CascadeState initial_state() const = 0;
  /// Time derivatives of the evolved fields.
  virtual FieldRhs rhs(const CascadeState& state) const = 0;
  /// Called after the evolved fields and the time were advanced by dt. The
  /// previous velocity is still in the state.
  virtual void refresh(CascadeState& state, double dt) const = 0;
  /// Largest transport speed; dt * speed <= cfl * eps keeps steps stable.
  virtual double speed_bound() const = 0;
  /// Fields written to snapshots, in output order.
  virtual std::vector<std::string> output_fields() const = 0;
  /// Latest time for which the velocity is valid (infinity if unbounded).
  virtual double valid_until() const { return std::numeric_limits<double>::infinity(); }
};

/// Builds the model on the grid with spacing closest to params.epsilon.
std::unique_ptr<Model> make_model(const Problem& problem);

/// Mollification kernel phi_{eps^alpha} used by a model.
Kernel density_kernel(const Grid& grid, const SchemeParams& params);

/// Right-hand sides of the 1-D cascades for a given velocity snapshot.
struct Ps3Rhs {
  Field X;
  Field w;
};
Ps3Rhs ps3_rhs(const Field& X, const Field& w, const Field& u, const SystemSpec& spec,
               const Kernel& kernel_alpha);

struct Ps4Rhs {
  Field X;
  Field w;
  Field Z;
};
Ps4Rhs ps4_rhs(const Field& X, const Field& w, const Field& Z, const Field& u,
               const SystemSpec& spec, const Kernel& kernel_alpha, const Kernel& kernel_gamma);

struct TwoDRhs {
  Field rho;
  Field w;
};
TwoDRhs twod_rhs(const Field& X, const Field& w, const Field& u, const Field& v,
                 const SystemSpec& spec, const Kernel& kernel_alpha);

/// The source term P'(v) * (X * phi') of the w equation (with multiplier).
Field w_source(const Field& X, const SystemSpec& spec, const Kernel& kernel_alpha);

}  // namespace dshock
