#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dshock/cascade.hpp"
#include "dshock/integrator.hpp"

namespace dshock {

/// h * sum |values| (h^2 in 2-D).
double l1_norm(const Field& field);

/// max |a - b|. Throws ErrorKind::IncompatibleFields on grid mismatch.
double sup_error(const Field& a, const Field& b);

/// Area between the primitive of w and its far-field level.
///
/// W = primitive(w); the baseline is the median of W over the quarter of
/// cells farthest (periodically) from argmax |W - mean W|.
double shock_area(const Field& w);

struct LadderPoint {
  double epsilon = 0.0;
  double value = 0.0;
};

/// Mean over consecutive pairs of 1 + log2(A(eps/2) / A(eps)). Entries must
/// halve epsilon (relative tolerance 1e-6) and there must be at least three.
double estimate_delta_power(const std::vector<LadderPoint>& ladder);

/// Least-squares slope p of log(value) against log(1/epsilon), i.e. value
/// ~ eps^(-p). Residual decay shows up as a negative slope.
double fit_growth_exponent(const std::vector<LadderPoint>& ladder);

/// Which conservation law the residual is tested against.
enum class ResidualEquation {
  Density,  // v_t + b (u v)_x = 0
  W,        // w_t + c (u w)_x + m P(v)_x = 0
  Z,        // Z_t + c_Z (u Z)_x + c_vw (v w)_x = 0
};

ResidualEquation parse_residual_equation(const std::string& id);
std::string to_string(ResidualEquation eq);

/// Test functions 1, cos kx, sin kx for k = 1..K, in that order.
std::vector<std::string> residual_test_functions(int K);

struct ResidualSample {
  double time = 0.0;
  std::vector<double> per_test;  // |R_k(t)| in residual_test_functions order
};

struct ResidualResult {
  double epsilon = 0.0;
  std::vector<ResidualSample> samples;
  std::vector<double> sup_per_test;  // sup over time
  double sup = 0.0;                  // sup over time and test function
};

/// R_k(t) = int d/dt(target) psi_k - int flux psi_k' over the snapshots of a
/// 1-D cascade run. d/dt uses the model's own right-hand side. Requires at
/// least three uniformly spaced snapshots (ErrorKind::InsufficientData).
ResidualResult weak_residual(const Model& model, const Problem& problem,
                             const std::vector<CascadeState>& snapshots, ResidualEquation eq,
                             int K);

/// Classical solution of X_t + b (u X)_x = 0 with u = velocity.expression
/// (time independent) by backward RK4 characteristics with t/1000 steps.
/// Throws ErrorKind::CharacteristicsCrossed if the foot points fold.
Field characteristics_oracle(const Grid& grid, const VelocitySpec& velocity,
                             const AnalyticProfile& v0, double t, double b = 1.0);

}  // namespace dshock
