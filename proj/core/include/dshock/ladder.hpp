#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dshock/diagnostics.hpp"
#include "dshock/scenario.hpp"

namespace dshock {

/// An epsilon-halving ladder over a scenario template. Level k uses
/// N_0 * 2^k cells with N_0 the cell count closest to eps_start, so spacings
/// halve exactly.
struct LadderSpec {
  Scenario scenario;
  double eps_start = 4e-3;
  int levels = 4;
  std::size_t cell_cap = std::size_t{1} << 20;
};

/// Spacings of every level. Throws ErrorKind::InvalidLadder for fewer than
/// three levels or when the finest grid exceeds the cell cap.
std::vector<double> ladder_epsilons(const LadderSpec& spec);

/// Worker count from DSHOCK_THREADS (0 or unset: hardware concurrency).
unsigned ladder_threads();

/// Runs fn(k) for k in [0, count) on up to ladder_threads() workers. The
/// first exception is rethrown after all workers join.
void parallel_levels(std::size_t count, const std::function<void(std::size_t)>& fn);

struct ScaleLevel {
  double epsilon = 0.0;
  double area = 0.0;
  double w_l1 = 0.0;
  double v_max = 0.0;
  double v_mass = 0.0;
  bool diverged = false;
  double divergence_time = 0.0;
};

struct ScaleStudyReport {
  int n = 2;
  SchemeParams params;  // epsilon of the coarsest level
  std::vector<ScaleLevel> levels;
  std::vector<double> ratios;  // A(eps_{k+1}) / A(eps_k) over surviving pairs
  double mean_ratio = 0.0;
  double alpha_hat = 0.0;
  double w_l1_exponent = 0.0;  // fitted growth of ||w||_1 in 1/eps
};

/// Optional exponent overrides for a scale study.
struct ExponentOverride {
  std::optional<double> alpha;
  std::optional<double> beta;
  /// Use alpha = 0.9/(n+1), beta = alpha/2 and unit-support kernels for the
  /// requested n.
  bool theorem_defaults = false;
};

/// Runs the template with P(v) = v^n on every level to run.t_end and
/// measures shock_area(w). Diverged levels are flagged and skipped.
ScaleStudyReport run_scale_study(const LadderSpec& spec, int n, const ExponentOverride& exps = {});

struct ResidualLevel {
  double epsilon = 0.0;
  double sup = 0.0;
  std::vector<double> sup_per_test;
  bool diverged = false;
};

struct ResidualReport {
  ResidualEquation equation = ResidualEquation::Density;
  int test_functions = 2;
  std::vector<ResidualLevel> levels;
  double decay_exponent = 0.0;  // residual ~ eps^decay_exponent
  bool strictly_decreasing = false;
};

/// Residual of one equation across the ladder using `snapshots` uniformly
/// spaced snapshots on [0, t_end].
ResidualReport run_residual_study(const LadderSpec& spec, ResidualEquation eq, int K = 2,
                                  int snapshots = 11);

struct ConvergenceLevel {
  double epsilon = 0.0;
  double error = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceLevel> levels;
  std::vector<double> ratios;
  double order = 0.0;
};

/// Scheme density against the characteristics oracle at run.t_end. The
/// template must be a ps3 system with an analytic, sign-definite velocity and
/// analytic initial v.
ConvergenceReport run_convergence_study(const LadderSpec& spec);

/// CSV text: epsilon,area,ratio,alpha_hat (ratio and alpha_hat blank on the
/// first row, alpha_hat only on the last).
std::string scale_report_csv(const ScaleStudyReport& report);
std::string residual_report_csv(const ResidualReport& report);
std::string convergence_report_csv(const ConvergenceReport& report);

}  // namespace dshock
