#include "dshock/ladder.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "dshock/error.hpp"
#include "dshock/integrator.hpp"

namespace dshock {

std::vector<double> ladder_epsilons(const LadderSpec& spec) {
  if (spec.levels < 3)
    throw Error(ErrorKind::InvalidLadder, "a ladder needs at least three levels");
  const std::size_t n0 = cells_for_epsilon(spec.eps_start);
  const int dim = spec.scenario.problem.system.family == SystemFamily::TwoD ? 2 : 1;
  const std::size_t finest = n0 << (spec.levels - 1);
  const double cells = dim == 2 ? double(finest) * double(finest) : double(finest);
  if (cells > double(spec.cell_cap))
    throw Error(ErrorKind::InvalidLadder, "finest level needs " + format_double(cells) +
                                              " cells, above the cap of " +
                                              std::to_string(spec.cell_cap));
  std::vector<double> eps;
  for (int k = 0; k < spec.levels; ++k) eps.push_back(kPeriod / double(n0 << k));
  return eps;
}

unsigned ladder_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DSHOCK_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return hw;
}

void parallel_levels(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::min<std::size_t>(ladder_threads(), count);
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!first) first = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

namespace {

Scenario at_epsilon(const Scenario& base, double eps) {
  Scenario s = base;
  s.problem.params.epsilon = eps;
  return s;
}

StepControl control_of(const Scenario& s, std::vector<double> snapshots = {}) {
  StepControl c;
  c.cfl = s.problem.params.cfl;
  c.t_end = s.t_end;
  c.snapshot_times = std::move(snapshots);
  return c;
}

}  // namespace

ScaleStudyReport run_scale_study(const LadderSpec& spec, int n, const ExponentOverride& exps) {
  const auto eps = ladder_epsilons(spec);
  Scenario base = spec.scenario;
  if (base.problem.system.family != SystemFamily::PS3 && base.problem.system.family != SystemFamily::PS4)
    throw Error(ErrorKind::Validation, "scale studies need a 1-D cascade scenario");
  SchemeParams& prm = base.problem.params;
  prm.n = n;
  base.problem.system.P = Polynomial::monomial(n);
  if (exps.theorem_defaults) {
    const auto d = default_exponents(n, base.problem.system.has_z());
    prm.alpha = d.alpha;
    prm.beta = d.beta;
    if (base.problem.system.has_z()) prm.gamma = d.gamma;
    prm.enforce_theorem_bounds = true;
    prm.mollifier = BumpProfile{};
    base.problem.velocity.smoothing = BumpProfile{};
  }
  if (exps.alpha) prm.alpha = *exps.alpha;
  if (exps.beta) prm.beta = *exps.beta;
  base.problem.velocity.beta = prm.beta;

  ScaleStudyReport report;
  report.n = n;
  report.levels.resize(eps.size());
  // Validate every level up front so errors surface before long runs.
  for (double e : eps) at_epsilon(base, e).validate();

  parallel_levels(eps.size(), [&](std::size_t k) {
    const Scenario s = at_epsilon(base, eps[k]);
    const auto model = make_model(s.problem);
    CascadeState last;
    const Trajectory traj = run_streaming(*model, control_of(s), [&](const CascadeState& st) { last = st; });
    ScaleLevel& lvl = report.levels[k];
    lvl.epsilon = model->epsilon();
    lvl.diverged = traj.diverged;
    lvl.divergence_time = traj.divergence_time;
    if (traj.diverged) return;
    lvl.area = shock_area(last.get("w"));
    lvl.w_l1 = l1_norm(last.get("w"));
    lvl.v_max = last.get("v").max_abs();
    lvl.v_mass = integrate(last.get("v"));
  });

  report.params = prm;
  report.params.epsilon = eps.front();
  std::vector<LadderPoint> norms;
  double ratio_sum = 0.0, power_sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t k = 0; k < report.levels.size(); ++k) {
    const auto& l = report.levels[k];
    if (l.diverged) continue;
    norms.push_back({l.epsilon, l.w_l1});
    if (k == 0 || report.levels[k - 1].diverged) continue;
    const auto& p = report.levels[k - 1];
    if (!(p.area > 0.0) || !(l.area > 0.0)) continue;
    const double r = l.area / p.area;
    report.ratios.push_back(r);
    ratio_sum += r;
    power_sum += 1.0 + std::log2(r);
    ++pairs;
  }
  if (pairs > 0) {
    report.mean_ratio = ratio_sum / double(pairs);
    report.alpha_hat = power_sum / double(pairs);
  } else {
    report.mean_ratio = report.alpha_hat = std::nan("");
  }
  report.w_l1_exponent = norms.size() >= 2 ? fit_growth_exponent(norms) : std::nan("");
  return report;
}

ResidualReport run_residual_study(const LadderSpec& spec, ResidualEquation eq, int K, int snapshots) {
  if (snapshots < 3) throw Error(ErrorKind::InsufficientData, "residual studies need three snapshots");
  const auto eps = ladder_epsilons(spec);
  ResidualReport report;
  report.equation = eq;
  report.test_functions = K;
  report.levels.resize(eps.size());
  std::vector<double> times;
  for (int k = 0; k < snapshots; ++k) times.push_back(spec.scenario.t_end * k / (snapshots - 1));
  for (double e : eps) at_epsilon(spec.scenario, e).validate();

  parallel_levels(eps.size(), [&](std::size_t k) {
    const Scenario s = at_epsilon(spec.scenario, eps[k]);
    const auto model = make_model(s.problem);
    std::vector<CascadeState> snaps;
    const Trajectory traj =
        run_streaming(*model, control_of(s, times), [&](const CascadeState& st) { snaps.push_back(st); });
    ResidualLevel& lvl = report.levels[k];
    lvl.epsilon = model->epsilon();
    lvl.diverged = traj.diverged;
    if (traj.diverged) return;
    const ResidualResult r = weak_residual(*model, s.problem, snaps, eq, K);
    lvl.sup = r.sup;
    lvl.sup_per_test = r.sup_per_test;
  });

  std::vector<LadderPoint> pts;
  report.strictly_decreasing = true;
  for (std::size_t k = 0; k < report.levels.size(); ++k) {
    const auto& l = report.levels[k];
    if (l.diverged) {
      report.strictly_decreasing = false;
      continue;
    }
    pts.push_back({l.epsilon, l.sup});
    if (k > 0 && !(l.sup < report.levels[k - 1].sup)) report.strictly_decreasing = false;
  }
  report.decay_exponent = pts.size() >= 2 ? -fit_growth_exponent(pts) : std::nan("");
  return report;
}

ConvergenceReport run_convergence_study(const LadderSpec& spec) {
  const auto eps = ladder_epsilons(spec);
  const Problem& pb = spec.scenario.problem;
  if (pb.system.family != SystemFamily::PS3)
    throw Error(ErrorKind::Validation, "convergence studies need a ps3 scenario");
  if (pb.velocity.kind != VelocityKind::PrescribedAnalytic)
    throw Error(ErrorKind::Validation, "convergence studies need an analytic velocity");
  const AnalyticProfile& u = pb.velocity.expression;
  const double upper = u.constant + (u.bound() - std::abs(u.constant));
  if (!(u.lower_bound() > 0.0 || upper < 0.0))
    throw Error(ErrorKind::Validation, "convergence studies need a sign-definite velocity");
  const InitialData v0 = pb.initial_for("v");
  if (v0.kind == InitialData::Kind::Riemann)
    throw Error(ErrorKind::Validation, "convergence studies need analytic initial v");
  for (double e : eps) at_epsilon(spec.scenario, e).validate();

  ConvergenceReport report;
  report.levels.resize(eps.size());
  parallel_levels(eps.size(), [&](std::size_t k) {
    const Scenario s = at_epsilon(spec.scenario, eps[k]);
    const auto model = make_model(s.problem);
    CascadeState last;
    const Trajectory traj = run_streaming(*model, control_of(s), [&](const CascadeState& st) { last = st; });
    if (traj.diverged) throw Error(ErrorKind::BlowUp, "convergence level diverged");
    const Field oracle =
        characteristics_oracle(model->grid(), pb.velocity, v0.expression, s.t_end, pb.system.v_transport());
    report.levels[k] = {model->epsilon(), sup_error(last.get("X"), oracle)};
  });
  std::vector<LadderPoint> pts;
  bool all_positive = true;
  for (std::size_t k = 0; k < report.levels.size(); ++k) {
    pts.push_back({report.levels[k].epsilon, report.levels[k].error});
    all_positive = all_positive && report.levels[k].error > 0.0;
    if (k > 0)
      report.ratios.push_back(report.levels[k - 1].error > 0.0
                                  ? report.levels[k].error / report.levels[k - 1].error
                                  : 0.0);
  }
  report.order = all_positive ? -fit_growth_exponent(pts) : std::nan("");
  return report;
}

std::string scale_report_csv(const ScaleStudyReport& r) {
  std::ostringstream os;
  os << "epsilon,area,ratio,alpha_hat\n";
  for (std::size_t k = 0; k < r.levels.size(); ++k) {
    const auto& l = r.levels[k];
    os << format_double(l.epsilon) << ',';
    if (l.diverged)
      os << "diverged";
    else
      os << format_double(l.area);
    os << ',';
    if (k > 0 && !l.diverged && !r.levels[k - 1].diverged && r.levels[k - 1].area > 0.0)
      os << format_double(l.area / r.levels[k - 1].area);
    os << ',';
    if (k + 1 == r.levels.size()) os << format_double(r.alpha_hat);
    os << '\n';
  }
  return os.str();
}

std::string residual_report_csv(const ResidualReport& r) {
  std::ostringstream os;
  os << "epsilon,residual";
  for (const auto& name : residual_test_functions(r.test_functions)) os << ",psi_" << name;
  os << ",decay_exponent\n";
  for (std::size_t k = 0; k < r.levels.size(); ++k) {
    const auto& l = r.levels[k];
    os << format_double(l.epsilon) << ',' << (l.diverged ? std::string("diverged") : format_double(l.sup));
    for (std::size_t j = 0; j < static_cast<std::size_t>(2 * r.test_functions + 1); ++j)
      os << ',' << (j < l.sup_per_test.size() ? format_double(l.sup_per_test[j]) : "");
    os << ',';
    if (k + 1 == r.levels.size()) os << format_double(r.decay_exponent);
    os << '\n';
  }
  return os.str();
}

std::string convergence_report_csv(const ConvergenceReport& r) {
  std::ostringstream os;
  os << "epsilon,sup_error,ratio,order\n";
  for (std::size_t k = 0; k < r.levels.size(); ++k) {
    os << format_double(r.levels[k].epsilon) << ',' << format_double(r.levels[k].error) << ',';
    if (k > 0) os << format_double(r.ratios[k - 1]);
    os << ',';
    if (k + 1 == r.levels.size()) os << format_double(r.order);
    os << '\n';
  }
  return os.str();
}

}  // namespace dshock
