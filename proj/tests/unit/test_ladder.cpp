#include <atomic>
#include <numbers>

#include "doctest.h"
#include "dshock/error.hpp"
#include "dshock/ladder.hpp"

using namespace dshock;
using std::numbers::pi;

TEST_CASE("ladder spacings halve exactly") {
  LadderSpec spec;
  const auto eps = ladder_epsilons(spec);
  REQUIRE(eps.size() == 4);
  CHECK(eps[0] == doctest::Approx(2 * pi / 1571));
  for (std::size_t k = 1; k < eps.size(); ++k) CHECK(eps[k - 1] / eps[k] == doctest::Approx(2.0).epsilon(1e-14));

  spec.levels = 2;
  CHECK_THROWS_AS(ladder_epsilons(spec), Error);
  spec.levels = 12;
  try {
    ladder_epsilons(spec);
    FAIL("cap not enforced");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidLadder);
  }
}

TEST_CASE("parallel levels visit every index once and propagate errors") {
  std::vector<std::atomic<int>> hits(9);
  parallel_levels(hits.size(), [&](std::size_t k) { hits[k]++; });
  for (auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_levels(5,
                                  [](std::size_t k) {
                                    if (k == 3) throw Error(ErrorKind::BlowUp, "level 3");
                                  }),
                  Error);
}

TEST_CASE("zero data gives zero convergence error") {
  LadderSpec spec;
  spec.eps_start = 2 * pi / 128;
  spec.levels = 3;
  spec.scenario.t_end = 0.05;
  Problem& p = spec.scenario.problem;
  p.velocity.kind = VelocityKind::PrescribedAnalytic;
  p.velocity.expression.constant = 2;
  p.velocity.expression.sin_modes.push_back({1.0, 1});
  p.initial["v"] = InitialData::analytic({});
  const ConvergenceReport r = run_convergence_study(spec);
  REQUIRE(r.levels.size() == 3);
  for (const auto& l : r.levels) CHECK(l.error == 0.0);
}

TEST_CASE("convergence study rejects unsupported setups") {
  LadderSpec spec;
  spec.eps_start = 2 * pi / 128;
  spec.levels = 3;
  spec.scenario.t_end = 0.05;
  Problem& p = spec.scenario.problem;
  p.velocity.kind = VelocityKind::PrescribedAnalytic;
  p.velocity.expression.sin_modes.push_back({1.0, 1});
  AnalyticProfile v0;
  v0.constant = 1;
  p.initial["v"] = InitialData::analytic(v0);
  CHECK_THROWS_AS(run_convergence_study(spec), Error);  // velocity changes sign
}

TEST_CASE("scale study levels do not depend on the worker count") {
  LadderSpec spec;
  spec.scenario = load_scenario(std::string(DSHOCK_SCENARIO_DIR) + "/ps3_riemann_table.cfg");
  spec.eps_start = 2 * pi / 256;
  spec.levels = 3;
  spec.scenario.t_end = 0.3;
  spec.scenario.snapshot_times.clear();
  setenv("DSHOCK_THREADS", "1", 1);
  const ScaleStudyReport a = run_scale_study(spec, 2);
  setenv("DSHOCK_THREADS", "3", 1);
  const ScaleStudyReport b = run_scale_study(spec, 2);
  unsetenv("DSHOCK_THREADS");
  REQUIRE(a.levels.size() == b.levels.size());
  for (std::size_t k = 0; k < a.levels.size(); ++k) CHECK(a.levels[k].area == b.levels[k].area);
  CHECK(a.ratios.size() == 2);
  const std::string csv = scale_report_csv(a);
  CHECK(csv.rfind("epsilon,area,ratio,alpha_hat\n", 0) == 0);
}
