#include <numbers>

#include "doctest.h"
#include "dshock/diagnostics.hpp"
#include "dshock/error.hpp"
#include "support.hpp"

using namespace dshock;
using std::numbers::pi;

namespace {

std::vector<LadderPoint> power_ladder(double alpha, double c = 1.0) {
  std::vector<LadderPoint> l;
  for (int k = 0; k < 5; ++k) {
    const double e = 4e-3 / (1 << k);
    l.push_back({e, c * std::pow(e, 1 - alpha)});
  }
  return l;
}

}  // namespace

TEST_CASE("l1 norm and sup error") {
  const Grid g = Grid::make(1, 100);
  CHECK(l1_norm(Field(g)) == 0.0);
  CHECK(l1_norm(Field::constant(g, -1.0)) == doctest::Approx(2 * pi));
  Field d(g);
  d[5] = 1 / g.spacing();
  CHECK(l1_norm(d) == doctest::Approx(1.0));
  std::mt19937_64 rng(51);
  const Field a = test::random_field(g, rng);
  CHECK(sup_error(a, a) == 0.0);
  Field b = a;
  for (std::size_t i = 0; i < b.size(); ++i) b[i] += 0.25;
  CHECK(sup_error(a, b) == doctest::Approx(0.25));
  const Field c = test::random_field(g, rng);
  double scan = 0;
  for (std::size_t i = 0; i < c.size(); ++i) scan = std::max(scan, std::abs(a[i] - c[i]));
  CHECK(sup_error(a, c) == scan);
}

TEST_CASE("delta power estimator") {
  CHECK(estimate_delta_power({{4e-3, 0.09}, {2e-3, 0.09}, {1e-3, 0.09}}) == doctest::Approx(1.0));
  const double table[] = {0.11, 0.23, 0.48, 0.98, 1.96, 4.00};
  std::vector<LadderPoint> l;
  for (int k = 0; k < 6; ++k) l.push_back({1e-3 / (1 << k), table[k]});
  CHECK(estimate_delta_power(l) == doctest::Approx(2.0).epsilon(0.03));
  for (double alpha : {1.0, 2.0, 3.0, 4.5}) {
    CHECK(std::abs(estimate_delta_power(power_ladder(alpha)) - alpha) < 1e-12);
    CHECK(std::abs(estimate_delta_power(power_ladder(alpha, 37.0)) - alpha) < 1e-12);
  }
  try {
    estimate_delta_power({{1e-3, 1}, {0.6e-3, 1}, {0.3e-3, 1}});
    FAIL("expected invalid ladder");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidLadder);
  }
  CHECK_THROWS_AS(estimate_delta_power({{1e-3, 1}, {0.5e-3, 1}}), Error);
}

TEST_CASE("growth exponent fit") {
  CHECK(fit_growth_exponent(power_ladder(3.0)) == doctest::Approx(2.0));
  CHECK(fit_growth_exponent(power_ladder(0.5)) == doctest::Approx(-0.5));
}

TEST_CASE("shock area of synthetic profiles") {
  const Grid g = Grid::make(1, 1000);
  CHECK(shock_area(Field(g)) == 0.0);
  // w = derivative-kernel image of a unit-mass bump: its primitive is the
  // mollified bump itself, so the area is its mass.
  for (double scale : {0.05, 0.1, 0.2}) {
    const Kernel k = build_kernel_with_scale(g, scale);
    Field delta(g);
    delta[600] = 1 / g.spacing();
    const Field w = convolve_derivative(delta, k);
    CHECK(shock_area(w) == doctest::Approx(1.0).epsilon(0.02));
  }
}

TEST_CASE("shock area is translation invariant") {
  const Grid g = Grid::make(1, 800);
  const Kernel k = build_kernel_with_scale(g, 0.15);
  Field delta(g);
  delta[300] = 2 / g.spacing();
  const Field w = convolve_derivative(delta, k);
  const double a = shock_area(w);
  for (long long s : {7, 113, -250}) CHECK(shock_area(shift(w, s)) == doctest::Approx(a).epsilon(0.01));
}

TEST_CASE("synthetic delta powers are recovered from derivative fields") {
  // w = d/dx (phi_eps)^alpha, computed by exact differences of the sampled
  // power so the primitive is exactly the power profile.
  for (double alpha : {1.0, 2.0, 3.0}) {
    std::vector<LadderPoint> ladder;
    for (int k = 0; k < 4; ++k) {
      const std::size_t n = 1024u << k;
      const Grid g = Grid::make(1, n);
      const double width = 40 * g.spacing();
      const Field p = Field::sample(g, [&](double x) {
        const double s = (x - 0.3) / width;
        return std::pow(bump_value(BumpShape::Standard, s) / (bump_mass(BumpShape::Standard) * width), alpha);
      });
      Field w(g);
      for (std::size_t i = 0; i < n; ++i) w[i] = (p[i] - p[(i + n - 1) % n]) / g.spacing();
      ladder.push_back({g.spacing(), shock_area(w)});
    }
    CHECK(estimate_delta_power(ladder) == doctest::Approx(alpha).epsilon(0.05 / alpha));
  }
}

TEST_CASE("characteristics oracle") {
  const Grid g = Grid::make(1, 128);
  AnalyticProfile v0;
  v0.constant = 1;
  v0.sin_modes.push_back({0.5, 1});
  VelocitySpec c;
  c.kind = VelocityKind::PrescribedAnalytic;
  c.expression.constant = 2;
  const Field shifted = characteristics_oracle(g, c, v0, 0.3);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(shifted[i] == doctest::Approx(v0(g.node(i) - 0.6)).epsilon(1e-12));

  VelocitySpec s = c;
  s.expression.sin_modes.push_back({1.0, 1});
  const Field x = characteristics_oracle(g, s, v0, 0.2);
  const Field x0 = Field::sample(g, [&](double y) { return v0(y); });
  CHECK(integrate(x) == doctest::Approx(integrate(x0)).epsilon(1e-8));

  // u = 1 + 0.9 sin(x) has no crossing for a time-independent field, but a
  // prescribed field must be analytic: anything else is rejected.
  VelocitySpec riemann;
  CHECK_THROWS_AS(characteristics_oracle(g, riemann, v0, 0.1), Error);
}

TEST_CASE("residual test basis") {
  const auto names = residual_test_functions(2);
  REQUIRE(names.size() == 5);
  CHECK(names[0] == "1");
  CHECK(names[4] == "sin2x");
  CHECK(parse_residual_equation("w") == ResidualEquation::W);
  CHECK_THROWS_AS(parse_residual_equation("q"), Error);
}

TEST_CASE("weak residual of the density equation") {
  Problem p;
  p.system.b = 2;
  p.system.c = 2;
  p.params.epsilon = 2 * pi / 512;
  p.velocity.left = 2;
  p.velocity.right = 1;
  p.initial["v"] = InitialData::riemann(2, 1);
  const auto m = make_model(p);
  const Trajectory t = run(*m, {0.5, 0.2, {0.1}});
  const auto r = weak_residual(*m, p, t.snapshots, ResidualEquation::Density, 2);
  CHECK(r.sup_per_test[0] < 1e-12);
  CHECK(r.sup > 0.0);
  CHECK(std::isfinite(r.sup));
  CHECK_THROWS_AS(weak_residual(*m, p, {t.snapshots[0], t.snapshots[1]}, ResidualEquation::W, 1), Error);
  CHECK_THROWS_AS(weak_residual(*m, p, t.snapshots, ResidualEquation::Z, 1), Error);
}
