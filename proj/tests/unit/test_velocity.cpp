#include <numbers>

#include "doctest.h"
#include "dshock/error.hpp"
#include "dshock/velocity.hpp"
#include "support.hpp"

using namespace dshock;
using std::numbers::pi;

namespace {

// Brute-force entropy solution for flux a u^2 from step data by minimizing
// over characteristics: the Lax-Oleinik formula on a fine grid of foot points.
double lax_oleinik(double ul, double ur, double a, double x, double t) {
  // Conjugate of f(u) = a u^2 is f*(q) = q^2 / (4a); u = (f*)'((x - y)/t) = (x - y) / (2 a t).
  double best = 1e300, best_y = 0;
  for (int k = -200000; k <= 200000; ++k) {
    const double y = k * 1e-5 * 20.0;  // y in [-40, 40]
    const double u0_int = y < 0 ? ul * y : ur * y;  // primitive of u0
    const double q = (x - y) / t;
    const double val = u0_int + t * q * q / (4 * a);
    if (val < best) {
      best = val;
      best_y = y;
    }
  }
  return (x - best_y) / (2 * a * t);
}

}  // namespace

TEST_CASE("riemann velocity shock and constant states") {
  CHECK(riemann_velocity(2, 1, 1, -1e-9, 1) == 2.0);
  CHECK(riemann_velocity(2, 1, 1, 2.999, 1) == 2.0);
  CHECK(riemann_velocity(2, 1, 1, 3.001, 1) == 1.0);
  CHECK(riemann_velocity(1, 1, 0.3, 0.7, 2.0) == 1.0);
  CHECK(riemann_velocity(1, 2, 1, 3.0, 1.0) == doctest::Approx(1.5));
  CHECK(riemann_velocity(2, 1, 0.5, 1.4, 1.0) == 2.0);  // shock at a (ul + ur) t = 1.5
}

TEST_CASE("riemann velocity agrees with the Lax-Oleinik formula") {
  for (auto [ul, ur, a] : {std::tuple{2.0, 1.0, 1.0}, {1.0, 2.0, 1.0}, {-1.0, 1.5, 0.5}, {1.0, -1.0, 1.0}}) {
    for (double x : {-1.3, -0.2, 0.4, 1.7, 2.6, 3.5}) {
      const double t = 1.0;
      const double ref = lax_oleinik(ul, ur, a, x, t);
      CHECK(riemann_velocity(ul, ur, a, x, t) == doctest::Approx(ref).epsilon(2e-3));
    }
  }
}

TEST_CASE("periodic riemann velocity follows both waves") {
  // Shock from 0 at speed 3, fan from pi spanning speeds 2..4.
  const double t = 0.5;
  CHECK(periodic_riemann_velocity(2, 1, 1, 1.0, t) == 2.0);
  CHECK(periodic_riemann_velocity(2, 1, 1, 1.6, t) == 1.0);
  CHECK(periodic_riemann_velocity(2, 1, 1, pi + 1.5 - 2 * pi, t) == doctest::Approx(1.5));
  CHECK(periodic_riemann_velocity(2, 1, 1, -pi + 0.5, t) == 1.0);
  CHECK(periodic_riemann_velocity(2, 1, 1, -pi + 2.2, t) == 2.0);
  CHECK(periodic_riemann_interaction_time(2, 1, 1) == doctest::Approx(pi));
  CHECK(std::isinf(periodic_riemann_interaction_time(1, 1, 1)));
}

TEST_CASE("sign split reconstructs u and |u| exactly") {
  const Grid g = Grid::make(1, 4);
  Field u(g, {3, -2, 0, 0.5});
  const auto s = sign_split(u);
  CHECK(s.plus == Field(g, {3, 0, 0, 0.5}));
  CHECK(s.minus == Field(g, {0, 2, 0, 0}));
  std::mt19937_64 rng(21);
  const Grid g2 = Grid::make(1, 100);
  const Field r = test::random_field(g2, rng);
  const auto sr = sign_split(r);
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(sr.plus[i] - sr.minus[i] == r[i]);
    CHECK(sr.plus[i] + sr.minus[i] == std::abs(r[i]));
  }
  const auto pos = sign_split(Field::constant(g2, 0.3));
  CHECK(pos.minus.max_abs() == 0.0);
}

TEST_CASE("numeric velocity step") {
  const Grid g = Grid::make(1, 400);
  const double eps = g.spacing();
  const Field c = Field::constant(g, 1.3);
  const double dt = 0.4 * eps / 1.3;
  CHECK(sup_diff(step_velocity_numeric(c, eps, dt, 1.0, false), c) < 1e-14);
  CHECK(sup_diff(step_velocity_numeric(c, eps, dt, 1.0, true), c) < 1e-14);
  try {
    step_velocity_numeric(c, eps, eps, 1.0, false);
    FAIL("expected unstable step");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnstableStep);
  }
}

TEST_CASE("numeric velocity keeps the max principle and tracks the shock") {
  const Grid g = Grid::make(1, 2000);
  const double eps = g.spacing();
  Field u = Field::sample(g, [](double x) { return x < 0 ? 2.0 : 1.0; });
  const double dt = 0.5 * eps / (2 * 2.0);
  const std::size_t interval = numeric_smoothing_interval(eps, 0.1);
  double t = 0;
  std::size_t step = 0;
  double max0 = u.max_abs();
  while (t < 0.2 - 1e-12) {
    ++step;
    u = step_velocity_numeric(u, eps, dt, 1.0, step % interval == 0);
    t += dt;
    CHECK(u.max_abs() <= max0 + 1e-12);
    max0 = u.max_abs();
  }
  // Shock position: where u crosses 1.5 in (0, pi).
  double xs = 0;
  for (std::size_t i = g.cells_per_axis() / 2; i + 1 < g.cells_per_axis(); ++i)
    if (u[i] >= 1.5 && u[i + 1] < 1.5) {
      xs = g.node(i) + g.spacing() * (u[i] - 1.5) / (u[i] - u[i + 1]);
      break;
    }
  CHECK(std::abs(xs - 3 * t) < 2 * eps);
}

TEST_CASE("smoothing interval is ceil(eps^(beta-1))") {
  CHECK(numeric_smoothing_interval(1e-2, 0.5) == 10);
  CHECK(numeric_smoothing_interval(1e-3, 1.0) == 1);
}

TEST_CASE("velocity field is bounded with eps^-beta gradients") {
  VelocitySpec spec;
  spec.left = 2;
  spec.right = 1;
  spec.beta = 0.3;
  std::vector<double> grads, epss;
  for (std::size_t n : {1000u, 2000u, 4000u, 8000u}) {
    const Grid g = Grid::make(1, n);
    const VelocityField vf(g, spec, g.spacing());
    for (double t : {0.0, 0.5, 1.0}) {
      const Field u = vf.at(t);
      CHECK(u.max_abs() <= spec.u_bound() + 1e-12);
    }
    const Field u = vf.at(0.5);
    double grad = 0;
    for (std::size_t i = 0; i < n; ++i) grad = std::max(grad, std::abs(u[(i + 1) % n] - u[i]) / g.spacing());
    grads.push_back(grad);
    epss.push_back(g.spacing());
  }
  // Fitted growth exponent of the gradient against 1/eps.
  const double p = std::log(grads.back() / grads.front()) / std::log(epss.front() / epss.back());
  CHECK(p <= spec.beta + 0.1);
}

TEST_CASE("prescribed velocity is sampled from its profile") {
  VelocitySpec spec;
  spec.kind = VelocityKind::PrescribedAnalytic;
  spec.expression.constant = 2;
  spec.expression.sin_modes.push_back({1.0, 1});
  CHECK(spec.u_bound() == 3.0);
  const Grid g = Grid::make(1, 64);
  const VelocityField vf(g, spec, g.spacing());
  const Field u = vf.at(0.7);
  CHECK(u[10] == doctest::Approx(2 + std::sin(g.node(10))));
}
