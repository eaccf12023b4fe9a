#include "doctest.h"
#include "dshock/error.hpp"
#include "dshock/transport.hpp"
#include "dshock/velocity.hpp"
#include "support.hpp"

using namespace dshock;

namespace {

// Cell-by-cell exchange written out directly: every cell sends X|u| dt/eps
// to the neighbor its velocity points at.
Field exchange_reference(const Field& X, const Field& u, double eps, double b) {
  const std::size_t n = X.size();
  Field out(X.grid());
  for (std::size_t i = 0; i < n; ++i) {
    const double flow = b / eps * X[i] * std::abs(u[i]);
    out[i] -= flow;
    if (u[i] > 0) out[(i + 1) % n] += flow;
    if (u[i] < 0) out[(i + n - 1) % n] += flow;
  }
  return out;
}

}  // namespace

TEST_CASE("transport rhs trivial cases") {
  const Grid g = Grid::make(1, 16);
  std::mt19937_64 rng(31);
  const Field X = test::random_field(g, rng);
  CHECK(transport_rhs(X, Field(g), g.spacing(), 1.0).max_abs() == 0.0);
  CHECK(transport_rhs(Field::constant(g, 2.0), Field::constant(g, 0.7), g.spacing(), 1.0).max_abs() < 1e-13);
  CHECK_THROWS_AS(transport_rhs(X, Field(Grid::make(1, 17)), 0.1, 1.0), Error);
}

TEST_CASE("transport rhs equals the cell exchange and conserves mass") {
  std::mt19937_64 rng(32);
  const Grid g = Grid::make(1, 16);
  for (int rep = 0; rep < 50; ++rep) {
    const Field X = test::random_field(g, rng, -2, 2);
    const Field u = test::random_field(g, rng, -3, 3);
    const double b = rep % 2 ? 2.0 : 1.0;
    const Field r = transport_rhs(X, u, g.spacing(), b);
    CHECK(sup_diff(r, exchange_reference(X, u, g.spacing(), b)) < 1e-12);
    long double s = 0;
    long double scale = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      s += r[i];
      scale += std::abs(r[i]);
    }
    CHECK(std::abs(static_cast<double>(s)) <= 1e-12 * (1 + static_cast<double>(scale)));
  }
}

TEST_CASE("transport rhs reduces to upwinding for positive velocity") {
  std::mt19937_64 rng(33);
  const Grid g = Grid::make(1, 40);
  const Field X = test::random_field(g, rng);
  const Field u = test::random_field(g, rng, 0.1, 2.0);
  const double eps = g.spacing(), b = 1.5;
  const Field r = transport_rhs(X, u, eps, b);
  for (std::size_t i = 0; i < 40; ++i) {
    const std::size_t im = (i + 39) % 40;
    CHECK(std::abs(r[i] + b / eps * (X[i] * u[i] - X[im] * u[im])) < 1e-13 * (1 + std::abs(r[i])));
  }
}

TEST_CASE("Euler transport is positive and L1-monotone under the step bound") {
  std::mt19937_64 rng(34);
  const Grid g = Grid::make(1, 64);
  const double eps = g.spacing();
  for (int rep = 0; rep < 20; ++rep) {
    Field X = test::random_field(g, rng, 0, 1);
    const Field u = test::random_field(g, rng, -2, 2);
    const double dt = eps / u.max_abs();
    for (int k = 0; k < 50; ++k) {
      const double before = l1(X);
      const Field r = transport_rhs(X, u, eps, 1.0);
      for (std::size_t i = 0; i < X.size(); ++i) X[i] += dt * r[i];
      CHECK(l1(X) <= before + 1e-12);
      for (std::size_t i = 0; i < X.size(); ++i) CHECK(X[i] >= -1e-15);
    }
  }
}

TEST_CASE("2-D transport") {
  std::mt19937_64 rng(35);
  const std::size_t n = 8;
  const Grid g = Grid::make(2, n);
  const Field X = test::random_field(g, rng);
  const Field u = test::random_field(g, rng, -1, 1);
  const Field v = test::random_field(g, rng, -1, 1);
  CHECK(transport_rhs_2d(X, Field(g), Field(g), g.spacing()).max_abs() == 0.0);
  const Field r = transport_rhs_2d(X, u, v, g.spacing());
  long double s = 0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r[i];
  CHECK(std::abs(static_cast<double>(s)) < 1e-12 * (1 + r.max_abs()));

  // v = 0 reduces to the row-wise 1-D stencil.
  const Field r0 = transport_rhs_2d(X, u, Field(g), g.spacing());
  const Grid g1 = Grid::make(1, n);
  for (std::size_t iy = 0; iy < n; ++iy) {
    Field Xr(g1), ur(g1);
    for (std::size_t ix = 0; ix < n; ++ix) {
      Xr[ix] = X.at(ix, iy);
      ur[ix] = u.at(ix, iy);
    }
    const Field r1 = transport_rhs(Xr, ur, g.spacing(), 1.0);
    for (std::size_t ix = 0; ix < n; ++ix) CHECK(r0.at(ix, iy) == r1[ix]);
  }
  try {
    transport_rhs_2d(Field(g1), Field(g1), Field(g1), 0.1);
    FAIL("expected dimension error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedDimension);
  }
}

TEST_CASE("flux family parsing") {
  CHECK(FluxFunction::parse("tanh_scaled(2)")(0.5, 9) == doctest::Approx(std::tanh(1.0)));
  CHECK(FluxFunction::parse("sin_sum(1, -0.5)")(1.0, 2.0) == doctest::Approx(std::sin(0.0)));
  CHECK(FluxFunction::parse("const(-1.5)")(3, 4) == -1.5);
  CHECK(FluxFunction::parse("const(-1.5)").bound() == 1.5);
  CHECK(FluxFunction::parse("tanh_scaled(3)").bound() == 1.0);
  for (const char* id : {"exp(1)", "tanh_scaled", "tanh_scaled(1,2)", "sin_sum(1)", "const(x)", "const(1"}) {
    try {
      FluxFunction::parse(id);
      FAIL("expected invalid flux for " << id);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidFlux);
    }
  }
  const FluxFunction f = FluxFunction::sin_sum(0.25, 3);
  CHECK(FluxFunction::parse(f.to_string()) == f);
}

TEST_CASE("nonlinear 2x2 system") {
  std::mt19937_64 rng(36);
  const Grid g = Grid::make(1, 64);
  const double eps = g.spacing();
  Field u = test::random_field(g, rng, -1, 1);
  Field v = test::random_field(g, rng, -1, 1);
  const auto zero = nonlinear_rhs(u, v, FluxFunction::constant(0), FluxFunction::constant(0), eps);
  CHECK(zero.u.max_abs() == 0.0);
  CHECK(zero.v.max_abs() == 0.0);

  const auto only_u = nonlinear_rhs(u, Field(g), FluxFunction::tanh_scaled(1), FluxFunction::constant(0), eps);
  CHECK(only_u.v.max_abs() == 0.0);
  CHECK(only_u.u.max_abs() > 0.0);

  const FluxFunction f = FluxFunction::tanh_scaled(1.5), gf = FluxFunction::sin_sum(1, 1);
  const double dt = eps / std::max(f.bound(), gf.bound());
  for (int k = 0; k < 100; ++k) {
    const auto r = nonlinear_rhs(u, v, f, gf, eps);
    long double su = 0, sv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      su += r.u[i];
      sv += r.v[i];
    }
    CHECK(std::abs(static_cast<double>(su)) < 1e-12 * (1 + r.u.max_abs()) * u.size());
    CHECK(std::abs(static_cast<double>(sv)) < 1e-12 * (1 + r.v.max_abs()) * u.size());
    const double lu = l1(u), lv = l1(v);
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] += dt * r.u[i];
      v[i] += dt * r.v[i];
    }
    CHECK(l1(u) <= lu + 1e-12);
    CHECK(l1(v) <= lv + 1e-12);
  }
}
