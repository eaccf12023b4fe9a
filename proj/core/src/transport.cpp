#include "dshock/transport.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

#include "dshock/error.hpp"

namespace dshock {

void transport_rhs_into(std::span<const double> density, std::span<const double> velocity,
                        double eps, double b, std::span<double> out) {
  const std::size_t n = density.size();
  const double scale = b / eps;
  // Outgoing flux of cell i to the right and to the left.
  auto right = [&](std::size_t i) { return density[i] * std::max(0.0, velocity[i]); };
  auto left = [&](std::size_t i) { return density[i] * std::max(0.0, -velocity[i]); };
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t im = i == 0 ? n - 1 : i - 1;
    const std::size_t ip = i + 1 == n ? 0 : i + 1;
    out[i] = scale * (right(im) - density[i] * std::abs(velocity[i]) + left(ip));
  }
}

Field transport_rhs(const Field& density, const Field& velocity, double eps, double b) {
  require_same_grid(density, velocity);
  if (density.grid().dimension() != 1)
    throw Error(ErrorKind::UnsupportedDimension, "transport_rhs expects 1-D fields");
  Field out(density.grid());
  transport_rhs_into(density.values(), velocity.values(), eps, b, out.data());
  return out;
}

Field transport_rhs_2d(const Field& density, const Field& velocity_x, const Field& velocity_y,
                       double eps) {
  require_same_grid(density, velocity_x);
  require_same_grid(density, velocity_y);
  const Grid& g = density.grid();
  if (g.dimension() != 2)
    throw Error(ErrorKind::UnsupportedDimension, "transport_rhs_2d expects 2-D fields");
  const std::size_t n = g.cells_per_axis();
  Field out(g);
  const auto X = density.values();
  const auto u = velocity_x.values();
  const auto v = velocity_y.values();
  const double inv = 1.0 / eps;
  for (std::size_t iy = 0; iy < n; ++iy) {
    const std::size_t ym = (iy + n - 1) % n;
    const std::size_t yp = (iy + 1) % n;
    for (std::size_t ix = 0; ix < n; ++ix) {
      const std::size_t xm = (ix + n - 1) % n;
      const std::size_t xp = (ix + 1) % n;
      const std::size_t c = iy * n + ix;
      const std::size_t w = iy * n + xm, e = iy * n + xp;
      const std::size_t s = ym * n + ix, nn = yp * n + ix;
      const double x_part =
          X[w] * std::max(0.0, u[w]) - X[c] * std::abs(u[c]) + X[e] * std::max(0.0, -u[e]);
      const double y_part =
          X[s] * std::max(0.0, v[s]) - X[c] * std::abs(v[c]) + X[nn] * std::max(0.0, -v[nn]);
      out[c] = inv * (x_part + y_part);
    }
  }
  return out;
}

namespace {

std::vector<double> parse_arguments(std::string_view body, std::string_view id) {
  std::vector<double> args;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t comma = body.find(',', pos);
    if (comma == std::string_view::npos) comma = body.size();
    std::string token(body.substr(pos, comma - pos));
    token.erase(std::remove_if(token.begin(), token.end(), [](unsigned char c) { return std::isspace(c); }),
                token.end());
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
      throw Error(ErrorKind::InvalidFlux, "bad argument '" + token + "' in flux '" +
                                              std::string(id) + "'");
    args.push_back(value);
    pos = comma + 1;
  }
  return args;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

FluxFunction FluxFunction::parse(std::string_view id) {
  const auto open = id.find('(');
  const auto close = id.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open ||
      close + 1 != id.size())
    throw Error(ErrorKind::InvalidFlux, "flux identifier '" + std::string(id) +
                                            "' is not of the form name(args)");
  const std::string_view name = id.substr(0, open);
  const auto args = parse_arguments(id.substr(open + 1, close - open - 1), id);
  auto need = [&](std::size_t k) {
    if (args.size() != k)
      throw Error(ErrorKind::InvalidFlux, "flux '" + std::string(name) + "' takes " +
                                              std::to_string(k) + " argument(s)");
  };
  if (name == "tanh_scaled") {
    need(1);
    return tanh_scaled(args[0]);
  }
  if (name == "sin_sum") {
    need(2);
    return sin_sum(args[0], args[1]);
  }
  if (name == "const") {
    need(1);
    return constant(args[0]);
  }
  throw Error(ErrorKind::InvalidFlux,
              "flux '" + std::string(name) +
                  "' is not a bounded builtin (expected tanh_scaled, sin_sum or const)");
}

double FluxFunction::operator()(double u, double v) const {
  switch (kind_) {
    case Kind::TanhScaled: return std::tanh(c1_ * u);
    case Kind::SinSum: return std::sin(c1_ * u + c2_ * v);
    case Kind::Constant: return c1_;
  }
  return 0.0;
}

double FluxFunction::bound() const {
  switch (kind_) {
    case Kind::TanhScaled: return c1_ == 0.0 ? 0.0 : 1.0;
    case Kind::SinSum: return (c1_ == 0.0 && c2_ == 0.0) ? 0.0 : 1.0;
    case Kind::Constant: return std::abs(c1_);
  }
  return 0.0;
}

std::string FluxFunction::to_string() const {
  switch (kind_) {
    case Kind::TanhScaled: return "tanh_scaled(" + format_number(c1_) + ")";
    case Kind::SinSum: return "sin_sum(" + format_number(c1_) + "," + format_number(c2_) + ")";
    case Kind::Constant: return "const(" + format_number(c1_) + ")";
  }
  return "const(0)";
}

NonlinearRhs nonlinear_rhs(const Field& u, const Field& v, const FluxFunction& f,
                           const FluxFunction& g, double eps) {
  require_same_grid(u, v);
  Field fu(u.grid()), gv(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) {
    fu[i] = f(u[i], v[i]);
    gv[i] = g(u[i], v[i]);
  }
  return {transport_rhs(u, fu, eps, 1.0), transport_rhs(v, gv, eps, 1.0)};
}

}  // namespace dshock
