#include "dshock/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dshock/error.hpp"

namespace dshock {

double l1_norm(const Field& field) {
  Field a(field.grid());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(field[i]);
  return integrate(a);
}

double sup_error(const Field& a, const Field& b) {
  require_same_grid(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double shock_area(const Field& w) {
  const Field W = primitive(w);
  const std::size_t n = W.size();
  const double mean = std::accumulate(W.values().begin(), W.values().end(), 0.0) / n;
  std::size_t peak = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::abs(W[i] - mean);
    if (d > best) {
      best = d;
      peak = i;
    }
  }
  // The n/4 cells centered on the antipode of the peak.
  const std::size_t count = std::max<std::size_t>(1, n / 4);
  const std::size_t first = peak + n / 2 + n - count / 2;
  std::vector<double> far(count);
  for (std::size_t k = 0; k < count; ++k) far[k] = W[(first + k) % n];
  std::nth_element(far.begin(), far.begin() + count / 2, far.end());
  double baseline = far[count / 2];
  if (count % 2 == 0) {
    const double lower = *std::max_element(far.begin(), far.begin() + count / 2);
    baseline = 0.5 * (baseline + lower);
  }
  double area = 0.0;
  for (std::size_t i = 0; i < n; ++i) area += std::abs(W[i] - baseline);
  return area * w.grid().spacing();
}

double estimate_delta_power(const std::vector<LadderPoint>& ladder) {
  if (ladder.size() < 3)
    throw Error(ErrorKind::InsufficientData, "delta power needs at least three ladder entries");
  double sum = 0.0;
  for (std::size_t k = 1; k < ladder.size(); ++k) {
    const double ratio = ladder[k - 1].epsilon / ladder[k].epsilon;
    if (std::abs(ratio - 2.0) > 2e-6)
      throw Error(ErrorKind::InvalidLadder, "ladder entry " + std::to_string(k) +
                                                " does not halve epsilon (ratio " +
                                                std::to_string(ratio) + ")");
    if (!(ladder[k].value > 0.0) || !(ladder[k - 1].value > 0.0))
      throw Error(ErrorKind::InvalidLadder, "ladder areas must be positive");
    sum += 1.0 + std::log2(ladder[k].value / ladder[k - 1].value);
  }
  return sum / static_cast<double>(ladder.size() - 1);
}

double fit_growth_exponent(const std::vector<LadderPoint>& ladder) {
  if (ladder.size() < 2)
    throw Error(ErrorKind::InsufficientData, "fitting an exponent needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : ladder) {
    if (!(p.value > 0.0) || !(p.epsilon > 0.0))
      throw Error(ErrorKind::InsufficientData, "exponent fit needs positive values");
    const double x = -std::log(p.epsilon);
    const double y = std::log(p.value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(ladder.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

ResidualEquation parse_residual_equation(const std::string& id) {
  if (id == "v" || id == "density") return ResidualEquation::Density;
  if (id == "w") return ResidualEquation::W;
  if (id == "Z" || id == "z") return ResidualEquation::Z;
  throw Error(ErrorKind::Validation, "equation '" + id + "' is not one of v, w, Z");
}

std::string to_string(ResidualEquation eq) {
  switch (eq) {
    case ResidualEquation::Density: return "v";
    case ResidualEquation::W: return "w";
    case ResidualEquation::Z: return "Z";
  }
  return "v";
}

std::vector<std::string> residual_test_functions(int K) {
  std::vector<std::string> names{"1"};
  for (int k = 1; k <= K; ++k) {
    names.push_back("cos" + std::to_string(k) + "x");
    names.push_back("sin" + std::to_string(k) + "x");
  }
  return names;
}

namespace {

// Compensated h * sum f_i g_i.
double inner(const Field& f, const std::vector<double>& g, double h) {
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double term = f[i] * g[i];
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return (sum + comp) * h;
}

}  // namespace

ResidualResult weak_residual(const Model& model, const Problem& problem,
                             const std::vector<CascadeState>& snapshots, ResidualEquation eq,
                             int K) {
  if (snapshots.size() < 3)
    throw Error(ErrorKind::InsufficientData, "weak residual needs at least three snapshots, got " +
                                                 std::to_string(snapshots.size()));
  const double spacing = snapshots[1].time - snapshots[0].time;
  for (std::size_t k = 1; k < snapshots.size(); ++k)
    if (std::abs(snapshots[k].time - snapshots[k - 1].time - spacing) > 1e-9 * (1.0 + spacing))
      throw Error(ErrorKind::InsufficientData, "weak residual needs uniformly spaced snapshots");
  const SystemSpec& sys = problem.system;
  if (sys.family != SystemFamily::PS3 && sys.family != SystemFamily::PS4)
    throw Error(ErrorKind::Validation, "weak residuals are defined for the 1-D cascades");
  if (eq == ResidualEquation::Z && !sys.has_z())
    throw Error(ErrorKind::Validation, "the Z residual needs a ps4 system");

  const Grid& grid = model.grid();
  const double h = grid.spacing();
  const std::size_t n = grid.size();
  const Kernel kernel = density_kernel(grid, problem.params);

  // psi_k and psi_k' sampled at the nodes.
  std::vector<std::vector<double>> psi, dpsi;
  psi.emplace_back(n, 1.0);
  dpsi.emplace_back(n, 0.0);
  for (int k = 1; k <= K; ++k) {
    std::vector<double> c(n), s(n), dc(n), ds(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = grid.node(i);
      c[i] = std::cos(k * x);
      s[i] = std::sin(k * x);
      dc[i] = -k * s[i];
      ds[i] = k * c[i];
    }
    psi.push_back(std::move(c));
    psi.push_back(std::move(s));
    dpsi.push_back(std::move(dc));
    dpsi.push_back(std::move(ds));
  }

  ResidualResult out;
  out.epsilon = h;
  out.sup_per_test.assign(psi.size(), 0.0);
  for (const auto& state : snapshots) {
    const FieldRhs rhs = model.rhs(state);
    auto rhs_of = [&](const char* name) -> const Field& {
      for (const auto& [nm, f] : rhs)
        if (nm == name) return f;
      throw Error(ErrorKind::Validation, std::string("model has no rhs for ") + name);
    };
    const Field& u = state.get("u");
    const Field& v = state.get("v");
    Field target_dt(grid), flux(grid);
    switch (eq) {
      case ResidualEquation::Density: {
        target_dt = convolve(rhs_of("X"), kernel);
        for (std::size_t i = 0; i < n; ++i) flux[i] = sys.v_transport() * u[i] * v[i];
        break;
      }
      case ResidualEquation::W: {
        target_dt = rhs_of("w");
        const Field& w = state.get("w");
        for (std::size_t i = 0; i < n; ++i)
          flux[i] = sys.w_transport() * u[i] * w[i] + sys.w_source() * sys.P(v[i]);
        break;
      }
      case ResidualEquation::Z: {
        target_dt = rhs_of("Z");
        const Field& w = state.get("w");
        const Field& Z = state.get("Z");
        for (std::size_t i = 0; i < n; ++i)
          flux[i] = sys.ps4_coeffs[1] * u[i] * Z[i] + sys.ps4_coeffs[3] * v[i] * w[i];
        break;
      }
    }
    ResidualSample sample;
    sample.time = state.time;
    for (std::size_t k = 0; k < psi.size(); ++k) {
      const double r = inner(target_dt, psi[k], h) - inner(flux, dpsi[k], h);
      sample.per_test.push_back(std::abs(r));
      out.sup_per_test[k] = std::max(out.sup_per_test[k], std::abs(r));
      out.sup = std::max(out.sup, std::abs(r));
    }
    out.samples.push_back(std::move(sample));
  }
  return out;
}

Field characteristics_oracle(const Grid& grid, const VelocitySpec& velocity,
                             const AnalyticProfile& v0, double t, double b) {
  if (grid.dimension() != 1)
    throw Error(ErrorKind::UnsupportedDimension, "characteristics oracle is 1-D");
  if (velocity.kind != VelocityKind::PrescribedAnalytic)
    throw Error(ErrorKind::InvalidParams, "characteristics oracle needs a prescribed velocity");
  const AnalyticProfile& u = velocity.expression;
  const int steps = 1000;
  const double tau = t / steps;
  const std::size_t n = grid.size();
  Field out(grid);
  std::vector<double> feet(n);
  // Backward in time: y' = -b u(y); the log-Jacobian accumulates b u'(y).
  for (std::size_t i = 0; i < n; ++i) {
    double y = grid.node(i);
    double logj = 0.0;
    for (int s = 0; s < steps && t > 0.0; ++s) {
      const double k1 = -b * u(y), l1 = b * u.derivative(y);
      const double y2 = y + 0.5 * tau * k1;
      const double k2 = -b * u(y2), l2 = b * u.derivative(y2);
      const double y3 = y + 0.5 * tau * k2;
      const double k3 = -b * u(y3), l3 = b * u.derivative(y3);
      const double y4 = y + tau * k3;
      const double k4 = -b * u(y4), l4 = b * u.derivative(y4);
      y += tau / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
      logj += tau / 6.0 * (l1 + 2 * l2 + 2 * l3 + l4);
    }
    feet[i] = y;
    out[i] = v0(y) * std::exp(-logj);
  }
  // Foot points must stay ordered: x -> x0 is increasing for a non-folded map.
  for (std::size_t i = 1; i < n; ++i)
    if (!(feet[i] > feet[i - 1]))
      throw Error(ErrorKind::CharacteristicsCrossed,
                  "characteristics crossed before t = " + std::to_string(t));
  return out;
}

}  // namespace dshock
