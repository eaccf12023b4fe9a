#include "dshock/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dshock/error.hpp"

namespace dshock {

Polynomial Polynomial::monomial(int degree, double coefficient) {
  Polynomial p;
  p.coeffs.assign(static_cast<std::size_t>(std::max(degree, 0)) + 1, 0.0);
  p.coeffs.back() = coefficient;
  return p;
}

double Polynomial::operator()(double v) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * v + *it;
  return acc;
}

double Polynomial::derivative(double v) const {
  double acc = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * v + static_cast<double>(k) * coeffs[k];
  return acc;
}

int Polynomial::degree() const {
  for (std::size_t k = coeffs.size(); k-- > 0;)
    if (coeffs[k] != 0.0) return static_cast<int>(k);
  return -1;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::InvalidParams, msg); }

}  // namespace

void SchemeParams::validate(bool has_z) const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) invalid("epsilon must be positive");
  if (!(cfl > 0.0 && cfl <= 1.0)) invalid("cfl = " + fmt(cfl) + " violates 0 < cfl <= 1");
  if (n < 2) invalid("n = " + std::to_string(n) + " violates n >= 2");
  if (!(alpha > 0.0 && alpha <= 1.0)) invalid("alpha = " + fmt(alpha) + " violates 0 < alpha <= 1");
  if (!(beta > 0.0)) invalid("beta = " + fmt(beta) + " violates beta > 0");
  if (!(beta < alpha))
    invalid("beta = " + fmt(beta) + " violates beta < alpha = " + fmt(alpha));
  if (!(mollifier.support > 0.0)) invalid("mollifier support must be positive");
  if (mollifier.support * std::pow(epsilon, alpha) < 2.0 * epsilon)
    invalid("alpha = " + fmt(alpha) + " violates eps^alpha >= 2 eps (kernel narrower than two cells)");
  if (has_z && !(gamma > 0.0 && gamma <= 1.0))
    invalid("gamma = " + fmt(gamma) + " violates 0 < gamma <= 1");
  if (!enforce_theorem_bounds) return;
  const double cap = 1.0 / (n + 1);
  if (!(alpha < cap))
    invalid("alpha = " + fmt(alpha) + " violates alpha < 1/(n+1) = " + fmt(cap) + " for n = " +
            std::to_string(n));
  if (has_z) {
    const double lo = (n + 2) * alpha;
    if (!(gamma > lo))
      invalid("gamma = " + fmt(gamma) + " violates gamma > (n+2) alpha = " + fmt(lo));
    if (!(2.0 * gamma + lo < 1.0))
      invalid("gamma = " + fmt(gamma) + " violates 2 gamma + (n+2) alpha < 1 (value " +
              fmt(2.0 * gamma + lo) + ")");
  }
}

std::string to_string(SystemFamily family) {
  switch (family) {
    case SystemFamily::PS3: return "ps3";
    case SystemFamily::PS4: return "ps4";
    case SystemFamily::TwoD: return "two_d";
    case SystemFamily::Nonlinear2x2: return "nonlinear_2x2";
  }
  return "ps3";
}

SystemFamily parse_family(const std::string& text) {
  if (text == "ps3") return SystemFamily::PS3;
  if (text == "ps4") return SystemFamily::PS4;
  if (text == "two_d") return SystemFamily::TwoD;
  if (text == "nonlinear_2x2") return SystemFamily::Nonlinear2x2;
  throw Error(ErrorKind::Validation,
              "system.family '" + text + "' is not one of ps3, ps4, two_d, nonlinear_2x2");
}

InitialData Problem::initial_for(const std::string& name) const {
  auto it = initial.find(name);
  return it == initial.end() ? InitialData{} : it->second;
}

void Problem::validate() const {
  params.validate(system.has_z());
  const int deg = system.P.degree();
  if (system.family != SystemFamily::Nonlinear2x2 && deg >= 0 && deg != params.n)
    throw Error(ErrorKind::Validation, "system.P has degree " + std::to_string(deg) +
                                           " but params.n = " + std::to_string(params.n));
  auto check_velocity = [](const VelocitySpec& v, const char* key) {
    if (v.kind == VelocityKind::Numeric && v.a == 0.0)
      throw Error(ErrorKind::Validation, std::string(key) + ".a must be nonzero for numeric velocity");
  };
  check_velocity(velocity, "velocity");
  if (system.family == SystemFamily::TwoD) {
    if (velocity.kind == VelocityKind::Numeric || velocity_y.kind == VelocityKind::Numeric)
      throw Error(ErrorKind::Validation, "two_d systems need exact_riemann or analytic velocities");
  }
  for (const auto& [name, data] : initial) {
    static const char* k1d[] = {"v", "w", "Z", "u"};
    static const char* k2d[] = {"rho", "w"};
    bool ok = false;
    if (system.family == SystemFamily::TwoD) {
      for (const char* k : k2d) ok = ok || name == k;
    } else {
      for (const char* k : k1d) ok = ok || name == k;
    }
    if (!ok)
      throw Error(ErrorKind::Validation, "initial." + name + " is not a field of system " +
                                             to_string(system.family));
  }
}

std::size_t cells_for_epsilon(double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidParams, "epsilon must be positive");
  const double n = std::round(kPeriod / epsilon);
  if (n < 4.0) throw Error(ErrorKind::InvalidGrid, "epsilon " + fmt(epsilon) + " gives fewer than 4 cells");
  return static_cast<std::size_t>(n);
}

const Field& CascadeState::get(const std::string& name) const {
  auto it = fields.find(name);
  if (it == fields.end()) throw Error(ErrorKind::Validation, "state has no field '" + name + "'");
  return it->second;
}

Field& CascadeState::get(const std::string& name) {
  auto it = fields.find(name);
  if (it == fields.end()) throw Error(ErrorKind::Validation, "state has no field '" + name + "'");
  return it->second;
}

void CascadeState::set(const std::string& name, Field f) {
  auto it = fields.find(name);
  if (it == fields.end())
    fields.emplace(name, std::move(f));
  else
    it->second = std::move(f);
}

Kernel density_kernel(const Grid& grid, const SchemeParams& params) {
  return build_kernel(grid, params.alpha, grid.spacing(), params.mollifier);
}

Field w_source(const Field& X, const SystemSpec& spec, const Kernel& kernel_alpha) {
  auto [v, dv] = convolve_with_derivative(X, kernel_alpha);
  const double m = spec.w_source();
  for (std::size_t i = 0; i < v.size(); ++i) dv[i] *= m * spec.P.derivative(v[i]);
  return std::move(dv);
}

Ps3Rhs ps3_rhs(const Field& X, const Field& w, const Field& u, const SystemSpec& spec,
               const Kernel& kernel_alpha) {
  require_same_grid(X, w);
  require_same_grid(X, u);
  const double eps = X.grid().spacing();
  Ps3Rhs r{transport_rhs(X, u, eps, spec.v_transport()), transport_rhs(w, u, eps, spec.w_transport())};
  if (!spec.P.is_zero()) {
    const Field s = w_source(X, spec, kernel_alpha);
    for (std::size_t i = 0; i < s.size(); ++i) r.w[i] -= s[i];
  }
  return r;
}

Ps4Rhs ps4_rhs(const Field& X, const Field& w, const Field& Z, const Field& u,
               const SystemSpec& spec, const Kernel& kernel_alpha, const Kernel& kernel_gamma) {
  require_same_grid(X, Z);
  auto [rx, rw] = ps3_rhs(X, w, u, spec, kernel_alpha);
  const double eps = X.grid().spacing();
  Field rz = transport_rhs(Z, u, eps, spec.ps4_coeffs[1]);
  const Field v = convolve(X, kernel_alpha);
  Field vw(X.grid());
  for (std::size_t i = 0; i < vw.size(); ++i) vw[i] = v[i] * w[i];
  const Field d = convolve_derivative(vw, kernel_gamma);
  for (std::size_t i = 0; i < rz.size(); ++i) rz[i] -= spec.ps4_coeffs[3] * d[i];
  return {std::move(rx), std::move(rw), std::move(rz)};
}

TwoDRhs twod_rhs(const Field& X, const Field& w, const Field& u, const Field& v,
                 const SystemSpec& spec, const Kernel& kernel_alpha) {
  require_same_grid(X, w);
  const double eps = X.grid().spacing();
  TwoDRhs r{transport_rhs_2d(X, u, v, eps), transport_rhs_2d(w, u, v, eps)};
  const bool p = !spec.P.is_zero();
  const bool q = !spec.Q.is_zero();
  if (!p && !q) return r;
  const Field rho = convolve(X, kernel_alpha);
  if (p) {
    const Field dx = convolve_derivative(X, kernel_alpha, 0);
    for (std::size_t i = 0; i < rho.size(); ++i) r.w[i] -= spec.P.derivative(rho[i]) * dx[i];
  }
  if (q) {
    const Field dy = convolve_derivative(X, kernel_alpha, 1);
    for (std::size_t i = 0; i < rho.size(); ++i) r.w[i] -= spec.Q.derivative(rho[i]) * dy[i];
  }
  return r;
}

namespace {

// Samples initial data on a grid; Riemann steps are mollified with `kernel`.
Field initial_field(const Grid& grid, const InitialData& data, const Kernel& kernel) {
  switch (data.kind) {
    case InitialData::Kind::Zero: return Field(grid);
    case InitialData::Kind::Analytic:
      if (grid.dimension() == 1) return Field::sample(grid, [&](double x) { return data.expression(x); });
      return Field::sample(grid, [&](double x, double y) {
        return data.expression(x) + data.expression_y(y);
      });
    case InitialData::Kind::Riemann: {
      // The cell at x = 0 takes the midpoint value so the mollified step is centered.
      auto step = [&](double x) {
        if (std::abs(x) < 0.5 * grid.spacing()) return 0.5 * (data.left + data.right);
        return x < 0.0 ? data.left : data.right;
      };
      Field raw = grid.dimension() == 1
                      ? Field::sample(grid, step)
                      : Field::sample(grid, [&](double x, double) { return step(x); });
      if (data.left == data.right) return raw;
      return convolve(raw, kernel);
    }
  }
  return Field(grid);
}

class CascadeModel1D final : public Model {
 public:
  explicit CascadeModel1D(const Problem& problem)
      : problem_(problem),
        grid_(Grid::make(1, cells_for_epsilon(problem.params.epsilon))),
        kernel_(density_kernel(grid_, problem.params)),
        velocity_(grid_, with_beta(problem.velocity, problem.params.beta), grid_.spacing()) {
    if (problem.system.has_z())
      kernel_gamma_ = build_kernel(grid_, problem.params.gamma, grid_.spacing(), problem.params.mollifier);
    if (problem.velocity.kind == VelocityKind::Numeric)
      smoothing_interval_ = numeric_smoothing_interval(grid_.spacing(), problem.params.beta);
  }

  const Grid& grid() const override { return grid_; }

  CascadeState initial_state() const override {
    CascadeState s;
    s.set("u", velocity_.at(0.0));
    Field X = initial_field(grid_, problem_.initial_for("v"), kernel_);
    s.set("v", convolve(X, kernel_));
    s.set("X", std::move(X));
    s.set("w", initial_field(grid_, problem_.initial_for("w"), kernel_));
    if (problem_.system.has_z()) s.set("Z", initial_field(grid_, problem_.initial_for("Z"), *kernel_gamma_));
    return s;
  }

  FieldRhs rhs(const CascadeState& s) const override {
    const Field& u = s.get("u");
    if (problem_.system.has_z()) {
      auto r = ps4_rhs(s.get("X"), s.get("w"), s.get("Z"), u, problem_.system, kernel_, *kernel_gamma_);
      return {{"X", std::move(r.X)}, {"w", std::move(r.w)}, {"Z", std::move(r.Z)}};
    }
    auto r = ps3_rhs(s.get("X"), s.get("w"), u, problem_.system, kernel_);
    return {{"X", std::move(r.X)}, {"w", std::move(r.w)}};
  }

  void refresh(CascadeState& s, double dt) const override {
    switch (problem_.velocity.kind) {
      case VelocityKind::Numeric: {
        const bool smooth = s.step % smoothing_interval_ == 0;
        s.set("u", step_velocity_numeric(s.get("u"), grid_.spacing(), dt, problem_.velocity.a, smooth));
        break;
      }
      case VelocityKind::ExactRiemann:
        s.set("u", velocity_.at(s.time));
        break;
      case VelocityKind::PrescribedAnalytic:
        break;
    }
    s.set("v", convolve(s.get("X"), kernel_));
  }

  double speed_bound() const override {
    const SystemSpec& sys = problem_.system;
    double m = std::max(std::abs(sys.v_transport()), std::abs(sys.w_transport()));
    if (problem_.velocity.kind == VelocityKind::Numeric) m = std::max(m, 2.0 * std::abs(problem_.velocity.a));
    return m * velocity_.bound();
  }

  std::vector<std::string> output_fields() const override {
    if (problem_.system.has_z()) return {"u", "v", "w", "Z"};
    return {"u", "v", "w"};
  }

  double valid_until() const override { return velocity_.valid_until(); }

 private:
  static VelocitySpec with_beta(VelocitySpec v, double beta) {
    v.beta = beta;
    return v;
  }

  Problem problem_;
  Grid grid_;
  Kernel kernel_;
  std::optional<Kernel> kernel_gamma_;
  VelocityField velocity_;
  std::size_t smoothing_interval_ = 1;
};

class TwoDModel final : public Model {
 public:
  explicit TwoDModel(const Problem& problem)
      : problem_(problem),
        line_(Grid::make(1, cells_for_epsilon(problem.params.epsilon))),
        grid_(Grid::make(2, line_.cells_per_axis())),
        kernel_(density_kernel(grid_, problem.params)),
        vx_(line_, with_beta(problem.velocity, problem.params.beta), line_.spacing()),
        vy_(line_, with_beta(problem.velocity_y, problem.params.beta), line_.spacing()) {}

  const Grid& grid() const override { return grid_; }

  CascadeState initial_state() const override {
    CascadeState s;
    set_velocity(s, 0.0);
    Field X = initial_field(grid_, problem_.initial_for("rho"), kernel_);
    s.set("rho", convolve(X, kernel_));
    s.set("X", std::move(X));
    s.set("w", initial_field(grid_, problem_.initial_for("w"), kernel_));
    return s;
  }

  FieldRhs rhs(const CascadeState& s) const override {
    auto r = twod_rhs(s.get("X"), s.get("w"), s.get("u"), s.get("v"), problem_.system, kernel_);
    return {{"X", std::move(r.rho)}, {"w", std::move(r.w)}};
  }

  void refresh(CascadeState& s, double) const override {
    if (problem_.velocity.kind == VelocityKind::ExactRiemann ||
        problem_.velocity_y.kind == VelocityKind::ExactRiemann)
      set_velocity(s, s.time);
    s.set("rho", convolve(s.get("X"), kernel_));
  }

  double speed_bound() const override { return vx_.bound() + vy_.bound(); }

  std::vector<std::string> output_fields() const override { return {"u", "v", "rho", "w"}; }

  double valid_until() const override { return std::min(vx_.valid_until(), vy_.valid_until()); }

 private:
  static VelocitySpec with_beta(VelocitySpec v, double beta) {
    v.beta = beta;
    return v;
  }

  void set_velocity(CascadeState& s, double t) const {
    const Field ux = vx_.at(t);
    const Field vy = vy_.at(t);
    const std::size_t n = grid_.cells_per_axis();
    Field u(grid_), v(grid_);
    for (std::size_t iy = 0; iy < n; ++iy)
      for (std::size_t ix = 0; ix < n; ++ix) {
        u[iy * n + ix] = ux[ix];
        v[iy * n + ix] = vy[iy];
      }
    s.set("u", std::move(u));
    s.set("v", std::move(v));
  }

  Problem problem_;
  Grid line_;
  Grid grid_;
  Kernel kernel_;
  VelocityField vx_;
  VelocityField vy_;
};

class NonlinearModel final : public Model {
 public:
  explicit NonlinearModel(const Problem& problem)
      : problem_(problem), grid_(Grid::make(1, cells_for_epsilon(problem.params.epsilon))),
        kernel_(density_kernel(grid_, problem.params)) {}

  const Grid& grid() const override { return grid_; }

  CascadeState initial_state() const override {
    CascadeState s;
    s.set("u", initial_field(grid_, problem_.initial_for("u"), kernel_));
    s.set("v", initial_field(grid_, problem_.initial_for("v"), kernel_));
    return s;
  }

  FieldRhs rhs(const CascadeState& s) const override {
    auto r = nonlinear_rhs(s.get("u"), s.get("v"), problem_.system.f, problem_.system.g, grid_.spacing());
    return {{"u", std::move(r.u)}, {"v", std::move(r.v)}};
  }

  void refresh(CascadeState&, double) const override {}

  double speed_bound() const override {
    return std::max(problem_.system.f.bound(), problem_.system.g.bound());
  }

  std::vector<std::string> output_fields() const override { return {"u", "v"}; }

 private:
  Problem problem_;
  Grid grid_;
  Kernel kernel_;
};

}  // namespace

std::unique_ptr<Model> make_model(const Problem& problem) {
  problem.validate();
  switch (problem.system.family) {
    case SystemFamily::PS3:
    case SystemFamily::PS4: return std::make_unique<CascadeModel1D>(problem);
    case SystemFamily::TwoD: return std::make_unique<TwoDModel>(problem);
    case SystemFamily::Nonlinear2x2: return std::make_unique<NonlinearModel>(problem);
  }
  throw Error(ErrorKind::Validation, "unknown system family");
}

}  // namespace dshock
