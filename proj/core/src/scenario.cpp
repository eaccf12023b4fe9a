#include "dshock/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "dshock/error.hpp"

namespace dshock {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

DefaultExponents default_exponents(int n, bool has_z) {
  if (!has_z) {
    const double alpha = 0.9 / (n + 1);
    return {alpha, alpha / 2.0, 0.0};
  }
  // gamma in ((n+2) alpha, (1 - (n+2) alpha) / 2) needs alpha < 1/(3(n+2)).
  const double alpha = 0.9 / (3.0 * (n + 2));
  const double lo = (n + 2) * alpha;
  double gamma = 1.05 * lo;
  const double hi = (1.0 - lo) / 2.0;
  if (gamma >= hi) gamma = 0.5 * (lo + hi);
  return {alpha, alpha / 2.0, gamma};
}

void Scenario::validate() const {
  problem.validate();
  if (!(t_end >= 0.0) || !std::isfinite(t_end))
    throw Error(ErrorKind::Validation, "run.t_end must be a nonnegative number");
  for (double t : snapshot_times)
    if (t < 0.0 || t > t_end)
      throw Error(ErrorKind::Validation, "run.snapshots entry " + format_double(t) +
                                             " lies outside [0, t_end]");
}

namespace {

using Value = std::variant<double, std::string, bool, std::vector<double>>;

struct Entry {
  Value value;
  int line = 0;
};

[[noreturn]] void parse_error(int line, std::size_t col, const std::string& msg) {
  throw Error(ErrorKind::Parse,
              "line " + std::to_string(line) + ", column " + std::to_string(col + 1) + ": " + msg);
}

std::size_t skip_ws(std::string_view s, std::size_t i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
  return i;
}

double parse_number(std::string_view s, std::size_t& i, int line) {
  std::size_t end = i;
  while (end < s.size() && (std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '.' ||
                            s[end] == '-' || s[end] == '+'))
    ++end;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + end, v);
  if (ec != std::errc() || ptr != s.data() + end || end == i)
    parse_error(line, i, "expected a number, found '" + std::string(s.substr(i, end - i)) + "'");
  if (!std::isfinite(v)) parse_error(line, i, "numbers must be finite");
  i = end;
  return v;
}

Value parse_value(std::string_view s, std::size_t& i, int line) {
  if (i >= s.size()) parse_error(line, i, "missing value");
  if (s[i] == '"') {
    std::string out;
    ++i;
    while (i < s.size() && s[i] != '"') {
      if (s[i] == '\\' && i + 1 < s.size()) ++i;
      out.push_back(s[i++]);
    }
    if (i >= s.size()) parse_error(line, i, "unterminated string");
    ++i;
    return out;
  }
  if (s[i] == '[') {
    std::vector<double> arr;
    ++i;
    i = skip_ws(s, i);
    if (i < s.size() && s[i] == ']') {
      ++i;
      return arr;
    }
    while (true) {
      i = skip_ws(s, i);
      arr.push_back(parse_number(s, i, line));
      i = skip_ws(s, i);
      if (i < s.size() && s[i] == ',') {
        ++i;
        continue;
      }
      if (i < s.size() && s[i] == ']') {
        ++i;
        return arr;
      }
      parse_error(line, i, "expected ',' or ']' in array");
    }
  }
  if (s.substr(i, 4) == "true") {
    i += 4;
    return true;
  }
  if (s.substr(i, 5) == "false") {
    i += 5;
    return false;
  }
  return parse_number(s, i, line);
}

std::map<std::string, Entry> parse_document(std::string_view text) {
  std::map<std::string, Entry> doc;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    pos = eol + 1;
    std::size_t i = skip_ws(line, 0);
    if (i == line.size() || line[i] == '#') {
      if (eol == text.size()) break;
      continue;
    }
    const std::size_t key_start = i;
    while (i < line.size() && (std::isalnum(static_cast<unsigned char>(line[i])) || line[i] == '_' ||
                               line[i] == '.'))
      ++i;
    if (i == key_start) parse_error(line_no, i, "expected a key");
    const std::string key(line.substr(key_start, i - key_start));
    if (key.front() == '.' || key.back() == '.' || key.find("..") != std::string::npos)
      parse_error(line_no, key_start, "malformed key '" + key + "'");
    i = skip_ws(line, i);
    if (i >= line.size() || line[i] != '=') parse_error(line_no, i, "expected '=' after key '" + key + "'");
    i = skip_ws(line, i + 1);
    Value v = parse_value(line, i, line_no);
    i = skip_ws(line, i);
    if (i < line.size() && line[i] != '#') parse_error(line_no, i, "unexpected text after value");
    if (doc.count(key)) parse_error(line_no, key_start, "duplicate key '" + key + "'");
    doc.emplace(key, Entry{std::move(v), line_no});
    if (eol == text.size()) break;
  }
  if (doc.empty()) throw Error(ErrorKind::Parse, "line 1, column 1: empty scenario document");
  return doc;
}

// Typed access that records which keys were consumed.
class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> doc) : doc_(std::move(doc)) {}

  bool has(const std::string& key) const { return doc_.count(key) != 0; }

  bool has_prefix(const std::string& prefix) const {
    auto it = doc_.lower_bound(prefix);
    return it != doc_.end() && it->first.compare(0, prefix.size(), prefix) == 0;
  }

  std::set<std::string> children(const std::string& prefix) const {
    std::set<std::string> out;
    for (auto it = doc_.lower_bound(prefix); it != doc_.end(); ++it) {
      if (it->first.compare(0, prefix.size(), prefix) != 0) break;
      const std::string rest = it->first.substr(prefix.size());
      out.insert(rest.substr(0, rest.find('.')));
    }
    return out;
  }

  double number(const std::string& key, double fallback) {
    auto* e = find(key);
    if (!e) return fallback;
    if (auto* d = std::get_if<double>(&e->value)) return *d;
    type_error(key, *e, "a number");
  }

  int integer(const std::string& key, int fallback) {
    const double d = number(key, fallback);
    if (d != std::floor(d) || std::abs(d) > 1e9)
      throw Error(ErrorKind::Validation, key + " must be an integer");
    return static_cast<int>(d);
  }

  std::string string(const std::string& key, const std::string& fallback) {
    auto* e = find(key);
    if (!e) return fallback;
    if (auto* s = std::get_if<std::string>(&e->value)) return *s;
    type_error(key, *e, "a quoted string");
  }

  bool boolean(const std::string& key, bool fallback) {
    auto* e = find(key);
    if (!e) return fallback;
    if (auto* b = std::get_if<bool>(&e->value)) return *b;
    type_error(key, *e, "true or false");
  }

  std::vector<double> array(const std::string& key, std::vector<double> fallback) {
    auto* e = find(key);
    if (!e) return fallback;
    if (auto* a = std::get_if<std::vector<double>>(&e->value)) return *a;
    type_error(key, *e, "an array of numbers");
  }

  void reject_unused() const {
    for (const auto& [key, entry] : doc_)
      if (!used_.count(key))
        throw Error(ErrorKind::Validation,
                    "line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
  }

 private:
  Entry* find(const std::string& key) {
    auto it = doc_.find(key);
    if (it == doc_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }

  [[noreturn]] static void type_error(const std::string& key, const Entry& e, const char* what) {
    throw Error(ErrorKind::Validation,
                "line " + std::to_string(e.line) + ": " + key + " must be " + what);
  }

  std::map<std::string, Entry> doc_;
  std::set<std::string> used_;
};

BumpShape parse_shape(const std::string& s, const std::string& key) {
  if (s == "standard") return BumpShape::Standard;
  if (s == "narrow") return BumpShape::Narrow;
  throw Error(ErrorKind::Validation, key + " '" + s + "' is not one of standard, narrow");
}

const char* shape_name(BumpShape s) { return s == BumpShape::Narrow ? "narrow" : "standard"; }

VelocityKind parse_velocity_kind(const std::string& s, const std::string& key) {
  if (s == "exact_riemann") return VelocityKind::ExactRiemann;
  if (s == "numeric") return VelocityKind::Numeric;
  if (s == "analytic") return VelocityKind::PrescribedAnalytic;
  throw Error(ErrorKind::Validation, key + " '" + s + "' is not one of exact_riemann, numeric, analytic");
}

const char* velocity_kind_name(VelocityKind k) {
  switch (k) {
    case VelocityKind::ExactRiemann: return "exact_riemann";
    case VelocityKind::Numeric: return "numeric";
    case VelocityKind::PrescribedAnalytic: return "analytic";
  }
  return "exact_riemann";
}

InitialData::Kind parse_initial_kind(const std::string& s, const std::string& key) {
  if (s == "zero") return InitialData::Kind::Zero;
  if (s == "riemann") return InitialData::Kind::Riemann;
  if (s == "analytic") return InitialData::Kind::Analytic;
  throw Error(ErrorKind::Validation, key + " '" + s + "' is not one of zero, riemann, analytic");
}

const char* initial_kind_name(InitialData::Kind k) {
  switch (k) {
    case InitialData::Kind::Zero: return "zero";
    case InitialData::Kind::Riemann: return "riemann";
    case InitialData::Kind::Analytic: return "analytic";
  }
  return "zero";
}

std::vector<AnalyticProfile::Mode> parse_modes(const std::vector<double>& flat, const std::string& key) {
  if (flat.size() % 2 != 0)
    throw Error(ErrorKind::Validation, key + " must list amplitude, wavenumber pairs");
  std::vector<AnalyticProfile::Mode> modes;
  for (std::size_t k = 0; k < flat.size(); k += 2) {
    const double wn = flat[k + 1];
    if (wn != std::floor(wn) || wn < 1 || wn > 1e6)
      throw Error(ErrorKind::Validation, key + " wavenumbers must be positive integers");
    modes.push_back({flat[k], static_cast<int>(wn)});
  }
  return modes;
}

std::vector<double> flatten(const std::vector<AnalyticProfile::Mode>& modes) {
  std::vector<double> flat;
  for (const auto& m : modes) {
    flat.push_back(m.amplitude);
    flat.push_back(m.wavenumber);
  }
  return flat;
}

AnalyticProfile read_profile(Reader& r, const std::string& prefix) {
  AnalyticProfile p;
  p.constant = r.number(prefix + "constant", 0.0);
  p.sin_modes = parse_modes(r.array(prefix + "sin", {}), prefix + "sin");
  p.cos_modes = parse_modes(r.array(prefix + "cos", {}), prefix + "cos");
  return p;
}

BumpProfile read_bump(Reader& r, const std::string& prefix) {
  BumpProfile b;
  b.shape = parse_shape(r.string(prefix + "shape", "standard"), prefix + "shape");
  b.support = r.number(prefix + "support", 1.0);
  return b;
}

VelocitySpec read_velocity(Reader& r, const std::string& prefix, double a, double beta) {
  VelocitySpec v;
  v.kind = parse_velocity_kind(r.string(prefix + "kind", "exact_riemann"), prefix + "kind");
  v.a = a;
  v.beta = beta;
  v.left = r.number(prefix + "left", 0.0);
  v.right = r.number(prefix + "right", 0.0);
  v.expression = read_profile(r, prefix);
  v.smoothing = read_bump(r, prefix + "smoothing.");
  return v;
}

Polynomial read_polynomial(Reader& r, const std::string& key, Polynomial fallback) {
  if (!r.has(key)) return fallback;
  Polynomial p;
  p.coeffs = r.array(key, {});
  return p;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Reader r(parse_document(text));
  Scenario s;
  s.name = r.string("name", "scenario");

  Problem& pb = s.problem;
  SystemSpec& sys = pb.system;
  sys.family = parse_family(r.string("system.family", "ps3"));
  sys.a = r.number("system.a", 1.0);
  sys.b = r.number("system.b", 1.0);
  sys.c = r.number("system.c", 1.0);

  SchemeParams& prm = pb.params;
  prm.n = r.integer("params.n", 2);
  if (prm.n < 2) throw Error(ErrorKind::InvalidParams, "params.n must be at least 2");
  const auto defaults = default_exponents(prm.n, sys.has_z());
  prm.epsilon = r.number("params.epsilon", 4e-3);
  prm.alpha = r.number("params.alpha", defaults.alpha);
  prm.beta = r.number("params.beta", defaults.beta);
  prm.gamma = r.number("params.gamma", sys.has_z() ? defaults.gamma : 0.0);
  prm.cfl = r.number("params.cfl", 0.5);
  prm.mollifier = read_bump(r, "params.mollifier.");
  prm.enforce_theorem_bounds = r.boolean("params.enforce_theorem_bounds", true);

  sys.P = read_polynomial(r, "system.P", Polynomial::monomial(prm.n));
  sys.Q = read_polynomial(r, "system.Q", Polynomial{});
  if (r.has("system.ps4")) {
    const auto c = r.array("system.ps4", {});
    if (c.size() != 4) throw Error(ErrorKind::Validation, "system.ps4 must have 4 entries");
    std::copy(c.begin(), c.end(), sys.ps4_coeffs.begin());
  }
  sys.f = FluxFunction::parse(r.string("system.f", "const(0)"));
  sys.g = FluxFunction::parse(r.string("system.g", "const(0)"));

  pb.velocity = read_velocity(r, "velocity.", sys.a, prm.beta);
  if (r.has_prefix("velocity_y.")) {
    pb.velocity_y = read_velocity(r, "velocity_y.", sys.a, prm.beta);
  } else {
    pb.velocity_y = VelocitySpec{};
    pb.velocity_y.a = sys.a;
    pb.velocity_y.beta = prm.beta;
  }

  for (const auto& field : r.children("initial.")) {
    const std::string prefix = "initial." + field + ".";
    InitialData d;
    d.kind = parse_initial_kind(r.string(prefix + "kind", "zero"), prefix + "kind");
    d.left = r.number(prefix + "left", 0.0);
    d.right = r.number(prefix + "right", 0.0);
    d.expression = read_profile(r, prefix);
    d.expression_y = read_profile(r, prefix + "y.");
    pb.initial.emplace(field, std::move(d));
  }

  s.t_end = r.number("run.t_end", 1.0);
  s.snapshot_times = r.array("run.snapshots", {});
  s.output_dir = r.string("run.output", "out");
  r.reject_unused();
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open scenario file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

namespace {

class Printer {
 public:
  void number(const std::string& key, double v) { out_ << key << " = " << format_double(v) << '\n'; }
  void string(const std::string& key, const std::string& v) {
    out_ << key << " = \"";
    for (char c : v) {
      if (c == '"' || c == '\\') out_ << '\\';
      out_ << c;
    }
    out_ << "\"\n";
  }
  void boolean(const std::string& key, bool v) { out_ << key << " = " << (v ? "true" : "false") << '\n'; }
  void array(const std::string& key, const std::vector<double>& v) {
    out_ << key << " = [";
    for (std::size_t i = 0; i < v.size(); ++i) out_ << (i ? ", " : "") << format_double(v[i]);
    out_ << "]\n";
  }
  void blank() { out_ << '\n'; }

  void profile(const std::string& prefix, const AnalyticProfile& p) {
    if (p.constant != 0.0) number(prefix + "constant", p.constant);
    if (!p.sin_modes.empty()) array(prefix + "sin", flatten(p.sin_modes));
    if (!p.cos_modes.empty()) array(prefix + "cos", flatten(p.cos_modes));
  }

  void bump(const std::string& prefix, const BumpProfile& b) {
    if (b.shape != BumpShape::Standard) string(prefix + "shape", shape_name(b.shape));
    if (b.support != 1.0) number(prefix + "support", b.support);
  }

  void velocity(const std::string& prefix, const VelocitySpec& v) {
    string(prefix + "kind", velocity_kind_name(v.kind));
    if (v.left != 0.0) number(prefix + "left", v.left);
    if (v.right != 0.0) number(prefix + "right", v.right);
    profile(prefix, v.expression);
    bump(prefix + "smoothing.", v.smoothing);
  }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

}  // namespace

std::string print_scenario(const Scenario& s) {
  Printer p;
  const Problem& pb = s.problem;
  const SystemSpec& sys = pb.system;
  const SchemeParams& prm = pb.params;
  p.string("name", s.name);
  p.blank();
  p.string("system.family", to_string(sys.family));
  p.number("system.a", sys.a);
  p.number("system.b", sys.b);
  p.number("system.c", sys.c);
  p.array("system.P", sys.P.coeffs);
  if (!sys.Q.coeffs.empty()) p.array("system.Q", sys.Q.coeffs);
  p.array("system.ps4", {sys.ps4_coeffs.begin(), sys.ps4_coeffs.end()});
  p.string("system.f", sys.f.to_string());
  p.string("system.g", sys.g.to_string());
  p.blank();
  p.number("params.epsilon", prm.epsilon);
  p.number("params.n", prm.n);
  p.number("params.alpha", prm.alpha);
  p.number("params.beta", prm.beta);
  p.number("params.gamma", prm.gamma);
  p.number("params.cfl", prm.cfl);
  p.bump("params.mollifier.", prm.mollifier);
  p.boolean("params.enforce_theorem_bounds", prm.enforce_theorem_bounds);
  p.blank();
  p.velocity("velocity.", pb.velocity);
  VelocitySpec plain_y;
  plain_y.a = sys.a;
  plain_y.beta = prm.beta;
  if (!(pb.velocity_y == plain_y)) p.velocity("velocity_y.", pb.velocity_y);
  for (const auto& [name, d] : pb.initial) {
    p.blank();
    const std::string prefix = "initial." + name + ".";
    p.string(prefix + "kind", initial_kind_name(d.kind));
    if (d.left != 0.0) p.number(prefix + "left", d.left);
    if (d.right != 0.0) p.number(prefix + "right", d.right);
    p.profile(prefix, d.expression);
    p.profile(prefix + "y.", d.expression_y);
  }
  p.blank();
  p.number("run.t_end", s.t_end);
  p.array("run.snapshots", s.snapshot_times);
  p.string("run.output", s.output_dir);
  return p.str();
}

}  // namespace dshock
