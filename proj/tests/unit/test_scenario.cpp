#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "dshock/error.hpp"
#include "dshock/integrator.hpp"
#include "dshock/scenario.hpp"
#include "support.hpp"

using namespace dshock;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("document was accepted: " << text);
  return ErrorKind::Io;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("dshock_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("bundled riemann scenario") {
  const Scenario s = load_scenario(fs::path(DSHOCK_SCENARIO_DIR) / "ps3_riemann_table.cfg");
  CHECK(s.name == "ps3_riemann_table");
  CHECK(s.problem.velocity.kind == VelocityKind::ExactRiemann);
  CHECK(s.problem.velocity.left == 2);
  CHECK(s.problem.velocity.right == 1);
  CHECK(s.problem.initial.at("v").kind == InitialData::Kind::Riemann);
  CHECK(s.problem.initial.at("v").left == 2);
  CHECK(s.problem.initial.at("v").right == 1);
  CHECK(s.problem.initial.at("w").kind == InitialData::Kind::Zero);
  CHECK(s.t_end == 1.0);
  CHECK(s.problem.params.n == 2);
}

TEST_CASE("every bundled scenario parses and round trips") {
  int count = 0;
  for (const auto& e : fs::directory_iterator(DSHOCK_SCENARIO_DIR)) {
    if (e.path().extension() != ".cfg") continue;
    CAPTURE(e.path().string());
    const Scenario s = load_scenario(e.path());
    CHECK(parse_scenario(print_scenario(s)) == s);
    ++count;
  }
  CHECK(count >= 3);
}

TEST_CASE("scenario rejects bad exponents and malformed text") {
  CHECK(kind_of("params.n = 2\nparams.alpha = 0.5\n") == ErrorKind::InvalidParams);
  CHECK(kind_of("") == ErrorKind::Parse);
  CHECK(kind_of("# only a comment\n") == ErrorKind::Parse);
  CHECK(kind_of("params.n = \n") == ErrorKind::Parse);
  CHECK(kind_of("params.n = [1, 2\n") == ErrorKind::Parse);
  CHECK(kind_of("params.cfl = 0.5\nparams.cfl = 0.4\n") == ErrorKind::Parse);
  CHECK(kind_of("params.colour = 1\n") == ErrorKind::Validation);
  CHECK(kind_of("system.family = \"ps9\"\n") == ErrorKind::Validation);
  CHECK(kind_of("run.t_end = 1\nrun.snapshots = [2]\n") == ErrorKind::Validation);
  try {
    parse_scenario("name = \"x\"\nparams.cfl = @\n");
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("defaults follow the degree") {
  const Scenario s = parse_scenario("params.n = 3\n");
  CHECK(s.problem.params.alpha == doctest::Approx(0.9 / 4));
  CHECK(s.problem.params.beta == doctest::Approx(0.9 / 8));
  CHECK(s.problem.system.P.degree() == 3);
  const DefaultExponents z = default_exponents(2, true);
  CHECK(z.gamma > 4 * z.alpha);
  CHECK(2 * z.gamma + 4 * z.alpha < 1.0);
}

TEST_CASE("print and parse round trip with randomized values") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int k = 0; k < 20; ++k) {
    Scenario s;
    s.name = "rt" + std::to_string(k);
    s.problem.system.a = u(rng);
    s.problem.system.b = u(rng);
    s.problem.system.c = u(rng);
    s.problem.params.cfl = u(rng) / 6.0;
    s.problem.velocity.kind = VelocityKind::PrescribedAnalytic;
    s.problem.velocity.expression.constant = u(rng);
    s.problem.velocity.expression.sin_modes.push_back({u(rng) / 10, 2});
    AnalyticProfile v0;
    v0.constant = u(rng);
    v0.cos_modes.push_back({u(rng) / 7, 3});
    s.problem.initial["v"] = InitialData::analytic(v0);
    s.t_end = u(rng);
    s.snapshot_times = {s.t_end / 3};
    // Velocity specs carry copies of system.a and params.beta.
    for (VelocitySpec* v : {&s.problem.velocity, &s.problem.velocity_y}) {
      v->a = s.problem.system.a;
      v->beta = s.problem.params.beta;
    }
    const Scenario back = parse_scenario(print_scenario(s));
    CHECK(back == s);
  }
}

TEST_CASE("snapshot csv round trip is bit exact") {
  const Grid g = Grid::make(1, 37);
  std::mt19937_64 rng(4);
  CascadeState s;
  s.set("v", test::random_field(g, rng, -1e6, 1e6));
  s.set("w", test::random_field(g, rng, -1e-9, 1e-9));
  const fs::path dir = scratch_dir("csv");
  write_snapshot_csv(s, {"v", "w"}, dir / "a.csv");
  const SnapshotTable t = read_snapshot_csv(dir / "a.csv");
  REQUIRE(t.columns == std::vector<std::string>{"x", "v", "w"});
  REQUIRE(t.rows.size() == 37);
  for (std::size_t i = 0; i < 37; ++i) {
    CHECK(t.rows[i][0] == g.node(i));
    CHECK(t.rows[i][1] == s.get("v")[i]);
    CHECK(t.rows[i][2] == s.get("w")[i]);
  }
  write_snapshot_csv(s, {"v", "w"}, dir / "b.csv");
  std::ifstream a(dir / "a.csv"), b(dir / "b.csv");
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());
}

TEST_CASE("zero data snapshot on four cells") {
  const Grid g = Grid::make(1, 4);
  CascadeState s;
  s.set("v", Field(g));
  s.set("w", Field(g));
  const fs::path dir = scratch_dir("zero");
  write_snapshot_csv(s, {"v", "w"}, dir / snapshot_file_name(0));
  const SnapshotTable tab = read_snapshot_csv(dir / "snapshot_0000.csv");
  REQUIRE(tab.rows.size() == 4);
  for (const auto& r : tab.rows) {
    CHECK(r[1] == 0.0);
    CHECK(r[2] == 0.0);
  }
}

TEST_CASE("plot script") {
  const fs::path dir = scratch_dir("plot");
  CHECK_THROWS_AS(emit_plot_script(dir), Error);
  try {
    emit_plot_script(dir);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NothingToPlot);
  }
  const Grid g = Grid::make(1, 8);
  CascadeState s;
  s.set("v", Field::constant(g, 1.0));
  s.set("w", Field(g));
  s.set("Z", Field(g));
  write_snapshot_csv(s, {"v", "w", "Z"}, dir / snapshot_file_name(0));
  write_snapshot_csv(s, {"v", "w", "Z"}, dir / snapshot_file_name(1));
  const fs::path script = emit_plot_script(dir);
  std::ifstream in(script);
  std::stringstream text;
  text << in.rdbuf();
  const std::string expected = plot_script_text(dir, {"snapshot_0000.csv", "snapshot_0001.csv"});
  CHECK(text.str() == expected);
  CHECK(expected.find("set output 'snapshot_0001.png'") != std::string::npos);
  CHECK(expected.find("double primitive of Z") != std::string::npos);
  CHECK(expected.find("h = 2 * pi / 8") != std::string::npos);
  CHECK(expected.rfind("# gnuplot script", 0) == 0);
}
