// dshock: run scenarios and epsilon-ladder studies from the command line.
//
// Exit codes: 0 success, 1 internal error, 2 validation error, 3 diverged run.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "dshock/error.hpp"
#include "dshock/integrator.hpp"
#include "dshock/ladder.hpp"
#include "dshock/scenario.hpp"

namespace fs = std::filesystem;
using namespace dshock;

namespace {

constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kValidation = 2;
constexpr int kDiverged = 3;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BlowUp: return kDiverged;
    case ErrorKind::Io: return kInternal;
    default: return kValidation;
  }
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot write " + out);
  f << text;
}

int cmd_run(const std::string& file, std::optional<double> eps, const std::string& out_opt) {
  Scenario s = load_scenario(file);
  if (eps) {
    s.problem.params.epsilon = *eps;
    s.validate();
  }
  const fs::path out = out_opt.empty() ? fs::path(s.output_dir) : fs::path(out_opt);
  fs::create_directories(out);
  const auto model = make_model(s.problem);
  StepControl control{s.problem.params.cfl, s.t_end, s.snapshot_times};
  std::ofstream index(out / "index.csv", std::ios::binary);
  index << "time,file\n";
  std::size_t k = 0;
  const auto fields = model->output_fields();
  const Trajectory traj = run_streaming(*model, control, [&](const CascadeState& st) {
    const std::string name = snapshot_file_name(k++);
    write_snapshot_csv(st, fields, out / name);
    index << format_double(st.time) << ',' << name << '\n';
  });
  {
    std::ofstream cfg(out / "scenario.cfg", std::ios::binary);
    cfg << print_scenario(s);
  }
  std::ofstream summary(out / "summary.txt", std::ios::binary);
  summary << "epsilon = " << format_double(model->epsilon()) << '\n'
          << "cells = " << model->grid().size() << '\n'
          << "steps = " << traj.steps << '\n'
          << "diverged = " << (traj.diverged ? "true" : "false") << '\n';
  if (traj.diverged) {
    summary << "divergence_time = " << format_double(traj.divergence_time) << '\n'
            << "divergence_field = " << traj.divergence_field << '\n';
    std::cerr << "run diverged at t = " << traj.divergence_time << " in field "
              << traj.divergence_field << '\n';
    return kDiverged;
  }
  std::cerr << "wrote " << k << " snapshots to " << out.string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak asymptotic method laboratory for delta-shock systems"};
  app.require_subcommand(1);

  std::string scenario, out, equation = "v", dir;
  std::optional<double> eps, alpha, beta;
  double eps_start = 4e-3;
  int levels = 4, n = 2, tests = 2, snapshots = 11;
  bool theorem_defaults = false;
  std::size_t cell_cap = std::size_t{1} << 20;

  auto* run = app.add_subcommand("run", "Run one scenario and write CSV snapshots");
  run->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--epsilon", eps, "Override params.epsilon");
  run->add_option("--out", out, "Output directory (default: run.output)");

  auto add_ladder = [&](CLI::App* sub) {
    sub->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    sub->add_option("--eps-start", eps_start, "Coarsest epsilon")->capture_default_str();
    sub->add_option("--levels", levels, "Number of halving levels")->capture_default_str();
    sub->add_option("--cell-cap", cell_cap, "Refuse ladders above this many cells")->capture_default_str();
    sub->add_option("--out", out, "Report CSV path (default: stdout)");
  };
  auto* scale = app.add_subcommand("scale-study", "Primitive-area ladder and delta power");
  add_ladder(scale);
  scale->add_option("--n", n, "Degree of P(v) = v^n")->required();
  scale->add_option("--alpha", alpha, "Override alpha");
  scale->add_option("--beta", beta, "Override beta");
  scale->add_flag("--theorem-defaults", theorem_defaults, "alpha = 0.9/(n+1), beta = alpha/2, unit kernel supports");

  auto* residual = app.add_subcommand("residual-study", "Weak residual decay along a ladder");
  add_ladder(residual);
  residual->add_option("--equation", equation, "v, w or Z")->capture_default_str();
  residual->add_option("--tests", tests, "Fourier test modes K")->capture_default_str();
  residual->add_option("--snapshots", snapshots, "Uniform snapshots per run")->capture_default_str();

  auto* conv = app.add_subcommand("convergence-study", "Error against the characteristics solution");
  add_ladder(conv);

  auto* plot = app.add_subcommand("plot", "Write a gnuplot script for a run directory");
  plot->add_option("--dir", dir, "Run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    if (*run) return cmd_run(scenario, eps, out);
    if (*plot) {
      const auto path = emit_plot_script(dir);
      std::cerr << "wrote " << path.string() << '\n';
      return kOk;
    }
    LadderSpec spec{load_scenario(scenario), eps_start, levels, cell_cap};
    if (*scale) {
      ExponentOverride exps{alpha, beta, theorem_defaults};
      const auto report = run_scale_study(spec, n, exps);
      emit(scale_report_csv(report), out);
      std::cerr << "n = " << n << "  alpha = " << report.params.alpha << "  beta = " << report.params.beta
                << "  mean ratio = " << report.mean_ratio << "  alpha_hat = " << report.alpha_hat << '\n';
      for (const auto& l : report.levels)
        if (l.diverged) return kDiverged;
      return kOk;
    }
    if (*residual) {
      const auto report = run_residual_study(spec, parse_residual_equation(equation), tests, snapshots);
      emit(residual_report_csv(report), out);
      for (const auto& l : report.levels)
        if (l.diverged) return kDiverged;
      return kOk;
    }
    if (*conv) {
      emit(convergence_report_csv(run_convergence_study(spec)), out);
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
