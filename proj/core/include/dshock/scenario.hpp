#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dshock/cascade.hpp"

namespace dshock {

/// A complete run description: problem, time span and outputs.
struct Scenario {
  std::string name = "scenario";
  Problem problem;
  double t_end = 1.0;
  std::vector<double> snapshot_times;
  std::string output_dir = "out";

  /// Problem validation plus snapshot times inside [0, t_end].
  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Parses the flat `dotted.key = value` format. Values are numbers, quoted
/// strings, true/false or arrays of numbers; `#` starts a comment.
/// Throws ErrorKind::Parse (with line and column) or ErrorKind::Validation /
/// InvalidParams for well-formed documents that describe an invalid setup.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical text form; parse_scenario(print_scenario(s)) == s.
std::string print_scenario(const Scenario& scenario);

/// Default alpha, beta, gamma for degree n (gamma only meaningful with Z).
struct DefaultExponents {
  double alpha;
  double beta;
  double gamma;
};
DefaultExponents default_exponents(int n, bool has_z);

/// Formats a double with 17 significant digits.
std::string format_double(double v);

/// Snapshot table as stored on disk.
struct SnapshotTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Writes x[,y] and the named fields of `state`, one row per cell.
void write_snapshot_csv(const CascadeState& state, const std::vector<std::string>& fields,
                        const std::filesystem::path& path);
SnapshotTable read_snapshot_csv(const std::filesystem::path& path);

/// Snapshot file name for the k-th snapshot of a run.
std::string snapshot_file_name(std::size_t index);

/// Writes `plot.gp` into run_dir covering every snapshot CSV listed there.
/// Throws ErrorKind::NothingToPlot when the directory has no snapshots.
std::filesystem::path emit_plot_script(const std::filesystem::path& run_dir);

/// Script text for the given snapshot files (basenames inside run_dir).
std::string plot_script_text(const std::filesystem::path& run_dir,
                             const std::vector<std::string>& files);

}  // namespace dshock
