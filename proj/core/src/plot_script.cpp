#include <algorithm>
#include <fstream>
#include <sstream>

#include "dshock/error.hpp"
#include "dshock/scenario.hpp"

namespace dshock {

namespace {

struct CsvShape {
  std::vector<std::string> columns;
  std::size_t rows = 0;
};

CsvShape inspect(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  CsvShape s;
  std::string line;
  std::getline(in, line);
  std::stringstream ss(line);
  std::string col;
  while (std::getline(ss, col, ',')) s.columns.push_back(col);
  while (std::getline(in, line))
    if (!line.empty()) ++s.rows;
  return s;
}

}  // namespace

std::string plot_script_text(const std::filesystem::path& run_dir,
                             const std::vector<std::string>& files) {
  std::ostringstream g;
  g << "# gnuplot script; run from this directory: gnuplot plot.gp\n";
  g << "set datafile separator ','\n";
  g << "set terminal pngcairo size 1400,900\n";
  g << "set key off\n";
  for (const auto& file : files) {
    const CsvShape shape = inspect(run_dir / file);
    const bool two_d = shape.columns.size() > 1 && shape.columns[1] == "y";
    const std::size_t first = two_d ? 2 : 1;
    std::vector<std::pair<std::string, std::size_t>> fields;
    for (std::size_t c = first; c < shape.columns.size(); ++c) fields.emplace_back(shape.columns[c], c + 1);
    const std::string stem = file.substr(0, file.rfind('.'));
    g << "\n# " << file << "\n";
    g << "set output '" << stem << ".png'\n";
    if (two_d) {
      g << "set multiplot layout 1," << fields.size() << " title '" << stem << "'\n";
      g << "set view map\n";
      for (const auto& [name, col] : fields) {
        g << "set title '" << name << "'\n";
        g << "plot '" << file << "' skip 1 using 1:2:" << col << " with image\n";
      }
      g << "unset multiplot\n";
      continue;
    }
    const std::size_t cells = std::max<std::size_t>(shape.rows, 1);
    std::vector<std::string> panels;
    for (const auto& [name, col] : fields)
      panels.push_back("set title '" + name + "'\nplot '" + file + "' skip 1 using 1:" +
                       std::to_string(col) + " with lines\n");
    for (const auto& [name, col] : fields) {
      if (name != "w" && name != "Z") continue;
      const std::string c = std::to_string(col);
      panels.push_back("set title 'primitive of " + name + "'\ns1 = 0\nplot '" + file +
                       "' skip 1 using 1:(s1 = s1 + $" + c + " * h, s1) with lines\n");
      if (name == "Z")
        panels.push_back("set title 'double primitive of Z'\ns1 = 0\ns2 = 0\nplot '" + file +
                         "' skip 1 using 1:(s1 = s1 + $" + c + " * h, s2 = s2 + s1 * h, s2) with lines\n");
    }
    const std::size_t cols = std::min<std::size_t>(panels.size(), 3);
    const std::size_t rows = (panels.size() + cols - 1) / cols;
    g << "h = 2 * pi / " << cells << "\n";
    g << "set multiplot layout " << rows << "," << cols << " title '" << stem << "'\n";
    for (const auto& p : panels) g << p;
    g << "unset multiplot\n";
  }
  return g.str();
}

std::filesystem::path emit_plot_script(const std::filesystem::path& run_dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(run_dir, ec))
    throw Error(ErrorKind::NothingToPlot, run_dir.string() + " is not a directory");
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(run_dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.rfind("snapshot_", 0) == 0 && entry.path().extension() == ".csv")
      files.push_back(name);
  }
  if (files.empty()) throw Error(ErrorKind::NothingToPlot, "no snapshot CSVs in " + run_dir.string());
  std::sort(files.begin(), files.end());
  const auto out = run_dir / "plot.gp";
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot write " + out.string());
  f << plot_script_text(run_dir, files);
  return out;
}

}  // namespace dshock
