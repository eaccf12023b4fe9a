#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dshock/error.hpp"
#include "dshock/scenario.hpp"

namespace dshock {

std::string snapshot_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%04zu.csv", index);
  return buf;
}

void write_snapshot_csv(const CascadeState& state, const std::vector<std::string>& fields,
                        const std::filesystem::path& path) {
  if (fields.empty()) throw Error(ErrorKind::Validation, "snapshot needs at least one field");
  std::vector<const Field*> cols;
  for (const auto& name : fields) cols.push_back(&state.get(name));
  const Grid& grid = cols.front()->grid();
  for (const Field* f : cols) require_same_grid(*cols.front(), *f);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << "x";
  if (grid.dimension() == 2) out << ",y";
  for (const auto& name : fields) out << ',' << name;
  out << '\n';
  const std::size_t n = grid.cells_per_axis();
  std::string line;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    line = format_double(grid.node(i % n));
    if (grid.dimension() == 2) line += ',' + format_double(grid.node(i / n));
    for (const Field* f : cols) {
      line += ',';
      line += format_double((*f)[i]);
    }
    line += '\n';
    out << line;
  }
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

SnapshotTable read_snapshot_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  SnapshotTable t;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Parse, path.string() + ": missing header");
  {
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) t.columns.push_back(col);
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p <= end) {
      const char* comma = std::find(p, end, ',');
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(p, comma, v);
      if (ec != std::errc() || ptr != comma)
        throw Error(ErrorKind::Parse, path.string() + ": bad number on line " + std::to_string(line_no));
      row.push_back(v);
      p = comma + 1;
    }
    if (row.size() != t.columns.size())
      throw Error(ErrorKind::Parse, path.string() + ": wrong column count on line " + std::to_string(line_no));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace dshock
