#include "dshock/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dshock/error.hpp"

namespace dshock {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidGrid: return "invalid-grid";
    case ErrorKind::UnsupportedDimension: return "unsupported-dimension";
    case ErrorKind::IncompatibleFields: return "incompatible-fields";
    case ErrorKind::KernelTooNarrow: return "kernel-too-narrow";
    case ErrorKind::KernelTooWide: return "kernel-too-wide";
    case ErrorKind::UnstableStep: return "unstable-step";
    case ErrorKind::InvalidFlux: return "invalid-flux";
    case ErrorKind::InvalidParams: return "invalid-params";
    case ErrorKind::BlowUp: return "blow-up-detected";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::InvalidLadder: return "invalid-ladder";
    case ErrorKind::CharacteristicsCrossed: return "characteristics-crossed";
    case ErrorKind::Parse: return "parse-error";
    case ErrorKind::Validation: return "validation-error";
    case ErrorKind::Io: return "io-error";
    case ErrorKind::NothingToPlot: return "nothing-to-plot";
  }
  return "unknown";
}

BlowUpError::BlowUpError(double time, std::string field, double magnitude)
    : Error(ErrorKind::BlowUp, "non-finite value in field '" + field + "' at t = " +
                                   std::to_string(time) + " (last finite max |value| " +
                                   std::to_string(magnitude) + ")"),
      time_(time),
      field_(std::move(field)),
      magnitude_(magnitude) {}

Grid Grid::make(int dimension, std::size_t cells_per_axis) {
  if (dimension != 1 && dimension != 2)
    throw Error(ErrorKind::InvalidGrid, "grid dimension must be 1 or 2, got " +
                                            std::to_string(dimension));
  if (cells_per_axis < 4)
    throw Error(ErrorKind::InvalidGrid, "grid needs at least 4 cells per axis, got " +
                                            std::to_string(cells_per_axis));
  return Grid(dimension, cells_per_axis, kPeriod / static_cast<double>(cells_per_axis));
}

Field::Field(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw Error(ErrorKind::IncompatibleFields,
                "field has " + std::to_string(values_.size()) + " values, grid has " +
                    std::to_string(grid_.size()) + " cells");
}

Field Field::constant(const Grid& grid, double value) {
  return Field(grid, std::vector<double>(grid.size(), value));
}

bool Field::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double Field::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid()))
    throw Error(ErrorKind::IncompatibleFields, "fields live on different grids");
}

Field shift(const Field& field, long long offset_cells) {
  return shift(field, 0, offset_cells);
}

Field shift(const Field& field, int axis, long long offset_cells) {
  const Grid& g = field.grid();
  if (axis < 0 || axis >= g.dimension())
    throw Error(ErrorKind::UnsupportedDimension,
                "shift axis " + std::to_string(axis) + " on a " +
                    std::to_string(g.dimension()) + "-D field");
  const std::size_t n = g.cells_per_axis();
  const std::size_t k = g.wrap(offset_cells);
  Field out(g);
  if (g.dimension() == 1) {
    for (std::size_t i = 0; i < n; ++i) out[(i + k) % n] = field[i];
    return out;
  }
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      const std::size_t tx = axis == 0 ? (ix + k) % n : ix;
      const std::size_t ty = axis == 1 ? (iy + k) % n : iy;
      out[ty * n + tx] = field.at(ix, iy);
    }
  return out;
}

namespace {

constexpr std::size_t kCompensationThreshold = 100000;

// Neumaier variant of Kahan summation.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      carry += (sum - t) + v;
    else
      carry += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

double integrate(const Field& field) {
  const auto values = field.values();
  if (values.size() > kCompensationThreshold) {
    CompensatedSum acc;
    for (double v : values) acc.add(v);
    return field.grid().cell_measure() * acc.value();
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  return field.grid().cell_measure() * sum;
}

Field primitive(const Field& field) {
  const Grid& g = field.grid();
  if (g.dimension() != 1)
    throw Error(ErrorKind::UnsupportedDimension, "primitive is defined for 1-D fields only");
  Field out(g);
  const double h = g.spacing();
  if (field.size() > kCompensationThreshold) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < field.size(); ++i) {
      acc.add(field[i]);
      out[i] = h * acc.value();
    }
    return out;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    sum += field[i];
    out[i] = h * sum;
  }
  return out;
}

}  // namespace dshock
