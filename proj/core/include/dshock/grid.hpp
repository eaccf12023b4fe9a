#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <type_traits>
#include <vector>

namespace dshock {

inline constexpr double kPeriod = 2.0 * std::numbers::pi;

/// Uniform periodic grid on the torus [-pi, pi) (or its square in 2-D).
///
/// Node i sits at x_i = -pi + i*h with h = 2*pi/N. The shift length of the
/// flux-split stencil equals h, so every scenario identifies h with epsilon.
class Grid {
 public:
  /// Throws ErrorKind::InvalidGrid for N < 4 or a dimension other than 1, 2.
  static Grid make(int dimension, std::size_t cells_per_axis);

  int dimension() const noexcept { return dimension_; }
  std::size_t cells_per_axis() const noexcept { return n_; }
  std::size_t size() const noexcept { return dimension_ == 1 ? n_ : n_ * n_; }
  double spacing() const noexcept { return h_; }
  /// Volume of one cell: h in 1-D, h^2 in 2-D.
  double cell_measure() const noexcept { return dimension_ == 1 ? h_ : h_ * h_; }
  double node(std::size_t i) const noexcept {
    return -std::numbers::pi + static_cast<double>(i) * h_;
  }

  std::size_t wrap(long long i) const noexcept {
    const auto n = static_cast<long long>(n_);
    long long r = i % n;
    return static_cast<std::size_t>(r < 0 ? r + n : r);
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  Grid(int dimension, std::size_t n, double h) : dimension_(dimension), n_(n), h_(h) {}

  int dimension_ = 1;
  std::size_t n_ = 0;
  double h_ = 0.0;
};

/// Cell values on a Grid. 2-D fields are row-major: index = iy*N + ix.
class Field {
 public:
  explicit Field(const Grid& grid) : grid_(grid), values_(grid.size(), 0.0) {}
  Field(const Grid& grid, std::vector<double> values);

  static Field constant(const Grid& grid, double value);

  template <class F>
  static Field sample(const Grid& grid, F&& f) {
    Field out(grid);
    const std::size_t n = grid.cells_per_axis();
    // f(x) on a 2-D grid is y-invariant; f(x, y) on a 1-D grid sees y = 0.
    auto eval = [&](double x, double y) {
      if constexpr (std::is_invocable_v<F&, double>) {
        (void)y;
        return f(x);
      } else {
        return f(x, y);
      }
    };
    if (grid.dimension() == 1) {
      for (std::size_t i = 0; i < n; ++i) out.values_[i] = eval(grid.node(i), 0.0);
    } else {
      for (std::size_t iy = 0; iy < n; ++iy)
        for (std::size_t ix = 0; ix < n; ++ix)
          out.values_[iy * n + ix] = eval(grid.node(ix), grid.node(iy));
    }
    return out;
  }

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> data() noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double at(std::size_t ix, std::size_t iy) const noexcept {
    return values_[iy * grid_.cells_per_axis() + ix];
  }

  bool all_finite() const noexcept;
  double max_abs() const noexcept;

  friend bool operator==(const Field&, const Field&) = default;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Throws ErrorKind::IncompatibleFields when the grids differ.
void require_same_grid(const Field& a, const Field& b);

/// result[i] = field[(i - offset) mod N]; 2-D fields shift along x.
Field shift(const Field& field, long long offset_cells);
/// Axis-wise shift of a 2-D field (axis 0 = x, axis 1 = y).
Field shift(const Field& field, int axis, long long offset_cells);

/// Midpoint rule: cell_measure * sum(values). Compensated above 1e5 cells.
double integrate(const Field& field);

/// Discrete antiderivative from -pi: result[i] = h * sum_{j<=i} values[j].
Field primitive(const Field& field);

}  // namespace dshock
