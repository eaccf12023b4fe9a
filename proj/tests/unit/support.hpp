#pragma once

#include <cmath>
#include <random>

#include "dshock/grid.hpp"

namespace dshock::test {

inline Field random_field(const Grid& g, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Field f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = d(rng);
  return f;
}

inline double plain_sum(const Field& f) {
  long double s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i];
  return static_cast<double>(s);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace dshock::test

namespace dshock {
inline double sup_diff(const Field& a, const Field& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}
inline double l1(const Field& f) {
  double s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::abs(f[i]);
  return s * f.grid().cell_measure();
}
}  // namespace dshock
