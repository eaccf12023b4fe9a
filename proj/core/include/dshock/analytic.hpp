#pragma once

#include <string>
#include <vector>

namespace dshock {

/// Closed family of periodic profiles: c + sum a_k sin(k x) + sum b_k cos(k x).
struct AnalyticProfile {
  struct Mode {
    double amplitude = 0.0;
    int wavenumber = 1;
    friend bool operator==(const Mode&, const Mode&) = default;
  };

  double constant = 0.0;
  std::vector<Mode> sin_modes;
  std::vector<Mode> cos_modes;

  double operator()(double x) const;
  double derivative(double x) const;
  /// Upper bound of |profile| (constant plus sum of amplitudes).
  double bound() const;
  /// Lower bound of the profile.
  double lower_bound() const;
  bool is_zero() const;

  friend bool operator==(const AnalyticProfile&, const AnalyticProfile&) = default;
};

}  // namespace dshock
