#include "dshock/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dshock/error.hpp"
#include "spectral.hpp"

namespace dshock {
namespace {

// Below this many taps direct summation beats the FFT round trip.
constexpr int kSpectralMinTaps = 33;
constexpr std::size_t kSpectralMinCells = 64;

double exponent_factor(BumpShape shape) { return shape == BumpShape::Standard ? 1.0 : 2.0; }

void check_width(const Kernel& k) {
  const std::size_t n = k.grid.cells_per_axis();
  if (2 * static_cast<std::size_t>(k.half_width) >= n)
    throw Error(ErrorKind::KernelTooWide, "kernel half-width " + std::to_string(k.half_width) +
                                              " cells is not below N/2 = " + std::to_string(n / 2));
}

bool use_spectral(const Kernel& k, ConvolutionMethod method) {
  if (method == ConvolutionMethod::Direct) return false;
  if (method == ConvolutionMethod::Spectral) return k.spectrum != nullptr;
  return k.spectrum != nullptr && 2 * k.half_width + 1 >= kSpectralMinTaps;
}

// out[i] = h * sum_j in[(i - j) mod n] * taps[j + r], for a strided line.
void direct_line(const double* in, std::size_t stride, std::size_t n, const std::vector<double>& taps,
                 int r, double h, std::vector<double>& ext, double* out) {
  const auto rr = static_cast<std::size_t>(r);
  ext.resize(n + 2 * rr);
  for (std::size_t i = 0; i < n; ++i) ext[i + rr] = in[i * stride];
  for (std::size_t i = 0; i < rr; ++i) {
    ext[i] = in[(n - rr + i) * stride];
    ext[n + rr + i] = in[i * stride];
  }
  const std::size_t width = taps.size();
  for (std::size_t i = 0; i < n; ++i) {
    // ext[i + r - j] for j = -r..r  <=>  ext[i + 2r - m] for m = 0..2r
    const double* base = ext.data() + i + 2 * rr;
    double acc = 0.0;
    for (std::size_t m = 0; m < width; ++m) acc += base[-static_cast<std::ptrdiff_t>(m)] * taps[m];
    out[i * stride] = h * acc;
  }
}

void line(const double* in, std::size_t stride, std::size_t n, const Kernel& k, bool derivative,
          bool spectral, std::vector<double>& scratch, std::vector<double>& line_buf, double* out) {
  const double h = k.grid.spacing();
  if (!spectral) {
    direct_line(in, stride, n, derivative ? k.derivative_weights : k.weights, k.half_width, h,
                scratch, out);
    return;
  }
  line_buf.resize(2 * n);
  for (std::size_t i = 0; i < n; ++i) line_buf[i] = in[i * stride];
  std::span<const double> src(line_buf.data(), n);
  std::span<double> dst(line_buf.data() + n, n);
  if (derivative)
    detail::spectral_convolve(src, *k.spectrum, h, {}, dst);
  else
    detail::spectral_convolve(src, *k.spectrum, h, dst, {});
  for (std::size_t i = 0; i < n; ++i) out[i * stride] = dst[i];
}

// Applies the kernel (or its derivative) along `axis` of a field.
Field along_axis(const Field& field, const Kernel& k, int axis, bool derivative,
                 ConvolutionMethod method) {
  const Grid& g = field.grid();
  const std::size_t n = g.cells_per_axis();
  Field out(g);
  const bool spectral = use_spectral(k, method);
  std::vector<double> scratch, buf;
  if (g.dimension() == 1) {
    line(field.values().data(), 1, n, k, derivative, spectral, scratch, buf, out.data().data());
    return out;
  }
  const double* src = field.values().data();
  double* dst = out.data().data();
  for (std::size_t l = 0; l < n; ++l) {
    if (axis == 0)
      line(src + l * n, 1, n, k, derivative, spectral, scratch, buf, dst + l * n);
    else
      line(src + l, n, n, k, derivative, spectral, scratch, buf, dst + l);
  }
  return out;
}

void check_compatible(const Field& field, const Kernel& k) {
  if (field.grid().cells_per_axis() != k.grid.cells_per_axis() ||
      field.grid().spacing() != k.grid.spacing())
    throw Error(ErrorKind::IncompatibleFields, "kernel was built for a different grid");
  check_width(k);
}

}  // namespace

double bump_value(BumpShape shape, double s) {
  const double q = 1.0 - s * s;
  if (q <= 0.0) return 0.0;
  return std::exp(-exponent_factor(shape) / q);
}

double bump_derivative(BumpShape shape, double s) {
  const double q = 1.0 - s * s;
  if (q <= 0.0) return 0.0;
  const double c = exponent_factor(shape);
  return std::exp(-c / q) * (-2.0 * c * s / (q * q));
}

double bump_mass(BumpShape shape) {
  // The integrand is flat to all orders at +-1, so the trapezoid rule converges
  // spectrally.
  auto compute = [](BumpShape sh) {
    constexpr int m = 20000;
    const double ds = 2.0 / m;
    double sum = 0.0;
    for (int i = 1; i < m; ++i) sum += bump_value(sh, -1.0 + i * ds);
    return sum * ds;
  };
  static const double standard = compute(BumpShape::Standard);
  static const double narrow = compute(BumpShape::Narrow);
  return shape == BumpShape::Standard ? standard : narrow;
}

double Kernel::max_weight() const { return *std::max_element(weights.begin(), weights.end()); }

Kernel build_kernel(const Grid& grid, double scale_exponent, double epsilon, BumpProfile profile) {
  if (!(scale_exponent > 0.0 && scale_exponent <= 1.0))
    throw Error(ErrorKind::InvalidParams,
                "mollifier exponent must lie in (0, 1], got " + std::to_string(scale_exponent));
  if (!(epsilon > 0.0))
    throw Error(ErrorKind::InvalidParams, "epsilon must be positive");
  return build_kernel_with_scale(grid, std::pow(epsilon, scale_exponent), profile);
}

Kernel build_kernel_with_scale(const Grid& grid, double scale, BumpProfile profile) {
  const double h = grid.spacing();
  const double radius = profile.support * scale;
  if (!(profile.support > 0.0) || !(radius >= 2.0 * h))
    throw Error(ErrorKind::KernelTooNarrow,
                "kernel support " + std::to_string(radius) + " spans fewer than 2 cells (h = " +
                    std::to_string(h) + "); increase the width or refine the grid");

  Kernel k{grid, 0, {}, {}, scale, profile, nullptr};
  const int r = static_cast<int>(std::floor(radius / h));
  k.half_width = r;
  const std::size_t width = static_cast<std::size_t>(2 * r + 1);
  k.weights.assign(width, 0.0);
  k.derivative_weights.assign(width, 0.0);

  const double mass = bump_mass(profile.shape);
  for (int j = -r; j <= r; ++j) {
    const double s = j * h / radius;
    k.weights[static_cast<std::size_t>(j + r)] = bump_value(profile.shape, s) / (radius * mass);
  }
  double sum = 0.0;
  for (int j = 1; j <= r; ++j) sum += 2.0 * k.weights[static_cast<std::size_t>(j + r)];
  sum += k.weights[static_cast<std::size_t>(r)];
  const double renorm = 1.0 / (h * sum);
  for (double& w : k.weights) w *= renorm;

  // Derivative taps are scaled so that linear functions differentiate exactly:
  // -h * sum_j d_j * (j h) = 1.
  double moment = 0.0;
  for (int j = 1; j <= r; ++j) {
    const double s = j * h / radius;
    const double d = bump_derivative(profile.shape, s);
    k.derivative_weights[static_cast<std::size_t>(r + j)] = d;
    k.derivative_weights[static_cast<std::size_t>(r - j)] = -d;
    moment -= 2.0 * d * j * h * h;
  }
  for (double& d : k.derivative_weights) d /= moment;

  const std::size_t n = grid.cells_per_axis();
  if (n >= kSpectralMinCells && 2 * static_cast<std::size_t>(r) < n)
    k.spectrum = detail::make_spectrum(n, k.weights, k.derivative_weights);
  return k;
}

Field convolve(const Field& field, const Kernel& kernel, ConvolutionMethod method) {
  check_compatible(field, kernel);
  if (field.grid().dimension() == 1) return along_axis(field, kernel, 0, false, method);
  return along_axis(along_axis(field, kernel, 0, false, method), kernel, 1, false, method);
}

Field convolve_derivative(const Field& field, const Kernel& kernel, int axis,
                          ConvolutionMethod method) {
  check_compatible(field, kernel);
  const int dim = field.grid().dimension();
  if (axis < 0 || axis >= dim)
    throw Error(ErrorKind::UnsupportedDimension, "derivative axis out of range");
  if (dim == 1) return along_axis(field, kernel, 0, true, method);
  const int other = 1 - axis;
  return along_axis(along_axis(field, kernel, axis, true, method), kernel, other, false, method);
}

std::pair<Field, Field> convolve_with_derivative(const Field& field, const Kernel& kernel) {
  check_compatible(field, kernel);
  if (field.grid().dimension() != 1 || !use_spectral(kernel, ConvolutionMethod::Auto))
    return {convolve(field, kernel), convolve_derivative(field, kernel)};
  Field v(field.grid()), dv(field.grid());
  detail::spectral_convolve(field.values(), *kernel.spectrum, field.grid().spacing(), v.data(),
                            dv.data());
  return {std::move(v), std::move(dv)};
}

}  // namespace dshock
