#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "dshock/grid.hpp"

namespace dshock {

/// Shape of the compactly supported C-infinity bump phi on (-1, 1).
enum class BumpShape {
  Standard,  // exp(-1/(1-s^2))
  Narrow,    // exp(-2/(1-s^2)), more mass near the center
};

/// The bump used to build kernels. `support` rescales the support radius, so
/// phi(s) becomes phi(s/support)/support: still unit mass and C-infinity.
struct BumpProfile {
  BumpShape shape = BumpShape::Standard;
  double support = 1.0;

  friend bool operator==(const BumpProfile&, const BumpProfile&) = default;
};

/// Unnormalized bump value and derivative.
double bump_value(BumpShape shape, double s);
double bump_derivative(BumpShape shape, double s);
/// Integral of bump_value over (-1, 1).
double bump_mass(BumpShape shape);

namespace detail {
struct KernelSpectrum;
}

enum class ConvolutionMethod { Auto, Direct, Spectral };

/// Discrete mollification kernel phi_{eps^a} sampled at cell centers.
///
/// weights[j + r] is the kernel at offset j in [-r, r]; h * sum(weights) == 1
/// after renormalization. derivative_weights holds phi' on the same offsets,
/// exactly antisymmetric so that it sums to zero.
struct Kernel {
  Grid grid;
  int half_width = 0;
  std::vector<double> weights;
  std::vector<double> derivative_weights;
  double scale = 0.0;  // continuous width eps^a (before the support factor)
  BumpProfile profile;
  std::shared_ptr<const detail::KernelSpectrum> spectrum;

  double weight(int offset) const { return weights[static_cast<std::size_t>(offset + half_width)]; }
  double max_weight() const;
};

/// Builds phi_{eps^exponent}. Requires exponent in (0, 1] and a support of at
/// least two cells (ErrorKind::KernelTooNarrow otherwise).
Kernel build_kernel(const Grid& grid, double scale_exponent, double epsilon,
                    BumpProfile profile = {});

/// Same as build_kernel with the continuous width given directly.
Kernel build_kernel_with_scale(const Grid& grid, double scale, BumpProfile profile = {});

/// result[i] = h * sum_j field[i-j] * weights[j]. 2-D fields are convolved
/// with the tensor-product kernel.
Field convolve(const Field& field, const Kernel& kernel,
               ConvolutionMethod method = ConvolutionMethod::Auto);

/// Convolution with phi' (the x-derivative of the mollified field). For 2-D
/// fields `axis` selects the differentiated direction.
Field convolve_derivative(const Field& field, const Kernel& kernel, int axis = 0,
                          ConvolutionMethod method = ConvolutionMethod::Auto);

/// Both convolutions of a 1-D field, sharing one forward transform.
std::pair<Field, Field> convolve_with_derivative(const Field& field, const Kernel& kernel);

}  // namespace dshock
