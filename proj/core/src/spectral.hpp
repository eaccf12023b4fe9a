#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace dshock::detail {

// FFT of a periodic kernel extended to the full line of n cells.
struct KernelSpectrum {
  std::size_t n = 0;
  std::vector<std::complex<double>> weights;
  std::vector<std::complex<double>> derivative_weights;
};

std::shared_ptr<const KernelSpectrum> make_spectrum(std::size_t n, std::span<const double> weights,
                                                    std::span<const double> derivative_weights);

// out = h * (in circularly convolved with the kernel). Either output may be
// empty to skip it.
void spectral_convolve(std::span<const double> in, const KernelSpectrum& spectrum, double h,
                       std::span<double> out, std::span<double> derivative_out);

}  // namespace dshock::detail
