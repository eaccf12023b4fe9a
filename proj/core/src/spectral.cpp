#include "spectral.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace dshock::detail {
namespace {

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// The FFTW planner is not reentrant; execution with new-array functions is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

Plans plans_for(std::size_t n) {
  static std::map<std::size_t, Plans> cache;
  std::lock_guard lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  const int len = static_cast<int>(n);
  std::unique_ptr<double, FftwDeleter> real(fftw_alloc_real(n));
  std::unique_ptr<fftw_complex, FftwDeleter> spec(fftw_alloc_complex(n / 2 + 1));
  Plans p;
  p.forward = fftw_plan_dft_r2c_1d(len, real.get(), spec.get(), FFTW_ESTIMATE);
  p.backward = fftw_plan_dft_c2r_1d(len, spec.get(), real.get(), FFTW_ESTIMATE);
  cache.emplace(n, p);
  return p;
}

struct Workspace {
  std::size_t n = 0;
  std::unique_ptr<double, FftwDeleter> real;
  std::unique_ptr<fftw_complex, FftwDeleter> spec;
  std::unique_ptr<fftw_complex, FftwDeleter> product;

  void ensure(std::size_t size) {
    if (n == size) return;
    n = size;
    real.reset(fftw_alloc_real(size));
    spec.reset(fftw_alloc_complex(size / 2 + 1));
    product.reset(fftw_alloc_complex(size / 2 + 1));
  }
};

Workspace& workspace(std::size_t n) {
  thread_local Workspace ws;
  ws.ensure(n);
  return ws;
}

std::vector<std::complex<double>> transform(std::size_t n, std::span<const double> kernel) {
  const Plans plans = plans_for(n);
  Workspace& ws = workspace(n);
  std::fill(ws.real.get(), ws.real.get() + n, 0.0);
  const long long r = static_cast<long long>(kernel.size() / 2);
  const auto len = static_cast<long long>(n);
  for (long long j = -r; j <= r; ++j) {
    const long long idx = ((j % len) + len) % len;
    ws.real.get()[idx] += kernel[static_cast<std::size_t>(j + r)];
  }
  fftw_execute_dft_r2c(plans.forward, ws.real.get(), ws.spec.get());
  std::vector<std::complex<double>> out(n / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = {ws.spec.get()[k][0], ws.spec.get()[k][1]};
  return out;
}

void apply(const Plans& plans, Workspace& ws, const std::vector<std::complex<double>>& kernel,
           double scale, std::span<double> out) {
  const std::size_t m = kernel.size();
  for (std::size_t k = 0; k < m; ++k) {
    const std::complex<double> f{ws.spec.get()[k][0], ws.spec.get()[k][1]};
    const std::complex<double> p = f * kernel[k];
    ws.product.get()[k][0] = p.real();
    ws.product.get()[k][1] = p.imag();
  }
  fftw_execute_dft_c2r(plans.backward, ws.product.get(), ws.real.get());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * ws.real.get()[i];
}

}  // namespace

std::shared_ptr<const KernelSpectrum> make_spectrum(std::size_t n, std::span<const double> weights,
                                                    std::span<const double> derivative_weights) {
  auto s = std::make_shared<KernelSpectrum>();
  s->n = n;
  s->weights = transform(n, weights);
  s->derivative_weights = transform(n, derivative_weights);
  return s;
}

void spectral_convolve(std::span<const double> in, const KernelSpectrum& spectrum, double h,
                       std::span<double> out, std::span<double> derivative_out) {
  const std::size_t n = spectrum.n;
  const Plans plans = plans_for(n);
  Workspace& ws = workspace(n);
  std::copy(in.begin(), in.end(), ws.real.get());
  fftw_execute_dft_r2c(plans.forward, ws.real.get(), ws.spec.get());
  const double scale = h / static_cast<double>(n);
  if (!out.empty()) apply(plans, ws, spectrum.weights, scale, out);
  if (!derivative_out.empty()) apply(plans, ws, spectrum.derivative_weights, scale, derivative_out);
}

}  // namespace dshock::detail
