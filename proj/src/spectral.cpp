#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include <fftw3.h>

#include "error.hpp"

namespace ccdf::spectral {
namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct FourierTransform::Impl {
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

FourierTransform::FourierTransform(int n) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n < 1) fail(ErrorKind::invalid_argument, "FourierTransform: size must be positive");
  std::lock_guard lock(planner_mutex());
  impl_->in = fftw_alloc_complex(static_cast<size_t>(n));
  impl_->out = fftw_alloc_complex(static_cast<size_t>(n));
  const unsigned flags = FFTW_ESTIMATE;
  impl_->fwd = fftw_plan_dft_1d(n, impl_->in, impl_->out, FFTW_FORWARD, flags);
  impl_->bwd = fftw_plan_dft_1d(n, impl_->in, impl_->out, FFTW_BACKWARD, flags);
}

FourierTransform::~FourierTransform() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(impl_->fwd);
  fftw_destroy_plan(impl_->bwd);
  fftw_free(impl_->in);
  fftw_free(impl_->out);
}

void FourierTransform::forward(std::span<const cplx> in, std::span<cplx> out) {
  auto* buf_in = reinterpret_cast<cplx*>(impl_->in);
  auto* buf_out = reinterpret_cast<cplx*>(impl_->out);
  std::copy(in.begin(), in.end(), buf_in);
  fftw_execute(impl_->fwd);
  const double scale = 1.0 / n_;
  for (int k = 0; k < n_; ++k) out[k] = buf_out[k] * scale;
}

void FourierTransform::inverse(std::span<const cplx> in, std::span<cplx> out) {
  auto* buf_in = reinterpret_cast<cplx*>(impl_->in);
  auto* buf_out = reinterpret_cast<cplx*>(impl_->out);
  std::copy(in.begin(), in.end(), buf_in);
  fftw_execute(impl_->bwd);
  std::copy(buf_out, buf_out + n_, out.begin());
}

FourierTransform& transform(int n) {
  thread_local std::unordered_map<int, std::unique_ptr<FourierTransform>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<FourierTransform>(n);
  return *slot;
}

std::vector<cplx> forward(std::span<const cplx> samples) {
  std::vector<cplx> out(samples.size());
  transform(static_cast<int>(samples.size())).forward(samples, out);
  return out;
}

std::vector<cplx> forward(std::span<const double> samples) {
  std::vector<cplx> tmp(samples.begin(), samples.end());
  return forward(std::span<const cplx>(tmp));
}

std::vector<cplx> inverse(std::span<const cplx> spectrum) {
  std::vector<cplx> out(spectrum.size());
  transform(static_cast<int>(spectrum.size())).inverse(spectrum, out);
  return out;
}

std::vector<cplx> derivative(std::span<const cplx> samples, int order) {
  const int n = static_cast<int>(samples.size());
  auto spec = forward(samples);
  for (int k = 0; k < n; ++k) {
    const cplx ik(0.0, static_cast<double>(wavenumber(k, n)));
    cplx factor = 1.0;
    for (int i = 0; i < order; ++i) factor *= ik;
    spec[k] *= factor;
  }
  return inverse(spec);
}

std::vector<double> derivative(std::span<const double> samples, int order) {
  std::vector<cplx> tmp(samples.begin(), samples.end());
  auto d = derivative(std::span<const cplx>(tmp), order);
  std::vector<double> out(d.size());
  std::transform(d.begin(), d.end(), out.begin(), [](cplx v) { return v.real(); });
  return out;
}

std::pair<cplx, cplx> evaluate_with_derivative(std::span<const cplx> spectrum, double x) {
  const int n = static_cast<int>(spectrum.size());
  const int half = n / 2;
  const cplx step(std::cos(x), std::sin(x));
  cplx rot_pos = step;
  cplx rot_neg = std::conj(step);
  cplx value = spectrum[0];
  cplx deriv = 0.0;
  for (int k = 1; k < half || (k == half && n % 2 == 1); ++k) {
    const cplx pos = spectrum[k] * rot_pos;
    const cplx neg = spectrum[n - k] * rot_neg;
    value += pos + neg;
    deriv += cplx(0.0, k) * (pos - neg);
    rot_pos *= step;
    rot_neg *= std::conj(step);
  }
  if (n % 2 == 0 && n >= 2) {
    // Nyquist slot split symmetrically so that real data interpolate to real values.
    value += spectrum[half] * std::cos(half * x);
    deriv += -spectrum[half] * static_cast<double>(half) * std::sin(half * x);
  }
  return {value, deriv};
}

cplx evaluate(std::span<const cplx> spectrum, double x) { return evaluate_with_derivative(spectrum, x).first; }

double high_band_energy_fraction(std::span<const cplx> spectrum) {
  const int n = static_cast<int>(spectrum.size());
  double total = 0.0;
  double high = 0.0;
  const int cutoff = (n / 2) * 2 / 3;
  for (int k = 1; k < n; ++k) {
    const double e = std::norm(spectrum[k]);
    total += e;
    if (std::abs(wavenumber(k, n)) > cutoff || 2 * k == n) high += e;
  }
  return total > 0.0 ? high / total : 0.0;
}

double integrate(std::span<const double> samples) {
  const double sum = std::accumulate(samples.begin(), samples.end(), 0.0);
  return 2.0 * std::numbers::pi * sum / static_cast<double>(samples.size());
}

}  // namespace ccdf::spectral
