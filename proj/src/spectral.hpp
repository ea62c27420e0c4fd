#pragma once

// Trigonometric (Fourier) calculus on the periodic parameter circle [0, 2pi).
// Samples are taken at x_j = 2 pi j / n. Spectra use FFTW's ordering with the
// 1/n normalisation folded into the forward transform, so coefficient k is the
// amplitude of e^{i k x}.

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace ccdf::spectral {

using cplx = std::complex<double>;

class FourierTransform {
 public:
  explicit FourierTransform(int n);
  ~FourierTransform();
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  int size() const noexcept { return n_; }

  /// out[k] = (1/n) sum_j in[j] e^{-2 pi i j k / n}
  void forward(std::span<const cplx> in, std::span<cplx> out);
  /// out[j] = sum_k in[k] e^{2 pi i j k / n}
  void inverse(std::span<const cplx> in, std::span<cplx> out);

 private:
  struct Impl;
  int n_;
  std::unique_ptr<Impl> impl_;
};

/// Per-thread cached transform of size n. Plans are created once per thread.
FourierTransform& transform(int n);

/// Signed wavenumber of spectral slot k; the Nyquist slot maps to 0 so that
/// derivatives of real signals stay real.
inline int wavenumber(int k, int n) noexcept {
  if (2 * k == n) return 0;
  return 2 * k < n ? k : k - n;
}

std::vector<cplx> forward(std::span<const cplx> samples);
std::vector<cplx> forward(std::span<const double> samples);
std::vector<cplx> inverse(std::span<const cplx> spectrum);

/// Derivative of the given order with respect to x.
std::vector<cplx> derivative(std::span<const cplx> samples, int order);
std::vector<double> derivative(std::span<const double> samples, int order);

/// Evaluates the trigonometric interpolant of a spectrum at arbitrary x.
cplx evaluate(std::span<const cplx> spectrum, double x);
/// Value and first derivative of the interpolant in one pass.
std::pair<cplx, cplx> evaluate_with_derivative(std::span<const cplx> spectrum, double x);

/// Fraction of the (mean-free) spectral energy carried by the top third of
/// wavenumbers. Used as an under-resolution indicator.
double high_band_energy_fraction(std::span<const cplx> spectrum);

/// Periodic trapezoid rule: (2 pi / n) sum f_j. Spectrally accurate for
/// smooth periodic integrands.
double integrate(std::span<const double> samples);

}  // namespace ccdf::spectral
