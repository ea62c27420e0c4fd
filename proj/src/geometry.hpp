#pragma once

#include <complex>
#include <span>
#include <vector>

#include "spectral.hpp"

namespace ccdf {

/// Planar point stored as x + i y.
using Point = std::complex<double>;

/// Closed immersed planar curve sampled at x_j = 2 pi j / N on the parameter
/// circle. Periodic closure is implicit. Immutable after construction.
class ClosedCurve {
 public:
  static constexpr int kMinSamples = 16;

  /// Throws ErrorKind::invalid_argument for bad sample counts or non-finite
  /// points and ErrorKind::degenerate_curve when the discrete speed vanishes.
  explicit ClosedCurve(std::vector<Point> points);

  /// Counterclockwise circle traversed omega times (omega < 0 runs clockwise).
  static ClosedCurve circle(int omega, double radius, int samples, Point centre = {});

  int size() const noexcept { return static_cast<int>(points_.size()); }
  std::span<const Point> points() const noexcept { return points_; }
  Point operator[](int i) const { return points_[static_cast<size_t>(i)]; }

  ClosedCurve scaled(double factor) const;
  ClosedCurve translated(Point offset) const;
  ClosedCurve rotated(double angle) const;
  /// Same image traversed in the opposite direction.
  ClosedCurve reversed() const;

 private:
  struct Unchecked {};
  ClosedCurve(std::vector<Point> points, Unchecked) : points_(std::move(points)) {}
  std::vector<Point> points_;
};

struct Frame {
  std::vector<double> speed;  // |gamma_x|
  std::vector<Point> tangent;
  std::vector<Point> normal;  // tangent rotated by +pi/2
  std::vector<double> curvature;
};

Frame tangent_normal_curvature(const ClosedCurve& curve);

/// d/ds = |gamma_x|^{-1} d/dx applied to a scalar field on the samples.
std::vector<double> arclength_derivative(std::span<const double> field, std::span<const double> speed);

/// Arclength coordinate s(x_j) with s(x_0) = 0, computed spectrally.
std::vector<double> arclength_coordinate(std::span<const double> speed);

/// Arclength integral of a sampled field: int field ds.
double arclength_integral(std::span<const double> field, std::span<const double> speed);

struct CurveMetrics {
  double length = 0.0;
  double signed_area = 0.0;
  int omega = 0;
  double turning_raw = 0.0;  // (1/2pi) int k ds before rounding
  bool turning_consistent = true;  // |turning_raw - omega| < 1e-3
  double k_bar = 0.0;
  double K_osc = 0.0;
  double k_max_abs = 0.0;
  Point centroid{};  // arclength-weighted
};

/// Throws ErrorKind::non_closed_curvature if the raw turning number is more
/// than 0.1 away from an integer.
CurveMetrics metrics(const ClosedCurve& curve);

struct ResampleResult {
  ClosedCurve curve;
  bool under_resolved = false;
  double high_band_fraction = 0.0;
};

/// Resamples at equal arclength spacing using the trigonometric interpolant of
/// the positions. The first sample is kept fixed.
ResampleResult resample_by_arclength(const ClosedCurve& curve, int samples_out);

/// Fourier coefficients a_n, |n| <= n_max, of f = k - 1 on the curve rescaled
/// to length 2 pi omega, as a function of arclength on R / (2 pi omega Z).
struct FourierModes {
  int omega = 0;
  int n_max = 0;
  std::vector<spectral::cplx> coefficients;  // index n + n_max

  spectral::cplx at(int n) const { return coefficients.at(static_cast<size_t>(n + n_max)); }
  /// 2 pi omega sum_{n != 0} |a_n|^2, which equals e = K_osc / (2 pi omega).
  double parseval_energy() const;
};

/// Throws ErrorKind::undefined_expansion when the turning number is zero.
/// Clockwise curves are reversed first so that omega > 0.
FourierModes fourier_of_curvature(const ClosedCurve& curve, int n_max);

/// E_tr = 2 pi omega (|a_omega|^2 + |a_{-omega}|^2).
double translation_mode_energy(const FourierModes& modes, int omega);

}  // namespace ccdf
