#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "error.hpp"

namespace ccdf {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using spectral::cplx;

struct PositionDerivatives {
  std::vector<cplx> first;
  std::vector<cplx> second;
};

PositionDerivatives position_derivatives(std::span<const Point> z) {
  const int n = static_cast<int>(z.size());
  auto spec = spectral::forward(z);
  std::vector<cplx> d1(n), d2(n);
  for (int k = 0; k < n; ++k) {
    const double w = spectral::wavenumber(k, n);
    d1[k] = spec[k] * cplx(0.0, w);
    d2[k] = -spec[k] * (w * w);
  }
  return {spectral::inverse(d1), spectral::inverse(d2)};
}

std::vector<double> speeds(std::span<const cplx> zx) {
  std::vector<double> g(zx.size());
  std::transform(zx.begin(), zx.end(), g.begin(), [](cplx v) { return std::abs(v); });
  return g;
}

}  // namespace

ClosedCurve::ClosedCurve(std::vector<Point> points) : points_(std::move(points)) {
  const int n = size();
  if (n < kMinSamples || n % 2 != 0) {
    std::ostringstream os;
    os << "closed curve needs an even sample count >= " << kMinSamples << ", got " << n;
    fail(ErrorKind::invalid_argument, os.str());
  }
  for (const auto& p : points_) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) fail(ErrorKind::invalid_argument, "non-finite curve point");
  }
  const auto g = speeds(spectral::derivative(std::span<const Point>(points_), 1));
  const auto [lo, hi] = std::minmax_element(g.begin(), g.end());
  if (!(*lo > 1e-12 * *hi)) fail(ErrorKind::degenerate_curve, "curve is not immersed: discrete speed vanishes");
}

ClosedCurve ClosedCurve::circle(int omega, double radius, int samples, Point centre) {
  if (omega == 0) fail(ErrorKind::invalid_argument, "circle needs a non-zero turning number");
  if (!(radius > 0.0)) fail(ErrorKind::invalid_argument, "circle radius must be positive");
  std::vector<Point> pts(static_cast<size_t>(std::max(samples, 0)));
  for (int j = 0; j < samples; ++j) {
    const double x = kTwoPi * j / samples;
    pts[j] = centre + std::polar(radius, omega * x);
  }
  return ClosedCurve(std::move(pts));
}

ClosedCurve ClosedCurve::scaled(double factor) const {
  if (!(factor > 0.0)) fail(ErrorKind::invalid_argument, "scale factor must be positive");
  auto pts = points_;
  for (auto& p : pts) p *= factor;
  return ClosedCurve(std::move(pts), Unchecked{});
}

ClosedCurve ClosedCurve::translated(Point offset) const {
  auto pts = points_;
  for (auto& p : pts) p += offset;
  return ClosedCurve(std::move(pts), Unchecked{});
}

ClosedCurve ClosedCurve::rotated(double angle) const {
  auto pts = points_;
  const Point r = std::polar(1.0, angle);
  for (auto& p : pts) p *= r;
  return ClosedCurve(std::move(pts), Unchecked{});
}

ClosedCurve ClosedCurve::reversed() const {
  std::vector<Point> pts(points_.size());
  const size_t n = points_.size();
  for (size_t j = 0; j < n; ++j) pts[j] = points_[(n - j) % n];
  return ClosedCurve(std::move(pts), Unchecked{});
}

Frame tangent_normal_curvature(const ClosedCurve& curve) {
  const auto d = position_derivatives(curve.points());
  const int n = curve.size();
  Frame f;
  f.speed = speeds(d.first);
  f.tangent.resize(n);
  f.normal.resize(n);
  f.curvature.resize(n);
  for (int j = 0; j < n; ++j) {
    const double g = f.speed[j];
    f.tangent[j] = d.first[j] / g;
    f.normal[j] = cplx(0.0, 1.0) * f.tangent[j];
    f.curvature[j] = (std::conj(d.first[j]) * d.second[j]).imag() / (g * g * g);
  }
  return f;
}

std::vector<double> arclength_derivative(std::span<const double> field, std::span<const double> speed) {
  auto d = spectral::derivative(field, 1);
  for (size_t j = 0; j < d.size(); ++j) d[j] /= speed[j];
  return d;
}

std::vector<double> arclength_coordinate(std::span<const double> speed) {
  const int n = static_cast<int>(speed.size());
  auto spec = spectral::forward(speed);
  const double mean_speed = spec[0].real();
  std::vector<cplx> prim(n);
  for (int k = 0; k < n; ++k) {
    const int w = spectral::wavenumber(k, n);
    prim[k] = w == 0 ? cplx(0.0) : spec[k] / cplx(0.0, w);
  }
  const auto periodic = spectral::inverse(prim);
  std::vector<double> s(n);
  for (int j = 0; j < n; ++j) {
    s[j] = mean_speed * kTwoPi * j / n + periodic[j].real() - periodic[0].real();
  }
  return s;
}

double arclength_integral(std::span<const double> field, std::span<const double> speed) {
  double sum = 0.0;
  for (size_t j = 0; j < field.size(); ++j) sum += field[j] * speed[j];
  return kTwoPi * sum / static_cast<double>(field.size());
}

CurveMetrics metrics(const ClosedCurve& curve) {
  const auto fr = tangent_normal_curvature(curve);
  const auto z = curve.points();
  const int n = curve.size();
  const auto zx = spectral::derivative(z, 1);

  CurveMetrics m;
  m.length = spectral::integrate(fr.speed);
  std::vector<double> area_density(n);
  Point weighted{};
  for (int j = 0; j < n; ++j) {
    area_density[j] = 0.5 * (std::conj(z[j]) * zx[j]).imag();
    weighted += z[j] * fr.speed[j];
  }
  m.signed_area = spectral::integrate(area_density);
  m.centroid = weighted * (kTwoPi / n) / m.length;

  const double total_curvature = arclength_integral(fr.curvature, fr.speed);
  m.turning_raw = total_curvature / kTwoPi;
  const double rounded = std::round(m.turning_raw);
  if (std::abs(m.turning_raw - rounded) > 0.1) {
    std::ostringstream os;
    os << "total curvature / 2pi = " << m.turning_raw << " is not near an integer (under-resolved curve?)";
    fail(ErrorKind::non_closed_curvature, os.str());
  }
  m.omega = static_cast<int>(rounded);
  m.turning_consistent = std::abs(m.turning_raw - rounded) < 1e-3;
  m.k_bar = total_curvature / m.length;

  std::vector<double> osc(n);
  for (int j = 0; j < n; ++j) {
    const double dk = fr.curvature[j] - m.k_bar;
    osc[j] = dk * dk;
    m.k_max_abs = std::max(m.k_max_abs, std::abs(fr.curvature[j]));
  }
  m.K_osc = m.length * arclength_integral(osc, fr.speed);
  return m;
}

ResampleResult resample_by_arclength(const ClosedCurve& curve, int samples_out) {
  const int n = curve.size();
  const auto z = curve.points();
  const auto zspec = spectral::forward(z);
  const double high = spectral::high_band_energy_fraction(zspec);

  const auto zx = spectral::derivative(z, 1);
  const auto g = speeds(zx);
  const auto gspec = spectral::forward(std::span<const double>(g));
  const double mean_speed = gspec[0].real();
  const double length = kTwoPi * mean_speed;
  // Spectrum of the periodic part P of s(x) = mean_speed * x + P(x) - P(0).
  std::vector<cplx> pspec(n);
  for (int k = 0; k < n; ++k) {
    const int w = spectral::wavenumber(k, n);
    pspec[k] = w == 0 ? cplx(0.0) : gspec[k] / cplx(0.0, w);
  }
  const double p0 = spectral::evaluate(pspec, 0.0).real();
  const auto s_grid = arclength_coordinate(g);

  auto s_of = [&](double x) {
    const auto [p, dp] = spectral::evaluate_with_derivative(pspec, x);
    return std::pair{mean_speed * x + p.real() - p0, mean_speed + dp.real()};
  };

  std::vector<Point> out(static_cast<size_t>(samples_out));
  size_t seg = 0;
  for (int m = 0; m < samples_out; ++m) {
    const double target = length * m / samples_out;
    while (seg + 1 < s_grid.size() && s_grid[seg + 1] <= target) ++seg;
    const double s_lo = s_grid[seg];
    const double s_hi = seg + 1 < s_grid.size() ? s_grid[seg + 1] : length;
    const double x_lo = kTwoPi * static_cast<double>(seg) / n;
    double x = x_lo + (kTwoPi / n) * (target - s_lo) / (s_hi - s_lo);
    for (int it = 0; it < 20; ++it) {
      const auto [s, ds] = s_of(x);
      const double dx = (s - target) / ds;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    out[m] = spectral::evaluate(zspec, x);
  }
  out[0] = z[0];
  return {ClosedCurve(std::move(out)), high > 1e-10, high};
}

double FourierModes::parseval_energy() const {
  double sum = 0.0;
  for (int n = -n_max; n <= n_max; ++n) {
    if (n != 0) sum += std::norm(at(n));
  }
  return kTwoPi * omega * sum;
}

FourierModes fourier_of_curvature(const ClosedCurve& curve, int n_max) {
  if (n_max < 1) fail(ErrorKind::invalid_argument, "fourier_of_curvature: n_max must be >= 1");
  const auto m0 = metrics(curve);
  if (m0.omega == 0) fail(ErrorKind::undefined_expansion, "curvature expansion undefined for turning number 0");
  const ClosedCurve oriented = m0.omega > 0 ? curve : curve.reversed();
  const int omega = std::abs(m0.omega);
  const double rho = kTwoPi * omega / m0.length;

  const auto fr = tangent_normal_curvature(oriented);
  const int n = oriented.size();
  std::vector<double> g(n), f(n);
  for (int j = 0; j < n; ++j) {
    g[j] = fr.speed[j] * rho;
    f[j] = fr.curvature[j] / rho - 1.0;
  }
  const auto s = arclength_coordinate(g);

  FourierModes modes;
  modes.omega = omega;
  modes.n_max = n_max;
  modes.coefficients.assign(static_cast<size_t>(2 * n_max + 1), cplx(0.0));
  const double weight = 1.0 / (kTwoPi * omega) * (kTwoPi / n);
  for (int j = 0; j < n; ++j) {
    const cplx base = std::polar(1.0, -s[j] / omega);
    const double amp = f[j] * g[j] * weight;
    cplx pos = 1.0;
    modes.coefficients[n_max] += amp;
    for (int k = 1; k <= n_max; ++k) {
      pos *= base;
      modes.coefficients[n_max + k] += amp * pos;
      modes.coefficients[n_max - k] += amp * std::conj(pos);
    }
  }
  return modes;
}

double translation_mode_energy(const FourierModes& modes, int omega) {
  if (omega < 1 || omega > modes.n_max) fail(ErrorKind::invalid_argument, "translation_mode_energy: need 1 <= omega <= n_max");
  return kTwoPi * modes.omega * (std::norm(modes.at(omega)) + std::norm(modes.at(-omega)));
}

}  // namespace ccdf
