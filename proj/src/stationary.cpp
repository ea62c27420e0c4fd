#include "stationary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "error.hpp"
#include "special_functions.hpp"

namespace ccdf {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalf = 0.5;

using spectral::cplx;

// Spectrum with modes at or below the rounding floor zeroed.
constexpr double kNoiseFloor = 1e-15;

template <class T>
std::vector<cplx> clean_spectrum(std::span<const T> samples) {
  auto spec = spectral::forward(samples);
  double peak = 0.0;
  for (size_t k = 1; k < spec.size(); ++k) peak = std::max(peak, std::abs(spec[k]));
  for (size_t k = 1; k < spec.size(); ++k) {
    if (std::abs(spec[k]) <= kNoiseFloor * peak) spec[k] = 0.0;
  }
  return spec;
}

std::vector<cplx> spectral_derivative(const std::vector<cplx>& spec, int order) {
  const int n = static_cast<int>(spec.size());
  std::vector<cplx> d(n);
  for (int k = 0; k < n; ++k) d[k] = spec[k] * std::pow(cplx(0.0, spectral::wavenumber(k, n)), order);
  return spectral::inverse(d);
}

std::vector<double> clean_arclength_derivative(const std::vector<double>& field, const std::vector<double>& speed) {
  const auto d = spectral_derivative(clean_spectrum<double>(field), 1);
  std::vector<double> out(field.size());
  for (size_t i = 0; i < field.size(); ++i) out[i] = d[i].real() / speed[i];
  return out;
}

struct CleanFrame {
  std::vector<double> speed;
  std::vector<Point> normal;
  std::vector<double> curvature;
};

CleanFrame clean_frame(const ClosedCurve& curve) {
  const auto spec = clean_spectrum<cplx>(curve.points());
  const auto z1 = spectral_derivative(spec, 1);
  const auto z2 = spectral_derivative(spec, 2);
  const size_t n = z1.size();
  CleanFrame f{std::vector<double>(n), std::vector<Point>(n), std::vector<double>(n)};
  for (size_t i = 0; i < n; ++i) {
    const double g = std::abs(z1[i]);
    f.speed[i] = g;
    f.normal[i] = cplx(0.0, 1.0) * z1[i] / g;
    f.curvature[i] = (std::conj(z1[i]) * z2[i]).imag() / (g * g * g);
  }
  return f;
}

double kss_residual(const CleanFrame& fr, double c) {
  const auto ks = clean_arclength_derivative(fr.curvature, fr.speed);
  const auto kss = clean_arclength_derivative(ks, fr.speed);
  double worst = 0.0;
  for (size_t i = 0; i < kss.size(); ++i) {
    const double k = fr.curvature[i];
    worst = std::max(worst, std::abs(kss[i] + c * k * k * k));
  }
  return worst;
}

}  // namespace

double SuperLemniscateSpec::c() const {
  const double d = 4.0 * j - 1.0;
  return 2.0 / (d * d);
}

double SuperLemniscateSpec::period() const { return 4.0 * complete_K(kHalf); }

double SuperLemniscateSpec::theta_max() const { return std::sqrt(2.0 / c()) * kPi / 4.0; }

SuperLemniscate build_super_lemniscate(const SuperLemniscateSpec& spec) {
  if (spec.j < 1) fail(ErrorKind::invalid_argument, "super-lemniscate index j must be >= 1");
  if (spec.samples < 512 || spec.samples % 2 != 0) {
    fail(ErrorKind::invalid_argument, "super-lemniscate needs an even sample count >= 512");
  }
  const int n = spec.samples;
  const double c = spec.c();
  const double period = spec.period();
  const double amp = std::sqrt(2.0 / c);

  std::vector<double> arclength(n), curvature(n), angle(n);
  std::vector<cplx> tangent(n);
  for (int i = 0; i < n; ++i) {
    const double s = period * i / n;
    const auto jac = jacobi_cn_sn_dn(s, kHalf);
    arclength[i] = s;
    curvature[i] = jac.cn / std::sqrt(c);
    angle[i] = amp * std::asin(jac.sn / std::sqrt(2.0));
    tangent[i] = std::polar(1.0, angle[i]);
  }

  // gamma(x) = (P / 2pi) [ T_0 x + sum_{k != 0} T_k / (i k) e^{i k x} ]
  auto spec_t = spectral::forward(tangent);
  const cplx drift = spec_t[0];
  std::vector<cplx> prim(n);
  for (int k = 0; k < n; ++k) {
    const int w = spectral::wavenumber(k, n);
    prim[k] = w == 0 ? cplx(0.0) : spec_t[k] / cplx(0.0, w);
  }
  auto pts = spectral::inverse(prim);
  const double scale = period / (2.0 * kPi);
  cplx centroid = 0.0;
  for (int i = 0; i < n; ++i) {
    pts[i] = scale * (pts[i] + drift * (2.0 * kPi * i / n));
    centroid += pts[i];
  }
  centroid /= static_cast<double>(n);
  for (auto& p : pts) p -= centroid;
  return SuperLemniscate{spec,
                         ClosedCurve(std::move(pts)),
                         std::abs(drift) * period,
                         std::move(arclength),
                         std::move(curvature),
                         std::move(angle)};
}

double stationarity_residual(const ClosedCurve& curve, double c) { return kss_residual(clean_frame(curve), c); }

double closure_residual(double c) {
  if (!(c > 0.0)) fail(ErrorKind::domain, "closure_residual needs c > 0");
  return 0.5 * closure_integral_f(1.0 / std::sqrt(2.0 * c));
}

double OdeSolutionParams::curvature(double s) const {
  return alpha / std::sqrt(c) * jacobi_cn_sn_dn(alpha * s + beta, kHalf).cn;
}

double OdeSolutionParams::curvature_derivative(double s) const {
  const auto j = jacobi_cn_sn_dn(alpha * s + beta, kHalf);
  return -alpha * alpha / std::sqrt(c) * j.sn * j.dn;
}

OdeSolutionParams solve_curvature_ode(double c, double k0, double k1) {
  if (!(c > 0.0)) fail(ErrorKind::domain, "solve_curvature_ode needs c > 0");
  if (k0 == 0.0 && k1 == 0.0) fail(ErrorKind::trivial_solution, "k = 0 is the trivial solution; no (alpha, beta) representation");

  // Reduce to k1 <= 0 via s -> -s; undone at the end by beta -> -beta.
  const bool flipped = k1 > 0.0;
  const double k1r = flipped ? -k1 : k1;
  const double K = complete_K(kHalf);
  const double sqrt_c = std::sqrt(c);

  OdeSolutionParams p{c, 0.0, 0.0, k0, k1};
  if (k0 == 0.0) {
    p.beta = K;
    p.alpha = std::sqrt(-k1r * std::sqrt(2.0 * c));
  } else {
    // g(t) = -sqrt(c) k0^2 sn dn / cn^2 runs from +inf to -inf on (-K, K).
    auto g = [&](double t) {
      const auto j = jacobi_cn_sn_dn(t, kHalf);
      return -sqrt_c * k0 * k0 * j.sn * j.dn / (j.cn * j.cn);
    };
    double lo = -K;
    double hi = K;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * K; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (g(mid) > k1r) lo = mid; else hi = mid;
    }
    p.beta = 0.5 * (lo + hi);
    p.alpha = sqrt_c * k0 / jacobi_cn_sn_dn(p.beta, kHalf).cn;
  }
  if (flipped) p.beta = -p.beta;
  return p;
}

HomotheticCheck homothetic_identity_check(const ClosedCurve& curve, HomotheticIdentity which) {
  const auto m = metrics(curve);
  const bool is_circle = m.K_osc < 1e-8;
  if (m.omega != 0 && !is_circle) {
    std::ostringstream os;
    os << "homothetic identity check applies to the lemniscate (turning number 0) or round circles; got turning number "
       << m.omega;
    fail(ErrorKind::not_applicable, os.str());
  }
  const auto fr = clean_frame(curve);
  const int n = curve.size();

  HomotheticCheck out;
  out.centre = m.centroid;
  out.curvature = fr.curvature;
  out.support.resize(n);
  for (int i = 0; i < n; ++i) {
    const Point rel = curve[i] - out.centre;
    out.support[i] = rel.real() * fr.normal[i].real() + rel.imag() * fr.normal[i].imag();
  }

  if (which == HomotheticIdentity::lemniscate_mu) {
    out.residual = kss_residual(fr, 2.0 / 9.0);
    return out;
  }

  const double kmax = m.k_max_abs;
  out.fitted_region.resize(n);
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < n; ++i) {
    const double k = fr.curvature[i];
    out.fitted_region[i] = std::abs(k) > 0.1 * kmax;
    if (!out.fitted_region[i]) continue;
    const double k3 = k * k * k;
    num += out.support[i] * k3;
    den += k3 * k3;
  }
  out.fitted_A = den > 0.0 ? num / den : 0.0;
  for (int i = 0; i < n; ++i) {
    if (!out.fitted_region[i]) continue;
    const double k = fr.curvature[i];
    out.residual = std::max(out.residual, std::abs(out.support[i] - out.fitted_A * k * k * k));
  }
  return out;
}

}  // namespace ccdf
