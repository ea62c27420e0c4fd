#include "perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "error.hpp"
#include "flow.hpp"
#include "stability.hpp"

namespace ccdf {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

ClosedCurve curve_from_support(int omega, int samples, const std::vector<SupportMode>& modes) {
  std::vector<Point> pts(static_cast<size_t>(samples));
  for (int j = 0; j < samples; ++j) {
    const double theta = kTwoPi * omega * j / samples;
    double h = 1.0;
    double dh = 0.0;
    for (const auto& md : modes) {
      const double arg = md.m * theta / omega + md.phase;
      const double nu = static_cast<double>(md.m) / omega;
      h += md.amplitude * std::cos(arg);
      dh -= md.amplitude * nu * std::sin(arg);
    }
    const Point radial = std::polar(1.0, theta);
    pts[j] = h * radial + dh * Point(0.0, 1.0) * radial;
  }
  return ClosedCurve(std::move(pts));
}

double integral(const OscillationField& fld, auto&& integrand) {
  const size_t n = fld.f.size();
  double sum = 0.0;
  for (size_t j = 0; j < n; ++j) sum += integrand(j) * fld.speed[j];
  return kTwoPi * sum / static_cast<double>(n);
}

}  // namespace

double SupportPerturbation::a() const {
  const double r = static_cast<double>(n0) / omega;
  return 1.0 - r * r;
}

void SupportPerturbation::validate() const {
  if (omega < 1) fail(ErrorKind::invalid_argument, "support perturbation needs omega >= 1");
  if (n0 < 1) fail(ErrorKind::invalid_argument, "support perturbation needs n0 >= 1");
  if (n0 == omega) fail(ErrorKind::invalid_argument, "n0 = omega is a translation mode (a = 0)");
  if (!(std::abs(a() * eta) < 1.0)) {
    std::ostringstream os;
    os << "|a eta| = " << std::abs(a() * eta) << " >= 1: radius of curvature changes sign";
    fail(ErrorKind::non_convex_support, os.str());
  }
}

void SupportFunction::validate() const {
  if (omega < 1) fail(ErrorKind::invalid_argument, "support function needs omega >= 1");
  double worst = 0.0;
  for (const auto& md : modes) {
    if (md.m < 1) fail(ErrorKind::invalid_argument, "support modes need m >= 1");
    const double nu = static_cast<double>(md.m) / omega;
    worst += std::abs(md.amplitude * (1.0 - nu * nu));
  }
  if (!(worst < 1.0)) fail(ErrorKind::non_convex_support, "support function may have non-positive radius of curvature");
}

ClosedCurve build_support_curve(const SupportPerturbation& p, int samples) {
  p.validate();
  return curve_from_support(p.omega, samples, {SupportMode{p.n0, p.eta, 0.0}});
}

ClosedCurve build_support_curve(const SupportFunction& h, int samples) {
  h.validate();
  return curve_from_support(h.omega, samples, h.modes);
}

SupportFunction random_support_function(std::uint64_t seed, int omega, int count, double max_amplitude) {
  if (omega < 1 || count < 1) fail(ErrorKind::invalid_argument, "random support function needs omega >= 1 and count >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_m(1, 4 * omega);
  std::uniform_real_distribution<double> amp(-max_amplitude, max_amplitude);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  SupportFunction h;
  h.omega = omega;
  double weight = 0.0;
  while (static_cast<int>(h.modes.size()) < count) {
    const int m = pick_m(rng);
    if (m == omega) continue;
    const double nu = static_cast<double>(m) / omega;
    const double amplitude = amp(rng) / std::max(1.0, nu * nu);
    h.modes.push_back({m, amplitude, phase(rng)});
    weight += std::abs(amplitude * (1.0 - nu * nu));
  }
  const double cap = 4.0 * max_amplitude;
  if (weight > cap) {
    for (auto& md : h.modes) md.amplitude *= cap / weight;
  }
  return h;
}

OscillationField oscillation_field(const ClosedCurve& curve) {
  const auto m = metrics(curve);
  if (m.omega == 0) fail(ErrorKind::undefined_expansion, "oscillation field undefined for turning number 0");
  const ClosedCurve oriented = m.omega > 0 ? curve : curve.reversed();
  const int omega = std::abs(m.omega);
  const double rho = kTwoPi * omega / m.length;
  const auto fr = tangent_normal_curvature(oriented);
  const int n = oriented.size();

  OscillationField out;
  out.omega = omega;
  out.f.resize(n);
  out.speed.resize(n);
  for (int j = 0; j < n; ++j) {
    out.speed[j] = fr.speed[j] * rho;
    out.f[j] = fr.curvature[j] / rho - 1.0;
  }
  out.f_s = arclength_derivative(out.f, out.speed);
  out.f_ss = arclength_derivative(out.f_s, out.speed);
  out.e = integral(out, [&](size_t j) { return out.f[j] * out.f[j]; });
  return out;
}

double Q_functional(const ClosedCurve& curve, double c) {
  const auto fld = oscillation_field(curve);
  const double fss2 = integral(fld, [&](size_t j) { return fld.f_ss[j] * fld.f_ss[j]; });
  const double fs2 = integral(fld, [&](size_t j) { return fld.f_s[j] * fld.f_s[j]; });
  return 2.0 * fss2 - (6.0 * c + 2.0) * fs2 + 8.0 * c * fld.e;
}

double Q_fourier(const ClosedCurve& curve, double c, int n_max) {
  if (n_max <= 0) n_max = curve.size() / 2 - 1;
  const auto modes = fourier_of_curvature(curve, n_max);
  double sum = 0.0;
  for (int n = -n_max; n <= n_max; ++n) {
    if (n == 0) continue;
    sum += symbol(static_cast<double>(n) / modes.omega, c) * std::norm(modes.at(n));
  }
  return kTwoPi * modes.omega * sum;
}

double R_functional(const ClosedCurve& curve, double c) {
  const auto fld = oscillation_field(curve);
  const auto& f = fld.f;
  const double e = fld.e;
  const double L = kTwoPi * fld.omega;
  auto pw = [&](size_t j, int p) { return std::pow(f[j], p); };
  const double f2fss = integral(fld, [&](size_t j) { return pw(j, 2) * fld.f_ss[j]; });
  const double f3fss = integral(fld, [&](size_t j) { return pw(j, 3) * fld.f_ss[j]; });
  const double f3 = integral(fld, [&](size_t j) { return pw(j, 3); });
  const double f4 = integral(fld, [&](size_t j) { return pw(j, 4); });
  const double f5 = integral(fld, [&](size_t j) { return pw(j, 5); });
  const double f6 = integral(fld, [&](size_t j) { return pw(j, 6); });
  const double fs2 = integral(fld, [&](size_t j) { return fld.f_s[j] * fld.f_s[j]; });
  return -(6.0 * c + 3.0) * f2fss - (2.0 * c + 1.0) * f3fss - 16.0 * c * f3 - 14.0 * c * f4 - 6.0 * c * f5 - c * f6 -
         e / L * fs2 + 6.0 * c / L * e * e + 4.0 * c * e / L * f3 + c * e / L * f4;
}

RemainderBound remainder_bound(const ClosedCurve& curve, double c) {
  const auto fld = oscillation_field(curve);
  RemainderBound b;
  b.R = R_functional(curve, c);
  b.e = fld.e;
  b.f_ss_norm2 = integral(fld, [&](size_t j) { return fld.f_ss[j] * fld.f_ss[j]; });
  const double den = std::sqrt(b.e) * (b.f_ss_norm2 + b.e);
  b.ratio = den > 0.0 ? std::abs(b.R) / den : 0.0;
  return b;
}

double e_prime0_prediction(const SupportPerturbation& p, double c) {
  const double a = p.a();
  return -kPi * p.omega * a * a * symbol(static_cast<double>(p.n0) / p.omega, c) * p.eta * p.eta;
}

InstabilityReport run_instability_experiment(double c, int omega, const std::vector<double>& etas,
                                             const InstabilityOptions& options) {
  const auto lh = lambda_hat(c, omega);
  if (!(lh.value < 0.0)) {
    std::ostringstream os;
    os << "instability experiment needs lambda_hat < 0; lambda_hat(" << c << ", " << omega << ") = " << lh.value;
    fail(ErrorKind::precondition, os.str());
  }
  if (etas.empty()) fail(ErrorKind::invalid_argument, "instability experiment needs at least one eta");

  InstabilityReport rep;
  rep.c = c;
  rep.omega = omega;
  rep.n0 = options.n0.value_or(lh.argmin_n);
  rep.lambda_hat = lh.value;
  SupportPerturbation probe{omega, rep.n0, 0.0};
  rep.a = probe.a();
  rep.p_n0 = symbol(static_cast<double>(rep.n0) / omega, c);
  rep.limit = -kPi * omega * rep.a * rep.a * rep.p_n0;

  rep.rows.resize(etas.size());
  auto work = [&](size_t i) {
    SupportPerturbation p{omega, rep.n0, etas[i]};
    const auto gamma = build_support_curve(p, options.build_samples);
    const auto resampled = resample_by_arclength(gamma, options.samples).curve;
    const auto ep = measure_e_prime(gamma, c, options.samples, options.dt_safety);
    InstabilityRow row;
    row.eta = p.eta;
    row.e0 = ep.e0;
    row.e_prime_measured = ep.value;
    row.e_prime_predicted = e_prime0_prediction(p, c);
    row.measured_over_eta2 = ep.value / (p.eta * p.eta);
    row.Q = Q_functional(resampled, c);
    row.R = R_functional(resampled, c);
    row.identity_discrepancy = std::abs(ep.value - (-row.Q + row.R)) / std::abs(ep.value);
    rep.rows[i] = row;
  };
  const int workers = std::clamp(options.threads, 1, static_cast<int>(etas.size()));
  if (workers == 1) {
    for (size_t i = 0; i < etas.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        for (size_t i = t; i < etas.size(); i += workers) work(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  rep.all_positive = std::all_of(rep.rows.begin(), rep.rows.end(), [](const auto& r) { return r.e_prime_measured > 0.0; });
  for (const auto& r : rep.rows) {
    rep.max_relative_error = std::max(rep.max_relative_error, std::abs(r.measured_over_eta2 - rep.limit) / std::abs(rep.limit));
  }
  if (rep.rows.size() >= 2) {
    std::vector<InstabilityRow> sorted = rep.rows;
    std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return std::abs(x.eta) < std::abs(y.eta); });
    const auto& s0 = sorted[0];
    const auto& s1 = sorted[1];
    const double err0 = std::abs(s0.measured_over_eta2 - rep.limit);
    const double err1 = std::abs(s1.measured_over_eta2 - rep.limit);
    if (err0 > 0.0 && err1 > 0.0 && std::abs(s1.eta) != std::abs(s0.eta)) {
      rep.observed_order = std::log(err1 / err0) / std::log(std::abs(s1.eta) / std::abs(s0.eta));
    }
  }
  rep.verdict = rep.all_positive ? "unstable" : "inconclusive";
  return rep;
}

}  // namespace ccdf
