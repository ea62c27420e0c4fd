#include "flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "error.hpp"
#include "perturbation.hpp"

namespace ccdf {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kDtFloor = 1e-15;

using spectral::cplx;

struct Diagnostics {
  double lambda_norm = 0.0;  // (1/L0)(int k_s^2 - c int k^4) on the given curve
  double length = 0.0;
  double k_max = 0.0;
  double g_min = 0.0;
  double g_max = 0.0;
  bool finite = true;
};

// Velocity evaluation with preallocated spectral buffers: five transforms per call.
class Evaluator {
 public:
  explicit Evaluator(int n)
      : n_(n), ft_(spectral::transform(n)), spec_(n), a_(n), b_(n), zx_(n), zxx_(n), kap_(n), g_(n), gx_(n), w_(n) {
    for (int k = 0; k < n; ++k) w_[k] = spectral::wavenumber(k, n);
  }

  Diagnostics operator()(std::span<const cplx> z, double c, FlowMode mode, double L0, std::span<cplx> vel) {
    ft_.forward(z, spec_);
    for (int k = 0; k < n_; ++k) {
      const double w = w_[k];
      a_[k] = cplx(-w * spec_[k].imag(), w * spec_[k].real());
      b_[k] = spec_[k] * (-w * w);
    }
    ft_.inverse(a_, zx_);
    ft_.inverse(b_, zxx_);

    Diagnostics d;
    double g_lo = std::numeric_limits<double>::infinity();
    double g_hi = 0.0;
    double k_hi = 0.0;
    double sum_g = 0.0;
    for (int j = 0; j < n_; ++j) {
      const double xr = zx_[j].real();
      const double xi = zx_[j].imag();
      const double yr = zxx_[j].real();
      const double yi = zxx_[j].imag();
      const double g = std::sqrt(xr * xr + xi * xi);
      const double inv_g = 1.0 / g;
      g_[j] = inv_g;
      gx_[j] = (xr * yr + xi * yi) * inv_g;
      const double k = (xr * yi - xi * yr) * inv_g * inv_g * inv_g;
      kap_[j] = k;
      sum_g += g;
      g_lo = std::min(g_lo, g);
      g_hi = std::max(g_hi, g);
      k_hi = std::max(k_hi, std::abs(k));
    }
    d.g_min = g_lo;
    d.g_max = g_hi;
    d.k_max = k_hi;

    ft_.forward(kap_, spec_);
    // The Nyquist mode is invisible to spectral derivatives, so it is removed
    // from k (and below from the velocity) to keep the k^3 term consistent.
    const double k_nyq = spec_[n_ / 2].real();
    for (int j = 0; j < n_; ++j) kap_[j] -= (j % 2 == 0 ? k_nyq : -k_nyq);
    for (int k = 0; k < n_; ++k) {
      const double w = w_[k];
      // Inverse of this packs k_x into the real part and k_xx into the imaginary part.
      const double f = w - w * w;
      a_[k] = cplx(-f * spec_[k].imag(), f * spec_[k].real());
    }
    ft_.inverse(a_, b_);

    double ks2 = 0.0;
    double k4 = 0.0;
    for (int j = 0; j < n_; ++j) {
      const double inv_g = g_[j];
      const double k = kap_[j].real();
      const double kx = b_[j].real();
      const double kxx = b_[j].imag();
      const double ks = kx * inv_g;
      const double kss = (kxx - kx * gx_[j] * inv_g) * inv_g * inv_g;
      const double k2 = k * k;
      const double F = kss + c * k2 * k;
      // -F N with N = i z_x / |z_x|
      const double scale = F * inv_g;
      vel[j] = cplx(scale * zx_[j].imag(), -scale * zx_[j].real());
      ks2 += ks * kx;
      k4 += k2 * k2 / inv_g;
    }
    const double h = kTwoPi / n_;
    d.length = h * sum_g;
    d.lambda_norm = h * (ks2 - c * k4) / L0;
    if (mode == FlowMode::length_normalised) {
      for (int j = 0; j < n_; ++j) vel[j] += d.lambda_norm * z[j];
    }
    cplx v_nyq = 0.0;
    for (int j = 0; j < n_; ++j) v_nyq += (j % 2 == 0 ? vel[j] : -vel[j]);
    v_nyq /= static_cast<double>(n_);
    for (int j = 0; j < n_; ++j) vel[j] -= (j % 2 == 0 ? v_nyq : -v_nyq);
    d.finite = std::isfinite(d.lambda_norm) && std::isfinite(d.k_max) && std::isfinite(d.length);
    return d;
  }

 private:
  int n_;
  spectral::FourierTransform& ft_;
  std::vector<cplx> spec_, a_, b_, zx_, zxx_, kap_;
  std::vector<double> g_, gx_, w_;
};

// RK4 on (z, log sigma). probe() evaluates the first stage at the current
// state and caches it for the next advance().
class Integrator {
 public:
  Integrator(int n, double c, FlowMode mode, double L0)
      : n_(n),
        c_(c),
        mode_(mode),
        L0_(L0),
        eval_(n),
        ft_(spectral::transform(n)),
        k1_(n),
        k2_(n),
        k3_(n),
        k4_(n),
        tmp_(n),
        spec_(n),
        cut_(n / 3) {}

  const Diagnostics& probe(std::span<const cplx> z) {
    diag_ = eval_(z, c_, mode_, L0_, k1_);
    return diag_;
  }

  // Advances z in place; returns the increment of log sigma.
  double advance(std::vector<cplx>& z, double dt) {
    const double l1 = diag_.lambda_norm;
    for (int j = 0; j < n_; ++j) tmp_[j] = z[j] + 0.5 * dt * k1_[j];
    const double l2 = eval_(tmp_, c_, mode_, L0_, k2_).lambda_norm;
    for (int j = 0; j < n_; ++j) tmp_[j] = z[j] + 0.5 * dt * k2_[j];
    const double l3 = eval_(tmp_, c_, mode_, L0_, k3_).lambda_norm;
    for (int j = 0; j < n_; ++j) tmp_[j] = z[j] + dt * k3_[j];
    const double l4 = eval_(tmp_, c_, mode_, L0_, k4_).lambda_norm;
    for (int j = 0; j < n_; ++j) z[j] += dt / 6.0 * (k1_[j] + 2.0 * k2_[j] + 2.0 * k3_[j] + k4_[j]);
    truncate(z);
    return -dt / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
  }

  // 2/3-rule truncation: modes with |w| > n/3 are dropped. Their share of the
  // non-mean energy before truncation is kept as an under-resolution signal.
  void truncate(std::vector<cplx>& z) {
    ft_.forward(z, spec_);
    double total = 0.0;
    double high = 0.0;
    for (int k = 1; k < n_; ++k) {
      const double e = std::norm(spec_[k]);
      total += e;
      if (k > cut_ && k < n_ - cut_) {
        high += e;
        spec_[k] = 0.0;
      }
    }
    last_high_fraction_ = total > 0.0 ? high / total : 0.0;
    ft_.inverse(spec_, z);
  }

  double last_high_fraction() const { return last_high_fraction_; }

 private:
  int n_;
  double c_;
  FlowMode mode_;
  double L0_;
  Evaluator eval_;
  spectral::FourierTransform& ft_;
  std::vector<cplx> k1_, k2_, k3_, k4_, tmp_, spec_;
  int cut_;
  Diagnostics diag_;
  double last_high_fraction_ = 0.0;
};

// Compensated running sum for the time variable.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double dt_from(const Diagnostics& d, int n, double dt_safety) {
  const double ds = d.g_min * kTwoPi / n;
  return dt_safety * ds * ds * ds * ds;
}

double recorded_lambda(const Diagnostics& d, FlowMode mode, double L0) {
  if (mode == FlowMode::length_normalised) return d.lambda_norm;
  const double sigma = d.length / L0;
  return sigma * sigma * sigma * d.lambda_norm;
}

Record make_record(const FlowState& s, const Diagnostics& d, const FlowConfig& cfg) {
  const auto m = metrics(s.curve);
  Record r;
  r.t = s.time;
  r.L = m.length;
  r.A = m.signed_area;
  r.omega = m.omega;
  r.K_osc = m.K_osc;
  r.k_max = m.k_max_abs;
  r.lambda = recorded_lambda(d, cfg.mode, s.L0);
  r.sigma = cfg.mode == FlowMode::length_normalised ? s.sigma : m.length / s.L0;
  r.centroid = m.centroid;
  if (cfg.record_translation_energy && m.omega != 0) {
    const int w = std::abs(m.omega);
    r.e_tr = translation_mode_energy(fourier_of_curvature(s.curve, w + 1), w);
  }
  return r;
}

std::vector<cplx> copy_points(const ClosedCurve& curve) {
  const auto p = curve.points();
  return {p.begin(), p.end()};
}

}  // namespace

const char* to_string(FlowMode mode) {
  return mode == FlowMode::unnormalised ? "unnormalised" : "length_normalised";
}

FlowMode parse_flow_mode(const std::string& text) {
  if (text == "unnormalised" || text == "ccdf") return FlowMode::unnormalised;
  if (text == "length_normalised" || text == "normalised" || text == "l-ccdf") return FlowMode::length_normalised;
  fail(ErrorKind::invalid_argument, "unknown flow mode '" + text + "' (expected unnormalised or length_normalised)");
}

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::completed: return "completed";
    case RunStatus::converged: return "converged";
    case RunStatus::blowup: return "blowup";
    case RunStatus::kosc_exceeded: return "kosc_exceeded";
    case RunStatus::step_limit: return "step_limit";
  }
  return "completed";
}

void FlowConfig::validate() const {
  if (!(dt_safety > 0.0 && dt_safety <= 0.03)) fail(ErrorKind::invalid_argument, "dt_safety must lie in (0, 0.03]");
  if (N < 64 || N % 2 != 0) fail(ErrorKind::invalid_argument, "flow needs an even sample count N >= 64");
  if (reparam_every < 1) fail(ErrorKind::invalid_argument, "reparam_every must be >= 1");
  if (!(resample_tolerance >= 0.0 && resample_tolerance < 1.0)) fail(ErrorKind::invalid_argument, "resample_tolerance must be in [0, 1)");
  if (record_every < 1) fail(ErrorKind::invalid_argument, "record_every must be >= 1");
  if (t_end && !(*t_end >= 0.0)) fail(ErrorKind::invalid_argument, "t_end must be non-negative");
  if (!(stop_kmax > 0.0)) fail(ErrorKind::invalid_argument, "stop_kmax must be positive");
}

double reference_length(const ClosedCurve& curve) {
  const auto m = metrics(curve);
  return m.omega != 0 ? kTwoPi * std::abs(m.omega) : m.length;
}

std::vector<Point> velocity_field(const ClosedCurve& curve, double c, FlowMode mode, std::optional<double> L0) {
  const double ref = L0 ? *L0 : reference_length(curve);
  Evaluator eval(curve.size());
  std::vector<Point> vel(static_cast<size_t>(curve.size()));
  eval(curve.points(), c, mode, ref, vel);
  return vel;
}

double lambda_of(const ClosedCurve& curve, double c, double L0) {
  Evaluator eval(curve.size());
  std::vector<Point> vel(static_cast<size_t>(curve.size()));
  const auto d = eval(curve.points(), c, FlowMode::unnormalised, L0, vel);
  return recorded_lambda(d, FlowMode::unnormalised, L0);
}

FlowState initial_state(const ClosedCurve& gamma0, const FlowConfig& config) {
  const auto m = metrics(gamma0);
  if (config.mode == FlowMode::length_normalised && m.omega == 0) {
    fail(ErrorKind::invalid_argument, "length-normalised flow needs a non-zero turning number");
  }
  FlowState s{0.0, gamma0, 0.0, 1.0, 0.0, m.omega, 0};
  s.L0 = m.omega != 0 ? kTwoPi * std::abs(m.omega) : m.length;
  s.sigma = config.mode == FlowMode::length_normalised ? 1.0 : m.length / s.L0;
  s.lambda_now = lambda_of(gamma0, config.c, s.L0);
  if (config.mode == FlowMode::length_normalised) s.lambda_now /= std::pow(m.length / s.L0, 3);
  return s;
}

double stable_dt(const ClosedCurve& curve, double dt_safety) {
  const auto zx = spectral::derivative(curve.points(), 1);
  double g_min = std::numeric_limits<double>::infinity();
  for (const auto& v : zx) g_min = std::min(g_min, std::abs(v));
  const double ds = g_min * kTwoPi / curve.size();
  return dt_safety * ds * ds * ds * ds;
}

FlowState rk4_step(const FlowState& state, const FlowConfig& config, double dt) {
  const int n = state.curve.size();
  Integrator integ(n, config.c, config.mode, state.L0);
  auto z = copy_points(state.curve);
  integ.probe(z);
  const double dlog_sigma = integ.advance(z, dt);
  FlowState next = state;
  next.curve = ClosedCurve(std::move(z));
  next.time = state.time + dt;
  next.steps = state.steps + 1;
  Diagnostics d = integ.probe(next.curve.points());
  if (config.mode == FlowMode::length_normalised) {
    next.sigma = state.sigma * std::exp(dlog_sigma);
    next.lambda_now = d.lambda_norm;
  } else {
    next.sigma = d.length / state.L0;
    next.lambda_now = recorded_lambda(d, config.mode, state.L0);
  }
  return next;
}

RunResult run(const ClosedCurve& gamma0, const FlowConfig& config) {
  config.validate();
  auto rs = resample_by_arclength(gamma0, config.N);
  FlowState state = initial_state(rs.curve, config);
  RunResult result{.final_state = state};
  if (rs.under_resolved) ++result.under_resolved_resamples;
  const bool normalised = config.mode == FlowMode::length_normalised;
  if (normalised) {
    // Start exactly on the length constraint; the factor goes into sigma.
    const double L = metrics(state.curve).length;
    const double rho = state.L0 / L;
    state.curve = state.curve.scaled(rho);
    state.sigma = L / state.L0;
  }

  const int n = config.N;
  Integrator integ(n, config.c, config.mode, state.L0);
  auto z = copy_points(state.curve);
  double log_sigma = std::log(state.sigma);
  KahanSum time;
  long long steps = 0;
  long long next_record = 0;
  int records_taken = 0;

  auto sync_state = [&] {
    state.curve = ClosedCurve(z);
    state.time = time.sum;
    state.steps = steps;
    if (normalised) state.sigma = std::exp(log_sigma);
  };
  auto push_record = [&](const Diagnostics& d) {
    sync_state();
    Record r = make_record(state, d, config);
    if (!normalised) state.sigma = r.sigma;
    state.lambda_now = r.lambda;
    if (!result.series.records.empty() && !(r.t > result.series.records.back().t)) return r;
    result.series.records.push_back(r);
    if (config.snapshot_every > 0 && records_taken % config.snapshot_every == 0) {
      result.series.snapshots.emplace_back(state.time, state.curve);
    }
    ++records_taken;
    return r;
  };
  auto finish = [&](RunStatus status, std::string reason) {
    result.status = status;
    result.stop_reason = std::move(reason);
  };

  auto set_bracket = [&](const Diagnostics& d, double dt_full) {
    result.blowup_lower = state.time;
    result.blowup_upper = state.time + dt_full;
    if (!normalised && config.c < 0.0) {
      // Finite-time bound L^4 / (64 pi^4 |c|) from the last accepted state.
      const double L = d.length;
      const double bound = L * L * L * L / (64.0 * std::pow(kPi, 4) * std::abs(config.c));
      result.blowup_upper = state.time + std::max(dt_full, bound * (1.0 + 1e-8));
    }
  };

  while (true) {
    state.time = time.sum;
    const Diagnostics d = integ.probe(z);
    if (!d.finite) {
      finish(RunStatus::blowup, "non-finite curvature");
      result.blowup_lower = result.blowup_upper = state.time;
      break;
    }
    const double dt_full = dt_from(d, n, config.dt_safety);
    if (d.k_max > config.stop_kmax) {
      try {
        push_record(d);
      } catch (const Error&) {
      }
      finish(RunStatus::blowup, "max|k| exceeded stop_kmax");
      set_bracket(d, dt_full);
      break;
    }
    if (steps == next_record) {
      const Record r = push_record(d);
      next_record += config.record_every;
      if (config.stop_kosc_min && r.K_osc < *config.stop_kosc_min) {
        finish(RunStatus::converged, "K_osc below stop_kosc_min");
        break;
      }
      if (config.stop_koscmax && r.K_osc > *config.stop_koscmax) {
        finish(RunStatus::kosc_exceeded, "K_osc above stop_koscmax");
        break;
      }
    }
    if (config.t_end && time.sum >= *config.t_end) {
      finish(RunStatus::completed, "reached t_end");
      break;
    }
    if (steps >= config.max_steps) {
      finish(RunStatus::step_limit, "step limit reached");
      break;
    }
    if (dt_full < kDtFloor) {
      try {
        push_record(d);
      } catch (const Error&) {
      }
      finish(RunStatus::blowup, "time step underflow");
      set_bracket(d, dt_full);
      break;
    }
    double dt = dt_full;
    bool last = false;
    if (config.t_end && *config.t_end - time.sum <= dt * (1.0 + 1e-9)) {
      dt = *config.t_end - time.sum;
      last = true;
    }
    log_sigma += integ.advance(z, dt);
    result.max_truncated_fraction = std::max(result.max_truncated_fraction, integ.last_high_fraction());
    ++steps;
    if (last) {
      time.sum = *config.t_end;
      time.carry = 0.0;
    } else {
      time.add(dt);
    }
    if (last) next_record = steps;

    if (steps % config.reparam_every == 0) {
      try {
        ClosedCurve current(z);
        const auto zx = spectral::derivative(current.points(), 1);
        double g_lo = std::numeric_limits<double>::infinity();
        double g_hi = 0.0;
        double g_sum = 0.0;
        for (const auto& v : zx) {
          const double g = std::abs(v);
          g_lo = std::min(g_lo, g);
          g_hi = std::max(g_hi, g);
          g_sum += g;
        }
        double L = g_sum * kTwoPi / n;
        if (g_hi - g_lo > config.resample_tolerance * g_hi) {
          auto res = resample_by_arclength(current, n);
          ++result.resamples;
          if (res.under_resolved) ++result.under_resolved_resamples;
          current = std::move(res.curve);
          L = metrics(current).length;
        }
        if (normalised) {
          const double drift = std::abs(L - state.L0) / state.L0;
          result.max_length_drift = std::max(result.max_length_drift, drift);
          if (drift > 0.0) {
            const double rho = state.L0 / L;
            current = current.scaled(rho);
            log_sigma -= std::log(rho);
            result.max_length_correction = std::max(result.max_length_correction, std::abs(rho - 1.0));
          }
        }
        z = copy_points(current);
      } catch (const Error& e) {
        finish(RunStatus::blowup, std::string("curve degenerated: ") + e.what());
        result.blowup_lower = state.time;
        result.blowup_upper = state.time;
        break;
      }
    }
  }
  try {
    sync_state();
  } catch (const Error&) {
  }
  result.final_state = state;
  return result;
}

EPrime measure_e_prime(const ClosedCurve& curve, double c, int samples, double dt_safety) {
  auto start = resample_by_arclength(curve, samples).curve;
  const auto m0 = metrics(start);
  if (m0.omega == 0) fail(ErrorKind::undefined_expansion, "e(t) is undefined for turning number 0");
  const double L0 = kTwoPi * std::abs(m0.omega);
  start = start.scaled(L0 / m0.length);

  const double dt = stable_dt(start, dt_safety);
  auto e_of = [&](const std::vector<cplx>& z) {
    const auto m = metrics(ClosedCurve(z));
    return m.K_osc / L0;
  };
  Integrator integ(samples, c, FlowMode::length_normalised, L0);
  std::vector<double> fwd(5), bwd(5);
  for (int sign : {+1, -1}) {
    auto z = copy_points(start);
    auto& out = sign > 0 ? fwd : bwd;
    out[0] = e_of(z);
    for (int m = 1; m <= 4; ++m) {
      integ.probe(z);
      integ.advance(z, sign * dt);
      out[m] = e_of(z);
    }
  }
  auto centred = [&](int m) { return (fwd[m] - bwd[m]) / (2.0 * m * dt); };
  const double d1 = centred(1);
  const double d2 = centred(2);
  const double d4 = centred(4);
  const double r1 = (4.0 * d1 - d2) / 3.0;
  const double r2 = (4.0 * d2 - d4) / 3.0;
  return {(16.0 * r1 - r2) / 15.0, d1, fwd[0], dt};
}

EvolutionCheck e_evolution_check(const ClosedCurve& curve, double c, int samples) {
  const auto ep = measure_e_prime(curve, c, samples);
  const auto resampled = resample_by_arclength(curve, samples).curve;
  const double rhs = -Q_functional(resampled, c) + R_functional(resampled, c);
  EvolutionCheck out{ep.value, rhs, 0.0};
  const double scale = std::max(std::abs(rhs), std::abs(ep.value));
  out.relative_discrepancy = scale > 0.0 ? std::abs(ep.value - rhs) / scale : 0.0;
  return out;
}

SigmaAsymptotics sigma_asymptotics(const TimeSeries& series, double c) {
  if (series.records.empty()) fail(ErrorKind::not_applicable, "sigma_asymptotics: empty series");
  const auto& last = series.records.back();
  if (!(last.K_osc < 1e-8)) {
    std::ostringstream os;
    os << "sigma_asymptotics needs a converged run (final K_osc < 1e-8), got " << last.K_osc;
    fail(ErrorKind::not_applicable, os.str());
  }
  SigmaAsymptotics out;
  out.sigma_inf = last.sigma * std::exp(-c * last.t);

  const double floor = 1e-11 * std::max(1.0, std::abs(c));
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  const size_t first = series.records.size() / 4;
  for (size_t i = first; i < series.records.size(); ++i) {
    const auto& r = series.records[i];
    const double dev = std::abs(r.lambda + c);
    if (!(dev > floor)) continue;
    const double y = std::log(dev);
    sx += r.t;
    sy += y;
    sxx += r.t * r.t;
    sxy += r.t * y;
    ++count;
  }
  out.points_used = count;
  const double den = count * sxx - sx * sx;
  out.decay_slope = count >= 3 && den > 0.0 ? (count * sxy - sx * sy) / den : std::numeric_limits<double>::quiet_NaN();
  return out;
}

void write_series_csv(std::ostream& out, const TimeSeries& series) {
  out << "t,L,A,omega,Kosc,kmax,lambda,sigma,cx,cy\n";
  char buf[512];
  for (const auto& r : series.records) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.L, r.A, r.omega,
                  r.K_osc, r.k_max, r.lambda, r.sigma, r.centroid.real(), r.centroid.imag());
    out << buf;
  }
}

void write_series_csv(const std::string& path, const TimeSeries& series) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot open " + path + " for writing");
  write_series_csv(out, series);
  if (!out) fail(ErrorKind::io, "write failed: " + path);
}

}  // namespace ccdf
