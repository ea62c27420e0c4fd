// One PASS/FAIL line per acceptance criterion. Exit status is non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "flow.hpp"
#include "perturbation.hpp"
#include "special_functions.hpp"
#include "stability.hpp"
#include "stationary.hpp"

using namespace ccdf;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double mean_radius(const ClosedCurve& curve) {
  const auto m = metrics(curve);
  double r = 0.0;
  for (const auto& p : curve.points()) r += std::abs(p - m.centroid);
  return r / curve.size();
}

void closure_zeros(Outcome& out) {
  double worst = 0.0;
  for (int j = 1; j <= 6; ++j) worst = std::max(worst, std::abs(closure_integral_f((4.0 * j - 1.0) / 2.0)));
  out.expect(worst < 1e-8, "lattice zeros");
  double least = 1e300;
  for (int i = 0; i < 20; ++i) least = std::min(least, std::abs(closure_integral_f(1.25 + 0.5 * i)));
  out.expect(least > 1e-3, "off-lattice values");
  out.detail << "max |f| on lattice " << worst << ", min |f| off lattice " << least;
}

void super_lemniscates(Outcome& out) {
  double gap = 0.0, residual = 0.0;
  for (int j : {1, 2, 3, 4, 10}) {
    const auto sl = build_super_lemniscate({j, 2048});
    gap = std::max(gap, sl.closure_gap);
    out.expect(metrics(sl.curve).omega == 0, "turning number 0 for j=" + std::to_string(j));
    residual = std::max(residual, stationarity_residual(sl.curve, sl.spec.c()));
  }
  out.expect(gap < 1e-8, "closure gap");
  out.expect(residual < 1e-6, "stationarity residual");
  out.detail << "max gap " << gap << ", max residual " << residual;
}

Rational brute_lambda_hat(const Rational& c, int omega, int n_max) {
  std::optional<Rational> best;
  for (int n = -n_max; n <= n_max; ++n) {
    if (n == 0 || n == omega || n == -omega) continue;
    const Rational v = symbol(Rational(n, omega), c);
    if (!best || v < *best) best = v;
  }
  return *best;
}

void lambda_golden(Outcome& out) {
  const auto a = lambda_hat(Rational(0), 1);
  const auto b = lambda_hat(Rational(-1), 1);
  const auto d = lambda_hat(Rational(0), 2);
  out.expect(a.value == 24, "lambda_hat(0,1) = 24");
  out.expect(b.value == 40, "lambda_hat(-1,1) = 40");
  out.expect(d.value == Rational(-3, 8), "lambda_hat(0,2) = -3/8");
  out.expect(d.value == brute_lambda_hat(Rational(0), 2, 10), "brute force (0,2)");
  out.expect(a.value == brute_lambda_hat(Rational(0), 1, 10), "brute force (0,1)");
  out.expect(b.value == brute_lambda_hat(Rational(-1), 1, 10), "brute force (-1,1)");
  out.detail << "lambda_hat(0,1) = " << to_string(a.value) << ", lambda_hat(-1,1) = " << to_string(b.value)
             << ", lambda_hat(0,2) = " << to_string(d.value);
}

// Zero of p_c(x) in c: c = (2x^4 - 2x^2) / (6x^2 - 8).
Rational root_in_c(const Rational& x) {
  const Rational x2 = x * x;
  return (2 * x2 * x2 - 2 * x2) / (6 * x2 - 8);
}

void threshold_values(Outcome& out) {
  const auto t1 = thresholds(1);
  out.expect(!t1.c_minus.has_value() && t1.c_plus == Rational(3, 2), "thresholds(1)");
  const auto t2 = thresholds(2);
  std::optional<Rational> lo, hi;
  for (int n = 1; n <= 20; ++n) {
    if (n == 2) continue;
    const Rational x(n, 2);
    const Rational c = root_in_c(x);
    if (3 * n * n < 16) {
      if (!lo || c > *lo) lo = c;
    } else if (!hi || c < *hi) {
      hi = c;
    }
  }
  out.expect(t2.c_minus && *t2.c_minus == Rational(3, 52) && *lo == Rational(3, 52), "c_2^- = 3/52");
  out.expect(t2.c_plus == Rational(45, 44) && *hi == Rational(45, 44), "c_2^+ = 45/44");
  int bad = 0;
  const Rational ninth(1, 9);
  for (int w = 2; w <= 200; ++w) {
    const auto t = thresholds(w);
    if (!(t.c_minus && *t.c_minus > 0 && *t.c_minus < ninth && t.c_plus > 1)) ++bad;
  }
  out.expect(bad == 0, "ordering 0 < c^- < 1/9 < 1 < c^+");
  out.detail << "thresholds(2) = (" << to_string(*t2.c_minus) << ", " << to_string(t2.c_plus) << "), ordering violations "
             << bad;
}

void arithmetic_pattern(Outcome& out) {
  const std::vector<int> expected{1, 2, 3, 4, 6, 8, 9, 11, 13, 16, 18, 23};
  const auto exact = stable_omegas(parse_rational("1.001"), 30);
  const auto lattice = stable_omegas_lattice(1.001, 30);
  out.expect(exact == expected, "exact stable set");
  out.expect(lattice == expected, "lattice test");
  out.detail << "stable set {";
  for (size_t i = 0; i < exact.size(); ++i) out.detail << (i ? "," : "") << exact[i];
  out.detail << "}";
}

void circle_dynamics(Outcome& out) {
  out.detail.precision(12);
  FlowConfig grow;
  grow.c = 0.5;
  grow.N = 128;
  grow.t_end = 1.0;
  grow.record_every = 100000;
  const auto g = run(ClosedCurve::circle(1, 1.0, 128), grow);
  const double r = mean_radius(g.final_state.curve);
  const double rel = std::abs(r - std::pow(3.0, 0.25)) / std::pow(3.0, 0.25);
  out.expect(g.status == RunStatus::completed && rel < 1e-6, "r(1) = 3^(1/4)");

  FlowConfig shrink;
  shrink.c = -1.0;
  shrink.N = 64;
  shrink.record_every = 100000;
  const auto s = run(ClosedCurve::circle(1, 1.0, 64), shrink);
  const double bound = std::pow(2 * kPi, 4) / (64 * std::pow(kPi, 4));
  out.expect(s.status == RunStatus::blowup, "blowup detected");
  out.expect(s.blowup_lower <= 0.25 && 0.25 <= s.blowup_upper, "bracket contains 0.25");
  out.expect(std::abs(s.blowup_lower - bound) < 1e-3, "bound saturated");
  out.detail << "relative radius error " << rel << ", blowup bracket [" << s.blowup_lower << ", " << s.blowup_upper
             << "], bound " << bound;
}

void stable_dynamics(Outcome& out) {
  struct Case {
    double c;
    int omega;
  };
  for (const Case& k : {Case{0.0, 1}, Case{0.5, 1}, Case{0.5, 2}, Case{-1.0, 1}}) {
    const auto lh = lambda_hat(k.c, k.omega);
    const SupportPerturbation p{k.omega, lh.argmin_n, 0.03};
    const auto gamma0 = build_support_curve(p, 256);
    FlowConfig cfg;
    cfg.c = k.c;
    cfg.N = 64;
    cfg.mode = FlowMode::length_normalised;
    cfg.record_every = 50;
    cfg.stop_kosc_min = 1e-9;
    const auto res = run(gamma0, cfg);
    const auto& rec = res.series.records;
    const double L0 = 2 * kPi * k.omega;
    const double e0 = rec.front().K_osc / L0;
    bool monotone = true, decay = true;
    for (size_t i = 1; i < rec.size(); ++i) monotone = monotone && rec[i].K_osc <= rec[i - 1].K_osc + 1e-10;
    for (const auto& r : rec) decay = decay && r.K_osc / L0 <= 2 * e0 * std::exp(-lh.value * r.t);
    std::ostringstream tag;
    tag << "(c=" << k.c << ",w=" << k.omega << ")";
    out.expect(res.status == RunStatus::converged, tag.str() + " converged");
    out.expect(monotone, tag.str() + " K_osc non-increasing");
    out.expect(decay, tag.str() + " e <= 2 e0 exp(-lambda_hat t)");
    out.expect(rec.back().K_osc < 1e-6, tag.str() + " final K_osc");
    out.expect(res.max_length_drift < 1e-6, tag.str() + " length drift");
    out.detail << tag.str() << " t=" << rec.back().t << " K_osc=" << rec.back().K_osc << "; ";
    if (k.c == 0.0) {
      const double A0 = metrics(resample_by_arclength(gamma0, cfg.N).curve).signed_area;
      // the area of the unnormalised flow is sigma^2 times the normalised area
      double worst = 0.0;
      for (const auto& r : rec) worst = std::max(worst, std::abs(r.sigma * r.sigma * r.A - A0) / A0);
      const auto asym = sigma_asymptotics(res.series, 0.0);
      const double predicted = std::sqrt(A0 / kPi);
      out.expect(worst < 1e-8, "area conservation");
      out.expect(std::abs(asym.sigma_inf - predicted) < 1e-4, "sigma_inf = sqrt(A/pi)");
      out.detail << "area drift " << worst << ", sigma_inf " << asym.sigma_inf << " vs " << predicted << "; ";
    }
  }
}

void instability_dynamics(Outcome& out) {
  struct Case {
    double c;
    int omega;
  };
  for (const Case& k : {Case{0.0, 2}, Case{-1.0, 2}, Case{2.0, 1}}) {
    const auto rep = run_instability_experiment(k.c, k.omega, {0.04, 0.02, 0.01});
    std::ostringstream tag;
    tag << "(c=" << k.c << ",w=" << k.omega << ")";
    const double finest = std::abs(rep.rows.back().measured_over_eta2 - rep.limit) / std::abs(rep.limit);
    bool shrinking = true;
    for (size_t i = 1; i < rep.rows.size(); ++i) {
      shrinking = shrinking && std::abs(rep.rows[i].measured_over_eta2 - rep.limit) <=
                                   std::abs(rep.rows[i - 1].measured_over_eta2 - rep.limit);
    }
    out.expect(rep.all_positive, tag.str() + " e'(0) > 0");
    out.expect(finest < 0.1, tag.str() + " within 10% at the finest eta");
    out.expect(shrinking, tag.str() + " error shrinks with eta");
    out.expect(rep.observed_order >= 1.0, tag.str() + " observed order >= 1");
    out.detail << tag.str() << " limit " << rep.limit << " measured " << rep.rows.back().measured_over_eta2 << " order "
               << rep.observed_order << "; ";
  }
}

void variational_identity(Outcome& out) {
  double worst_identity = 0.0, worst_q = 0.0;
  for (int i = 0; i < 10; ++i) {
    const int omega = 1 + i % 3;
    const double c = -1.0 + 0.35 * i;
    const auto h = random_support_function(1000 + i, omega, 3, 0.01);
    const auto curve = build_support_curve(h, 512);
    const auto check = e_evolution_check(curve, c, 128);
    worst_identity = std::max(worst_identity, check.relative_discrepancy);
    const auto resampled = resample_by_arclength(curve, 256).curve;
    const double q = Q_functional(resampled, c);
    worst_q = std::max(worst_q, std::abs(q - Q_fourier(resampled, c)) / std::abs(q));
  }
  out.expect(worst_identity < 0.01, "de/dt = -Q + R to 1%");
  out.expect(worst_q < 1e-8, "Q quadrature vs Fourier");
  out.detail << "max identity discrepancy " << worst_identity << ", max Q discrepancy " << worst_q;
}

void homothetic(Outcome& out) {
  const auto sl = build_super_lemniscate({1, 2048});
  const auto mu = homothetic_identity_check(sl.curve, HomotheticIdentity::lemniscate_mu);
  const auto sup = homothetic_identity_check(sl.curve, HomotheticIdentity::lemniscate_support);
  out.expect(mu.residual < 1e-6, "k_ss + (2/9) k^3 = 0");
  out.expect(sup.residual < 1e-6 && sup.fitted_A != 0.0, "h = A k^3");
  out.detail << "mu residual " << mu.residual << ", support residual " << sup.residual << ", A = " << sup.fitted_A;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"closure zeros", closure_zeros},
      {"super-lemniscate validity", super_lemniscates},
      {"lambda_hat golden values", lambda_golden},
      {"thresholds", threshold_values},
      {"arithmetic pattern", arithmetic_pattern},
      {"exact circle dynamics", circle_dynamics},
      {"stability dynamics", stable_dynamics},
      {"instability dynamics", instability_dynamics},
      {"variational identity", variational_identity},
      {"homothetic identities", homothetic},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(out);
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out.ok) ++failures;
    std::printf("%s %zu %s (%.1fs): %s\n", out.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, secs,
                out.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
