#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "error.hpp"
#include "geometry.hpp"
#include "special_functions.hpp"
#include "stationary.hpp"

using namespace ccdf;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

struct KState {
  double k, dk;
};

KState rk4(KState y, double c, double h) {
  auto f = [c](KState s) { return KState{s.dk, -c * s.k * s.k * s.k}; };
  auto add = [](KState a, KState b, double w) { return KState{a.k + w * b.k, a.dk + w * b.dk}; };
  const auto k1 = f(y);
  const auto k2 = f(add(y, k1, h / 2));
  const auto k3 = f(add(y, k2, h / 2));
  const auto k4 = f(add(y, k3, h));
  return {y.k + h / 6 * (k1.k + 2 * k2.k + 2 * k3.k + k4.k), y.dk + h / 6 * (k1.dk + 2 * k2.dk + 2 * k3.dk + k4.dk)};
}

}  // namespace

TEST_CASE("super-lemniscate spec values") {
  SuperLemniscateSpec s{1, 2048};
  CHECK(s.c() == Approx(2.0 / 9.0));
  CHECK(s.theta_max() == Approx(3 * kPi / 4));
  CHECK(s.period() == Approx(4 * complete_K(0.5)));
  CHECK(SuperLemniscateSpec{2, 2048}.c() == Approx(2.0 / 49.0));
}

TEST_CASE("lemniscate of Bernoulli") {
  const auto sl = build_super_lemniscate({1, 2048});
  CHECK(sl.closure_gap < 1e-8);
  const auto m = metrics(sl.curve);
  CHECK(m.omega == 0);
  CHECK(m.length == Approx(4 * complete_K(0.5)).epsilon(1e-10));
  CHECK(std::abs(m.centroid) < 1e-10);
  const auto fr = tangent_normal_curvature(sl.curve);
  const double c = 2.0 / 9.0;
  double worst = 0.0;
  for (size_t i = 0; i < fr.curvature.size(); ++i) {
    const double exact = jacobi_cn_sn_dn(sl.arclength[i], 0.5).cn / std::sqrt(c);
    worst = std::max(worst, std::abs(fr.curvature[i] - exact));
    CHECK(std::abs(sl.curvature[i] - exact) < 1e-12);
  }
  CHECK(worst < 1e-8);
  double tmax = 0.0;
  for (double t : sl.tangent_angle) tmax = std::max(tmax, std::abs(t));
  CHECK(tmax == Approx(3 * kPi / 4).epsilon(1e-6));
}

TEST_CASE("super-lemniscates close and are stationary") {
  for (int j : {1, 2, 3, 4}) {
    const auto sl = build_super_lemniscate({j, 2048});
    CHECK(sl.closure_gap < 1e-8);
    CHECK(stationarity_residual(sl.curve, sl.spec.c()) < 1e-6);
  }
}

TEST_CASE("curvature anti-symmetry over half a period") {
  const int n = 2048;
  const auto sl = build_super_lemniscate({2, n});
  const auto k = tangent_normal_curvature(sl.curve).curvature;
  for (int i = 0; i < n; i += 7) CHECK(std::abs(k[(i + n / 2) % n] + k[i]) < 1e-8);
}

TEST_CASE("stationarity residual decreases spectrally with resolution") {
  // j = 100 is under-resolved at 512 samples and at the rounding floor from 1024 on.
  const SuperLemniscateSpec base{100, 512};
  const double scale = base.c() * std::pow(1.0 / std::sqrt(base.c()), 3);
  const double r512 = stationarity_residual(build_super_lemniscate({100, 512}).curve, base.c());
  const double r1024 = stationarity_residual(build_super_lemniscate({100, 1024}).curve, base.c());
  const double r4096 = stationarity_residual(build_super_lemniscate({100, 4096}).curve, base.c());
  CHECK(r512 > 1e6 * r1024);
  CHECK(r1024 < 1e-5 * scale);
  CHECK(r4096 < 1e-5 * scale);
  for (int n : {512, 1024, 2048, 4096}) CHECK(stationarity_residual(build_super_lemniscate({2, n}).curve, 2.0 / 49.0) < 1e-8);
}

TEST_CASE("builder preconditions") {
  CHECK_THROWS_AS(build_super_lemniscate({0, 2048}), Error);
  CHECK_THROWS_AS(build_super_lemniscate({1, 256}), Error);
}

TEST_CASE("closure residual") {
  CHECK(std::abs(closure_residual(2.0 / 9.0)) < 1e-8);
  CHECK(std::abs(closure_residual(2.0 / 49.0)) < 1e-8);
  CHECK(std::abs(closure_residual(0.1)) > 1e-3);
  try {
    closure_residual(0.0);
    FAIL("expected domain error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::domain);
  }
  CHECK_THROWS_AS(closure_residual(-1.0), Error);
}

TEST_CASE("closure zeros occur only at c_j") {
  for (int i = 1; i <= 2000; ++i) {
    const double c = 0.25 * i / 2000.0;
    if (std::abs(closure_residual(c)) >= 1e-6) continue;
    bool near = false;
    for (int j = 1; j < 200 && !near; ++j) near = std::abs(c - 2.0 / ((4.0 * j - 1) * (4.0 * j - 1))) < 1e-3;
    CHECK(near);
  }
}

TEST_CASE("curvature ODE closed form") {
  const auto a = solve_curvature_ode(1.0, 1.0, 0.0);
  CHECK(a.alpha == Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(a.beta) < 1e-12);

  const auto b = solve_curvature_ode(1.0, 0.0, -std::sqrt(2.0));
  CHECK(b.beta == Approx(complete_K(0.5)).epsilon(1e-12));
  CHECK(b.alpha == Approx(std::sqrt(2.0)).epsilon(1e-12));

  const double c = 2.0;
  const auto p = solve_curvature_ode(c, 0.5, -0.3);
  CHECK(p.curvature(0.0) == Approx(0.5).epsilon(1e-10));
  CHECK(p.curvature_derivative(0.0) == Approx(-0.3).epsilon(1e-10));
  const double window = 8 * complete_K(0.5);
  const int steps = 200000;
  const double h = window / steps;
  KState y{0.5, -0.3};
  double worst = 0.0;
  for (int i = 1; i <= steps; ++i) {
    y = rk4(y, c, h);
    if (i % 100 == 0) worst = std::max(worst, std::abs(y.k - p.curvature(i * h)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("curvature ODE matching conditions on random data") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0), uc(0.05, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double c = uc(rng), k0 = u(rng), k1 = u(rng);
    const auto p = solve_curvature_ode(c, k0, k1);
    CHECK(p.curvature(0.0) == Approx(k0).scale(1.0).epsilon(1e-10));
    CHECK(p.curvature_derivative(0.0) == Approx(k1).scale(1.0).epsilon(1e-10));
  }
  try {
    solve_curvature_ode(1.0, 0.0, 0.0);
    FAIL("expected trivial-solution error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::trivial_solution);
  }
}

TEST_CASE("no periodic non-constant curvature for c < 0") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double c : {-0.5, -1.0}) {
    for (int trial = 0; trial < 20; ++trial) {
      KState y{u(rng), u(rng)};
      int k_sign_changes = 0, dk_sign_changes = 0;
      const double h = 1e-3;
      for (int i = 0; i < 40000 && std::abs(y.k) < 1e3; ++i) {
        const auto next = rk4(y, c, h);
        if (next.k * y.k < 0) ++k_sign_changes;
        if (next.dk * y.dk < 0) ++dk_sign_changes;
        y = next;
      }
      // A periodic orbit needs both k and k' to change sign at least twice.
      CHECK((k_sign_changes <= 1 || dk_sign_changes <= 1));
    }
  }
}

TEST_CASE("homothetic identities") {
  const auto sl = build_super_lemniscate({1, 2048});
  CHECK(homothetic_identity_check(sl.curve, HomotheticIdentity::lemniscate_mu).residual < 1e-6);
  const auto sup = homothetic_identity_check(sl.curve, HomotheticIdentity::lemniscate_support);
  CHECK(sup.residual < 1e-6);
  CHECK(std::abs(sup.fitted_A) > 1e-3);

  // Inward normal: on the unit circle h = <gamma, N> = -1 and k = 1.
  const auto circle = homothetic_identity_check(ClosedCurve::circle(1, 1.0, 128), HomotheticIdentity::lemniscate_support);
  CHECK(circle.residual < 1e-12);
  CHECK(circle.fitted_A == Approx(-1.0).epsilon(1e-12));

  std::vector<Point> pts(128);
  for (int j = 0; j < 128; ++j) pts[j] = {2 * std::cos(2 * kPi * j / 128), std::sin(2 * kPi * j / 128)};
  try {
    homothetic_identity_check(ClosedCurve(pts), HomotheticIdentity::lemniscate_support);
    FAIL("expected not_applicable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_applicable);
  }
}
