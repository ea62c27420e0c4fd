#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "error.hpp"
#include "flow.hpp"
#include "perturbation.hpp"
#include "stability.hpp"

using namespace ccdf;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

ClosedCurve support(int omega, int n0, double eta, int samples = 128) {
  return resample_by_arclength(build_support_curve(SupportPerturbation{omega, n0, eta}, 2 * samples), samples).curve;
}

}  // namespace

TEST_CASE("support perturbation parameters") {
  CHECK(SupportPerturbation{2, 1, 0.05}.a() == Approx(0.75));
  CHECK(SupportPerturbation{1, 2, 0.05}.a() == Approx(-3.0));
  CHECK_NOTHROW(SupportPerturbation{1, 2, 0.05}.validate());
  try {
    SupportPerturbation{1, 3, 0.2}.validate();
    FAIL("expected non-convex support");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::non_convex_support);
  }
  CHECK_THROWS_AS((SupportPerturbation{2, 2, 0.01}.validate()), Error);
  CHECK_THROWS_AS((SupportPerturbation{0, 1, 0.01}.validate()), Error);
  CHECK_THROWS_AS(build_support_curve(SupportPerturbation{1, 3, 0.2}, 256), Error);
}

TEST_CASE("support curves") {
  const auto round = build_support_curve(SupportPerturbation{3, 1, 0.0}, 192);
  for (int j = 0; j < 192; ++j) CHECK(std::abs(std::abs(round[j]) - 1.0) < 1e-14);
  CHECK(metrics(round).omega == 3);

  const auto m = metrics(build_support_curve(SupportPerturbation{2, 1, 0.05}, 256));
  CHECK(m.length == Approx(4 * kPi).epsilon(1e-8));
  CHECK(m.omega == 2);
  const double a = 0.75, eta = 0.05;
  const double e = oscillation_field(support(2, 1, eta, 256)).e;
  CHECK(e == Approx(kPi * 2 * a * a * eta * eta).epsilon(3 * eta));

  const auto oval = metrics(build_support_curve(SupportPerturbation{1, 2, 0.05}, 256));
  CHECK(oval.omega == 1);
  CHECK(oval.length == Approx(2 * kPi).epsilon(1e-8));
}

TEST_CASE("general support functions") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 20; ++i) {
    const int omega = 1 + i % 3;
    const auto h = random_support_function(rng(), omega, 3, 0.02);
    CHECK_NOTHROW(h.validate());
    CHECK(h.modes.size() == 3);
    for (const auto& md : h.modes) CHECK(md.m != omega);
    const auto m = metrics(build_support_curve(h, 512));
    CHECK(m.omega == omega);
    CHECK(m.length == Approx(2 * kPi * omega).epsilon(1e-8));
  }
  SupportFunction bad{1, {{3, 0.2, 0.0}}};
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK(random_support_function(5, 2, 3, 0.01).modes[0].amplitude == random_support_function(5, 2, 3, 0.01).modes[0].amplitude);
}

TEST_CASE("oscillation field") {
  const auto f = oscillation_field(ClosedCurve::circle(2, 3.0, 128));
  CHECK(f.omega == 2);
  CHECK(f.e < 1e-24);
  const auto rev = oscillation_field(support(2, 1, 0.02).reversed());
  const auto fwd = oscillation_field(support(2, 1, 0.02));
  CHECK(rev.omega == 2);
  CHECK(rev.e == Approx(fwd.e).epsilon(1e-10));
  std::vector<Point> eight(128);
  for (int j = 0; j < 128; ++j) {
    const double x = 2 * kPi * j / 128;
    eight[j] = {std::sin(x), std::sin(x) * std::cos(x)};
  }
  try {
    oscillation_field(ClosedCurve(eight));
    FAIL("expected undefined expansion");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::undefined_expansion);
  }
  CHECK_THROWS_AS(Q_functional(ClosedCurve(eight), 0.0), Error);
  CHECK_THROWS_AS(R_functional(ClosedCurve(eight), 0.0), Error);
}

TEST_CASE("Q functional") {
  for (double c : {-1.0, 0.0, 0.5}) {
    CHECK(std::abs(Q_functional(ClosedCurve::circle(1, 1.0, 128), c)) < 1e-14);
    CHECK(std::abs(R_functional(ClosedCurve::circle(2, 1.0, 128), c)) < 1e-14);
  }
  const double eta = 0.02, a = 0.75;
  const double expected = kPi * 2 * a * a * (-3.0 / 8.0) * eta * eta;
  const double q = Q_functional(support(2, 1, eta), 0.0);
  CHECK(q < 0.0);
  CHECK(q == Approx(expected).epsilon(3 * eta));
  // Q is scale invariant: the curve is rescaled to length 2 pi omega first
  CHECK(Q_functional(support(2, 1, eta).scaled(3.0), 0.0) == Approx(q).epsilon(1e-10));
}

TEST_CASE("Q quadrature agrees with the Fourier symbol form") {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 10; ++i) {
    const int omega = 1 + i % 3;
    const double c = -1.0 + 0.3 * i;
    const auto h = random_support_function(rng(), omega, 3, 0.01);
    const auto curve = resample_by_arclength(build_support_curve(h, 512), 256).curve;
    const double q = Q_functional(curve, c);
    const double qf = Q_fourier(curve, c);
    CHECK(std::abs(q - qf) <= 1e-8 * std::abs(q));
  }
}

TEST_CASE("Q symmetries") {
  const auto h = random_support_function(47, 2, 3, 0.01);
  const auto curve = resample_by_arclength(build_support_curve(h, 512), 256).curve;
  const double q = Q_functional(curve, 0.3);
  std::vector<Point> mirrored(curve.points().begin(), curve.points().end());
  for (auto& p : mirrored) p = std::conj(p);
  CHECK(Q_functional(ClosedCurve(mirrored), 0.3) == Approx(q).epsilon(1e-10));
  std::vector<Point> shifted(256);
  for (int j = 0; j < 256; ++j) shifted[j] = curve[(j + 37) % 256];
  CHECK(Q_functional(ClosedCurve(shifted), 0.3) == Approx(q).epsilon(1e-10));
  CHECK(Q_functional(curve.rotated(1.0).translated({2.0, 5.0}), 0.3) == Approx(q).epsilon(1e-10));
}

TEST_CASE("remainder is O(eta^3) for the single-mode perturbation") {
  std::vector<double> r;
  for (double eta : {0.04, 0.02, 0.01}) {
    const double value = R_functional(support(2, 1, eta), 0.0);
    r.push_back(std::abs(value) / (eta * eta * eta));
    const auto bound = remainder_bound(support(2, 1, eta), 0.0);
    CHECK(bound.R == Approx(value));
    CHECK(bound.ratio < 10.0);
    CHECK(std::abs(Q_functional(support(2, 1, eta), 0.0)) > 10 * std::abs(value));
  }
  CHECK(r[1] <= r[0]);
  CHECK(r[2] <= r[1]);
}

TEST_CASE("remainder scales cubically when the cubic terms are active") {
  // modes 1, 3, 4 of an omega = 2 support function interact at third order
  auto remainder = [](double eta) {
    const SupportFunction h{2, {{1, eta, 0.0}, {3, eta, 0.5}, {4, 0.5 * eta, 0.1}}};
    return R_functional(resample_by_arclength(build_support_curve(h, 512), 256).curve, 0.0);
  };
  const double r1 = remainder(0.002), r2 = remainder(0.001), r3 = remainder(0.0005);
  CHECK(std::abs(r1 / r2) >= 6.0);
  CHECK(std::abs(r1 / r2) <= 10.0);
  CHECK(std::abs(r2 / r3) >= 6.0);
  CHECK(std::abs(r2 / r3) <= 10.0);
}

TEST_CASE("predicted initial growth") {
  CHECK(e_prime0_prediction(SupportPerturbation{2, 1, 0.02}, 0.0) == Approx(27 * kPi / 64 * 4e-4));
  CHECK(e_prime0_prediction(SupportPerturbation{2, 1, 0.02}, 0.0) == Approx(5.30e-4).epsilon(1e-3));
  CHECK(e_prime0_prediction(SupportPerturbation{1, 2, 0.01}, 0.0) == Approx(-kPi * 9 * 24 * 1e-4));
  // p_c(n0/omega) = 0 at c = 3/2 for omega = 1, n0 = 2
  CHECK(e_prime0_prediction(SupportPerturbation{1, 2, 0.01}, 1.5) == 0.0);
}

TEST_CASE("sign law for e'(0)") {
  struct Case {
    double c;
    int omega, n0;
  };
  for (const Case& k : {Case{0.0, 2, 1}, Case{0.0, 1, 2}, Case{-1.0, 2, 1}, Case{2.0, 1, 2}, Case{0.5, 3, 1}, Case{0.05, 3, 2}}) {
    const double p = symbol(static_cast<double>(k.n0) / k.omega, k.c);
    REQUIRE(std::abs(p) > 0.05);
    const auto ep = measure_e_prime(build_support_curve(SupportPerturbation{k.omega, k.n0, 0.02}, 256), k.c, 128);
    CHECK((ep.value > 0.0) == (p < 0.0));
  }
}

TEST_CASE("instability experiment") {
  const auto rep = run_instability_experiment(0.0, 2, {0.04, 0.02, 0.01});
  CHECK(rep.n0 == 1);
  CHECK(rep.a == Approx(0.75));
  CHECK(rep.lambda_hat == Approx(-0.375));
  CHECK(rep.limit == Approx(2 * kPi * (9.0 / 16.0) * (3.0 / 8.0)));
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.all_positive);
  CHECK(std::abs(rep.rows.back().measured_over_eta2 - rep.limit) < 0.1 * rep.limit);
  CHECK(rep.observed_order >= 1.0);
  for (const auto& row : rep.rows) CHECK(row.identity_discrepancy < 0.01);
  CHECK(std::string(rep.verdict) == "unstable");

  const auto chen = run_instability_experiment(-1.0, 2, {0.02, 0.01});
  CHECK(chen.all_positive);

  const auto big = run_instability_experiment(2.0, 1, {0.02, 0.01});
  CHECK(big.n0 == 2);
  CHECK(big.all_positive);

  try {
    run_instability_experiment(0.5, 3, {0.01});
    FAIL("expected precondition error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::precondition);
  }
}

TEST_CASE("translation energy stays below 10 e^2 on a stable run") {
  FlowConfig cfg;
  cfg.c = 0.0;
  cfg.N = 64;
  cfg.mode = FlowMode::length_normalised;
  cfg.t_end = 0.5;
  cfg.record_every = 200;
  cfg.record_translation_energy = true;
  const auto curve = support(1, 2, 0.005, 64);
  REQUIRE(metrics(curve).K_osc <= 1e-2);
  const auto result = run(curve, cfg);
  REQUIRE(result.series.records.size() > 5);
  for (const auto& r : result.series.records) {
    const double e = r.K_osc / (2 * kPi);
    CHECK(r.e_tr <= 10 * e * e + 1e-28);
  }
}
