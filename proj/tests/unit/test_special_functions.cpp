#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "error.hpp"
#include "special_functions.hpp"

using namespace ccdf;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("complete K against frozen AGM values") {
  CHECK(complete_K(0.5) == Approx(1.8540746773013719184).epsilon(1e-14));
  CHECK(complete_K(0.75) == Approx(2.1565156474996432354).epsilon(1e-14));
  CHECK(complete_K(0.9) == Approx(2.5780921133481732927).epsilon(1e-14));
  CHECK(complete_K(1e-12) == Approx(kPi / 2).epsilon(1e-11));
}

TEST_CASE("incomplete F values and symmetries") {
  CHECK(incomplete_F(0.0, 0.5) == 0.0);
  CHECK(std::abs(incomplete_F(kPi / 2, 0.5) - complete_K(0.5)) < 1e-12);
  CHECK(incomplete_F(0.3, 0.5) == Approx(0.30225466857501760705).epsilon(1e-13));
  CHECK(incomplete_F(1.2, 0.8) == Approx(1.4884956889493300227).epsilon(1e-13));
  CHECK(std::abs(incomplete_F(0.3 + kPi, 0.5) - (incomplete_F(0.3, 0.5) + 2 * complete_K(0.5))) < 1e-12);
  CHECK(std::abs(incomplete_F(-1.1, 0.3) + incomplete_F(1.1, 0.3)) < 1e-13);
  double prev = incomplete_F(-7.0, 0.6);
  for (double x = -6.9; x < 7.0; x += 0.1) {
    const double v = incomplete_F(x, 0.6);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("domain errors outside (0,1)") {
  for (double m : {0.0, 1.0, -0.2, 1.5}) {
    CHECK_THROWS_AS(complete_K(m), Error);
    CHECK_THROWS_AS(incomplete_F(0.2, m), Error);
    CHECK_THROWS_AS(jacobi_am(0.2, m), Error);
    CHECK_THROWS_AS(jacobi_cn_sn_dn(0.2, m), Error);
  }
  try {
    complete_K(1.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::domain);
  }
}

TEST_CASE("jacobi amplitude") {
  CHECK(jacobi_am(0.0, 0.5) == 0.0);
  CHECK(jacobi_am(complete_K(0.5), 0.5) == Approx(kPi / 2).epsilon(1e-13));
  CHECK(jacobi_am(0.9, 0.5) == Approx(0.84878531639486190757).epsilon(1e-13));
  CHECK(std::abs(incomplete_F(jacobi_am(0.9, 0.5), 0.5) - 0.9) < 1e-12);
  CHECK(std::abs(jacobi_am(-0.9, 0.5) + jacobi_am(0.9, 0.5)) < 1e-14);
}

TEST_CASE("jacobi cn sn dn values") {
  auto t0 = jacobi_cn_sn_dn(0.0, 0.5);
  CHECK(t0.cn == Approx(1.0));
  CHECK(t0.sn == Approx(0.0));
  CHECK(t0.dn == Approx(1.0));
  auto tk = jacobi_cn_sn_dn(complete_K(0.5), 0.5);
  CHECK(std::abs(tk.cn) < 1e-12);
  CHECK(tk.sn == Approx(1.0).epsilon(1e-12));
  CHECK(tk.dn == Approx(std::sqrt(0.5)).epsilon(1e-12));
  auto a = jacobi_cn_sn_dn(0.7, 0.5);
  CHECK(a.sn == Approx(0.62434009096621734510).epsilon(1e-13));
  CHECK(a.cn == Approx(0.78115264245363431444).epsilon(1e-13));
  CHECK(a.dn == Approx(0.89727349532132493796).epsilon(1e-13));
  auto b = jacobi_cn_sn_dn(2.5, 0.3);
  CHECK(b.cn == Approx(-0.62603197848085474001).epsilon(1e-13));
  CHECK(b.sn == Approx(0.77979738517088310876).epsilon(1e-13));
  CHECK(b.dn == Approx(0.90419843586692629184).epsilon(1e-13));
}

TEST_CASE("round trip and identities on random arguments") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> um(0.01, 0.99), uu(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double m = um(rng);
    const double K = complete_K(m);
    const double u = 3.0 * K * uu(rng);
    CHECK(std::abs(incomplete_F(jacobi_am(u, m), m) - u) < 1e-11);
    const auto t = jacobi_cn_sn_dn(u, m);
    CHECK(std::abs(t.sn * t.sn + t.cn * t.cn - 1.0) < 1e-12);
    CHECK(std::abs(t.dn * t.dn + m * t.sn * t.sn - 1.0) < 1e-12);
    // parity and anti-periodicity
    const auto tn = jacobi_cn_sn_dn(-u, m);
    CHECK(std::abs(tn.cn - t.cn) < 1e-12);
    CHECK(std::abs(tn.sn + t.sn) < 1e-12);
    const auto tp = jacobi_cn_sn_dn(u + 2 * K, m);
    CHECK(std::abs(tp.cn + t.cn) < 1e-11);
  }
}

TEST_CASE("derivative identities against finite differences") {
  const double h = 1e-5;
  for (double m : {0.2, 0.5, 0.8}) {
    for (double u : {-2.0, -0.4, 0.3, 1.1, 2.9}) {
      const auto t = jacobi_cn_sn_dn(u, m);
      const auto p = jacobi_cn_sn_dn(u + h, m);
      const auto q = jacobi_cn_sn_dn(u - h, m);
      const double dcn = (p.cn - q.cn) / (2 * h);
      const double dsn = (p.sn - q.sn) / (2 * h);
      const double ddn = (p.dn - q.dn) / (2 * h);
      CHECK(dcn == Approx(-t.sn * t.dn).epsilon(1e-6).scale(1e-3));
      CHECK(dsn == Approx(t.cn * t.dn).epsilon(1e-6).scale(1e-3));
      CHECK(ddn == Approx(-m * t.sn * t.cn).epsilon(1e-6).scale(1e-3));
    }
  }
}

TEST_CASE("closure integral values") {
  CHECK(closure_integral_f(0.0) == Approx(2.6220575542921192278).epsilon(1e-12));
  CHECK(closure_integral_f(0.5) == Approx(2.2214414690791827115).epsilon(1e-12));
  CHECK(closure_integral_f(1.0) == Approx(1.1981402347355922074).epsilon(1e-12));
  CHECK(closure_integral_f(1.2) == Approx(0.71031152301342862053).epsilon(1e-11));
  CHECK(closure_integral_f(2.0) == Approx(-0.87401918476403935420).epsilon(1e-11));
  CHECK(closure_integral_f(2.7) == Approx(-1.0177354972481845129).epsilon(1e-11));
  CHECK(closure_integral_f(5.0) == Approx(0.55913210954327636347).epsilon(1e-11));
  CHECK(closure_integral_f(7.3) == Approx(-0.20248473111939542082).epsilon(1e-10));
  CHECK(std::abs(closure_integral_f(1.5)) < 1e-9);
  CHECK(std::abs(closure_integral_f(3.5)) < 1e-9);
}

TEST_CASE("closure integral is even and obeys the two-step recursion") {
  for (double t : {0.3, 1.7, 4.2}) CHECK(std::abs(closure_integral_f(-t) - closure_integral_f(t)) < 1e-13);
  for (double t : {1.2, 2.7, 4.4, 6.1}) {
    const double lhs = closure_integral_f(t);
    const double rhs = -((2 * t - 3) / (2 * t - 1)) * closure_integral_f(t - 2);
    CHECK(std::abs(lhs - rhs) < 1e-8);
  }
}

TEST_CASE("closure integral sign pattern") {
  for (double t = 0.0; t < 1.5 - 1e-3; t += 0.05) CHECK(closure_integral_f(t) > 0.0);
  for (int j = 1; j <= 4; ++j) {
    const double z = (4.0 * j - 1.0) / 2.0;
    CHECK(std::abs(closure_integral_f(z)) < 1e-9);
    CHECK(closure_integral_f(z - 0.05) * closure_integral_f(z + 0.05) < 0.0);
  }
}
