#include "special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "error.hpp"

namespace ccdf {
namespace {

constexpr double kPi = std::numbers::pi;

void check_parameter(double m) {
  if (!(m > 0.0 && m < 1.0)) {
    std::ostringstream os;
    os << "elliptic parameter m = " << m << " outside (0,1)";
    fail(ErrorKind::domain, os.str());
  }
}

// F on [0, pi/2] by quadrature of the defining integral.
double F_principal(double x, double m) {
  if (x == 0.0) return 0.0;
  auto integrand = [m](double theta) {
    const double s = std::sin(theta);
    return 1.0 / std::sqrt(1.0 - m * s * s);
  };
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  return Quad::integrate(integrand, 0.0, x, 15, 1e-15);
}

}  // namespace

double complete_K(double m) {
  check_parameter(m);
  double a = 1.0;
  double b = std::sqrt(1.0 - m);
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return kPi / (a + b);
}

double incomplete_F(double x, double m) {
  check_parameter(m);
  if (!std::isfinite(x)) fail(ErrorKind::domain, "incomplete_F: non-finite argument");
  const double periods = std::round(x / kPi);
  const double r = x - periods * kPi;  // r in [-pi/2, pi/2]
  const double principal = std::copysign(F_principal(std::abs(r), m), r);
  return 2.0 * periods * complete_K(m) + principal;
}

double jacobi_am(double u, double m) {
  check_parameter(m);
  if (!std::isfinite(u)) fail(ErrorKind::domain, "jacobi_am: non-finite argument");
  // Descending Landen / AGM scheme.
  constexpr int kMaxLevels = 32;
  std::array<double, kMaxLevels + 1> a{};
  std::array<double, kMaxLevels + 1> c{};
  a[0] = 1.0;
  double b = std::sqrt(1.0 - m);
  c[0] = std::sqrt(m);
  int levels = 0;
  while (levels < kMaxLevels && std::abs(c[levels]) > 1e-17) {
    const double an = 0.5 * (a[levels] + b);
    c[levels + 1] = 0.5 * (a[levels] - b);
    b = std::sqrt(a[levels] * b);
    a[levels + 1] = an;
    ++levels;
  }
  double phi = std::ldexp(a[levels] * u, levels);
  for (int n = levels; n > 0; --n) {
    phi = 0.5 * (phi + std::asin(c[n] / a[n] * std::sin(phi)));
  }
  return phi;
}

JacobiTriple jacobi_cn_sn_dn(double u, double m) {
  const double phi = jacobi_am(u, m);
  const double sn = std::sin(phi);
  return {std::cos(phi), sn, std::sqrt(1.0 - m * sn * sn)};
}

double closure_integral_f(double t) {
  if (!std::isfinite(t)) fail(ErrorKind::domain, "closure_integral_f: non-finite argument");
  t = std::abs(t);
  // x = pi/2 - u^2 turns the 1/sqrt(cos x) endpoint singularity into the smooth
  // factor 2u / sqrt(sin(u^2)), which tends to 2 as u -> 0.
  auto integrand = [t](double u) {
    const double u2 = u * u;
    const double weight = u < 1e-6 ? 2.0 / std::sqrt(1.0 - u2 * u2 / 6.0) : 2.0 * u / std::sqrt(std::sin(u2));
    return std::cos(t * (0.5 * kPi - u2)) * weight;
  };
  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  return Quad::integrate(integrand, 0.0, std::sqrt(0.5 * kPi), 20, 1e-14);
}

}  // namespace ccdf
