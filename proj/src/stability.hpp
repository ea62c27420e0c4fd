#pragma once

// Stability calculus for the omega-fold circle: the quartic symbol p_c, the
// spectral gap lambda_hat over lattice frequencies n/omega (scaling and
// translation modes removed), the exact thresholds c_omega^-, c_omega^+, the
// symbol roots r_c^-, r_c^+, and the stability region in the (c, omega) plane.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ccdf {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "1.001", "-0.5", "3/52", "2e-3" exactly.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);
double to_double(const Rational& r);

/// p_c(x) = 2x^4 - (6c+2)x^2 + 8c
double symbol(double x, double c);
Rational symbol(const Rational& x, const Rational& c);

/// Largest |n| the lambda_hat search must visit:
/// max(omega + 2, omega * ceil(sqrt(max(0, (3c+1)/2))) + omega + 2).
/// p_c is increasing in |x| beyond sqrt((3c+1)/2).
int lambda_search_bound(const Rational& c, int omega);
int lambda_search_bound(double c, int omega);

struct LambdaHat {
  double value = 0.0;
  int argmin_n = 0;
};

struct ExactLambdaHat {
  Rational value;
  int argmin_n = 0;
};

/// min over n in Z \ {0, +-omega} of p_c(n/omega). Ties go to the smallest |n|.
/// `extra_search` widens the scan (used by soundness checks).
LambdaHat lambda_hat(double c, int omega, int extra_search = 0);
ExactLambdaHat lambda_hat(const Rational& c, int omega, int extra_search = 0);

struct Thresholds {
  std::optional<Rational> c_minus;  // nullopt encodes -infinity (omega = 1)
  Rational c_plus;
  int c_minus_mode = 0;  // n attaining the max
  int c_plus_mode = 0;   // n attaining the min

  double c_minus_value() const;
  double c_plus_value() const;
};

/// c_omega^- = max_{1<=n<=omega-1} g(n/omega), c_omega^+ = min_{n > 2 omega/sqrt3} g(n/omega)
/// with g(n/omega) = n^2 (omega^2 - n^2) / (omega^2 (4 omega^2 - 3 n^2)), exact.
Thresholds thresholds(int omega);

struct SymbolRoots {
  double r_minus = 0.0;
  double r_plus = 0.0;
};

/// Real positive roots of p_c; domain error unless c in (0, 1/9) or (1, inf).
SymbolRoots symbol_roots(double c);

enum class Verdict { stable, unstable, borderline };

const char* to_string(Verdict v);
Verdict classify(double lambda_hat_value, double borderline_eps = 1e-12);
Verdict classify(const Rational& lambda_hat_value);

/// omega in [1, omega_max] with lambda_hat > 0, computed exactly.
std::vector<int> stable_omegas(const Rational& c, int omega_max);
/// Same set through the lattice test (1/omega) N  cap [r^-, r^+] = empty.
/// Only valid for c in (0, 1/9) or (1, inf).
std::vector<int> stable_omegas_lattice(double c, int omega_max);

struct StabilityReport {
  Rational c;
  int omega = 1;
  Rational lambda_hat_exact;
  double lambda_hat = 0.0;
  int argmin_n = 0;
  Verdict verdict = Verdict::borderline;
  Thresholds thresholds;
  std::optional<SymbolRoots> roots;
};

StabilityReport stability_report(const Rational& c, int omega);

struct StabilityRow {
  int omega = 1;
  double c_minus = 0.0;  // -inf for omega = 1
  double c_plus = 0.0;
  std::vector<bool> stable;  // one flag per grid value of c
};

struct StabilityGrid {
  std::vector<double> c_values;
  std::vector<StabilityRow> rows;
};

/// Rows omega = 1..omega_max over `resolution` equispaced c values in
/// [c_min, c_max]. Rows are independent and are split over `threads` workers.
StabilityGrid stability_region_grid(double c_min, double c_max, int omega_max, int resolution, int threads = 1);

}  // namespace ccdf
