#pragma once

// Support-function perturbations of the omega-circle and the functionals of
// the e(t) evolution: Q (quadratic form), R (remainder), and the predicted
// initial growth rate e'(0).

#include <cstdint>
#include <optional>
#include <vector>

#include "geometry.hpp"

namespace ccdf {

/// h(theta) = 1 + eta cos(n0 theta / omega) on theta in [0, 2 pi omega).
struct SupportPerturbation {
  int omega = 1;
  int n0 = 2;
  double eta = 0.0;

  /// a = 1 - n0^2 / omega^2; the radius of curvature is 1 + a eta cos(n0 theta / omega).
  double a() const;
  /// Throws ErrorKind::invalid_argument for omega < 1, n0 < 1, n0 == omega and
  /// ErrorKind::non_convex_support for |a eta| >= 1.
  void validate() const;
};

/// General support function 1 + sum_m amp_m cos(m theta / omega + phase_m).
struct SupportMode {
  int m = 2;
  double amplitude = 0.0;
  double phase = 0.0;
};

struct SupportFunction {
  int omega = 1;
  std::vector<SupportMode> modes;

  /// Throws ErrorKind::non_convex_support unless h + h'' > 0 everywhere.
  void validate() const;
};

/// Curve gamma = h (cos, sin) + h' (-sin, cos) sampled on the theta grid
/// (theta_j = 2 pi omega j / N). theta is not arclength.
ClosedCurve build_support_curve(const SupportPerturbation& p, int samples);
ClosedCurve build_support_curve(const SupportFunction& h, int samples);

/// Random small support function with `count` modes m in [1, 4 omega] \ {omega},
/// amplitudes uniform in [-max_amplitude, max_amplitude] scaled so that
/// sum |amp (1 - m^2/omega^2)| <= max_amplitude * 4.
SupportFunction random_support_function(std::uint64_t seed, int omega, int count, double max_amplitude);

/// Fields on the curve rescaled to length 2 pi omega (omega > 0 after orientation).
struct OscillationField {
  int omega = 0;
  std::vector<double> f;  // k - 1
  std::vector<double> f_s;
  std::vector<double> f_ss;
  std::vector<double> speed;
  double e = 0.0;  // int f^2 ds
};

/// Throws ErrorKind::undefined_expansion for turning number 0.
OscillationField oscillation_field(const ClosedCurve& curve);

/// Q = 2 int f_ss^2 - (6c+2) int f_s^2 + 8c int f^2, by quadrature.
double Q_functional(const ClosedCurve& curve, double c);
/// 2 pi omega sum_{n != 0} p_c(n/omega) |a_n|^2 with |n| <= n_max
/// (default: half the sample count minus one).
double Q_fourier(const ClosedCurve& curve, double c, int n_max = 0);
/// Full ten-term remainder.
double R_functional(const ClosedCurve& curve, double c);

struct RemainderBound {
  double R = 0.0;
  double e = 0.0;
  double f_ss_norm2 = 0.0;
  /// |R| / (sqrt(e) (int f_ss^2 + e))
  double ratio = 0.0;
};

RemainderBound remainder_bound(const ClosedCurve& curve, double c);

/// -pi omega a^2 p_c(n0 / omega) eta^2
double e_prime0_prediction(const SupportPerturbation& p, double c);

struct InstabilityRow {
  double eta = 0.0;
  double e0 = 0.0;
  double e_prime_measured = 0.0;
  double e_prime_predicted = 0.0;
  double measured_over_eta2 = 0.0;
  double Q = 0.0;
  double R = 0.0;
  double identity_discrepancy = 0.0;  // |e' - (-Q + R)| / |e'|
};

struct InstabilityReport {
  double c = 0.0;
  int omega = 1;
  int n0 = 0;
  double a = 0.0;
  double lambda_hat = 0.0;
  double p_n0 = 0.0;
  double limit = 0.0;  // -pi omega a^2 p_c(n0/omega)
  std::vector<InstabilityRow> rows;
  bool all_positive = false;
  double max_relative_error = 0.0;  // max over rows of |measured/eta^2 - limit| / |limit|
  double observed_order = 0.0;      // from the two smallest eta
  const char* verdict = "stable";
};

struct InstabilityOptions {
  std::optional<int> n0;  // default: argmin mode of lambda_hat
  int samples = 128;
  int build_samples = 256;
  double dt_safety = 0.01;
  int threads = 1;
};

/// Requires lambda_hat(c, omega) < 0 (ErrorKind::precondition otherwise).
InstabilityReport run_instability_experiment(double c, int omega, const std::vector<double>& etas,
                                             const InstabilityOptions& options = {});

}  // namespace ccdf
