#pragma once

// Stationary solutions of k_ss + c k^3 = 0: the super-lemniscates, the
// closure condition that selects them, the curvature ODE, and the identities
// satisfied by the lemniscate of Bernoulli as a common homothetic profile.

#include <vector>

#include "geometry.hpp"

namespace ccdf {

struct SuperLemniscateSpec {
  int j = 1;
  int samples = 2048;

  /// c_j = 2 / (4j - 1)^2
  double c() const;
  /// One curvature period in arclength, 4 K(1/2).
  double period() const;
  /// Half-width of the tangent-angle range, sqrt(2/c) pi / 4.
  double theta_max() const;
};

struct SuperLemniscate {
  SuperLemniscateSpec spec;
  ClosedCurve curve;
  double closure_gap = 0.0;  // |gamma(L) - gamma(0)| before periodic storage
  std::vector<double> arclength;  // s_i on the uniform grid
  std::vector<double> curvature;  // exact profile (1/sqrt c) cn(s; 1/2)
  std::vector<double> tangent_angle;
};

/// Requires j >= 1 and samples >= 512 (even). The curve is centred at its
/// arclength centroid and stored uniformly in arclength.
SuperLemniscate build_super_lemniscate(const SuperLemniscateSpec& spec);

/// sup |k_ss + c k^3| on a sampled curve, by spectral differentiation.
double stationarity_residual(const ClosedCurve& curve, double c);

/// (1/2) f(1/sqrt(2c)); vanishes iff c = c_j. Domain error for c <= 0.
double closure_residual(double c);

struct OdeSolutionParams {
  double c = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double k0 = 0.0;
  double k1 = 0.0;

  /// k(s) = (alpha / sqrt c) cn(alpha s + beta; 1/2)
  double curvature(double s) const;
  double curvature_derivative(double s) const;
};

/// Solves k'' + c k^3 = 0, k(0) = k0, k'(0) = k1 for c > 0 in closed form.
/// Throws ErrorKind::trivial_solution for (k0, k1) = (0, 0).
OdeSolutionParams solve_curvature_ode(double c, double k0, double k1);

enum class HomotheticIdentity { lemniscate_mu, lemniscate_support };

struct HomotheticCheck {
  double residual = 0.0;
  double fitted_A = 0.0;  // lemniscate_support only
  Point centre{};
  std::vector<double> support;  // h = <gamma - centre, N>
  std::vector<double> curvature;
  std::vector<bool> fitted_region;  // |k| > 0.1 max|k|
};

/// lemniscate_mu: sup |k_ss + (2/9) k^3|.
/// lemniscate_support: least-squares A in h = A k^3 over |k| > 0.1 max|k|,
/// residual sup |h - A k^3| on that region.
/// Round circles are accepted (constant k); any other curve with non-zero
/// turning number throws ErrorKind::not_applicable.
HomotheticCheck homothetic_identity_check(const ClosedCurve& curve, HomotheticIdentity which);

}  // namespace ccdf
