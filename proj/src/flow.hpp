#pragma once

// Explicit RK4 integration of the scale-critical curve diffusion flow
//   d/dt gamma = -(k_ss + c k^3) N              (unnormalised)
//   d/dt gamma = -(k_ss + c k^3) N + lambda gamma   (length-normalised)
// with lambda = (1/L0)(int k_s^2 ds - c int k^4 ds), L0 = 2 pi omega.

#include <optional>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace ccdf {

enum class FlowMode { unnormalised, length_normalised };

const char* to_string(FlowMode mode);
FlowMode parse_flow_mode(const std::string& text);

struct FlowConfig {
  double c = 0.0;
  FlowMode mode = FlowMode::unnormalised;
  int N = 128;
  double dt_safety = 0.02;
  int reparam_every = 10;
  /// A reparam step resamples only when (max speed - min speed) > tol * max speed.
  double resample_tolerance = 1e-4;
  std::optional<double> t_end;
  double stop_kmax = 1e4;
  std::optional<double> stop_koscmax;
  /// Stops with status `converged` once K_osc drops below this value.
  std::optional<double> stop_kosc_min;
  int record_every = 100;
  /// Curve snapshots are stored every `snapshot_every` records (0 = none).
  int snapshot_every = 0;
  /// Also record the translation-mode energy E_tr (costs one Fourier expansion).
  bool record_translation_energy = false;
  long long max_steps = 2'000'000'000LL;

  /// Throws ErrorKind::invalid_argument unless dt_safety in (0, 0.03] and N even >= 64.
  void validate() const;
};

struct FlowState {
  double time = 0.0;
  ClosedCurve curve;
  double lambda_now = 0.0;
  double sigma = 1.0;
  double L0 = 0.0;
  int omega = 0;
  long long steps = 0;
};

struct Record {
  double t = 0.0;
  double L = 0.0;
  double A = 0.0;
  int omega = 0;
  double K_osc = 0.0;
  double k_max = 0.0;
  double lambda = 0.0;
  double sigma = 1.0;
  Point centroid{};
  double e_tr = 0.0;  // only when FlowConfig::record_translation_energy
};

struct TimeSeries {
  std::vector<Record> records;
  std::vector<std::pair<double, ClosedCurve>> snapshots;
};

/// Writes the columns t,L,A,omega,Kosc,kmax,lambda,sigma,cx,cy.
void write_series_csv(const std::string& path, const TimeSeries& series);
void write_series_csv(std::ostream& out, const TimeSeries& series);

/// L0 used for lambda and sigma: 2 pi |omega|, or the curve length when omega = 0.
double reference_length(const ClosedCurve& curve);

/// Velocity on the samples. In length-normalised mode L0 defaults to 2 pi |omega|.
std::vector<Point> velocity_field(const ClosedCurve& curve, double c, FlowMode mode,
                                  std::optional<double> L0 = std::nullopt);

/// lambda of the current curve: sigma^3 / L0 (int k_s^2 - c int k^4) with sigma = L / L0.
double lambda_of(const ClosedCurve& curve, double c, double L0);

FlowState initial_state(const ClosedCurve& gamma0, const FlowConfig& config);

/// Time step dt_safety * (min arclength spacing)^4 for the given curve.
double stable_dt(const ClosedCurve& curve, double dt_safety);

/// One RK4 step of size dt (dt may be negative for backward micro-steps),
/// followed by 2/3-rule truncation of the curve spectrum. No resampling.
FlowState rk4_step(const FlowState& state, const FlowConfig& config, double dt);

enum class RunStatus { completed, converged, blowup, kosc_exceeded, step_limit };

const char* to_string(RunStatus status);

struct RunResult {
  RunStatus status = RunStatus::completed;
  std::string stop_reason;
  TimeSeries series;
  FlowState final_state;
  /// Bracket for the singular time when status == blowup.
  double blowup_lower = 0.0;
  double blowup_upper = 0.0;
  int resamples = 0;
  int under_resolved_resamples = 0;
  double max_length_drift = 0.0;  // length-normalised mode, before correction
  double max_length_correction = 0.0;
  /// Largest share of curve energy removed by the 2/3-rule truncation in one step.
  double max_truncated_fraction = 0.0;
};

/// Resamples gamma0 to config.N samples (uniform arclength) and integrates.
RunResult run(const ClosedCurve& gamma0, const FlowConfig& config);

struct EPrime {
  double value = 0.0;    // Richardson-extrapolated de/dt
  double raw = 0.0;      // centred difference at the smallest window
  double e0 = 0.0;
  double micro_dt = 0.0;
};

/// de/dt at the current curve under the length-normalised flow, from centred
/// differences of e over 1, 2, 4 forward and backward micro-steps.
EPrime measure_e_prime(const ClosedCurve& curve, double c, int samples, double dt_safety = 0.01);

struct EvolutionCheck {
  double lhs = 0.0;  // flow-measured de/dt
  double rhs = 0.0;  // -Q + R
  double relative_discrepancy = 0.0;
};

/// Compares the measured de/dt with -Q + R. Requires a non-zero turning number.
EvolutionCheck e_evolution_check(const ClosedCurve& curve, double c, int samples);

struct SigmaAsymptotics {
  double sigma_inf = 1.0;
  double decay_slope = 0.0;  // slope of log|lambda + c|; NaN when at the noise floor
  int points_used = 0;
};

/// Requires a length-normalised series whose final K_osc is below 1e-8.
SigmaAsymptotics sigma_asymptotics(const TimeSeries& series, double c);

}  // namespace ccdf
