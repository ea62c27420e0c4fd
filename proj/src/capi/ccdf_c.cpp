#include "ccdf/ccdf.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "curve_io.hpp"
#include "error.hpp"
#include "flow.hpp"
#include "perturbation.hpp"
#include "special_functions.hpp"
#include "stability.hpp"
#include "stationary.hpp"
#include "svg.hpp"

struct ccdf_curve {
  ccdf::ClosedCurve curve;
};

struct ccdf_grid {
  ccdf::StabilityGrid grid;
};

struct ccdf_run {
  ccdf::RunResult result;
  ccdf::ClosedCurve initial;
};

struct ccdf_instability {
  ccdf::InstabilityReport report;
};

namespace {

thread_local std::string g_last_error;

ccdf_status status_of(ccdf::ErrorKind kind) {
  using K = ccdf::ErrorKind;
  switch (kind) {
    case K::domain: return CCDF_ERR_DOMAIN;
    case K::degenerate_curve: return CCDF_ERR_DEGENERATE_CURVE;
    case K::non_closed_curvature: return CCDF_ERR_NON_CLOSED_CURVATURE;
    case K::undefined_expansion: return CCDF_ERR_UNDEFINED_EXPANSION;
    case K::not_applicable: return CCDF_ERR_NOT_APPLICABLE;
    case K::non_convex_support: return CCDF_ERR_NON_CONVEX_SUPPORT;
    case K::trivial_solution: return CCDF_ERR_TRIVIAL_SOLUTION;
    case K::precondition: return CCDF_ERR_PRECONDITION;
    case K::invalid_argument: return CCDF_ERR_INVALID_ARGUMENT;
    case K::io: return CCDF_ERR_IO;
  }
  return CCDF_ERR_INTERNAL;
}

ccdf_status set_error(ccdf_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <class F>
ccdf_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return CCDF_OK;
  } catch (const ccdf::Error& e) {
    return set_error(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(CCDF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(CCDF_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) ccdf::fail(ccdf::ErrorKind::invalid_argument, what);
}

void copy_text(char (&dst)[CCDF_RATIONAL_CHARS], const std::string& src) {
  if (src.size() >= CCDF_RATIONAL_CHARS) ccdf::fail(ccdf::ErrorKind::invalid_argument, "exact value too long: " + src);
  std::memcpy(dst, src.c_str(), src.size() + 1);
}

ccdf_verdict verdict_of(ccdf::Verdict v) {
  switch (v) {
    case ccdf::Verdict::stable: return CCDF_STABLE;
    case ccdf::Verdict::unstable: return CCDF_UNSTABLE;
    case ccdf::Verdict::borderline: return CCDF_BORDERLINE;
  }
  return CCDF_BORDERLINE;
}

ccdf_curve* wrap(ccdf::ClosedCurve curve) { return new ccdf_curve{std::move(curve)}; }

void copy_list(const std::vector<int>& values, int* out, size_t cap, size_t* count) {
  require(count != nullptr, "count must not be null");
  *count = values.size();
  if (out != nullptr) std::copy_n(values.begin(), std::min(cap, values.size()), out);
}

}  // namespace

extern "C" {

const char* ccdf_version(void) { return CCDF_VERSION_STRING; }

const char* ccdf_last_error(void) { return g_last_error.c_str(); }

const char* ccdf_status_name(ccdf_status status) {
  switch (status) {
    case CCDF_OK: return "ok";
    case CCDF_ERR_DOMAIN: return "domain";
    case CCDF_ERR_DEGENERATE_CURVE: return "degenerate_curve";
    case CCDF_ERR_NON_CLOSED_CURVATURE: return "non_closed_curvature";
    case CCDF_ERR_UNDEFINED_EXPANSION: return "undefined_expansion";
    case CCDF_ERR_NOT_APPLICABLE: return "not_applicable";
    case CCDF_ERR_NON_CONVEX_SUPPORT: return "non_convex_support";
    case CCDF_ERR_TRIVIAL_SOLUTION: return "trivial_solution";
    case CCDF_ERR_PRECONDITION: return "precondition";
    case CCDF_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case CCDF_ERR_IO: return "io";
    case CCDF_ERR_BUFFER_TOO_SMALL: return "buffer_too_small";
    case CCDF_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

ccdf_status ccdf_complete_K(double m, double* out) {
  return guarded([&] {
    require(out, "out must not be null");
    *out = ccdf::complete_K(m);
  });
}

ccdf_status ccdf_incomplete_F(double x, double m, double* out) {
  return guarded([&] {
    require(out, "out must not be null");
    *out = ccdf::incomplete_F(x, m);
  });
}

ccdf_status ccdf_jacobi_am(double u, double m, double* out) {
  return guarded([&] {
    require(out, "out must not be null");
    *out = ccdf::jacobi_am(u, m);
  });
}

ccdf_status ccdf_jacobi_cn_sn_dn(double u, double m, double* cn, double* sn, double* dn) {
  return guarded([&] {
    require(cn && sn && dn, "outputs must not be null");
    const auto t = ccdf::jacobi_cn_sn_dn(u, m);
    *cn = t.cn;
    *sn = t.sn;
    *dn = t.dn;
  });
}

ccdf_status ccdf_closure_integral(double t, double* out) {
  return guarded([&] {
    require(out, "out must not be null");
    *out = ccdf::closure_integral_f(t);
  });
}

ccdf_status ccdf_curve_create(const double* xy, size_t n, ccdf_curve** out) {
  return guarded([&] {
    require(xy && out, "arguments must not be null");
    std::vector<ccdf::Point> pts(n);
    for (size_t i = 0; i < n; ++i) pts[i] = {xy[2 * i], xy[2 * i + 1]};
    *out = wrap(ccdf::ClosedCurve(std::move(pts)));
  });
}

ccdf_status ccdf_curve_circle(int omega, double radius, int samples, ccdf_curve** out) {
  return guarded([&] {
    require(out, "out must not be null");
    *out = wrap(ccdf::ClosedCurve::circle(omega, radius, samples));
  });
}

ccdf_status ccdf_curve_read_csv(const char* path, ccdf_curve** out) {
  return guarded([&] {
    require(path && out, "arguments must not be null");
    *out = wrap(ccdf::read_curve_csv(std::string(path)));
  });
}

ccdf_status ccdf_curve_write_csv(const ccdf_curve* curve, const char* path) {
  return guarded([&] {
    require(curve && path, "arguments must not be null");
    ccdf::write_curve_csv(std::string(path), curve->curve);
  });
}

void ccdf_curve_free(ccdf_curve* curve) { delete curve; }

size_t ccdf_curve_size(const ccdf_curve* curve) { return curve ? static_cast<size_t>(curve->curve.size()) : 0; }

ccdf_status ccdf_curve_points(const ccdf_curve* curve, double* xy, size_t n) {
  return guarded([&] {
    require(curve && xy, "arguments must not be null");
    const auto pts = curve->curve.points();
    const size_t count = std::min(n, pts.size());
    for (size_t i = 0; i < count; ++i) {
      xy[2 * i] = pts[i].real();
      xy[2 * i + 1] = pts[i].imag();
    }
  });
}

ccdf_status ccdf_curve_metrics_get(const ccdf_curve* curve, ccdf_curve_metrics* out) {
  return guarded([&] {
    require(curve && out, "arguments must not be null");
    const auto m = ccdf::metrics(curve->curve);
    *out = {m.length, m.signed_area, m.omega, m.turning_raw, m.k_bar, m.K_osc, m.k_max_abs, m.centroid.real(),
            m.centroid.imag()};
  });
}

ccdf_status ccdf_curve_resample(const ccdf_curve* curve, int samples, ccdf_curve** out, int* under_resolved) {
  return guarded([&] {
    require(curve && out, "arguments must not be null");
    auto r = ccdf::resample_by_arclength(curve->curve, samples);
    if (under_resolved) *under_resolved = r.under_resolved ? 1 : 0;
    *out = wrap(std::move(r.curve));
  });
}

ccdf_status ccdf_curve_curvature(const ccdf_curve* curve, double* k, size_t n) {
  return guarded([&] {
    require(curve && k, "arguments must not be null");
    const auto fr = ccdf::tangent_normal_curvature(curve->curve);
    std::copy_n(fr.curvature.begin(), std::min(n, fr.curvature.size()), k);
  });
}

ccdf_status ccdf_curves_write_svg(const ccdf_curve* const* curves, const char* const* labels, size_t count,
                                  const char* path) {
  return guarded([&] {
    require(curves && path, "arguments must not be null");
    std::vector<ccdf::LabelledCurve> items;
    for (size_t i = 0; i < count; ++i) {
      require(curves[i] != nullptr, "curve must not be null");
      items.push_back({labels && labels[i] ? labels[i] : "", curves[i]->curve});
    }
    ccdf::write_text_file(path, ccdf::curve_gallery_svg(items));
  });
}

ccdf_status ccdf_super_lemniscate(int j, int samples, ccdf_curve** out, ccdf_lemniscate_info* info) {
  return guarded([&] {
    require(out, "out must not be null");
    ccdf::SuperLemniscateSpec spec{j, samples};
    auto sl = ccdf::build_super_lemniscate(spec);
    if (info) *info = {j, samples, spec.c(), spec.period(), spec.theta_max(), sl.closure_gap};
    *out = wrap(std::move(sl.curve));
  });
}

ccdf_status ccdf_stationarity_residual(const ccdf_curve* curve, double c, double* out) {
  return guarded([&] {
    require(curve && out, "arguments must not be null");
    *out = ccdf::stationarity_residual(curve->curve, c);
  });
}

ccdf_status ccdf_closure_residual(double c, double* out) {
  return guarded([&] {
    require(out, "out must not be null");
    *out = ccdf::closure_residual(c);
  });
}

ccdf_status ccdf_solve_curvature_ode(double c, double k0, double k1, ccdf_ode_solution* out) {
  return guarded([&] {
    require(out, "out must not be null");
    const auto sol = ccdf::solve_curvature_ode(c, k0, k1);
    *out = {sol.alpha, sol.beta};
  });
}

double ccdf_ode_curvature(double c, const ccdf_ode_solution* sol, double s) {
  if (!sol || !(c > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  ccdf::OdeSolutionParams p;
  p.c = c;
  p.alpha = sol->alpha;
  p.beta = sol->beta;
  return p.curvature(s);
}

ccdf_status ccdf_homothetic_check(const ccdf_curve* curve, ccdf_homothetic_identity which, double* residual,
                                  double* fitted_A) {
  return guarded([&] {
    require(curve && residual, "arguments must not be null");
    const auto id =
        which == CCDF_LEMNISCATE_MU ? ccdf::HomotheticIdentity::lemniscate_mu : ccdf::HomotheticIdentity::lemniscate_support;
    const auto chk = ccdf::homothetic_identity_check(curve->curve, id);
    *residual = chk.residual;
    if (fitted_A) *fitted_A = chk.fitted_A;
  });
}

const char* ccdf_verdict_name(ccdf_verdict v) {
  switch (v) {
    case CCDF_STABLE: return "stable";
    case CCDF_UNSTABLE: return "unstable";
    case CCDF_BORDERLINE: return "borderline";
  }
  return "unknown";
}

double ccdf_symbol(double x, double c) { return ccdf::symbol(x, c); }

ccdf_status ccdf_lambda_hat(double c, int omega, double* value, int* argmin_n) {
  return guarded([&] {
    require(value, "value must not be null");
    const auto lh = ccdf::lambda_hat(c, omega);
    *value = lh.value;
    if (argmin_n) *argmin_n = lh.argmin_n;
  });
}

ccdf_status ccdf_stability_report_get(const char* c_text, int omega, ccdf_stability_report* out) {
  return guarded([&] {
    require(c_text && out, "arguments must not be null");
    const auto rep = ccdf::stability_report(ccdf::parse_rational(c_text), omega);
    ccdf_stability_report r{};
    r.omega = rep.omega;
    r.c = ccdf::to_double(rep.c);
    r.lambda_hat = rep.lambda_hat;
    r.argmin_n = rep.argmin_n;
    r.verdict = verdict_of(rep.verdict);
    r.c_minus_is_neg_infinity = rep.thresholds.c_minus ? 0 : 1;
    r.c_minus = rep.thresholds.c_minus_value();
    r.c_plus = rep.thresholds.c_plus_value();
    r.has_roots = rep.roots ? 1 : 0;
    r.r_minus = rep.roots ? rep.roots->r_minus : std::numeric_limits<double>::quiet_NaN();
    r.r_plus = rep.roots ? rep.roots->r_plus : std::numeric_limits<double>::quiet_NaN();
    copy_text(r.c_exact, ccdf::to_string(rep.c));
    copy_text(r.lambda_hat_exact, ccdf::to_string(rep.lambda_hat_exact));
    copy_text(r.c_minus_exact, rep.thresholds.c_minus ? ccdf::to_string(*rep.thresholds.c_minus) : "-inf");
    copy_text(r.c_plus_exact, ccdf::to_string(rep.thresholds.c_plus));
    *out = r;
  });
}

ccdf_status ccdf_stable_omegas(const char* c_text, int omega_max, int* omegas, size_t cap, size_t* count) {
  return guarded([&] {
    require(c_text != nullptr, "c must not be null");
    copy_list(ccdf::stable_omegas(ccdf::parse_rational(c_text), omega_max), omegas, cap, count);
  });
}

ccdf_status ccdf_stable_omegas_lattice(double c, int omega_max, int* omegas, size_t cap, size_t* count) {
  return guarded([&] { copy_list(ccdf::stable_omegas_lattice(c, omega_max), omegas, cap, count); });
}

ccdf_status ccdf_stability_grid(double c_min, double c_max, int omega_max, int resolution, int threads, ccdf_grid** out) {
  return guarded([&] {
    require(out, "out must not be null");
    *out = new ccdf_grid{ccdf::stability_region_grid(c_min, c_max, omega_max, resolution, threads)};
  });
}

void ccdf_grid_free(ccdf_grid* grid) { delete grid; }

ccdf_status ccdf_grid_write_csv(const ccdf_grid* grid, const char* path) {
  return guarded([&] {
    require(grid && path, "arguments must not be null");
    std::string text = "omega,c,stable\n";
    char buf[64];
    for (const auto& row : grid->grid.rows) {
      for (size_t i = 0; i < grid->grid.c_values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%d\n", row.omega, grid->grid.c_values[i], row.stable[i] ? 1 : 0);
        text += buf;
      }
    }
    ccdf::write_text_file(path, text);
  });
}

ccdf_status ccdf_grid_write_svg(const ccdf_grid* grid, const char* path, const char* title, const double* guides,
                                size_t guide_count) {
  return guarded([&] {
    require(grid && path, "arguments must not be null");
    ccdf::RegionStyle style;
    if (title) style.title = title;
    if (guides) style.guides.assign(guides, guides + guide_count);
    ccdf::write_text_file(path, ccdf::stability_region_svg(grid->grid, style));
  });
}

void ccdf_flow_config_default(ccdf_flow_config* config) {
  if (!config) return;
  const ccdf::FlowConfig d;
  *config = ccdf_flow_config{};
  config->c = d.c;
  config->mode = CCDF_UNNORMALISED;
  config->samples = d.N;
  config->dt_safety = d.dt_safety;
  config->reparam_every = d.reparam_every;
  config->resample_tolerance = d.resample_tolerance;
  config->stop_kmax = d.stop_kmax;
  config->record_every = d.record_every;
  config->snapshot_every = d.snapshot_every;
  config->max_steps = d.max_steps;
}

const char* ccdf_run_status_name(ccdf_run_status status) {
  switch (status) {
    case CCDF_RUN_COMPLETED: return "completed";
    case CCDF_RUN_CONVERGED: return "converged";
    case CCDF_RUN_BLOWUP: return "blowup";
    case CCDF_RUN_KOSC_EXCEEDED: return "kosc_exceeded";
    case CCDF_RUN_STEP_LIMIT: return "step_limit";
  }
  return "unknown";
}

ccdf_status ccdf_flow_run(const ccdf_curve* initial, const ccdf_flow_config* config, ccdf_run** out) {
  return guarded([&] {
    require(initial && config && out, "arguments must not be null");
    ccdf::FlowConfig cfg;
    cfg.c = config->c;
    cfg.mode = config->mode == CCDF_LENGTH_NORMALISED ? ccdf::FlowMode::length_normalised : ccdf::FlowMode::unnormalised;
    cfg.N = config->samples;
    cfg.dt_safety = config->dt_safety;
    cfg.reparam_every = config->reparam_every;
    cfg.resample_tolerance = config->resample_tolerance;
    if (config->has_t_end) cfg.t_end = config->t_end;
    cfg.stop_kmax = config->stop_kmax;
    if (config->has_stop_koscmax) cfg.stop_koscmax = config->stop_koscmax;
    if (config->has_stop_kosc_min) cfg.stop_kosc_min = config->stop_kosc_min;
    cfg.record_every = config->record_every;
    cfg.snapshot_every = config->snapshot_every;
    cfg.record_translation_energy = config->record_translation_energy != 0;
    cfg.max_steps = config->max_steps;
    auto result = ccdf::run(initial->curve, cfg);
    *out = new ccdf_run{std::move(result), initial->curve};
  });
}

void ccdf_run_free(ccdf_run* run) { delete run; }

ccdf_status ccdf_run_summary_get(const ccdf_run* run, ccdf_run_summary* out) {
  return guarded([&] {
    require(run && out, "arguments must not be null");
    const auto& r = run->result;
    *out = {static_cast<ccdf_run_status>(r.status),
            r.final_state.time,
            r.final_state.steps,
            r.blowup_lower,
            r.blowup_upper,
            r.resamples,
            r.under_resolved_resamples,
            r.max_length_drift,
            r.max_length_correction,
            r.max_truncated_fraction};
  });
}

const char* ccdf_run_stop_reason(const ccdf_run* run) { return run ? run->result.stop_reason.c_str() : ""; }

size_t ccdf_run_record_count(const ccdf_run* run) { return run ? run->result.series.records.size() : 0; }

ccdf_status ccdf_run_record(const ccdf_run* run, size_t index, ccdf_record* out) {
  return guarded([&] {
    require(run && out, "arguments must not be null");
    require(index < run->result.series.records.size(), "record index out of range");
    const auto& r = run->result.series.records[index];
    *out = {r.t, r.L, r.A, r.omega, r.K_osc, r.k_max, r.lambda, r.sigma, r.centroid.real(), r.centroid.imag(), r.e_tr};
  });
}

size_t ccdf_run_snapshot_count(const ccdf_run* run) { return run ? run->result.series.snapshots.size() : 0; }

ccdf_status ccdf_run_snapshot(const ccdf_run* run, size_t index, double* time, ccdf_curve** curve) {
  return guarded([&] {
    require(run && curve, "arguments must not be null");
    require(index < run->result.series.snapshots.size(), "snapshot index out of range");
    const auto& s = run->result.series.snapshots[index];
    if (time) *time = s.first;
    *curve = wrap(s.second);
  });
}

ccdf_status ccdf_run_final_curve(const ccdf_run* run, ccdf_curve** curve) {
  return guarded([&] {
    require(run && curve, "arguments must not be null");
    *curve = wrap(run->result.final_state.curve);
  });
}

ccdf_status ccdf_run_write_series_csv(const ccdf_run* run, const char* path) {
  return guarded([&] {
    require(run && path, "arguments must not be null");
    ccdf::write_series_csv(std::string(path), run->result.series);
  });
}

ccdf_status ccdf_run_write_filmstrip_svg(const ccdf_run* run, const char* path, size_t max_frames) {
  return guarded([&] {
    require(run && path, "arguments must not be null");
    require(max_frames >= 2, "filmstrip needs at least two frames");
    std::vector<std::pair<double, ccdf::ClosedCurve>> all;
    all.emplace_back(0.0, run->initial);
    for (const auto& s : run->result.series.snapshots) {
      if (s.first > all.back().first) all.push_back(s);
    }
    if (run->result.final_state.time > all.back().first) {
      all.emplace_back(run->result.final_state.time, run->result.final_state.curve);
    }
    std::vector<std::pair<double, ccdf::ClosedCurve>> frames;
    const size_t count = std::min(max_frames, all.size());
    for (size_t i = 0; i < count; ++i) {
      const size_t idx = count == 1 ? 0 : i * (all.size() - 1) / (count - 1);
      frames.push_back(all[idx]);
    }
    ccdf::write_text_file(path, ccdf::filmstrip_svg(frames));
  });
}

ccdf_status ccdf_run_sigma_asymptotics(const ccdf_run* run, double c, double* sigma_inf, double* decay_slope) {
  return guarded([&] {
    require(run && sigma_inf, "arguments must not be null");
    const auto a = ccdf::sigma_asymptotics(run->result.series, c);
    *sigma_inf = a.sigma_inf;
    if (decay_slope) *decay_slope = a.decay_slope;
  });
}

ccdf_status ccdf_support_curve(int omega, int n0, double eta, int samples, ccdf_curve** out) {
  return guarded([&] {
    require(out, "out must not be null");
    *out = wrap(ccdf::build_support_curve(ccdf::SupportPerturbation{omega, n0, eta}, samples));
  });
}

ccdf_status ccdf_Q_functional(const ccdf_curve* curve, double c, double* out) {
  return guarded([&] {
    require(curve && out, "arguments must not be null");
    *out = ccdf::Q_functional(curve->curve, c);
  });
}

ccdf_status ccdf_Q_fourier(const ccdf_curve* curve, double c, int n_max, double* out) {
  return guarded([&] {
    require(curve && out, "arguments must not be null");
    *out = ccdf::Q_fourier(curve->curve, c, n_max);
  });
}

ccdf_status ccdf_R_functional(const ccdf_curve* curve, double c, double* out) {
  return guarded([&] {
    require(curve && out, "arguments must not be null");
    *out = ccdf::R_functional(curve->curve, c);
  });
}

ccdf_status ccdf_e_prime_prediction(int omega, int n0, double eta, double c, double* out) {
  return guarded([&] {
    require(out, "out must not be null");
    ccdf::SupportPerturbation p{omega, n0, eta};
    p.validate();
    *out = ccdf::e_prime0_prediction(p, c);
  });
}

ccdf_status ccdf_e_evolution_check(const ccdf_curve* curve, double c, int samples, double* measured,
                                   double* identity_rhs) {
  return guarded([&] {
    require(curve && measured && identity_rhs, "arguments must not be null");
    const auto chk = ccdf::e_evolution_check(curve->curve, c, samples);
    *measured = chk.lhs;
    *identity_rhs = chk.rhs;
  });
}

ccdf_status ccdf_instability_run(double c, int omega, int n0, const double* etas, size_t eta_count, int samples,
                                 int threads, ccdf_instability** out) {
  return guarded([&] {
    require(etas && out, "arguments must not be null");
    ccdf::InstabilityOptions opt;
    if (n0 > 0) opt.n0 = n0;
    if (samples > 0) {
      opt.samples = samples;
      opt.build_samples = 2 * samples;
    }
    opt.threads = std::max(1, threads);
    auto rep = ccdf::run_instability_experiment(c, omega, std::vector<double>(etas, etas + eta_count), opt);
    *out = new ccdf_instability{std::move(rep)};
  });
}

void ccdf_instability_free(ccdf_instability* exp) { delete exp; }

ccdf_status ccdf_instability_summary_get(const ccdf_instability* exp, ccdf_instability_summary* out) {
  return guarded([&] {
    require(exp && out, "arguments must not be null");
    const auto& r = exp->report;
    *out = {r.c,
            r.omega,
            r.n0,
            r.a,
            r.lambda_hat,
            r.p_n0,
            r.limit,
            r.all_positive ? 1 : 0,
            r.max_relative_error,
            r.observed_order,
            std::strcmp(r.verdict, "unstable") == 0 ? CCDF_UNSTABLE : CCDF_BORDERLINE};
  });
}

size_t ccdf_instability_row_count(const ccdf_instability* exp) { return exp ? exp->report.rows.size() : 0; }

ccdf_status ccdf_instability_row_get(const ccdf_instability* exp, size_t index, ccdf_instability_row* out) {
  return guarded([&] {
    require(exp && out, "arguments must not be null");
    require(index < exp->report.rows.size(), "row index out of range");
    const auto& r = exp->report.rows[index];
    *out = {r.eta, r.e0, r.e_prime_measured, r.e_prime_predicted, r.measured_over_eta2, r.Q, r.R, r.identity_discrepancy};
  });
}

}  // extern "C"
