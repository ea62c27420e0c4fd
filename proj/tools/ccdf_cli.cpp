// ccdf command-line tool. Uses only the C interface of libccdf.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ccdf/ccdf.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitBlowup = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ApiError : std::runtime_error {
  ccdf_status status;
  ApiError(ccdf_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(ccdf_status s) {
  if (s != CCDF_OK) throw ApiError(s, std::string(ccdf_status_name(s)) + ": " + ccdf_last_error());
}

struct CurveDeleter {
  void operator()(ccdf_curve* p) const { ccdf_curve_free(p); }
};
struct GridDeleter {
  void operator()(ccdf_grid* p) const { ccdf_grid_free(p); }
};
struct RunDeleter {
  void operator()(ccdf_run* p) const { ccdf_run_free(p); }
};
struct InstabilityDeleter {
  void operator()(ccdf_instability* p) const { ccdf_instability_free(p); }
};
using CurvePtr = std::unique_ptr<ccdf_curve, CurveDeleter>;
using GridPtr = std::unique_ptr<ccdf_grid, GridDeleter>;
using RunPtr = std::unique_ptr<ccdf_run, RunDeleter>;
using InstabilityPtr = std::unique_ptr<ccdf_instability, InstabilityDeleter>;

struct Globals {
  std::string out_dir = ".";
  std::string format = "json";
  bool quiet = false;
  std::vector<std::string> argv;
};

int thread_count() {
  if (const char* env = std::getenv("CCDF_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<int>(v);
    throw UsageError(std::string("CCDF_THREADS must be a positive integer, got '") + env + "'");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string output_path(const Globals& g, const std::string& name) {
  fs::path p(name);
  if (p.is_relative()) p = fs::path(g.out_dir) / p;
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p.string();
}

class Manifest {
 public:
  Manifest(const Globals& g, std::string command) : g_(g), command_(std::move(command)) {}

  json params = json::object();
  std::optional<unsigned long long> seed;

  void add(const std::string& path) { outputs_.push_back(path); }

  void write() const {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    for (const auto& path : outputs_) {
      json m;
      m["command"] = command_;
      m["argv"] = g_.argv;
      m["params"] = params;
      m["seed"] = seed ? json(*seed) : json(nullptr);
      m["version"] = ccdf_version();
      m["wall_time_seconds"] = wall;
      m["output"] = path;
      m["outputs"] = outputs_;
      std::ofstream out(path + ".manifest.json");
      if (!out) throw ApiError(CCDF_ERR_IO, "cannot write manifest for " + path);
      out << m.dump(2) << "\n";
    }
  }

 private:
  const Globals& g_;
  std::string command_;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void emit(const Globals& g, const json& summary) {
  if (g.quiet) return;
  if (g.format == "json") {
    std::cout << summary.dump(2) << "\n";
    return;
  }
  std::cout << "key,value\n";
  for (const auto& [key, value] : summary.items()) {
    std::cout << key << "," << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  }
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_number(const std::string& text, const std::string& what) {
  try {
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid number '" + text + "' in " + what);
  }
}

int to_int(const std::string& text, const std::string& what) {
  const double v = to_number(text, what);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw UsageError("expected an integer, got '" + text + "' in " + what);
  return static_cast<int>(v);
}

int default_lemniscate_samples(int j) { return std::max(2048, 64 * (4 * j - 1)); }

CurvePtr build_lemniscate(int j, int samples, ccdf_lemniscate_info* info) {
  ccdf_curve* raw = nullptr;
  check(ccdf_super_lemniscate(j, samples, &raw, info));
  return CurvePtr(raw);
}

// ---- stationary ----

struct StationaryArgs {
  int j = 0;
  std::optional<int> samples;
  std::string out;
};

int cmd_stationary(const Globals& g, const StationaryArgs& a) {
  if (a.j < 1) throw UsageError("--j must be >= 1");
  const int samples = a.samples.value_or(default_lemniscate_samples(a.j));
  ccdf_lemniscate_info info{};
  auto curve = build_lemniscate(a.j, samples, &info);
  double residual = 0.0;
  check(ccdf_stationarity_residual(curve.get(), info.c, &residual));
  ccdf_curve_metrics m{};
  check(ccdf_curve_metrics_get(curve.get(), &m));

  Manifest manifest(g, "stationary");
  manifest.params = {{"j", a.j}, {"samples", samples}};
  const std::string base = a.out.empty() ? "lemniscate_j" + std::to_string(a.j) : a.out;
  const auto csv = output_path(g, base + ".csv");
  const auto svg = output_path(g, base + ".svg");
  check(ccdf_curve_write_csv(curve.get(), csv.c_str()));
  const ccdf_curve* curves[] = {curve.get()};
  const std::string label = "j = " + std::to_string(a.j);
  const char* labels[] = {label.c_str()};
  check(ccdf_curves_write_svg(curves, labels, 1, svg.c_str()));
  manifest.add(csv);
  manifest.add(svg);
  manifest.write();

  emit(g, json{{"j", a.j},
               {"c", info.c},
               {"samples", samples},
               {"closure_gap", info.closure_gap},
               {"stationarity_residual", residual},
               {"turning_number", m.omega},
               {"length", m.length},
               {"curve_csv", csv},
               {"svg", svg}});
  return kExitOk;
}

// ---- stability ----

struct StabilityArgs {
  std::optional<std::string> c;
  std::optional<int> omega;
  std::optional<int> omega_max;
  std::optional<std::string> grid;
  std::string grid_csv = "stability_grid.csv";
  std::optional<std::string> svg;
  std::optional<std::string> report;
  std::string title;
};

json report_json(const ccdf_stability_report& r) {
  return json{{"c", r.c},
              {"omega", r.omega},
              {"lambda_hat", r.lambda_hat},
              {"argmin_n", r.argmin_n},
              {"verdict", ccdf_verdict_name(r.verdict)},
              {"c_minus", r.c_minus_is_neg_infinity ? json(nullptr) : json(r.c_minus)},
              {"c_plus", r.c_plus},
              {"r_minus", r.has_roots ? json(r.r_minus) : json(nullptr)},
              {"r_plus", r.has_roots ? json(r.r_plus) : json(nullptr)},
              {"exact",
               {{"c", r.c_exact}, {"lambda_hat", r.lambda_hat_exact}, {"c_minus", r.c_minus_exact}, {"c_plus", r.c_plus_exact}}}};
}

struct GridSpec {
  double c_min = -0.5;
  double c_max = 2.0;
  int steps = 500;
};

GridSpec parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw UsageError("--grid expects cmin:cmax:steps, got '" + text + "'");
  GridSpec s{to_number(parts[0], "--grid"), to_number(parts[1], "--grid"), to_int(parts[2], "--grid")};
  if (!(s.c_min < s.c_max) || s.steps < 2) throw UsageError("--grid needs cmin < cmax and steps >= 2");
  return s;
}

std::vector<int> stable_set(const std::string& c, int omega_max) {
  size_t count = 0;
  check(ccdf_stable_omegas(c.c_str(), omega_max, nullptr, 0, &count));
  std::vector<int> out(count);
  check(ccdf_stable_omegas(c.c_str(), omega_max, out.data(), out.size(), &count));
  return out;
}

json lattice_check(double c, int omega_max, const std::vector<int>& exact) {
  size_t count = 0;
  if (ccdf_stable_omegas_lattice(c, omega_max, nullptr, 0, &count) != CCDF_OK) return "not_applicable";
  std::vector<int> lattice(count);
  check(ccdf_stable_omegas_lattice(c, omega_max, lattice.data(), lattice.size(), &count));
  return lattice == exact ? "agrees" : "disagrees";
}

int cmd_stability(const Globals& g, const StabilityArgs& a) {
  if (!a.c && !a.grid) throw UsageError("stability needs --c and/or --grid");
  if (a.omega && *a.omega < 1) throw UsageError("--omega must be >= 1");
  if (a.omega_max && *a.omega_max < 1) throw UsageError("--omega-max must be >= 1");
  if (a.svg && !a.grid) throw UsageError("--svg needs --grid");

  Manifest manifest(g, "stability");
  json summary = json::object();

  if (a.c) {
    manifest.params["c"] = *a.c;
    if (a.omega) {
      manifest.params["omega"] = *a.omega;
      ccdf_stability_report r{};
      check(ccdf_stability_report_get(a.c->c_str(), *a.omega, &r));
      summary = report_json(r);
    } else {
      const int omega_max = a.omega_max.value_or(30);
      manifest.params["omega_max"] = omega_max;
      ccdf_stability_report r{};
      check(ccdf_stability_report_get(a.c->c_str(), 1, &r));
      const auto exact = stable_set(*a.c, omega_max);
      summary = {{"c", r.c},
                 {"c_exact", r.c_exact},
                 {"omega_max", omega_max},
                 {"stable_omegas", exact},
                 {"lattice_test", lattice_check(r.c, omega_max, exact)}};
    }
    if (a.report) {
      const auto path = output_path(g, *a.report);
      std::ofstream out(path);
      if (!out) throw ApiError(CCDF_ERR_IO, "cannot write " + path);
      out << summary.dump(2) << "\n";
      manifest.add(path);
    }
  }

  if (a.grid) {
    const auto spec = parse_grid(*a.grid);
    const int omega_max = a.omega_max.value_or(30);
    const int threads = thread_count();
    manifest.params["grid"] = {{"c_min", spec.c_min}, {"c_max", spec.c_max}, {"steps", spec.steps}, {"omega_max", omega_max}};
    ccdf_grid* raw = nullptr;
    check(ccdf_stability_grid(spec.c_min, spec.c_max, omega_max, spec.steps, threads, &raw));
    GridPtr grid(raw);
    const auto csv = output_path(g, a.grid_csv);
    check(ccdf_grid_write_csv(grid.get(), csv.c_str()));
    manifest.add(csv);
    summary["grid_csv"] = csv;
    if (a.svg) {
      const auto svg = output_path(g, *a.svg);
      check(ccdf_grid_write_svg(grid.get(), svg.c_str(), a.title.c_str(), nullptr, 0));
      manifest.add(svg);
      summary["svg"] = svg;
    }
  }

  manifest.write();
  emit(g, summary);
  return kExitOk;
}

// ---- flow ----

struct FlowArgs {
  double c = 0.0;
  std::string mode = "unnormalised";
  std::string init;
  int samples = 128;
  std::optional<double> t_end;
  std::string out = "series.csv";
  std::optional<std::string> snapshots;
  int snapshot_every = 500;
  int record_every = 100;
  double dt_safety = 0.02;
  int reparam_every = 10;
  double resample_tolerance = 1e-4;
  double stop_kmax = 1e4;
  std::optional<double> stop_kosc_max;
  std::optional<double> stop_kosc_min;
  long long max_steps = 2'000'000'000LL;
  std::optional<std::string> filmstrip;
  int filmstrip_frames = 8;
};

CurvePtr initial_curve(const std::string& init, int samples, json& described) {
  const auto colon = init.find(':');
  if (colon == std::string::npos) throw UsageError("--init expects kind:args, got '" + init + "'");
  const std::string kind = init.substr(0, colon);
  const std::string args = init.substr(colon + 1);
  ccdf_curve* raw = nullptr;
  if (kind == "circle") {
    const auto p = split(args, ',');
    if (p.empty() || p.size() > 2) throw UsageError("--init circle:omega[,radius]");
    const int omega = to_int(p[0], "--init");
    const double radius = p.size() == 2 ? to_number(p[1], "--init") : 1.0;
    check(ccdf_curve_circle(omega, radius, samples, &raw));
    described = {{"kind", "circle"}, {"omega", omega}, {"radius", radius}};
  } else if (kind == "support") {
    const auto p = split(args, ',');
    if (p.size() != 3) throw UsageError("--init support:omega,n0,eta");
    const int omega = to_int(p[0], "--init");
    const int n0 = to_int(p[1], "--init");
    const double eta = to_number(p[2], "--init");
    check(ccdf_support_curve(omega, n0, eta, std::max(256, 2 * samples), &raw));
    described = {{"kind", "support"}, {"omega", omega}, {"n0", n0}, {"eta", eta}};
  } else if (kind == "file") {
    if (args.empty()) throw UsageError("--init file:path");
    check(ccdf_curve_read_csv(args.c_str(), &raw));
    described = {{"kind", "file"}, {"path", args}};
  } else if (kind == "lemniscate") {
    const int j = to_int(args, "--init");
    if (j < 1) throw UsageError("--init lemniscate:j needs j >= 1");
    described = {{"kind", "lemniscate"}, {"j", j}};
    return build_lemniscate(j, default_lemniscate_samples(j), nullptr);
  } else {
    throw UsageError("unknown --init kind '" + kind + "' (circle, support, file, lemniscate)");
  }
  return CurvePtr(raw);
}

ccdf_flow_mode parse_mode(const std::string& m) {
  if (m == "unnormalised" || m == "ccdf") return CCDF_UNNORMALISED;
  if (m == "length_normalised" || m == "normalised" || m == "l-ccdf") return CCDF_LENGTH_NORMALISED;
  throw UsageError("--mode must be unnormalised (ccdf) or length_normalised (l-ccdf)");
}

json record_json(const ccdf_record& r) {
  return json{{"t", r.t},      {"L", r.L},         {"A", r.A},         {"omega", r.omega}, {"Kosc", r.K_osc},
              {"kmax", r.k_max}, {"lambda", r.lambda}, {"sigma", r.sigma}, {"cx", r.cx},       {"cy", r.cy}};
}

int cmd_flow(const Globals& g, const FlowArgs& a) {
  const auto mode = parse_mode(a.mode);
  json init_desc;
  auto gamma0 = initial_curve(a.init, a.samples, init_desc);

  ccdf_flow_config cfg;
  ccdf_flow_config_default(&cfg);
  cfg.c = a.c;
  cfg.mode = mode;
  cfg.samples = a.samples;
  cfg.dt_safety = a.dt_safety;
  cfg.reparam_every = a.reparam_every;
  cfg.resample_tolerance = a.resample_tolerance;
  cfg.stop_kmax = a.stop_kmax;
  cfg.record_every = a.record_every;
  cfg.max_steps = a.max_steps;
  if (a.t_end) {
    cfg.has_t_end = 1;
    cfg.t_end = *a.t_end;
  }
  if (a.stop_kosc_max) {
    cfg.has_stop_koscmax = 1;
    cfg.stop_koscmax = *a.stop_kosc_max;
  }
  // Without an explicit horizon the run stops once the curve is round, unless it starts round.
  std::optional<double> kosc_min = a.stop_kosc_min;
  if (!kosc_min && !a.t_end) {
    ccdf_curve_metrics m0{};
    check(ccdf_curve_metrics_get(gamma0.get(), &m0));
    if (m0.K_osc > 1e-9) kosc_min = 1e-9;
  }
  if (kosc_min) {
    cfg.has_stop_kosc_min = 1;
    cfg.stop_kosc_min = *kosc_min;
  }
  if (a.snapshots || a.filmstrip) cfg.snapshot_every = a.snapshot_every;

  ccdf_run* raw = nullptr;
  check(ccdf_flow_run(gamma0.get(), &cfg, &raw));
  RunPtr run(raw);
  ccdf_run_summary s{};
  check(ccdf_run_summary_get(run.get(), &s));

  Manifest manifest(g, "flow");
  manifest.params = {{"c", a.c},
                     {"mode", mode == CCDF_LENGTH_NORMALISED ? "length_normalised" : "unnormalised"},
                     {"init", init_desc},
                     {"samples", a.samples},
                     {"t_end", a.t_end ? json(*a.t_end) : json(nullptr)},
                     {"dt_safety", a.dt_safety},
                     {"reparam_every", a.reparam_every},
                     {"resample_tolerance", a.resample_tolerance},
                     {"record_every", a.record_every},
                     {"stop_kmax", a.stop_kmax},
                     {"stop_kosc_max", a.stop_kosc_max ? json(*a.stop_kosc_max) : json(nullptr)},
                     {"stop_kosc_min", kosc_min ? json(*kosc_min) : json(nullptr)},
                     {"max_steps", a.max_steps}};

  const auto series = output_path(g, a.out);
  check(ccdf_run_write_series_csv(run.get(), series.c_str()));
  manifest.add(series);

  if (a.snapshots) {
    const size_t n = ccdf_run_snapshot_count(run.get());
    for (size_t i = 0; i < n; ++i) {
      double t = 0.0;
      ccdf_curve* snap = nullptr;
      check(ccdf_run_snapshot(run.get(), i, &t, &snap));
      CurvePtr owned(snap);
      char name[64];
      std::snprintf(name, sizeof(name), "snapshot_%05zu.csv", i);
      const auto path = output_path(g, (fs::path(*a.snapshots) / name).string());
      check(ccdf_curve_write_csv(owned.get(), path.c_str()));
      manifest.add(path);
    }
  }
  if (a.filmstrip) {
    const auto path = output_path(g, *a.filmstrip);
    check(ccdf_run_write_filmstrip_svg(run.get(), path.c_str(), static_cast<size_t>(std::max(2, a.filmstrip_frames))));
    manifest.add(path);
  }
  manifest.write();

  json summary{{"status", ccdf_run_status_name(s.status)},
               {"stop_reason", ccdf_run_stop_reason(run.get())},
               {"final_time", s.final_time},
               {"steps", s.steps},
               {"records", ccdf_run_record_count(run.get())},
               {"resamples", s.resamples},
               {"under_resolved_resamples", s.under_resolved_resamples},
               {"max_length_drift", s.max_length_drift},
               {"max_truncated_fraction", s.max_truncated_fraction},
               {"series_csv", series}};
  if (const size_t n = ccdf_run_record_count(run.get()); n > 0) {
    ccdf_record last{};
    check(ccdf_run_record(run.get(), n - 1, &last));
    summary["last_record"] = record_json(last);
  }
  if (s.status == CCDF_RUN_BLOWUP) {
    summary["blowup_lower"] = s.blowup_lower;
    summary["blowup_upper"] = s.blowup_upper;
  }
  emit(g, summary);
  return s.status == CCDF_RUN_BLOWUP ? kExitBlowup : kExitOk;
}

// ---- perturb ----

struct PerturbArgs {
  std::string c;
  int omega = 1;
  std::optional<int> n0;
  std::vector<double> etas{0.04, 0.02, 0.01};
  int samples = 128;
  std::string report = "perturb_report.json";
};

json row_json(const ccdf_instability_row& r) {
  return json{{"eta", r.eta},
              {"e0", r.e0},
              {"e_prime_measured", r.e_prime_measured},
              {"e_prime_predicted", r.e_prime_predicted},
              {"measured_over_eta2", r.measured_over_eta2},
              {"Q", r.Q},
              {"R", r.R},
              {"minus_Q_plus_R", -r.Q + r.R},
              {"identity_discrepancy", r.identity_discrepancy}};
}

int cmd_perturb(const Globals& g, const PerturbArgs& a) {
  if (a.omega < 1) throw UsageError("--omega must be >= 1");
  if (a.etas.empty()) throw UsageError("--eta needs at least one value");
  ccdf_stability_report sr{};
  check(ccdf_stability_report_get(a.c.c_str(), a.omega, &sr));
  const double c = sr.c;
  const int n0 = a.n0.value_or(sr.argmin_n);
  if (n0 < 1 || n0 == a.omega) throw UsageError("--n0 must be >= 1 and differ from omega");

  json report{{"c", c},
              {"c_exact", sr.c_exact},
              {"omega", a.omega},
              {"n0", n0},
              {"lambda_hat", sr.lambda_hat},
              {"lambda_hat_exact", sr.lambda_hat_exact},
              {"samples", a.samples}};
  json rows = json::array();

  if (sr.verdict == CCDF_UNSTABLE) {
    ccdf_instability* raw = nullptr;
    check(ccdf_instability_run(c, a.omega, n0, a.etas.data(), a.etas.size(), a.samples, thread_count(), &raw));
    InstabilityPtr exp(raw);
    ccdf_instability_summary s{};
    check(ccdf_instability_summary_get(exp.get(), &s));
    for (size_t i = 0; i < ccdf_instability_row_count(exp.get()); ++i) {
      ccdf_instability_row r{};
      check(ccdf_instability_row_get(exp.get(), i, &r));
      rows.push_back(row_json(r));
    }
    report["a"] = s.a;
    report["p_n0"] = s.p_n0;
    report["predicted_ratio_limit"] = s.limit;
    report["all_measured_positive"] = s.all_positive != 0;
    report["max_relative_error"] = s.max_relative_error;
    report["observed_order"] = nullable(s.observed_order);
    report["verdict"] = s.all_positive ? "unstable" : "inconclusive";
  } else {
    const double a_coef = 1.0 - static_cast<double>(n0) * n0 / (static_cast<double>(a.omega) * a.omega);
    const double p_n0 = ccdf_symbol(static_cast<double>(n0) / a.omega, c);
    for (double eta : a.etas) {
      ccdf_curve* raw = nullptr;
      check(ccdf_support_curve(a.omega, n0, eta, 2 * a.samples, &raw));
      CurvePtr curve(raw);
      ccdf_curve* res_raw = nullptr;
      check(ccdf_curve_resample(curve.get(), a.samples, &res_raw, nullptr));
      CurvePtr resampled(res_raw);
      ccdf_instability_row r{};
      r.eta = eta;
      double rhs = 0.0;
      check(ccdf_e_evolution_check(curve.get(), c, a.samples, &r.e_prime_measured, &rhs));
      check(ccdf_e_prime_prediction(a.omega, n0, eta, c, &r.e_prime_predicted));
      check(ccdf_Q_functional(resampled.get(), c, &r.Q));
      check(ccdf_R_functional(resampled.get(), c, &r.R));
      ccdf_curve_metrics m{};
      check(ccdf_curve_metrics_get(resampled.get(), &m));
      r.e0 = m.K_osc / (2.0 * M_PI * a.omega);
      r.measured_over_eta2 = r.e_prime_measured / (eta * eta);
      r.identity_discrepancy = std::abs(r.e_prime_measured - rhs) / std::max(std::abs(r.e_prime_measured), 1e-300);
      rows.push_back(row_json(r));
    }
    report["a"] = a_coef;
    report["p_n0"] = p_n0;
    report["predicted_ratio_limit"] = -M_PI * a.omega * a_coef * a_coef * p_n0;
    report["verdict"] = ccdf_verdict_name(sr.verdict);
  }
  report["rows"] = rows;

  Manifest manifest(g, "perturb");
  manifest.params = {{"c", a.c}, {"omega", a.omega}, {"n0", n0}, {"etas", a.etas}, {"samples", a.samples}};
  const auto path = output_path(g, a.report);
  {
    std::ofstream out(path);
    if (!out) throw ApiError(CCDF_ERR_IO, "cannot write " + path);
    out << report.dump(2) << "\n";
  }
  manifest.add(path);
  manifest.write();
  emit(g, report);
  return kExitOk;
}

// ---- figures ----

struct FiguresArgs {
  std::string fig2_grid = "-0.5:2:500";
  int fig2_omega_max = 30;
  std::string fig3_grid = "0.995:1.02:1000";
  int fig3_omega_max = 40;
};

int cmd_figures(const Globals& g, const FiguresArgs& a) {
  Manifest manifest(g, "figures");
  manifest.params = {{"fig1_j", {1, 2, 3, 4, 10, 100}},
                     {"fig2_grid", a.fig2_grid},
                     {"fig2_omega_max", a.fig2_omega_max},
                     {"fig3_grid", a.fig3_grid},
                     {"fig3_omega_max", a.fig3_omega_max}};
  json summary = json::object();

  std::vector<CurvePtr> curves;
  std::vector<std::string> labels;
  for (int j : {1, 2, 3, 4, 10, 100}) {
    ccdf_lemniscate_info info{};
    curves.push_back(build_lemniscate(j, default_lemniscate_samples(j), &info));
    labels.push_back("j = " + std::to_string(j));
    const auto csv = output_path(g, "fig1_j" + std::to_string(j) + ".csv");
    check(ccdf_curve_write_csv(curves.back().get(), csv.c_str()));
    manifest.add(csv);
  }
  std::vector<const ccdf_curve*> handles;
  std::vector<const char*> label_ptrs;
  for (size_t i = 0; i < curves.size(); ++i) {
    handles.push_back(curves[i].get());
    label_ptrs.push_back(labels[i].c_str());
  }
  const auto fig1 = output_path(g, "fig1.svg");
  check(ccdf_curves_write_svg(handles.data(), label_ptrs.data(), handles.size(), fig1.c_str()));
  manifest.add(fig1);
  summary["fig1"] = fig1;

  const int threads = thread_count();
  auto region = [&](const std::string& name, const std::string& grid_text, int omega_max, std::vector<double> guides) {
    const auto spec = parse_grid(grid_text);
    ccdf_grid* raw = nullptr;
    check(ccdf_stability_grid(spec.c_min, spec.c_max, omega_max, spec.steps, threads, &raw));
    GridPtr grid(raw);
    const auto csv = output_path(g, name + ".csv");
    const auto svg = output_path(g, name + ".svg");
    check(ccdf_grid_write_csv(grid.get(), csv.c_str()));
    check(ccdf_grid_write_svg(grid.get(), svg.c_str(), "", guides.data(), guides.size()));
    manifest.add(csv);
    manifest.add(svg);
    summary[name] = svg;
  };
  region("fig2", a.fig2_grid, a.fig2_omega_max, {1.0 / 9.0, 1.0, 1.5});
  region("fig3", a.fig3_grid, a.fig3_omega_max, {1.0 / 9.0, 1.0, 1.001, 1.5});

  manifest.write();
  emit(g, summary);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  for (int i = 0; i < argc; ++i) g.argv.emplace_back(argv[i]);

  CLI::App app{"Scale-critical curve diffusion flow toolkit"};
  app.set_version_flag("--version", std::string(ccdf_version()));
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out-dir", g.out_dir, "Directory for output files")->capture_default_str();
  app.add_option("--format", g.format, "Format of the summary printed on stdout")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_flag("--quiet", g.quiet, "Print nothing on success");

  StationaryArgs st;
  auto* stationary = app.add_subcommand("stationary", "Build a closed super-lemniscate; writes curve CSV and SVG");
  stationary->add_option("--j", st.j, "Index j >= 1 (c_j = 2/(4j-1)^2)")->required();
  stationary->add_option("--samples", st.samples, "Samples (default max(2048, 64(4j-1)))");
  stationary->add_option("--out", st.out, "Output base name (default lemniscate_j<j>)");

  StabilityArgs sb;
  auto* stability = app.add_subcommand("stability", "Spectral stability of omega-circles and stability regions");
  stability->add_option("--c", sb.c, "Parameter c, parsed exactly (e.g. 1.001, 3/52)");
  stability->add_option("--omega", sb.omega, "Single omega: print the full report");
  stability->add_option("--omega-max", sb.omega_max, "Largest omega for stable sets and grids (default 30)");
  stability->add_option("--grid", sb.grid, "Region grid cmin:cmax:steps (CSV columns omega,c,stable)");
  stability->add_option("--grid-csv", sb.grid_csv, "Grid CSV file name")->capture_default_str();
  stability->add_option("--svg", sb.svg, "Also draw the grid as SVG");
  stability->add_option("--title", sb.title, "SVG title");
  stability->add_option("--report", sb.report, "Also write the JSON report to this file");

  FlowArgs fl;
  auto* flow = app.add_subcommand("flow", "Integrate the flow; exit 3 when blowup is detected");
  flow->add_option("--c", fl.c, "Parameter c")->required();
  flow->add_option("--mode", fl.mode, "unnormalised (ccdf) or length_normalised (l-ccdf)")->capture_default_str();
  flow->add_option("--init", fl.init, "circle:omega[,r] | support:omega,n0,eta | file:path | lemniscate:j")->required();
  flow->add_option("--samples", fl.samples, "Samples N (even, >= 64)")->capture_default_str();
  flow->add_option("--t-end", fl.t_end, "Final time (default: run until K_osc < 1e-9 or a stop condition)");
  flow->add_option("--out", fl.out, "Series CSV")->capture_default_str();
  flow->add_option("--snapshots", fl.snapshots, "Directory for curve snapshots");
  flow->add_option("--snapshot-every", fl.snapshot_every, "Records between snapshots")->capture_default_str();
  flow->add_option("--record-every", fl.record_every, "Steps between records")->capture_default_str();
  flow->add_option("--dt-safety", fl.dt_safety, "dt = dt_safety * (min spacing)^4")->capture_default_str();
  flow->add_option("--reparam-every", fl.reparam_every, "Steps between arclength resamples")->capture_default_str();
  flow->add_option("--resample-tolerance", fl.resample_tolerance, "Resample when the speed spread exceeds this fraction")
      ->capture_default_str();
  flow->add_option("--stop-kmax", fl.stop_kmax, "Blowup threshold on max|k|")->capture_default_str();
  flow->add_option("--stop-kosc-max", fl.stop_kosc_max, "Stop when K_osc exceeds this");
  flow->add_option("--stop-kosc-min", fl.stop_kosc_min, "Stop (converged) when K_osc drops below this");
  flow->add_option("--max-steps", fl.max_steps, "Step limit")->capture_default_str();
  flow->add_option("--filmstrip", fl.filmstrip, "SVG filmstrip of rescaled profiles");
  flow->add_option("--filmstrip-frames", fl.filmstrip_frames, "Frames in the filmstrip")->capture_default_str();

  PerturbArgs pt;
  auto* perturb = app.add_subcommand("perturb", "Initial growth e'(0) of support perturbations of the omega-circle");
  perturb->add_option("--c", pt.c, "Parameter c")->required();
  perturb->add_option("--omega", pt.omega, "Turning number omega")->required();
  perturb->add_option("--n0", pt.n0, "Perturbed mode (default: argmin of lambda_hat)");
  perturb->add_option("--eta", pt.etas, "Amplitudes (repeatable)")->capture_default_str();
  perturb->add_option("--samples", pt.samples, "Samples used for the measurement")->capture_default_str();
  perturb->add_option("--report", pt.report, "JSON report file")->capture_default_str();

  FiguresArgs fg;
  auto* figures = app.add_subcommand("figures", "Write the curve gallery and stability region figures with their data");
  figures->add_option("--fig2-grid", fg.fig2_grid, "Region grid cmin:cmax:steps")->capture_default_str();
  figures->add_option("--fig2-omega-max", fg.fig2_omega_max, "Largest omega")->capture_default_str();
  figures->add_option("--fig3-grid", fg.fig3_grid, "Zoomed grid cmin:cmax:steps")->capture_default_str();
  figures->add_option("--fig3-omega-max", fg.fig3_omega_max, "Largest omega in the zoom")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*stationary) return cmd_stationary(g, st);
    if (*stability) return cmd_stability(g, sb);
    if (*flow) return cmd_flow(g, fl);
    if (*perturb) return cmd_perturb(g, pt);
    if (*figures) return cmd_figures(g, fg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
